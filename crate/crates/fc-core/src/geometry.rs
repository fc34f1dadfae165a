//! Word metric via Cayley-ball BFS, geodesic witnesses, and empirical
//! quasi-isometry certificates on finite balls.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use hashbrown::HashMap;

use crate::models::GroupModel;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallError {
    /// The ball outgrew the cap; carries the last fully completed radius.
    CapExceeded { radius_reached: usize, size: usize },
}

impl fmt::Display for BallError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallError::CapExceeded { radius_reached, size } => {
                write!(f, "ball cap exceeded after radius {radius_reached} ({size} elements)")
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Node<E> {
    dist: usize,
    parent: Option<(E, Letter)>,
}

/// All elements at distance ≤ R from the identity, with exact BFS lengths
/// and parent pointers for geodesic reconstruction.
#[derive(Debug, Clone)]
pub struct BallIndex<E> {
    radius: usize,
    nodes: HashMap<E, Node<E>>,
    sphere_sizes: Vec<usize>,
}

impl<E: Clone + Eq + core::hash::Hash> BallIndex<E> {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Exact `d(1, g)` when `g` lies in the ball.
    pub fn word_length(&self, g: &E) -> Option<usize> {
        self.nodes.get(g).map(|n| n.dist)
    }

    pub fn contains(&self, g: &E) -> bool {
        self.nodes.contains_key(g)
    }

    pub fn elements(&self) -> impl Iterator<Item = (&E, usize)> {
        self.nodes.iter().map(|(e, n)| (e, n.dist))
    }

    /// Elements per sphere: `sphere_sizes()[d]` counts distance-d elements.
    pub fn sphere_sizes(&self) -> &[usize] {
        &self.sphere_sizes
    }

    /// A geodesic word spelling `g`, reconstructed from parent pointers.
    pub fn geodesic(&self, g: &E) -> Option<Word> {
        let mut letters: Vec<Letter> = Vec::new();
        let mut cur = self.nodes.get(g)?;
        while let Some((parent, letter)) = &cur.parent {
            letters.push(*letter);
            cur = self.nodes.get(parent).expect("parent chain stays in the ball");
        }
        letters.reverse();
        Some(Word::from_letters(letters))
    }
}

/// BFS over right multiplication by generators and their inverses.
/// Fails cleanly when the ball would exceed `cap` elements.
pub fn enumerate_ball<M: GroupModel>(
    m: &M,
    radius: usize,
    cap: usize,
) -> Result<BallIndex<M::Elem>, BallError> {
    assert!(cap >= 1);
    let steps = m.signed_generators();
    let mut nodes: HashMap<M::Elem, Node<M::Elem>> = HashMap::new();
    nodes.insert(m.identity(), Node { dist: 0, parent: None });
    let mut sphere_sizes = alloc::vec![1usize];
    let mut frontier = alloc::vec![m.identity()];
    for d in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for (letter, s) in &steps {
                let h = m.mul(g, s);
                if !nodes.contains_key(&h) {
                    if nodes.len() >= cap {
                        return Err(BallError::CapExceeded {
                            radius_reached: d - 1,
                            size: nodes.len(),
                        });
                    }
                    nodes.insert(h.clone(), Node { dist: d, parent: Some((g.clone(), *letter)) });
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        sphere_sizes.push(next.len());
        frontier = next;
    }
    Ok(BallIndex { radius, nodes, sphere_sizes })
}

// ---------------------------------------------------------------------------
// quasi-isometry certificates

/// How the pair set for the two-sided inequality was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairPolicy {
    /// All pairs (x, y) of ball elements with `x⁻¹y` inside the ball, so the
    /// source distance is an exact lookup.
    AllPairs,
    /// Only pairs (1, g); equivalent to AllPairs for homomorphisms by left
    /// invariance, and linear instead of quadratic.
    Anchored,
}

impl fmt::Display for PairPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairPolicy::AllPairs => write!(f, "all-pairs"),
            PairPolicy::Anchored => write!(f, "anchored"),
        }
    }
}

/// One pair pushed to its bound, for the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiWitnessPair {
    pub x: String,
    pub y: String,
    pub source_dist: usize,
    pub target_dist: usize,
}

/// A certified (λ, ε, C) triple on finite balls: every inspected pair
/// satisfies `λ⁻¹d(x,y) − ε ≤ d'(f(x), f(y)) ≤ λd(x,y) + ε`, and every
/// point of the radius-R target ball lies within C of the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiCertificate {
    pub lambda_num: u32,
    pub lambda_den: u32,
    pub epsilon: u64,
    pub codensity: u64,
    pub radius: usize,
    pub policy: PairPolicy,
    pub pairs_checked: usize,
    pub witness: Option<QiWitnessPair>,
    /// Target-ball point farthest from the image.
    pub codensity_witness: Option<String>,
}

impl QiCertificate {
    pub fn lambda(&self) -> f64 {
        f64::from(self.lambda_num) / f64::from(self.lambda_den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QiError {
    Ball(BallError),
    /// The map misses a source-ball element.
    MapNotTotal { missing: String },
    /// A pair's image distance exceeded every lookup ball the budget
    /// affords: distortion past the λ grid, reported with that pair.
    DistortionSuspected { pair: QiWitnessPair },
    /// No image point lies inside the target ball.
    EmptyImage,
}

impl fmt::Display for QiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QiError::Ball(e) => write!(f, "{e}"),
            QiError::MapNotTotal { missing } => {
                write!(f, "map is not total on the source ball (missing {missing})")
            }
            QiError::DistortionSuspected { pair } => write!(
                f,
                "image distance of ({}, {}) exceeds every affordable target ball (source distance {})",
                pair.x, pair.y, pair.source_dist
            ),
            QiError::EmptyImage => write!(f, "no image point lies in the target ball"),
        }
    }
}

impl From<BallError> for QiError {
    fn from(e: BallError) -> Self {
        QiError::Ball(e)
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    let q = a / b;
    if a % b != 0 && a > 0 {
        q + 1
    } else {
        q
    }
}

/// λ grid 1, 1.25, 1.5, …, 8 in quarters.
const LAMBDA_DEN: u32 = 4;
const LAMBDA_MAX_NUM: u32 = 32;

/// Certifies the map given as element pairs on radius-`radius` balls.
///
/// ε is minimized over the whole grid first and the smallest λ achieving
/// that minimum is reported, so undistorted maps get their natural λ
/// instead of λ = 1 with a huge ε. Codensity is exact over the radius-R
/// target ball, distances to the image measured inside that ball.
pub fn certify_qi<MS: GroupModel, MT: GroupModel>(
    source: &MS,
    target: &MT,
    map: &[(MS::Elem, MT::Elem)],
    radius: usize,
    cap: usize,
) -> Result<QiCertificate, QiError> {
    let ball_s = enumerate_ball(source, radius, cap)?;
    let ball_t = enumerate_ball(target, radius, cap)?;
    let f: HashMap<&MS::Elem, &MT::Elem> = map.iter().map(|(a, b)| (a, b)).collect();
    for (e, _) in ball_s.elements() {
        if !f.contains_key(e) {
            return Err(QiError::MapNotTotal { missing: source.show(e) });
        }
    }

    let elems: Vec<&MS::Elem> = ball_s.elements().map(|(e, _)| e).collect();
    let policy = if elems.len() * elems.len() <= 250_000 {
        PairPolicy::AllPairs
    } else {
        PairPolicy::Anchored
    };
    let mut pairs: Vec<(&MS::Elem, &MS::Elem, usize)> = Vec::new();
    match policy {
        PairPolicy::AllPairs => {
            for &x in &elems {
                let xinv = source.inv(x);
                for &y in &elems {
                    let z = source.mul(&xinv, y);
                    if let Some(d) = ball_s.word_length(&z) {
                        pairs.push((x, y, d));
                    }
                }
            }
        }
        PairPolicy::Anchored => {
            let id = source.identity();
            let anchor = elems
                .iter()
                .copied()
                .find(|e| **e == id)
                .expect("ball contains the identity");
            for &y in &elems {
                let d = ball_s.word_length(y).expect("ball elements have lengths");
                pairs.push((anchor, y, d));
            }
        }
    }

    // resolve image distances, growing the lookup ball as needed
    let growth_limit =
        (LAMBDA_MAX_NUM as usize / LAMBDA_DEN as usize) * radius + 2 * radius + 2;
    let mut lookup_radius = radius.max(1);
    let mut resolved: Vec<(usize, usize, &MS::Elem, &MS::Elem)> = Vec::new();
    'grow: loop {
        let lookup = enumerate_ball(target, lookup_radius, cap)?;
        resolved.clear();
        for &(x, y, d) in &pairs {
            let z = target.mul(&target.inv(f[x]), f[y]);
            match lookup.word_length(&z) {
                Some(dp) => resolved.push((d, dp, x, y)),
                None => {
                    if lookup_radius >= growth_limit {
                        return Err(QiError::DistortionSuspected {
                            pair: QiWitnessPair {
                                x: source.show(x),
                                y: source.show(y),
                                source_dist: d,
                                target_dist: lookup_radius + 1,
                            },
                        });
                    }
                    lookup_radius = (lookup_radius * 2).min(growth_limit);
                    continue 'grow;
                }
            }
        }
        break;
    }

    // ε*(λ) shrinks as λ grows; scan the grid ascending and report the first
    // λ attaining the global minimum
    let eps_for = |num: u32| -> u64 {
        let (p, q) = (i128::from(num), i128::from(LAMBDA_DEN));
        let mut eps: i128 = 0;
        for &(d, dp, _, _) in &resolved {
            let (d, dp) = (d as i128, dp as i128);
            eps = eps.max(ceil_div(q * d - p * dp, p)).max(ceil_div(q * dp - p * d, q));
        }
        eps.max(0) as u64
    };
    let eps_min = eps_for(LAMBDA_MAX_NUM);
    let mut lambda_num = LAMBDA_MAX_NUM;
    for num in LAMBDA_DEN..=LAMBDA_MAX_NUM {
        if eps_for(num) == eps_min {
            lambda_num = num;
            break;
        }
    }
    let witness = {
        let (p, q) = (i128::from(lambda_num), i128::from(LAMBDA_DEN));
        resolved
            .iter()
            .find(|&&(d, dp, _, _)| {
                let (di, dpi) = (d as i128, dp as i128);
                let need = ceil_div(q * di - p * dpi, p).max(ceil_div(q * dpi - p * di, q)).max(0);
                need as u64 == eps_min
            })
            .map(|&(d, dp, x, y)| QiWitnessPair {
                x: source.show(x),
                y: source.show(y),
                source_dist: d,
                target_dist: dp,
            })
    };

    // codensity: multi-source BFS from the image, inside the radius-R
    // target ball
    let mut dist: HashMap<MT::Elem, u64> = HashMap::new();
    let mut frontier: Vec<MT::Elem> = Vec::new();
    for &x in &elems {
        let fx = f[x];
        if ball_t.contains(fx) && !dist.contains_key(fx) {
            dist.insert(fx.clone(), 0);
            frontier.push(fx.clone());
        }
    }
    if frontier.is_empty() {
        return Err(QiError::EmptyImage);
    }
    let steps = target.signed_generators();
    let mut layer = 0u64;
    while !frontier.is_empty() {
        layer += 1;
        let mut next: Vec<MT::Elem> = Vec::new();
        for g in frontier.drain(..) {
            for (_, s) in &steps {
                let h = target.mul(&g, s);
                if ball_t.contains(&h) && !dist.contains_key(&h) {
                    dist.insert(h.clone(), layer);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut codensity = 0u64;
    let mut codensity_witness: Option<String> = None;
    for (e, _) in ball_t.elements() {
        match dist.get(e) {
            Some(&d) if d > codensity => {
                codensity = d;
                codensity_witness = Some(target.show(e));
            }
            None => {
                // unreachable from the image within the ball; bound by the
                // ball diameter
                codensity = codensity.max(2 * radius as u64 + 1);
                codensity_witness = Some(target.show(e));
            }
            _ => {}
        }
    }

    Ok(QiCertificate {
        lambda_num,
        lambda_den: LAMBDA_DEN,
        epsilon: eps_min,
        codensity,
        radius,
        policy,
        pairs_checked: resolved.len(),
        witness,
        codensity_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FreeAbelianGroup, FreeGroup};
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn z_ball_is_an_interval() {
        let z = FreeAbelianGroup::of_rank(1);
        let ball = enumerate_ball(&z, 3, 1000).unwrap();
        assert_eq!(ball.len(), 7);
        assert_eq!(ball.word_length(&vec![-3]), Some(3));
        assert_eq!(ball.word_length(&vec![4]), None);
    }

    #[test]
    fn free_group_sphere_growth() {
        // |sphere(k)| = 4·3^(k−1) in rank 2
        let f = FreeGroup::of_rank(2);
        let ball = enumerate_ball(&f, 3, 10_000).unwrap();
        assert_eq!(ball.sphere_sizes(), &[1, 4, 12, 36]);
        assert_eq!(ball.len(), 53);
        // radius 2: 1 + 4 + 12 = 17
        let ball2 = enumerate_ball(&f, 2, 10_000).unwrap();
        assert_eq!(ball2.len(), 17);
    }

    #[test]
    fn geodesics_evaluate_back() {
        let f = FreeGroup::of_rank(2);
        let ball = enumerate_ball(&f, 4, 10_000).unwrap();
        for (e, d) in ball.elements() {
            let w = ball.geodesic(e).unwrap();
            assert_eq!(w.len(), d);
            assert_eq!(&f.eval(&w).unwrap(), e);
        }
    }

    #[test]
    fn cap_error_reports_partial_radius() {
        let f = FreeGroup::of_rank(2);
        let err = enumerate_ball(&f, 5, 20).unwrap_err();
        match err {
            BallError::CapExceeded { radius_reached, size } => {
                assert_eq!(radius_reached, 1);
                assert!(size >= 5);
            }
        }
    }

    #[test]
    fn triangle_inequality_within_ball() {
        let f = FreeGroup::of_rank(2);
        let ball = enumerate_ball(&f, 3, 10_000).unwrap();
        let elems: Vec<_> = ball.elements().map(|(e, d)| (e.clone(), d)).collect();
        for (g, dg) in &elems {
            for (h, dh) in &elems {
                let gh = f.mul(g, h);
                if let Some(dgh) = ball.word_length(&gh) {
                    assert!(dgh <= dg + dh);
                }
            }
        }
    }

    #[test]
    fn left_invariance_within_ball() {
        let f = FreeGroup::of_rank(2);
        let ball = enumerate_ball(&f, 3, 10_000).unwrap();
        let mut rng = crate::rng::SplitMix64::new(5);
        let triples = crate::models::laws::sample_elements(&f, &mut rng, 90, 3);
        for c in triples.chunks(3) {
            let (k, g, h) = (&c[0], &c[1], &c[2]);
            let d1 = ball.word_length(&f.mul(&f.inv(g), h));
            let kg = f.mul(k, g);
            let kh = f.mul(k, h);
            let d2 = ball.word_length(&f.mul(&f.inv(&kg), &kh));
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn identity_map_certificate() {
        let z = FreeAbelianGroup::of_rank(1);
        let ball = enumerate_ball(&z, 6, 1000).unwrap();
        let map: Vec<(Vec<i64>, Vec<i64>)> =
            ball.elements().map(|(e, _)| (e.clone(), e.clone())).collect();
        let cert = certify_qi(&z, &z, &map, 6, 10_000).unwrap();
        assert_eq!((cert.lambda_num, cert.lambda_den), (4, 4));
        assert_eq!(cert.epsilon, 0);
        assert_eq!(cert.codensity, 0);
    }

    #[test]
    fn doubling_inclusion_certificate() {
        // k ↦ 2k, both sides ℤ with the standard generator: the copy of 2ℤ
        // inside ℤ with its own word metric. λ = 2, ε = 0, C = 1.
        let z = FreeAbelianGroup::of_rank(1);
        let map: Vec<(Vec<i64>, Vec<i64>)> = (-8..=8).map(|k| (vec![k], vec![2 * k])).collect();
        let cert = certify_qi(&z, &z, &map, 8, 100_000).unwrap();
        assert_eq!((cert.lambda_num, cert.lambda_den), (8, 4));
        assert_eq!(cert.epsilon, 0);
        assert_eq!(cert.codensity, 1);
    }

    #[test]
    fn map_must_be_total() {
        let z = FreeAbelianGroup::of_rank(1);
        let map = vec![(vec![0i64], vec![0i64])];
        assert!(matches!(
            certify_qi(&z, &z, &map, 2, 100).unwrap_err(),
            QiError::MapNotTotal { .. }
        ));
    }
}
