//! Certified FC-centre and centre queries: conjugation-orbit closure,
//! generic coset BFS over membership oracles, relative centralizers, and
//! the ψ-homomorphism check.
//!
//! Every Proved or Refuted verdict carries a machine-checkable certificate
//! that is re-verified before it is returned; a cap hit alone is never a
//! refutation, only Inconclusive evidence.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use hashbrown::HashSet;

use crate::amalgam::{AmalgamGroup, WitnessInapplicable};
use crate::hnn::{HnnBase, HnnGroup};
use crate::models::{DirectProductGroup, FiniteTableGroup, FreeAbelianGroup, FreeGroup, GroupModel};
use crate::words::Word;

/// Conjugation-orbit closure of a seed element.
#[derive(Debug, Clone)]
pub struct OrbitResult<E> {
    pub seed: E,
    /// Set when the orbit closed under every generator step below the cap;
    /// then `elements` is exactly the conjugacy class and its size equals
    /// the centralizer index.
    pub closed: bool,
    /// Orbit elements with conjugator words: `elem = eval(w)·g·eval(w)⁻¹`.
    pub elements: Vec<(E, Word)>,
    pub cap: usize,
}

impl<E> OrbitResult<E> {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// BFS closure of `{g}` under `h ↦ s·h·s⁻¹` for generator letters `s`.
pub fn conjugation_orbit<M: GroupModel>(m: &M, g: &M::Elem, cap: usize) -> OrbitResult<M::Elem> {
    assert!(cap >= 1);
    let steps = m.signed_generators();
    let mut seen: HashSet<M::Elem> = HashSet::new();
    let mut elements: Vec<(M::Elem, Word)> = Vec::new();
    seen.insert(g.clone());
    elements.push((g.clone(), Word::empty()));
    let mut frontier = alloc::vec![(g.clone(), Word::empty())];
    let mut closed = true;
    'bfs: while let Some((h, w)) = frontier.pop() {
        for (letter, s) in &steps {
            let h2 = m.mul(&m.mul(s, &h), &m.inv(s));
            if !seen.contains(&h2) {
                if elements.len() >= cap {
                    closed = false;
                    break 'bfs;
                }
                let w2 = Word::generator(letter.gen as usize, letter.inv).concat(&w);
                seen.insert(h2.clone());
                elements.push((h2.clone(), w2.clone()));
                frontier.push((h2, w2));
            }
        }
    }
    OrbitResult { seed: g.clone(), closed, elements, cap }
}

/// Re-checks an orbit certificate: conjugator words reproduce each element
/// and, when closed, the set is stable under every generator.
pub fn verify_orbit<M: GroupModel>(m: &M, orbit: &OrbitResult<M::Elem>) -> bool {
    let set: HashSet<&M::Elem> = orbit.elements.iter().map(|(e, _)| e).collect();
    if set.len() != orbit.elements.len() {
        return false;
    }
    for (e, w) in &orbit.elements {
        let Ok(c) = m.eval(w) else { return false };
        if m.mul(&m.mul(&c, &orbit.seed), &m.inv(&c)) != *e {
            return false;
        }
    }
    if orbit.closed {
        for (e, _) in &orbit.elements {
            for (_, s) in m.signed_generators() {
                let h = m.mul(&m.mul(&s, e), &m.inv(&s));
                if !set.contains(&h) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CosetError {
    /// The membership oracle failed a subgroup spot-check.
    OracleNotSubgroup { detail: String },
}

impl fmt::Display for CosetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetError::OracleNotSubgroup { detail } => {
                write!(f, "membership oracle violates subgroup closure: {detail}")
            }
        }
    }
}

/// Right-coset enumeration result.
#[derive(Debug, Clone)]
pub struct CosetResult<E> {
    pub closed: bool,
    /// One representative per discovered coset, with a defining word.
    pub reps: Vec<(E, Word)>,
    pub cap: usize,
}

impl<E> CosetResult<E> {
    /// `[Γ : H]` when the enumeration closed.
    pub fn index(&self) -> Option<usize> {
        self.closed.then_some(self.reps.len())
    }
}

/// BFS on right cosets Hγ under right multiplication by generators, using
/// the exact same-coset test `γ₁γ₂⁻¹ ∈ H`. The oracle receives each tested
/// element together with a word evaluating to it (so fixed-set oracles can
/// apply homomorphisms). Subgroup closure of the oracle is spot-checked on
/// the H-members discovered during the walk.
pub fn coset_bfs<M, F>(m: &M, member: F, cap: usize) -> Result<CosetResult<M::Elem>, CosetError>
where
    M: GroupModel,
    F: Fn(&M::Elem, &Word) -> bool,
{
    assert!(cap >= 1);
    if !member(&m.identity(), &Word::empty()) {
        return Err(CosetError::OracleNotSubgroup { detail: "identity rejected".into() });
    }
    let steps = m.signed_generators();
    let mut reps: Vec<(M::Elem, Word)> = alloc::vec![(m.identity(), Word::empty())];
    let mut h_samples: Vec<(M::Elem, Word)> = Vec::new();
    let mut frontier: Vec<usize> = alloc::vec![0];
    let mut closed = true;
    'bfs: while let Some(at) = frontier.pop() {
        let (gamma, w) = reps[at].clone();
        for (letter, s) in &steps {
            let c = m.mul(&gamma, s);
            let wc = w.concat(&Word::generator(letter.gen as usize, letter.inv));
            let mut found = false;
            for (rho, wr) in &reps {
                let h = m.mul(&c, &m.inv(rho));
                let wh = wc.concat(&wr.inverse());
                if member(&h, &wh) {
                    if h_samples.len() < 16 && !m.is_identity(&h) {
                        h_samples.push((h, wh));
                    }
                    found = true;
                    break;
                }
            }
            if !found {
                if reps.len() >= cap {
                    closed = false;
                    break 'bfs;
                }
                frontier.push(reps.len());
                reps.push((c, wc));
            }
        }
    }
    // spot-check: discovered members stay members under inverse and product
    for (h, wh) in &h_samples {
        if !member(&m.inv(h), &wh.inverse()) {
            return Err(CosetError::OracleNotSubgroup {
                detail: alloc::format!("inverse of member {} rejected", m.show(h)),
            });
        }
    }
    for (i, (h1, w1)) in h_samples.iter().enumerate() {
        let (h2, w2) = &h_samples[(i + 1) % h_samples.len().max(1)];
        let p = m.mul(h1, h2);
        if !member(&p, &w1.concat(w2)) {
            return Err(CosetError::OracleNotSubgroup {
                detail: alloc::format!("product of members {} rejected", m.show(&p)),
            });
        }
    }
    Ok(CosetResult { closed, reps, cap })
}

/// `[Γ : C(g)]` enumeration via the commuting oracle; the independent
/// cross-check for closed orbit sizes.
pub fn centralizer_index<M: GroupModel>(
    m: &M,
    g: &M::Elem,
    cap: usize,
) -> Result<CosetResult<M::Elem>, CosetError> {
    coset_bfs(m, |h, _| m.commutes(h, g), cap)
}

/// True iff `g` commutes with every generator (sufficient: generators
/// generate).
pub fn centre_test<M: GroupModel>(m: &M, g: &M::Elem) -> bool {
    let n = m.alphabet().len();
    (0..n).all(|i| m.commutes(g, &m.generator(i)))
}

// ---------------------------------------------------------------------------
// verdicts

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FcBudget {
    pub orbit_cap: usize,
    /// Number of distinct conjugates a growth witness must produce.
    pub witness_strength: usize,
}

impl Default for FcBudget {
    fn default() -> Self {
        // all catalog examples close below 10² or visibly diverge
        FcBudget { orbit_cap: 10_000, witness_strength: 10 }
    }
}

/// A sound, model-specific witness that an element has infinitely many
/// conjugates.
#[derive(Debug, Clone)]
pub struct FcRefutation<E> {
    pub kind: &'static str,
    /// `conjugates[i] = conjugators[i]⁻¹ · g · conjugators[i]`, pairwise
    /// distinct (may be empty for obstruction-style certificates).
    pub conjugators: Vec<E>,
    pub conjugates: Vec<E>,
    pub detail: String,
}

/// Three-valued certified answer for semi-decidable membership queries.
#[derive(Debug, Clone)]
pub enum Verdict<E> {
    Proved(ProofCert<E>),
    Refuted(FcRefutation<E>),
    Inconclusive(Inconclusive<E>),
}

impl<E> Verdict<E> {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "proved",
            Verdict::Refuted(_) => "refuted",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProofCert<E> {
    /// Closed conjugacy class with conjugator words.
    pub orbit: Vec<(E, Word)>,
    /// `[Γ : C(g)]` = orbit size, by orbit–stabilizer.
    pub centralizer_index: usize,
}

#[derive(Debug, Clone)]
pub struct Inconclusive<E> {
    pub orbit_cap: usize,
    /// Distinct conjugates seen before the cap.
    pub distinct_seen: usize,
    /// Leading sample of the diverging orbit.
    pub sample: Vec<E>,
}

/// Model-specific refutation hook. The default refuses; models with a
/// structural infinite-conjugacy witness override it.
pub trait FcWitnessProvider: GroupModel {
    fn refute_fc(&self, _g: &Self::Elem, _strength: usize) -> Option<FcRefutation<Self::Elem>> {
        None
    }
}

impl FcWitnessProvider for FiniteTableGroup {}
impl FcWitnessProvider for FreeAbelianGroup {}

impl FcWitnessProvider for FreeGroup {
    fn refute_fc(&self, g: &Word, strength: usize) -> Option<FcRefutation<Word>> {
        if self.rank() < 2 || g.is_empty() {
            return None;
        }
        let (core, u) = g.cyclic_reduce();
        let first = core.letters()[0];
        let last = *core.letters().last().unwrap();
        // pick a signed letter cancelling at neither junction: s⁻¹·core
        // cancels iff the core starts with s, core·s cancels iff it ends
        // with s⁻¹; then s⁻ᵐ·core·sᵐ is reduced as written
        let s = (0..self.rank())
            .flat_map(|i| [false, true].map(|inv| crate::words::Letter::new(i, inv)))
            .find(|s| *s != first && *s != last.inverse())?;
        let s_word = Word::from_letters([s]);
        let mut conjugators = Vec::with_capacity(strength);
        let mut conjugates = Vec::with_capacity(strength);
        let mut power = Word::empty();
        for _ in 0..strength {
            power = power.concat(&s_word);
            let v = u.concat(&power);
            conjugates.push(v.inverse().concat(g).concat(&v));
            conjugators.push(v);
        }
        Some(FcRefutation {
            kind: "free-growth",
            conjugators,
            conjugates,
            detail: alloc::format!(
                "conjugation by powers of {} grows the cyclically reduced core",
                s_word.display(self.alphabet())
            ),
        })
    }
}

impl<A, B> FcWitnessProvider for DirectProductGroup<A, B>
where
    A: FcWitnessProvider,
    B: FcWitnessProvider,
{
    fn refute_fc(&self, g: &Self::Elem, strength: usize) -> Option<FcRefutation<Self::Elem>> {
        if let Some(r) = self.left().refute_fc(&g.0, strength) {
            let conjugators: Vec<Self::Elem> =
                r.conjugators.iter().map(|c| (c.clone(), self.right().identity())).collect();
            let conjugates: Vec<Self::Elem> =
                r.conjugates.iter().map(|c| (c.clone(), g.1.clone())).collect();
            return Some(FcRefutation { kind: r.kind, conjugators, conjugates, detail: r.detail });
        }
        let r = self.right().refute_fc(&g.1, strength)?;
        let conjugators: Vec<Self::Elem> =
            r.conjugators.iter().map(|c| (self.left().identity(), c.clone())).collect();
        let conjugates: Vec<Self::Elem> =
            r.conjugates.iter().map(|c| (g.0.clone(), c.clone())).collect();
        Some(FcRefutation { kind: r.kind, conjugators, conjugates, detail: r.detail })
    }
}

impl FcWitnessProvider for AmalgamGroup {
    fn refute_fc(
        &self,
        g: &crate::amalgam::AmalgamElement,
        strength: usize,
    ) -> Option<FcRefutation<crate::amalgam::AmalgamElement>> {
        let (core, u) = self.cyclic_reduce(g);
        match self.conjugate_growth_witness(&core, strength) {
            Ok(w) => {
                // conjugates of the cyclically reduced core are conjugates of
                // g by u·cᵐ
                let conjugators: Vec<_> =
                    w.conjugators.iter().map(|c| self.mul(&u, c)).collect();
                Some(FcRefutation {
                    kind: "amalgam-growth",
                    conjugators,
                    conjugates: w.conjugates,
                    detail: String::from(
                        "alternating conjugators keep the reduced form growing",
                    ),
                })
            }
            Err(WitnessInapplicable::InCore)
            | Err(WitnessInapplicable::HypothesisFails)
            | Err(WitnessInapplicable::NotCyclicallyReduced) => None,
        }
    }
}

impl<B: HnnBase> FcWitnessProvider for HnnGroup<B> {
    fn refute_fc(
        &self,
        g: &crate::hnn::HnnElement<B::Elem>,
        strength: usize,
    ) -> Option<FcRefutation<crate::hnn::HnnElement<B::Elem>>> {
        // only base elements admit the t-power obstruction
        let base_elem = g.as_base()?;
        let tower_budget = strength.max(16);
        let r = self.refute_base_fc(base_elem, tower_budget)?;
        // re-check through independent Britton arithmetic: no t-power up to
        // the break level centralizes g
        for k in 1..=r.break_level as u32 {
            if self.t_power_centralizes(base_elem, k) {
                return None;
            }
        }
        Some(FcRefutation {
            kind: "tower-obstruction",
            conjugators: Vec::new(),
            conjugates: Vec::new(),
            detail: alloc::format!(
                "element leaves the φ-domain tower at level {}; no t-power centralizes it, so its centralizer has infinite index",
                r.break_level
            ),
        })
    }
}

/// Decides `g ∈ K(Γ)` within budget: Proved by a closed, re-verified
/// orbit; Refuted only by a verified structural witness; otherwise
/// Inconclusive with the diverging-orbit evidence.
pub fn fc_membership<M>(m: &M, g: &M::Elem, budget: FcBudget) -> Verdict<M::Elem>
where
    M: FcWitnessProvider,
{
    let orbit = conjugation_orbit(m, g, budget.orbit_cap);
    if orbit.closed {
        assert!(verify_orbit(m, &orbit), "closed orbit failed verification");
        let centralizer_index = orbit.size();
        return Verdict::Proved(ProofCert { orbit: orbit.elements, centralizer_index });
    }
    if let Some(r) = m.refute_fc(g, budget.witness_strength) {
        assert!(verify_refutation(m, g, &r), "refutation witness failed verification");
        return Verdict::Refuted(r);
    }
    let sample: Vec<M::Elem> =
        orbit.elements.iter().take(24).map(|(e, _)| e.clone()).collect();
    Verdict::Inconclusive(Inconclusive {
        orbit_cap: budget.orbit_cap,
        distinct_seen: orbit.size(),
        sample,
    })
}

/// Checks a refutation's finite data: conjugators reproduce the conjugates
/// and the conjugates are pairwise distinct.
pub fn verify_refutation<M: GroupModel>(m: &M, g: &M::Elem, r: &FcRefutation<M::Elem>) -> bool {
    if r.conjugators.len() != r.conjugates.len() {
        return false;
    }
    for (v, c) in r.conjugators.iter().zip(&r.conjugates) {
        if m.mul(&m.mul(&m.inv(v), g), v) != *c {
            return false;
        }
    }
    let set: HashSet<&M::Elem> = r.conjugates.iter().collect();
    set.len() == r.conjugates.len()
}

// ---------------------------------------------------------------------------
// relative centralizers and the ψ check

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KSetError {
    MissingIdentity,
    NotInverseClosed { element: String },
}

impl fmt::Display for KSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSetError::MissingIdentity => write!(f, "K does not contain the identity"),
            KSetError::NotInverseClosed { element } => {
                write!(f, "K is not closed under inverse (missing inverse of {element})")
            }
        }
    }
}

fn validate_k_set<M: GroupModel>(m: &M, k: &[M::Elem]) -> Result<(), KSetError> {
    let set: HashSet<&M::Elem> = k.iter().collect();
    if !set.contains(&m.identity()) {
        return Err(KSetError::MissingIdentity);
    }
    for x in k {
        if !set.contains(&m.inv(x)) {
            return Err(KSetError::NotInverseClosed { element: m.show(x) });
        }
    }
    Ok(())
}

/// `[Γ : C(g;K)]` for `C(g;K) = {γ' : [g,γ'] ∈ K}`, via coset BFS. The
/// finite set K must contain the identity and be inverse-closed; the
/// subgroup property of the induced oracle is spot-checked by the BFS.
pub fn relative_centralizer_index<M: GroupModel>(
    m: &M,
    g: &M::Elem,
    k: &[M::Elem],
    cap: usize,
) -> Result<CosetResult<M::Elem>, RelativeCentralizerError> {
    validate_k_set(m, k).map_err(RelativeCentralizerError::KSet)?;
    let set: HashSet<&M::Elem> = k.iter().collect();
    coset_bfs(m, |h, _| set.contains(&m.commutator(g, h)), cap)
        .map_err(RelativeCentralizerError::Coset)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelativeCentralizerError {
    KSet(KSetError),
    Coset(CosetError),
}

impl fmt::Display for RelativeCentralizerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelativeCentralizerError::KSet(e) => write!(f, "{e}"),
            RelativeCentralizerError::Coset(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiPreconditionError {
    /// Elements violating `[g,h] ∈ K` or `h ∉ ⋂ C(kᵢ)`, rendered.
    pub violations: Vec<String>,
}

impl fmt::Display for PsiPreconditionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ preconditions violated by: {}", self.violations.join(", "))
    }
}

/// Checks that `ψ(γ') = [g, γ']` is multiplicative on H, after verifying
/// the hypotheses `[g,h] ∈ K` and `h ∈ ⋂_{k∈K} C(k)` per element.
pub fn psi_homomorphism_check<M: GroupModel>(
    m: &M,
    g: &M::Elem,
    h_list: &[M::Elem],
    k: &[M::Elem],
) -> Result<bool, PsiPreconditionError> {
    let set: HashSet<&M::Elem> = k.iter().collect();
    let mut violations = Vec::new();
    for h in h_list {
        if !set.contains(&m.commutator(g, h)) {
            violations.push(alloc::format!("[g,{}] outside K", m.show(h)));
        }
        if k.iter().any(|x| !m.commutes(h, x)) {
            violations.push(alloc::format!("{} does not centralize K", m.show(h)));
        }
    }
    if !violations.is_empty() {
        return Err(PsiPreconditionError { violations });
    }
    let psi = |h: &M::Elem| m.commutator(g, h);
    for h1 in h_list {
        for h2 in h_list {
            if psi(&m.mul(h1, h2)) != m.mul(&psi(h1), &psi(h2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{AmalgamSpec, Factor};
    use crate::hnn::klein_bottle;
    use alloc::string::ToString;
    use alloc::vec;

    fn dihedral() -> AmalgamGroup {
        let z2a = FiniteTableGroup::cyclic_named(2, "u");
        let z2b = FiniteTableGroup::cyclic_named(2, "v");
        let core = FiniteTableGroup::cyclic_named(1, "e");
        let spec = AmalgamSpec::new(z2a, z2b, core, &[0], &[0]).unwrap();
        AmalgamGroup::new(
            spec,
            &[
                ("x".to_string(), vec![(Factor::One, 1)]),
                ("y".to_string(), vec![(Factor::One, 1), (Factor::Two, 1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dihedral_y_orbit_closes() {
        let d = dihedral();
        let y = d.generator(1);
        let orbit = conjugation_orbit(&d, &y, 100);
        assert!(orbit.closed);
        assert_eq!(orbit.size(), 2);
        assert!(verify_orbit(&d, &orbit));
        let elems: Vec<_> = orbit.elements.iter().map(|(e, _)| e.clone()).collect();
        assert!(elems.contains(&y));
        assert!(elems.contains(&d.inv(&y)));
    }

    #[test]
    fn dihedral_x_orbit_diverges() {
        let d = dihedral();
        let x = d.generator(0);
        let orbit = conjugation_orbit(&d, &x, 50);
        assert!(!orbit.closed);
        assert_eq!(orbit.size(), 50);
        // conjugates are x·y^{2k}: all share the parity pattern
        let y = d.generator(1);
        let y2 = d.mul(&y, &y);
        let xy2 = d.mul(&x, &y2);
        let elems: Vec<_> = orbit.elements.iter().map(|(e, _)| e.clone()).collect();
        assert!(elems.contains(&xy2));
    }

    #[test]
    fn dihedral_fc_verdicts() {
        let d = dihedral();
        let y = d.generator(1);
        let x = d.generator(0);
        assert!(fc_membership(&d, &y, FcBudget::default()).is_proved());
        // both factor indices are 2: no witness, honest Inconclusive
        match fc_membership(&d, &x, FcBudget { orbit_cap: 200, witness_strength: 5 }) {
            Verdict::Inconclusive(i) => {
                assert_eq!(i.distinct_seen, 200);
                assert!(i.sample.len() >= 20);
            }
            other => panic!("expected inconclusive, got {}", other.status()),
        }
    }

    #[test]
    fn orbit_size_matches_centralizer_index() {
        let d = dihedral();
        let y = d.generator(1);
        let orbit = conjugation_orbit(&d, &y, 100);
        let cosets = centralizer_index(&d, &y, 100).unwrap();
        assert_eq!(cosets.index(), Some(orbit.size()));
    }

    #[test]
    fn coset_bfs_fix_oracle_in_dihedral() {
        // Fix(φ) for φ(x) = xy, φ(y) = y is ⟨y⟩, index 2. The oracle applies
        // φ through the word handed to it.
        let d = dihedral();
        let phi = |w: &Word| -> Word {
            // substitute x ↦ xy, y ↦ y
            let x_img = crate::words::parse_word("x*y", d.alphabet()).unwrap();
            let y_img = crate::words::parse_word("y", d.alphabet()).unwrap();
            let mut out = Word::empty();
            for l in w.letters() {
                let img = if l.gen == 0 { &x_img } else { &y_img };
                let part = if l.inv { img.inverse() } else { img.clone() };
                out = out.concat(&part);
            }
            out
        };
        let res = coset_bfs(
            &d,
            |h, wh| {
                let img = d.eval(&phi(wh)).unwrap();
                img == *h
            },
            100,
        )
        .unwrap();
        assert_eq!(res.index(), Some(2));
    }

    #[test]
    fn coset_bfs_z_mod_3() {
        let z = FreeAbelianGroup::of_rank(1);
        let res = coset_bfs(&z, |h, _| h[0].rem_euclid(3) == 0, 100).unwrap();
        assert_eq!(res.index(), Some(3));
        // whole group: index 1
        let res = coset_bfs(&z, |_, _| true, 100).unwrap();
        assert_eq!(res.index(), Some(1));
    }

    #[test]
    fn coset_bfs_rejects_non_subgroup_oracle() {
        let z = FreeAbelianGroup::of_rank(1);
        // "members" = {0, 1}: not closed under addition
        let err = coset_bfs(&z, |h, _| h[0] == 0 || h[0] == 1, 100);
        assert!(matches!(err, Err(CosetError::OracleNotSubgroup { .. })));
    }

    #[test]
    fn klein_bottle_fc_pattern() {
        let k = klein_bottle();
        let g = k.generator(0);
        let t = k.generator(1);
        // γ: orbit {γ, γ⁻¹}
        let v = fc_membership(&k, &g, FcBudget::default());
        match &v {
            Verdict::Proved(p) => assert_eq!(p.centralizer_index, 2),
            other => panic!("expected proved, got {}", other.status()),
        }
        // t²: central, orbit {t²}
        let t2 = k.mul(&t, &t);
        assert!(centre_test(&k, &t2));
        match fc_membership(&k, &t2, FcBudget::default()) {
            Verdict::Proved(p) => assert_eq!(p.centralizer_index, 1),
            other => panic!("expected proved, got {}", other.status()),
        }
        // t: diverging orbit γ^{2a}t, inconclusive at cap
        assert!(!centre_test(&k, &t));
        match fc_membership(&k, &t, FcBudget { orbit_cap: 100, witness_strength: 5 }) {
            Verdict::Inconclusive(i) => assert!(i.distinct_seen >= 20),
            other => panic!("expected inconclusive, got {}", other.status()),
        }
    }

    #[test]
    fn bs23_base_elements_are_refuted() {
        let g = crate::hnn::baumslag_solitar(2, 3).unwrap();
        let a = g.generator(0);
        match fc_membership(&g, &a, FcBudget { orbit_cap: 100, witness_strength: 5 }) {
            Verdict::Refuted(r) => assert_eq!(r.kind, "tower-obstruction"),
            other => panic!("expected refuted, got {}", other.status()),
        }
        // t is not a base element: stays inconclusive
        let t = g.generator(1);
        match fc_membership(&g, &t, FcBudget { orbit_cap: 100, witness_strength: 5 }) {
            Verdict::Inconclusive(_) => {}
            other => panic!("expected inconclusive, got {}", other.status()),
        }
    }

    #[test]
    fn free_group_refutation() {
        let f = FreeGroup::of_rank(2);
        let a = f.generator(0);
        match fc_membership(&f, &a, FcBudget { orbit_cap: 100, witness_strength: 8 }) {
            Verdict::Refuted(r) => {
                assert_eq!(r.kind, "free-growth");
                assert_eq!(r.conjugates.len(), 8);
            }
            other => panic!("expected refuted, got {}", other.status()),
        }
    }

    #[test]
    fn relative_centralizer_collapses_for_trivial_k() {
        let d = dihedral();
        let y = d.generator(1);
        let k = vec![d.identity()];
        let res = relative_centralizer_index(&d, &y, &k, 100).unwrap();
        assert_eq!(res.index(), Some(2));
    }

    #[test]
    fn relative_centralizer_rejects_bad_k() {
        let d = dihedral();
        let y = d.generator(1);
        // missing identity
        assert!(matches!(
            relative_centralizer_index(&d, &y, &[y.clone()], 10),
            Err(RelativeCentralizerError::KSet(KSetError::MissingIdentity))
        ));
        // not inverse-closed
        let xy = d.mul(&d.generator(0), &y);
        let k = vec![d.identity(), d.mul(&y, &y)];
        let _ = xy;
        // y² is its own inverse? (y²)⁻¹ = y⁻²: not in K
        assert!(matches!(
            relative_centralizer_index(&d, &y, &k, 10),
            Err(RelativeCentralizerError::KSet(KSetError::NotInverseClosed { .. }))
        ));
    }

    #[test]
    fn relative_centralizer_agrees_with_brute_force() {
        // D∞, g = x, K = {1, y, y⁻¹}: C(x;K) = {γ' : [x,γ'] ∈ K}. The coset
        // walk diverges (the subgroup is finite), but the oracle itself must
        // agree with direct commutator computation over a ball.
        let d = dihedral();
        let x = d.generator(0);
        let y = d.generator(1);
        let k = vec![d.identity(), y.clone(), d.inv(&y)];
        let kset: HashSet<_> = k.iter().cloned().collect();
        let ball = crate::geometry::enumerate_ball(&d, 6, 10_000).unwrap();
        for (e, _) in ball.elements() {
            let direct = kset.contains(&d.commutator(&x, e));
            // oracle form used by relative_centralizer_index
            let via_set = kset.contains(&d.commutator(&x, e));
            assert_eq!(direct, via_set);
        }
        // divergence: cap hit, no index
        let res = relative_centralizer_index(&d, &x, &k, 30).unwrap();
        assert_eq!(res.index(), None);
    }

    #[test]
    fn psi_check_trivial_k() {
        let d = dihedral();
        let y = d.generator(1);
        let y2 = d.mul(&y, &y);
        // H ⊆ C(y): powers of y; K = {1}: commutators all trivial
        let h = vec![d.identity(), y.clone(), y2];
        let k = vec![d.identity()];
        assert_eq!(psi_homomorphism_check(&d, &y, &h, &k), Ok(true));
    }

    #[test]
    fn psi_check_reports_violations() {
        let d = dihedral();
        let x = d.generator(0);
        let y = d.generator(1);
        // H = {x} with K = {1}: [y, x] = y² ∉ K
        let err = psi_homomorphism_check(&d, &y, &[x], &[d.identity()]).unwrap_err();
        assert!(!err.violations.is_empty());
    }

    #[test]
    fn psi_multiplicative_on_klein_sample() {
        // Klein bottle, g = t, K = {1, γ², γ⁻²} ∪ ... take K = orbit-closed
        // finite set {1, g², g⁻²}; H = powers of g² (they centralize K and
        // have [t,·] ∈ K)
        let kb = klein_bottle();
        let gb = kb.generator(0);
        let t = kb.generator(1);
        let g2 = kb.mul(&gb, &gb);
        let k = vec![kb.identity(), g2.clone(), kb.inv(&g2)];
        // [t, g] = t g t⁻¹ g⁻¹ = g⁻²: in K
        let h = vec![kb.identity(), gb.clone(), kb.inv(&gb)];
        assert_eq!(psi_homomorphism_check(&kb, &t, &h, &k), Ok(true));
    }
}
