//! Free products with amalgamation Γ₁∗_{Γ₀}Γ₂ of finite-table factors.
//!
//! Elements are kept in the transversal normal form `head · r₁ · r₂ ⋯ rₖ`
//! with `head ∈ Γ₀` and the `rᵢ` nontrivial right-coset representatives
//! alternating between the two factors. Multiplication concatenates and
//! then folds core parts leftward through the tail using the coset
//! splitting `g = γ₀·rep`, so normal forms stay canonical and structural
//! equality is exact element equality.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::models::{FiniteTableGroup, GroupModel};
use crate::words::Alphabet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    One,
    Two,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::One => Factor::Two,
            Factor::Two => Factor::One,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::One => write!(f, "factor 1"),
            Factor::Two => write!(f, "factor 2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmalgamError {
    EmbeddingWrongSize { factor: Factor },
    EmbeddingNotHomomorphism { factor: Factor },
    EmbeddingNotInjective { factor: Factor },
    /// Γ₀ equals a whole factor: the product does not split properly.
    NotProper { factor: Factor },
    BadGeneratorWord,
    Alphabet(crate::words::AlphabetError),
}

impl fmt::Display for AmalgamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmalgamError::EmbeddingWrongSize { factor } => {
                write!(f, "embedding into {factor} has the wrong domain size")
            }
            AmalgamError::EmbeddingNotHomomorphism { factor } => {
                write!(f, "embedding into {factor} is not a homomorphism")
            }
            AmalgamError::EmbeddingNotInjective { factor } => {
                write!(f, "embedding into {factor} is not injective")
            }
            AmalgamError::NotProper { factor } => {
                write!(f, "amalgamated subgroup equals {factor}; the amalgam is degenerate")
            }
            AmalgamError::BadGeneratorWord => write!(f, "bad generator description"),
            AmalgamError::Alphabet(e) => write!(f, "{e}"),
        }
    }
}

/// Why a growth witness cannot be produced for a given element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessInapplicable {
    /// Element lies in the amalgamated subgroup.
    InCore,
    NotCyclicallyReduced,
    /// Both factor indices are 2; the claim's hypothesis `|Γᵢ:Γ₀| ≥ 3` fails.
    HypothesisFails,
}

impl fmt::Display for WitnessInapplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessInapplicable::InCore => write!(f, "element lies in the amalgamated subgroup"),
            WitnessInapplicable::NotCyclicallyReduced => write!(f, "element is not cyclically reduced"),
            WitnessInapplicable::HypothesisFails => {
                write!(f, "no factor has index ≥ 3 over the amalgamated subgroup")
            }
        }
    }
}

/// Validated data of Γ₁∗_{Γ₀}Γ₂: finite factors, a finite core, and
/// exhaustively checked injective embeddings.
#[derive(Debug, Clone)]
pub struct AmalgamSpec {
    factor1: FiniteTableGroup,
    factor2: FiniteTableGroup,
    core: FiniteTableGroup,
    /// e_f(δ) per core element, per factor.
    img: [Vec<u32>; 2],
    /// factor element → core preimage when it lies in e_f(Γ₀).
    preimage: [Vec<Option<u32>>; 2],
    /// factor element → canonical representative of its right coset Γ₀g.
    rep: [Vec<u32>; 2],
}

impl AmalgamSpec {
    pub fn new(
        factor1: FiniteTableGroup,
        factor2: FiniteTableGroup,
        core: FiniteTableGroup,
        e1: &[u32],
        e2: &[u32],
    ) -> Result<Self, AmalgamError> {
        let img = [e1.to_vec(), e2.to_vec()];
        for (fi, factor, e) in [(Factor::One, &factor1, e1), (Factor::Two, &factor2, e2)] {
            if e.len() != core.size() || e.iter().any(|&g| g as usize >= factor.size()) {
                return Err(AmalgamError::EmbeddingWrongSize { factor: fi });
            }
            for a in core.elements() {
                for b in core.elements() {
                    let lhs = e[core.mul_idx(a, b) as usize];
                    let rhs = factor.mul_idx(e[a as usize], e[b as usize]);
                    if lhs != rhs {
                        return Err(AmalgamError::EmbeddingNotHomomorphism { factor: fi });
                    }
                }
            }
            let mut seen = alloc::vec![false; factor.size()];
            for &g in e {
                if seen[g as usize] {
                    return Err(AmalgamError::EmbeddingNotInjective { factor: fi });
                }
                seen[g as usize] = true;
            }
            if core.size() == factor.size() {
                return Err(AmalgamError::NotProper { factor: fi });
            }
        }

        let mut preimage = [alloc::vec![None; factor1.size()], alloc::vec![None; factor2.size()]];
        for f in [0, 1] {
            for d in core.elements() {
                preimage[f][img[f][d as usize] as usize] = Some(d);
            }
        }

        // transversal: identity represents the trivial coset, smallest index
        // otherwise
        let mut rep = [Vec::new(), Vec::new()];
        for (f, factor) in [(0usize, &factor1), (1, &factor2)] {
            rep[f] = factor
                .elements()
                .map(|g| {
                    if preimage[f][g as usize].is_some() {
                        factor.identity_idx()
                    } else {
                        core.elements()
                            .map(|d| factor.mul_idx(img[f][d as usize], g))
                            .min()
                            .expect("core is nonempty")
                    }
                })
                .collect();
        }

        Ok(AmalgamSpec { factor1, factor2, core, img, preimage, rep })
    }

    /// Builds the spec from matched subgroup generators: `pairs` lists
    /// (element of Γ₁, element of Γ₂) that generate the two copies of Γ₀
    /// and correspond under the identification. The induced map is checked
    /// to be a well-defined isomorphism between the generated subgroups.
    pub fn from_matched_generators(
        factor1: FiniteTableGroup,
        factor2: FiniteTableGroup,
        pairs: &[(u32, u32)],
    ) -> Result<Self, AmalgamError> {
        if pairs.iter().any(|&(a, b)| a as usize >= factor1.size() || b as usize >= factor2.size()) {
            return Err(AmalgamError::BadGeneratorWord);
        }
        let h1 = factor1.subgroup_closure(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());

        // grow the correspondence h ↦ h' over H₁ by BFS on generator steps
        let mut map: Vec<Option<u32>> = alloc::vec![None; factor1.size()];
        map[factor1.identity_idx() as usize] = Some(factor2.identity_idx());
        let mut frontier = alloc::vec![factor1.identity_idx()];
        while let Some(a) = frontier.pop() {
            let a2 = map[a as usize].unwrap();
            for &(g1, g2) in pairs {
                for (b, b2) in [
                    (factor1.mul_idx(a, g1), factor2.mul_idx(a2, g2)),
                    (factor1.mul_idx(a, factor1.inv_idx(g1)), factor2.mul_idx(a2, factor2.inv_idx(g2))),
                ] {
                    match map[b as usize] {
                        None => {
                            map[b as usize] = Some(b2);
                            frontier.push(b);
                        }
                        Some(prev) if prev != b2 => {
                            return Err(AmalgamError::EmbeddingNotHomomorphism { factor: Factor::Two })
                        }
                        _ => {}
                    }
                }
            }
        }

        let e1: Vec<u32> = h1.clone();
        let e2: Vec<u32> = h1.iter().map(|&h| map[h as usize].expect("closure covers H₁")).collect();

        // abstract copy of Γ₀ on index set 0..|H₁|
        let lookup = |g: u32| h1.binary_search(&g).expect("closed under multiplication") as usize;
        let table: Vec<Vec<usize>> = h1
            .iter()
            .map(|&a| h1.iter().map(|&b| lookup(factor1.mul_idx(a, b))).collect())
            .collect();
        let names: Vec<String> = h1.iter().map(|&a| String::from(factor1.elem_name(a))).collect();
        let gen_seed: Vec<(String, usize)> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(g1, _))| (alloc::format!("_c{i}"), lookup(g1)))
            .collect();
        let core = FiniteTableGroup::new(&table, &gen_seed, Some(names))
            .map_err(|_| AmalgamError::EmbeddingNotHomomorphism { factor: Factor::One })?;

        Self::new(factor1, factor2, core, &e1, &e2)
    }

    pub fn factor(&self, f: Factor) -> &FiniteTableGroup {
        match f {
            Factor::One => &self.factor1,
            Factor::Two => &self.factor2,
        }
    }

    pub fn core(&self) -> &FiniteTableGroup {
        &self.core
    }

    /// `[Γ_f : Γ₀]`.
    pub fn index(&self, f: Factor) -> usize {
        self.factor(f).size() / self.core.size()
    }

    pub fn embed_core(&self, f: Factor, d: u32) -> u32 {
        self.img[f as usize][d as usize]
    }

    fn fidx(f: Factor) -> usize {
        match f {
            Factor::One => 0,
            Factor::Two => 1,
        }
    }

    pub fn core_preimage(&self, f: Factor, g: u32) -> Option<u32> {
        self.preimage[Self::fidx(f)][g as usize]
    }

    pub fn in_core(&self, f: Factor, g: u32) -> bool {
        self.core_preimage(f, g).is_some()
    }

    /// Splits `g = e_f(δ)·r` with `r` the canonical coset representative.
    pub fn split(&self, f: Factor, g: u32) -> (u32, u32) {
        let r = self.rep[Self::fidx(f)][g as usize];
        let factor = self.factor(f);
        let d_img = factor.mul_idx(g, factor.inv_idx(r));
        let d = self.core_preimage(f, d_img).expect("g·r⁻¹ lies in the amalgamated subgroup");
        (d, r)
    }

    /// Nontrivial coset representatives of Γ₀\Γ_f.
    pub fn nontrivial_reps(&self, f: Factor) -> Vec<u32> {
        let fi = Self::fidx(f);
        let mut reps: Vec<u32> = self.rep[fi]
            .iter()
            .copied()
            .filter(|&r| !self.in_core(f, r))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

/// Normal form `head · r₁ ⋯ rₖ`; unique per group element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmalgamElement {
    head: u32,
    tail: Vec<(Factor, u32)>,
}

impl AmalgamElement {
    pub fn head(&self) -> u32 {
        self.head
    }

    pub fn tail(&self) -> &[(Factor, u32)] {
        &self.tail
    }

    /// Syllable count of the reduced sequence; 0 exactly on Γ₀.
    pub fn reduced_length(&self) -> usize {
        self.tail.len()
    }

    pub fn in_core(&self) -> bool {
        self.tail.is_empty()
    }

    /// First and last syllables lie in different factors (or length ≤ 1).
    pub fn is_cyclically_reduced(&self) -> bool {
        self.tail.len() <= 1 || self.tail[0].0 != self.tail.last().unwrap().0
    }
}

/// The amalgam as a [`GroupModel`] with a designated generating set.
#[derive(Debug, Clone)]
pub struct AmalgamGroup {
    spec: AmalgamSpec,
    alphabet: Alphabet,
    gens: Vec<AmalgamElement>,
}

impl AmalgamGroup {
    /// `generators` names each alphabet generator as a product of factor
    /// elements.
    pub fn new(
        spec: AmalgamSpec,
        generators: &[(String, Vec<(Factor, u32)>)],
    ) -> Result<Self, AmalgamError> {
        let alphabet = Alphabet::new(generators.iter().map(|(n, _)| n.clone()))
            .map_err(AmalgamError::Alphabet)?;
        let mut gens = Vec::with_capacity(generators.len());
        for (_, parts) in generators {
            let mut e = identity_elem(&spec);
            for &(f, g) in parts {
                if g as usize >= spec.factor(f).size() {
                    return Err(AmalgamError::BadGeneratorWord);
                }
                append_factor(&spec, &mut e, f, g);
            }
            gens.push(e);
        }
        Ok(AmalgamGroup { spec, alphabet, gens })
    }

    pub fn spec(&self) -> &AmalgamSpec {
        &self.spec
    }

    /// Embeds one factor element.
    pub fn embed(&self, f: Factor, g: u32) -> AmalgamElement {
        let mut e = identity_elem(&self.spec);
        append_factor(&self.spec, &mut e, f, g);
        e
    }

    /// Embeds a core element.
    pub fn embed_core(&self, d: u32) -> AmalgamElement {
        let mut e = identity_elem(&self.spec);
        mul_core_right(&self.spec, &mut e, d);
        e
    }

    /// Conjugation-minimal form: returns `(core, conj)` with
    /// `self = conj · core · conj⁻¹` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self, g: &AmalgamElement) -> (AmalgamElement, AmalgamElement) {
        let mut core = g.clone();
        let mut conj = identity_elem(&self.spec);
        while !core.is_cyclically_reduced() {
            let (f, r) = *core.tail.last().unwrap();
            let c = self.embed(f, r);
            let len_before = core.reduced_length();
            core = self.mul(&self.mul(&c, &core), &self.inv(&c));
            debug_assert!(core.reduced_length() < len_before);
            conj = self.mul(&conj, &self.inv(&c));
        }
        (core, conj)
    }

    /// `Z(Γ₁) ∩ Z(Γ₂) ∩ Γ₀`, computed exhaustively over the finite Γ₀.
    ///
    /// This is the centre of any proper amalgam. When some factor index is
    /// ≥ 3 it is also the FC-centre, and `equals_fc_centre` is set; with
    /// both indices 2 the FC-centre can be strictly larger (the infinite
    /// dihedral group), so no claim is made.
    pub fn centre(&self) -> CentreReport {
        let spec = &self.spec;
        let z1 = spec.factor1.centre();
        let z2 = spec.factor2.centre();
        let elements = spec
            .core
            .elements()
            .filter(|&d| {
                z1.contains(&spec.embed_core(Factor::One, d))
                    && z2.contains(&spec.embed_core(Factor::Two, d))
            })
            .map(|d| self.embed_core(d))
            .collect();
        CentreReport {
            elements,
            equals_fc_centre: spec.index(Factor::One) >= 3 || spec.index(Factor::Two) >= 3,
        }
    }

    /// Produces `m_max` pairwise-distinct conjugates `c⁻ᵐ g cᵐ` of a
    /// cyclically reduced `g ∉ Γ₀`, certifying that `g` has infinitely many
    /// conjugates. The conjugator follows the three cases of the underlying
    /// argument; distinctness is re-verified on the computed normal forms.
    pub fn conjugate_growth_witness(
        &self,
        g: &AmalgamElement,
        m_max: usize,
    ) -> Result<GrowthWitness, WitnessInapplicable> {
        let spec = &self.spec;
        if g.in_core() {
            return Err(WitnessInapplicable::InCore);
        }
        if !g.is_cyclically_reduced() {
            return Err(WitnessInapplicable::NotCyclicallyReduced);
        }
        let big = if spec.index(Factor::One) >= 3 {
            Factor::One
        } else if spec.index(Factor::Two) >= 3 {
            Factor::Two
        } else {
            return Err(WitnessInapplicable::HypothesisFails);
        };
        let small = big.other();
        let big_reps = spec.nontrivial_reps(big);
        let small_reps = spec.nontrivial_reps(small);
        let b = small_reps[0];

        // representative of g's first big-factor syllable, after replacing g
        // by g⁻¹ when needed so that the leading syllable lies in the big
        // factor (only relevant for length ≥ 2)
        let leading_big_rep = if g.reduced_length() >= 2 {
            if g.tail[0].0 == big {
                Some(g.tail[0].1)
            } else {
                let ginv = self.inv(g);
                debug_assert_eq!(ginv.tail[0].0, big);
                Some(ginv.tail[0].1)
            }
        } else {
            None
        };
        let a = match leading_big_rep {
            Some(r) => *big_reps
                .iter()
                .find(|&&c| c != r)
                .expect("index ≥ 3 leaves a second nontrivial coset"),
            None => big_reps[0],
        };

        // conjugator: (ab)-shape when g starts and ends away from the big
        // factor's side needing protection; (ba)-shape when g sits inside the
        // big factor itself
        let c = if g.reduced_length() == 1 && g.tail[0].0 == big {
            self.mul(&self.embed(small, b), &self.embed(big, a))
        } else {
            self.mul(&self.embed(big, a), &self.embed(small, b))
        };

        let c_inv = self.inv(&c);
        let mut conjugates = Vec::with_capacity(m_max);
        let mut conjugators = Vec::with_capacity(m_max);
        let mut power = identity_elem(spec);
        let mut inv_power = identity_elem(spec);
        for _ in 0..m_max {
            power = self.mul(&power, &c);
            inv_power = self.mul(&c_inv, &inv_power);
            conjugates.push(self.mul(&self.mul(&inv_power, g), &power));
            conjugators.push(power.clone());
        }
        for i in 0..conjugates.len() {
            for j in i + 1..conjugates.len() {
                assert_ne!(
                    conjugates[i], conjugates[j],
                    "growth witness produced a repeated conjugate"
                );
            }
        }
        Ok(GrowthWitness { conjugator_base: c, conjugators, conjugates })
    }
}

/// Distinct-conjugate certificate: `conjugates[m] = conjugators[m]⁻¹ · g · conjugators[m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthWitness {
    pub conjugator_base: AmalgamElement,
    pub conjugators: Vec<AmalgamElement>,
    pub conjugates: Vec<AmalgamElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentreReport {
    pub elements: Vec<AmalgamElement>,
    /// Set when some factor index is ≥ 3, in which case the centre and the
    /// FC-centre coincide.
    pub equals_fc_centre: bool,
}

fn identity_elem(spec: &AmalgamSpec) -> AmalgamElement {
    AmalgamElement { head: spec.core.identity_idx(), tail: Vec::new() }
}

/// Multiplies `x · e(d)` for a core element, folding `d` leftward through
/// the tail. Never changes syllable count and never trivializes a
/// representative.
fn mul_core_right(spec: &AmalgamSpec, x: &mut AmalgamElement, mut d: u32) {
    for j in (0..x.tail.len()).rev() {
        if d == spec.core.identity_idx() {
            return;
        }
        let (f, r) = x.tail[j];
        let p = spec.factor(f).mul_idx(r, spec.embed_core(f, d));
        let (d2, r2) = spec.split(f, p);
        debug_assert!(!spec.in_core(f, r2));
        x.tail[j].1 = r2;
        d = d2;
    }
    x.head = spec.core.mul_idx(x.head, d);
}

/// Multiplies `x · g` for a factor element, merging with the last syllable
/// when it lies in the same factor.
fn append_factor(spec: &AmalgamSpec, x: &mut AmalgamElement, f: Factor, g: u32) {
    let factor = spec.factor(f);
    if g == factor.identity_idx() {
        return;
    }
    if let Some(&(fk, rk)) = x.tail.last() {
        if fk == f {
            let q = factor.mul_idx(rk, g);
            x.tail.pop();
            if let Some(d) = spec.core_preimage(f, q) {
                mul_core_right(spec, x, d);
            } else {
                let (d, r) = spec.split(f, q);
                mul_core_right(spec, x, d);
                x.tail.push((f, r));
            }
            return;
        }
    }
    let (d, r) = spec.split(f, g);
    mul_core_right(spec, x, d);
    if !spec.in_core(f, r) {
        x.tail.push((f, r));
    }
}

impl GroupModel for AmalgamGroup {
    type Elem = AmalgamElement;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> AmalgamElement {
        identity_elem(&self.spec)
    }

    fn mul(&self, a: &AmalgamElement, b: &AmalgamElement) -> AmalgamElement {
        let mut z = a.clone();
        mul_core_right(&self.spec, &mut z, b.head);
        for &(f, r) in &b.tail {
            append_factor(&self.spec, &mut z, f, r);
        }
        z
    }

    fn inv(&self, a: &AmalgamElement) -> AmalgamElement {
        let mut z = identity_elem(&self.spec);
        for &(f, r) in a.tail.iter().rev() {
            append_factor(&self.spec, &mut z, f, self.spec.factor(f).inv_idx(r));
        }
        mul_core_right(&self.spec, &mut z, self.spec.core.inv_idx(a.head));
        z
    }

    fn generator(&self, index: usize) -> AmalgamElement {
        self.gens[index].clone()
    }

    fn show(&self, e: &AmalgamElement) -> String {
        let spec = &self.spec;
        let mut parts: Vec<String> = Vec::new();
        if e.head != spec.core.identity_idx() {
            parts.push(String::from(
                spec.factor1.elem_name(spec.embed_core(Factor::One, e.head)),
            ));
        }
        for &(f, r) in &e.tail {
            parts.push(String::from(spec.factor(f).elem_name(r)));
        }
        if parts.is_empty() {
            String::from("1")
        } else {
            parts.join("*")
        }
    }
}
