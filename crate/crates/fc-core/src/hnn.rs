//! HNN extensions Γ₁∗_{Γ₀} = ⟨Γ₁, t ∣ t⁻¹γt = φ(γ), γ ∈ Γ₀⟩ over
//! finite-table or free-abelian bases.
//!
//! Elements are kept in the transversal normal form
//! `γ₀ tⁿ¹ γ₁ ⋯ tⁿᵏ γₖ` with all `nᵢ ≠ 0`, where `γᵢ` is a right-coset
//! representative of Γ₀\Γ₁ after a negative run and of φ(Γ₀)\Γ₁ after a
//! positive run; the representative of the trivial coset is 1, so
//! Britton-reducedness is the statement that no interior representative is
//! trivial. Reduction works on the run-expanded form: pinches fire only
//! between opposite unit letters with a trivial representative between
//! them, and base parts migrate leftward through `t`-units via φ and φ⁻¹.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{self, Lattice};
use crate::models::{FiniteTableGroup, FreeAbelianGroup, GroupModel};
use crate::words::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnnError {
    PhiWrongLength,
    PhiNotWellDefined,
    PhiNotInjective,
    BadDomainGenerator,
    StableLetterClash(String),
    Alphabet(crate::words::AlphabetError),
}

impl fmt::Display for HnnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HnnError::PhiWrongLength => write!(f, "φ image list does not match the domain generators"),
            HnnError::PhiNotWellDefined => {
                write!(f, "the generator images do not extend to a homomorphism on Γ₀")
            }
            HnnError::PhiNotInjective => write!(f, "φ is not injective on Γ₀"),
            HnnError::BadDomainGenerator => write!(f, "domain generator outside the base group"),
            HnnError::StableLetterClash(n) => {
                write!(f, "stable letter name {n:?} collides with a base generator")
            }
            HnnError::Alphabet(e) => write!(f, "{e}"),
        }
    }
}

/// Base-side data an HNN extension needs: exact membership for Γ₀ and
/// φ(Γ₀), the isomorphism φ between them, coset splittings with 1
/// representing the trivial coset, and enough subgroup arithmetic for the
/// centre lemma and the F-tower.
pub trait HnnBase: GroupModel {
    /// Canonical subgroup representation (structural equality is subgroup
    /// equality).
    type Subgroup: Clone + Eq + fmt::Debug;

    fn dom(&self) -> Self::Subgroup;
    fn codom(&self) -> Self::Subgroup;
    fn sub_contains(&self, s: &Self::Subgroup, e: &Self::Elem) -> bool;

    /// Defined exactly on Γ₀.
    fn phi(&self, e: &Self::Elem) -> Option<Self::Elem>;
    /// Defined exactly on φ(Γ₀).
    fn phi_inv(&self, e: &Self::Elem) -> Option<Self::Elem>;

    /// Splits `g = δ·r` with `δ ∈ Γ₀` and `r` the canonical representative
    /// of the right coset Γ₀g.
    fn split_dom(&self, g: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Same for φ(Γ₀)\Γ₁.
    fn split_codom(&self, g: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// `[Γ₁ : Γ₀]`, None when infinite.
    fn base_index(&self) -> Option<u128>;

    fn whole_sub(&self) -> Self::Subgroup;
    fn trivial_sub(&self) -> Self::Subgroup;
    fn centre_sub(&self) -> Self::Subgroup;
    /// `{x ∈ Γ₀ : φ(x) = x}`.
    fn fix_phi(&self) -> Self::Subgroup;
    /// `{x ∈ Γ₀ : φ(x) ∈ s}`.
    fn preimage_phi(&self, s: &Self::Subgroup) -> Self::Subgroup;
    /// `{x ∈ domain : φᵏ(x) = x}`; callers guarantee `domain ⊆ Γ_{0,k}`.
    fn fixed_of_power(&self, domain: &Self::Subgroup, k: usize) -> Self::Subgroup;
    fn sub_intersect(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Self::Subgroup;
    /// Subgroup generated by the union.
    fn sub_join(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Self::Subgroup;
    fn sub_is_normal(&self, s: &Self::Subgroup) -> bool;
    fn sub_generators(&self, s: &Self::Subgroup) -> Vec<Self::Elem>;
    fn sub_is_trivial(&self, s: &Self::Subgroup) -> bool;
    fn sub_show(&self, s: &Self::Subgroup) -> String;
}

// ---------------------------------------------------------------------------
// finite-table base

/// Finite-table base group with Γ₀ and φ given exhaustively.
#[derive(Debug, Clone)]
pub struct FiniteHnnBase {
    group: FiniteTableGroup,
    dom: Vec<u32>,
    codom: Vec<u32>,
    phi: Vec<Option<u32>>,
    phi_inv: Vec<Option<u32>>,
    rep_dom: Vec<u32>,
    rep_codom: Vec<u32>,
}

impl FiniteHnnBase {
    pub fn new(
        group: FiniteTableGroup,
        dom_gens: &[u32],
        phi_images: &[u32],
    ) -> Result<Self, HnnError> {
        if dom_gens.len() != phi_images.len() {
            return Err(HnnError::PhiWrongLength);
        }
        if dom_gens.iter().chain(phi_images).any(|&g| g as usize >= group.size()) {
            return Err(HnnError::BadDomainGenerator);
        }
        let dom = group.subgroup_closure(dom_gens);

        // grow φ over Γ₀ by BFS on generator steps, rejecting conflicts
        let mut phi: Vec<Option<u32>> = alloc::vec![None; group.size()];
        phi[group.identity_idx() as usize] = Some(group.identity_idx());
        let mut frontier = alloc::vec![group.identity_idx()];
        while let Some(a) = frontier.pop() {
            let fa = phi[a as usize].unwrap();
            for (&g, &fg) in dom_gens.iter().zip(phi_images) {
                for (b, fb) in [
                    (group.mul_idx(a, g), group.mul_idx(fa, fg)),
                    (group.mul_idx(a, group.inv_idx(g)), group.mul_idx(fa, group.inv_idx(fg))),
                ] {
                    match phi[b as usize] {
                        None => {
                            phi[b as usize] = Some(fb);
                            frontier.push(b);
                        }
                        Some(prev) if prev != fb => return Err(HnnError::PhiNotWellDefined),
                        _ => {}
                    }
                }
            }
        }
        // exhaustive homomorphism check over Γ₀
        for &a in &dom {
            for &b in &dom {
                let lhs = phi[group.mul_idx(a, b) as usize].ok_or(HnnError::PhiNotWellDefined)?;
                let rhs = group.mul_idx(
                    phi[a as usize].ok_or(HnnError::PhiNotWellDefined)?,
                    phi[b as usize].ok_or(HnnError::PhiNotWellDefined)?,
                );
                if lhs != rhs {
                    return Err(HnnError::PhiNotWellDefined);
                }
            }
        }
        let mut phi_inv: Vec<Option<u32>> = alloc::vec![None; group.size()];
        for &a in &dom {
            let fa = phi[a as usize].unwrap();
            if phi_inv[fa as usize].is_some() {
                return Err(HnnError::PhiNotInjective);
            }
            phi_inv[fa as usize] = Some(a);
        }
        let mut codom: Vec<u32> = dom.iter().map(|&a| phi[a as usize].unwrap()).collect();
        codom.sort_unstable();

        let rep_for = |sub: &[u32]| -> Vec<u32> {
            group
                .elements()
                .map(|g| {
                    if sub.binary_search(&g).is_ok() {
                        group.identity_idx()
                    } else {
                        sub.iter().map(|&s| group.mul_idx(s, g)).min().unwrap()
                    }
                })
                .collect()
        };
        let rep_dom = rep_for(&dom);
        let rep_codom = rep_for(&codom);

        Ok(FiniteHnnBase { group, dom, codom, phi, phi_inv, rep_dom, rep_codom })
    }

    pub fn group(&self) -> &FiniteTableGroup {
        &self.group
    }

    fn split_by(&self, rep: &[u32], g: u32) -> (u32, u32) {
        let r = rep[g as usize];
        let d = self.group.mul_idx(g, self.group.inv_idx(r));
        (d, r)
    }
}

impl GroupModel for FiniteHnnBase {
    type Elem = u32;

    fn alphabet(&self) -> &Alphabet {
        self.group.alphabet()
    }

    fn identity(&self) -> u32 {
        self.group.identity_idx()
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.group.mul_idx(*a, *b)
    }

    fn inv(&self, a: &u32) -> u32 {
        self.group.inv_idx(*a)
    }

    fn generator(&self, index: usize) -> u32 {
        GroupModel::generator(&self.group, index)
    }

    fn is_finite(&self) -> Option<usize> {
        Some(self.group.size())
    }

    fn show(&self, e: &u32) -> String {
        self.group.show(e)
    }
}

impl HnnBase for FiniteHnnBase {
    type Subgroup = Vec<u32>;

    fn dom(&self) -> Vec<u32> {
        self.dom.clone()
    }

    fn codom(&self) -> Vec<u32> {
        self.codom.clone()
    }

    fn sub_contains(&self, s: &Vec<u32>, e: &u32) -> bool {
        s.binary_search(e).is_ok()
    }

    fn phi(&self, e: &u32) -> Option<u32> {
        self.phi[*e as usize]
    }

    fn phi_inv(&self, e: &u32) -> Option<u32> {
        self.phi_inv[*e as usize]
    }

    fn split_dom(&self, g: &u32) -> (u32, u32) {
        self.split_by(&self.rep_dom, *g)
    }

    fn split_codom(&self, g: &u32) -> (u32, u32) {
        self.split_by(&self.rep_codom, *g)
    }

    fn base_index(&self) -> Option<u128> {
        Some((self.group.size() / self.dom.len()) as u128)
    }

    fn whole_sub(&self) -> Vec<u32> {
        self.group.elements().collect()
    }

    fn trivial_sub(&self) -> Vec<u32> {
        alloc::vec![self.group.identity_idx()]
    }

    fn centre_sub(&self) -> Vec<u32> {
        self.group.centre()
    }

    fn fix_phi(&self) -> Vec<u32> {
        self.dom.iter().copied().filter(|&a| self.phi[a as usize] == Some(a)).collect()
    }

    fn preimage_phi(&self, s: &Vec<u32>) -> Vec<u32> {
        self.dom
            .iter()
            .copied()
            .filter(|&a| s.binary_search(&self.phi[a as usize].unwrap()).is_ok())
            .collect()
    }

    fn fixed_of_power(&self, domain: &Vec<u32>, k: usize) -> Vec<u32> {
        domain
            .iter()
            .copied()
            .filter(|&a| {
                let mut x = a;
                for _ in 0..k {
                    x = self.phi[x as usize].expect("domain lies in the iterated tower");
                }
                x == a
            })
            .collect()
    }

    fn sub_intersect(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
    }

    fn sub_join(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let seeds: Vec<u32> = a.iter().chain(b).copied().collect();
        self.group.subgroup_closure(&seeds)
    }

    fn sub_is_normal(&self, s: &Vec<u32>) -> bool {
        self.group.elements().all(|g| {
            s.iter().all(|&x| {
                let c = self.group.mul_idx(self.group.mul_idx(g, x), self.group.inv_idx(g));
                s.binary_search(&c).is_ok()
            })
        })
    }

    fn sub_generators(&self, s: &Vec<u32>) -> Vec<u32> {
        s.iter().copied().filter(|&x| x != self.group.identity_idx()).collect()
    }

    fn sub_is_trivial(&self, s: &Vec<u32>) -> bool {
        s.len() == 1
    }

    fn sub_show(&self, s: &Vec<u32>) -> String {
        let names: Vec<&str> = s.iter().map(|&e| self.group.elem_name(e)).collect();
        alloc::format!("{{{}}}", names.join(", "))
    }
}

// ---------------------------------------------------------------------------
// free-abelian base

/// ℤⁿ base with Γ₀ a sublattice and φ an injective integer-linear map.
#[derive(Debug, Clone)]
pub struct AbelianHnnBase {
    group: FreeAbelianGroup,
    dom: Lattice,
    codom: Lattice,
    /// images of the canonical dom basis vectors
    phi_cols: Vec<Vec<i64>>,
    /// preimages of the canonical codom basis vectors
    phi_inv_cols: Vec<Vec<i64>>,
}

impl AbelianHnnBase {
    pub fn new(
        group: FreeAbelianGroup,
        dom_gens: &[Vec<i64>],
        phi_images: &[Vec<i64>],
    ) -> Result<Self, HnnError> {
        let n = group.rank();
        if dom_gens.len() != phi_images.len() || dom_gens.is_empty() {
            return Err(HnnError::PhiWrongLength);
        }
        if dom_gens.iter().chain(phi_images).any(|v| v.len() != n) {
            return Err(HnnError::BadDomainGenerator);
        }
        let (dom, expr) = Lattice::from_columns_with_expr(n, dom_gens);
        // φ on the canonical basis, then consistency on the given generators
        let phi_cols: Vec<Vec<i64>> = expr.iter().map(|e| lattice::mat_vec(phi_images, e)).collect();
        for (g, img) in dom_gens.iter().zip(phi_images) {
            let coords = dom.coordinates(g).expect("generators lie in their own span");
            if lattice::mat_vec(&phi_cols, &coords) != *img {
                return Err(HnnError::PhiNotWellDefined);
            }
        }
        let codom = Lattice::from_columns(n, &phi_cols);
        if codom.rank() != dom.rank() {
            return Err(HnnError::PhiNotInjective);
        }
        let phi_inv_cols: Vec<Vec<i64>> = codom
            .basis()
            .iter()
            .map(|b| {
                let u = lattice::express_in_columns(&phi_cols, b)
                    .expect("codom basis lies in the image");
                // u are dom-basis coordinates; map back to an ambient vector
                lattice::mat_vec(dom.basis(), &u)
            })
            .collect();
        Ok(AbelianHnnBase { group, dom, codom, phi_cols, phi_inv_cols })
    }

    pub fn group(&self) -> &FreeAbelianGroup {
        &self.group
    }
}

impl GroupModel for AbelianHnnBase {
    type Elem = Vec<i64>;

    fn alphabet(&self) -> &Alphabet {
        self.group.alphabet()
    }

    fn identity(&self) -> Vec<i64> {
        self.group.identity()
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        self.group.mul(a, b)
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        self.group.inv(a)
    }

    fn generator(&self, index: usize) -> Vec<i64> {
        self.group.generator(index)
    }

    fn show(&self, e: &Vec<i64>) -> String {
        if self.group.rank() == 1 {
            let name = self.group.alphabet().name(0);
            match e[0] {
                0 => String::from("1"),
                1 => String::from(name),
                k => alloc::format!("{name}^{k}"),
            }
        } else {
            self.group.show(e)
        }
    }
}

impl HnnBase for AbelianHnnBase {
    type Subgroup = Lattice;

    fn dom(&self) -> Lattice {
        self.dom.clone()
    }

    fn codom(&self) -> Lattice {
        self.codom.clone()
    }

    fn sub_contains(&self, s: &Lattice, e: &Vec<i64>) -> bool {
        s.contains(e)
    }

    fn phi(&self, e: &Vec<i64>) -> Option<Vec<i64>> {
        let u = self.dom.coordinates(e)?;
        Some(lattice::mat_vec(&self.phi_cols, &u))
    }

    fn phi_inv(&self, e: &Vec<i64>) -> Option<Vec<i64>> {
        let u = self.codom.coordinates(e)?;
        Some(lattice::mat_vec(&self.phi_inv_cols, &u))
    }

    fn split_dom(&self, g: &Vec<i64>) -> (Vec<i64>, Vec<i64>) {
        let r = self.dom.residue(g);
        let d = g.iter().zip(&r).map(|(a, b)| a - b).collect();
        (d, r)
    }

    fn split_codom(&self, g: &Vec<i64>) -> (Vec<i64>, Vec<i64>) {
        let r = self.codom.residue(g);
        let d = g.iter().zip(&r).map(|(a, b)| a - b).collect();
        (d, r)
    }

    fn base_index(&self) -> Option<u128> {
        self.dom.index_in_ambient()
    }

    fn whole_sub(&self) -> Lattice {
        Lattice::full(self.group.rank())
    }

    fn trivial_sub(&self) -> Lattice {
        Lattice::zero(self.group.rank())
    }

    fn centre_sub(&self) -> Lattice {
        Lattice::full(self.group.rank())
    }

    fn fix_phi(&self) -> Lattice {
        // {B·u : (Φ − B)·u = 0}
        let diff: Vec<Vec<i64>> = self
            .phi_cols
            .iter()
            .zip(self.dom.basis())
            .map(|(p, b)| p.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        let ker = lattice::kernel(self.group.rank(), &diff);
        let cols: Vec<Vec<i64>> = ker.iter().map(|u| lattice::mat_vec(self.dom.basis(), u)).collect();
        Lattice::from_columns(self.group.rank(), &cols)
    }

    fn preimage_phi(&self, s: &Lattice) -> Lattice {
        let u_lat = Lattice::preimage(&self.phi_cols, s);
        let cols: Vec<Vec<i64>> = u_lat
            .basis()
            .iter()
            .map(|u| lattice::mat_vec(self.dom.basis(), u))
            .collect();
        Lattice::from_columns(self.group.rank(), &cols)
    }

    fn fixed_of_power(&self, domain: &Lattice, k: usize) -> Lattice {
        let n = self.group.rank();
        let iterated: Vec<Vec<i64>> = domain
            .basis()
            .iter()
            .map(|b| {
                let mut x = b.clone();
                for _ in 0..k {
                    x = self.phi(&x).expect("domain lies in the iterated tower");
                }
                x
            })
            .collect();
        let diff: Vec<Vec<i64>> = iterated
            .iter()
            .zip(domain.basis())
            .map(|(p, b)| p.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        let ker = lattice::kernel(n, &diff);
        let cols: Vec<Vec<i64>> = ker.iter().map(|u| lattice::mat_vec(domain.basis(), u)).collect();
        Lattice::from_columns(n, &cols)
    }

    fn sub_intersect(&self, a: &Lattice, b: &Lattice) -> Lattice {
        a.intersect(b)
    }

    fn sub_join(&self, a: &Lattice, b: &Lattice) -> Lattice {
        a.sum(b)
    }

    fn sub_is_normal(&self, _s: &Lattice) -> bool {
        true
    }

    fn sub_generators(&self, s: &Lattice) -> Vec<Vec<i64>> {
        s.basis().to_vec()
    }

    fn sub_is_trivial(&self, s: &Lattice) -> bool {
        s.rank() == 0
    }

    fn sub_show(&self, s: &Lattice) -> String {
        if s.rank() == 0 {
            return String::from("{1}");
        }
        let gens: Vec<String> = s.basis().iter().map(|b| self.show(b)).collect();
        alloc::format!("<{}>", gens.join(", "))
    }
}

// ---------------------------------------------------------------------------
// the extension

/// Normal form `γ₀ tⁿ¹ γ₁ ⋯ tⁿᵏ γₖ`; `syllables[i] = (nᵢ, γᵢ)` with runs
/// collapsed to integer exponents. Unique per group element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HnnElement<E> {
    head: E,
    syllables: Vec<(i64, E)>,
}

impl<E> HnnElement<E> {
    pub fn head(&self) -> &E {
        &self.head
    }

    pub fn syllables(&self) -> &[(i64, E)] {
        &self.syllables
    }

    /// Total number of `t`-letters.
    pub fn t_length(&self) -> u64 {
        self.syllables.iter().map(|(n, _)| n.unsigned_abs()).sum()
    }

    /// Base element when the normal form has no `t`-letters.
    pub fn as_base(&self) -> Option<&E> {
        if self.syllables.is_empty() {
            Some(&self.head)
        } else {
            None
        }
    }
}

/// A raw token for [`HnnGroup::britton_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawItem<E> {
    Base(E),
    T(i64),
}

/// The HNN extension as a [`GroupModel`]: base generators plus the stable
/// letter.
#[derive(Debug, Clone)]
pub struct HnnGroup<B: HnnBase> {
    base: B,
    alphabet: Alphabet,
}

/// Why an HNN lemma does not apply to this spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnnInapplicable {
    /// `[Γ₁:Γ₀] = 1`: the centre description fails here — the Klein bottle
    /// has Fix(φ) = 1 yet centre ⟨t²⟩.
    BaseEqualsDomain,
}

impl fmt::Display for HnnInapplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HnnInapplicable::BaseEqualsDomain => write!(
                f,
                "Γ₀ = Γ₁: the lemma needs [Γ₁:Γ₀] > 1 (cf. the Klein bottle, where Fix(φ) = 1 but Z = <t^2>)"
            ),
        }
    }
}

/// The tower Γ_{0,k} = φ⁻¹(Γ_{0,k−1}) with fixed subgroups
/// F_k = {γ ∈ Γ_{0,k} : φᵏ(γ) = γ} and the truncated union F_∞.
#[derive(Debug, Clone)]
pub struct FkTower<S> {
    /// `gamma0[k-1]` is Γ_{0,k}.
    pub gamma0: Vec<S>,
    /// `fixed[k-1]` is F_k.
    pub fixed: Vec<S>,
    /// Join of all F_k, k ≤ k_max.
    pub f_infinity: S,
    /// The running union was constant over the last two steps.
    pub stabilized: bool,
}

/// Result of [`HnnGroup::fc_bound`]: the superset K(Γ₁)∩F_∞ of K(Γ), and
/// whether it is known to be exactly K(Γ).
#[derive(Debug, Clone)]
pub struct FcBound<S> {
    pub bound: S,
    /// Set when F_∞ = Fix(φ) and Fix(φ) is normal in Γ₁: then
    /// K(Γ) = K(Γ₁)∩Fix(φ) exactly.
    pub exact: bool,
}

impl<B: HnnBase> HnnGroup<B> {
    pub fn new(base: B, stable_letter: &str) -> Result<Self, HnnError> {
        if base.alphabet().index_of(stable_letter).is_some() {
            return Err(HnnError::StableLetterClash(stable_letter.into()));
        }
        let names: Vec<String> = base
            .alphabet()
            .names()
            .map(String::from)
            .chain(core::iter::once(String::from(stable_letter)))
            .collect();
        let alphabet = Alphabet::new(names).map_err(HnnError::Alphabet)?;
        Ok(HnnGroup { base, alphabet })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn embed_base(&self, g: B::Elem) -> HnnElement<B::Elem> {
        HnnElement { head: g, syllables: Vec::new() }
    }

    pub fn t(&self) -> HnnElement<B::Elem> {
        self.t_pow(1)
    }

    pub fn t_pow(&self, n: i64) -> HnnElement<B::Elem> {
        if n == 0 {
            return self.identity();
        }
        HnnElement {
            head: self.base.identity(),
            syllables: alloc::vec![(n, self.base.identity())],
        }
    }

    fn split(&self, eps: i8, g: &B::Elem) -> (B::Elem, B::Elem) {
        if eps > 0 {
            self.base.split_codom(g)
        } else {
            self.base.split_dom(g)
        }
    }

    /// Moves a subgroup element through one `t`-unit: `tδ = φ⁻¹(δ)t` for
    /// δ ∈ φ(Γ₀), `t⁻¹δ = φ(δ)t⁻¹` for δ ∈ Γ₀.
    fn cross(&self, eps: i8, d: &B::Elem) -> B::Elem {
        if eps > 0 {
            self.base.phi_inv(d).expect("split keeps crossings inside φ(Γ₀)")
        } else {
            self.base.phi(d).expect("split keeps crossings inside Γ₀")
        }
    }

    fn expand(&self, x: &HnnElement<B::Elem>) -> Vec<(i8, B::Elem)> {
        let id = self.base.identity();
        let mut units = Vec::with_capacity(x.t_length() as usize);
        for (n, r) in &x.syllables {
            let eps = if *n > 0 { 1i8 } else { -1 };
            for _ in 1..n.unsigned_abs() {
                units.push((eps, id.clone()));
            }
            units.push((eps, r.clone()));
        }
        units
    }

    fn collapse(&self, head: B::Elem, units: Vec<(i8, B::Elem)>) -> HnnElement<B::Elem> {
        let mut syllables: Vec<(i64, B::Elem)> = Vec::new();
        for (eps, r) in units {
            if let Some(last) = syllables.last_mut() {
                let same_sign = (last.0 > 0) == (eps > 0);
                if same_sign && self.base.is_identity(&last.1) {
                    last.0 += i64::from(eps);
                    last.1 = r;
                    continue;
                }
            }
            syllables.push((i64::from(eps), r));
        }
        HnnElement { head, syllables }
    }

    fn append_base(&self, head: &mut B::Elem, units: &mut [(i8, B::Elem)], g: &B::Elem) {
        if self.base.is_identity(g) {
            return;
        }
        let Some(last) = units.last_mut() else {
            *head = self.base.mul(head, g);
            return;
        };
        let c = self.base.mul(&last.1, g);
        let (mut d, r) = self.split(last.0, &c);
        last.1 = r;
        for j in (0..units.len()).rev() {
            if self.base.is_identity(&d) {
                return;
            }
            d = self.cross(units[j].0, &d);
            if j == 0 {
                *head = self.base.mul(head, &d);
            } else {
                let c2 = self.base.mul(&units[j - 1].1, &d);
                let (d2, r2) = self.split(units[j - 1].0, &c2);
                units[j - 1].1 = r2;
                d = d2;
            }
        }
    }

    fn append_t(&self, units: &mut Vec<(i8, B::Elem)>, eps: i8) {
        if let Some(last) = units.last() {
            if last.0 == -eps && self.base.is_identity(&last.1) {
                units.pop();
                return;
            }
        }
        units.push((eps, self.base.identity()));
    }

    /// Britton-reduces an arbitrary raw word in base elements and `t`-powers
    /// into the canonical normal form.
    pub fn britton_reduce(&self, raw: &[RawItem<B::Elem>]) -> HnnElement<B::Elem> {
        let mut head = self.base.identity();
        let mut units: Vec<(i8, B::Elem)> = Vec::new();
        for item in raw {
            match item {
                RawItem::Base(g) => self.append_base(&mut head, &mut units, g),
                RawItem::T(n) => {
                    let eps = if *n > 0 { 1i8 } else { -1 };
                    for _ in 0..n.unsigned_abs() {
                        self.append_t(&mut units, eps);
                    }
                }
            }
        }
        self.collapse(head, units)
    }

    /// `tᵏ g t⁻ᵏ g⁻¹ = 1`, decided by Britton reduction. For base elements
    /// this is equivalent to `g ∈ F_k`.
    pub fn t_power_centralizes(&self, g: &B::Elem, k: u32) -> bool {
        let tk = self.t_pow(i64::from(k));
        let ghat = self.embed_base(g.clone());
        let c = self.mul(
            &self.mul(&self.mul(&tk, &ghat), &self.t_pow(-i64::from(k))),
            &self.inv(&ghat),
        );
        self.is_identity(&c)
    }

    /// Computes the tower exactly up to `k_max ≥ 1`.
    pub fn fk_tower(&self, k_max: usize) -> FkTower<B::Subgroup> {
        assert!(k_max >= 1);
        let mut gamma0 = alloc::vec![self.base.dom()];
        for _ in 2..=k_max {
            let next = self.base.preimage_phi(gamma0.last().unwrap());
            gamma0.push(next);
        }
        let fixed: Vec<B::Subgroup> = gamma0
            .iter()
            .enumerate()
            .map(|(i, dom)| self.base.fixed_of_power(dom, i + 1))
            .collect();
        let mut unions: Vec<B::Subgroup> = Vec::with_capacity(k_max);
        let mut acc = fixed[0].clone();
        unions.push(acc.clone());
        for f in &fixed[1..] {
            acc = self.base.sub_join(&acc, f);
            unions.push(acc.clone());
        }
        let stabilized = k_max >= 3
            && unions[k_max - 1] == unions[k_max - 2]
            && unions[k_max - 2] == unions[k_max - 3];
        FkTower { gamma0, fixed, f_infinity: acc, stabilized }
    }

    /// The centre `Z(Γ) = Z(Γ₁) ∩ Fix(φ)`, valid when `[Γ₁:Γ₀] > 1`.
    pub fn centre(&self) -> Result<B::Subgroup, HnnInapplicable> {
        if self.base.base_index() == Some(1) {
            return Err(HnnInapplicable::BaseEqualsDomain);
        }
        Ok(self.base.sub_intersect(&self.base.centre_sub(), &self.base.fix_phi()))
    }

    /// The superset `K(Γ) ⊆ K(Γ₁) ∩ F_∞`; for finite and free-abelian bases
    /// `K(Γ₁) = Γ₁`, so the bound is the tower union. Exact equality is
    /// reported when `F_∞ = Fix(φ)` is normal in Γ₁.
    pub fn fc_bound(
        &self,
        tower: &FkTower<B::Subgroup>,
    ) -> Result<FcBound<B::Subgroup>, HnnInapplicable> {
        if self.base.base_index() == Some(1) {
            return Err(HnnInapplicable::BaseEqualsDomain);
        }
        let bound = self.base.sub_intersect(&self.base.whole_sub(), &tower.f_infinity);
        let fix = self.base.fix_phi();
        let exact = tower.f_infinity == fix && self.base.sub_is_normal(&fix);
        Ok(FcBound { bound, exact })
    }

    /// Sound non-membership certificate for base elements: `g ∈ K(Γ)` forces
    /// `tᵏ ∈ C(g)` for some k ≥ 1, i.e. `g ∈ F_k`. If the membership chain
    /// `g ∈ Γ_{0,k}` breaks at some level and no earlier iterate fixed `g`,
    /// then `g` lies in no F_k at all. Returns None when `g` lands in some
    /// F_k (no refutation possible this way) or the budget runs out.
    pub fn refute_base_fc(&self, g: &B::Elem, k_budget: usize) -> Option<TowerRefutation<B::Elem>> {
        if self.base.is_identity(g) {
            return None;
        }
        let mut iterate = g.clone();
        let mut iterates = Vec::new();
        for k in 1..=k_budget {
            // g ∈ Γ_{0,k} iff all iterates so far stayed in Γ₀
            match self.base.phi(&iterate) {
                None => {
                    return Some(TowerRefutation { break_level: k, iterates });
                }
                Some(next) => {
                    iterates.push(next.clone());
                    if next == *g {
                        // g ∈ F_k: t^k centralizes g, no refutation
                        return None;
                    }
                    iterate = next;
                }
            }
        }
        None
    }
}

/// Certificate that a base element lies in no F_k: the φ-chain leaves Γ₀ at
/// `break_level`, and no earlier iterate returned to the element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerRefutation<E> {
    pub break_level: usize,
    pub iterates: Vec<E>,
}

impl<B: HnnBase> GroupModel for HnnGroup<B> {
    type Elem = HnnElement<B::Elem>;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Self::Elem {
        HnnElement { head: self.base.identity(), syllables: Vec::new() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut head = a.head.clone();
        let mut units = self.expand(a);
        self.append_base(&mut head, &mut units, &b.head);
        for (eps, r) in self.expand(b) {
            self.append_t(&mut units, eps);
            self.append_base(&mut head, &mut units, &r);
        }
        self.collapse(head, units)
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let mut head = self.base.identity();
        let mut units: Vec<(i8, B::Elem)> = Vec::new();
        let expanded = self.expand(a);
        for (eps, r) in expanded.iter().rev() {
            self.append_base(&mut head, &mut units, &self.base.inv(r));
            self.append_t(&mut units, -eps);
        }
        self.append_base(&mut head, &mut units, &self.base.inv(&a.head));
        self.collapse(head, units)
    }

    fn generator(&self, index: usize) -> Self::Elem {
        if index < self.base.alphabet().len() {
            self.embed_base(GroupModel::generator(&self.base, index))
        } else {
            self.t()
        }
    }

    fn show(&self, e: &Self::Elem) -> String {
        let t_name = self.alphabet.name(self.alphabet.len() - 1);
        let mut parts: Vec<String> = Vec::new();
        if !self.base.is_identity(&e.head) || e.syllables.is_empty() {
            parts.push(self.base.show(&e.head));
        }
        for (n, r) in &e.syllables {
            if *n == 1 {
                parts.push(String::from(t_name));
            } else {
                parts.push(alloc::format!("{t_name}^{n}"));
            }
            if !self.base.is_identity(r) {
                parts.push(self.base.show(r));
            }
        }
        parts.join("*")
    }
}

// ---------------------------------------------------------------------------
// stock constructions

/// BS(m,n) = ⟨a, t ∣ t⁻¹aᵐt = aⁿ⟩ over the base ℤ = ⟨a⟩.
pub fn baumslag_solitar(m: i64, n: i64) -> Result<HnnGroup<AbelianHnnBase>, HnnError> {
    let base = FreeAbelianGroup::new(Alphabet::new(["a"]).expect("valid name"));
    let base = AbelianHnnBase::new(base, &[alloc::vec![m]], &[alloc::vec![n]])?;
    HnnGroup::new(base, "t")
}

/// ⟨a, t ∣ t⁻¹a²t = a⁻²⟩: the sign flip on 2ℤ.
pub fn hnn_flip() -> HnnGroup<AbelianHnnBase> {
    let base = FreeAbelianGroup::new(Alphabet::new(["a"]).expect("valid name"));
    let base = AbelianHnnBase::new(base, &[alloc::vec![2]], &[alloc::vec![-2]]).expect("valid spec");
    HnnGroup::new(base, "t").expect("t is fresh")
}

/// Klein bottle group ⟨t, g ∣ t⁻¹gt = g⁻¹⟩: base ℤ = ⟨g⟩, Γ₀ the whole base.
pub fn klein_bottle() -> HnnGroup<AbelianHnnBase> {
    let base = FreeAbelianGroup::new(Alphabet::new(["g"]).expect("valid name"));
    let base = AbelianHnnBase::new(base, &[alloc::vec![1]], &[alloc::vec![-1]]).expect("valid spec");
    HnnGroup::new(base, "t").expect("t is fresh")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::laws;
    use alloc::vec;

    fn bs23() -> HnnGroup<AbelianHnnBase> {
        baumslag_solitar(2, 3).unwrap()
    }

    #[test]
    fn britton_reduce_defining_relation() {
        let g = bs23();
        // t⁻¹ a² t → a³
        let red = g.britton_reduce(&[RawItem::T(-1), RawItem::Base(vec![2]), RawItem::T(1)]);
        assert_eq!(red, g.embed_base(vec![3]));
        // t a³ t⁻¹ → a²
        let red = g.britton_reduce(&[RawItem::T(1), RawItem::Base(vec![3]), RawItem::T(-1)]);
        assert_eq!(red, g.embed_base(vec![2]));
        // t⁻¹ a t does not pinch: a ∉ ⟨a²⟩
        let red = g.britton_reduce(&[RawItem::T(-1), RawItem::Base(vec![1]), RawItem::T(1)]);
        assert_eq!(red.syllables().len(), 2);
        assert!(red.as_base().is_none());
    }

    #[test]
    fn mul_inverse_identity() {
        let g = bs23();
        let x = g.britton_reduce(&[
            RawItem::Base(vec![1]),
            RawItem::T(2),
            RawItem::Base(vec![1]),
            RawItem::T(-1),
            RawItem::Base(vec![5]),
        ]);
        assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        assert!(g.is_identity(&g.mul(&g.inv(&x), &x)));
        assert_eq!(g.mul(&x, &g.identity()), x);
    }

    #[test]
    fn klein_bottle_closed_form() {
        // (g^a t^b)·(g^c t^d) = g^{a+(−1)^b c} t^{b+d}
        let k = klein_bottle();
        let mut rng = crate::rng::SplitMix64::new(9);
        for _ in 0..20 {
            let (a, b, c, d) = (rng.int_in(5), rng.int_in(5), rng.int_in(5), rng.int_in(5));
            let x = k.mul(&k.embed_base(vec![a]), &k.t_pow(b));
            let y = k.mul(&k.embed_base(vec![c]), &k.t_pow(d));
            let lhs = k.mul(&x, &y);
            let sign = if b.rem_euclid(2) == 0 { 1 } else { -1 };
            let rhs = k.mul(&k.embed_base(vec![a + sign * c]), &k.t_pow(b + d));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn group_laws_hold() {
        laws::check_group_laws(&bs23(), 31, 250, 10).unwrap();
        laws::check_eval_homomorphism(&bs23(), 32, 250, 10).unwrap();
        laws::check_group_laws(&klein_bottle(), 33, 250, 10).unwrap();
        laws::check_group_laws(&hnn_flip(), 34, 250, 10).unwrap();
    }

    #[test]
    fn syllable_count_subadditive() {
        let g = bs23();
        let mut rng = crate::rng::SplitMix64::new(77);
        let samples = laws::sample_elements(&g, &mut rng, 40, 10);
        for x in &samples {
            for y in &samples {
                let xy = g.mul(x, y);
                assert!(xy.t_length() <= x.t_length() + y.t_length());
            }
        }
    }

    #[test]
    fn bs23_centre_is_trivial() {
        let g = bs23();
        let z = g.centre().unwrap();
        assert!(g.base().sub_is_trivial(&z));
    }

    #[test]
    fn flip_centre_is_trivial() {
        let g = hnn_flip();
        let z = g.centre().unwrap();
        assert!(g.base().sub_is_trivial(&z));
    }

    #[test]
    fn klein_centre_is_inapplicable() {
        let g = klein_bottle();
        assert_eq!(g.centre(), Err(HnnInapplicable::BaseEqualsDomain));
        // the caveat itself: t² is central although Fix(φ) is trivial
        let t2 = g.t_pow(2);
        assert!(g.commutes(&t2, &g.generator(0)));
        assert!(g.commutes(&t2, &g.generator(1)));
        assert!(g.base().sub_is_trivial(&g.base().fix_phi()));
    }

    #[test]
    fn bs23_tower_is_trivial() {
        let g = bs23();
        let tower = g.fk_tower(6);
        for f in &tower.fixed {
            assert!(g.base().sub_is_trivial(f));
        }
        assert!(g.base().sub_is_trivial(&tower.f_infinity));
        assert!(tower.stabilized);
        // Γ_{0,k} = 2ᵏℤ
        for (i, t) in tower.gamma0.iter().enumerate() {
            assert_eq!(*t, Lattice::from_columns(1, &[vec![1i64 << (i + 1)]]));
        }
    }

    #[test]
    fn flip_tower_alternates_and_unions() {
        let g = hnn_flip();
        let tower = g.fk_tower(4);
        let two = Lattice::from_columns(1, &[vec![2]]);
        assert!(g.base().sub_is_trivial(&tower.fixed[0]));
        assert_eq!(tower.fixed[1], two);
        assert!(g.base().sub_is_trivial(&tower.fixed[2]));
        assert_eq!(tower.fixed[3], two);
        assert_eq!(tower.f_infinity, two);
        assert!(tower.stabilized);
        // F_∞ ⊋ Fix(φ) = {1}
        assert!(g.base().sub_is_trivial(&g.base().fix_phi()));
    }

    #[test]
    fn klein_tower() {
        let g = klein_bottle();
        let tower = g.fk_tower(4);
        assert!(g.base().sub_is_trivial(&tower.fixed[0]));
        assert_eq!(tower.fixed[1], Lattice::full(1));
        assert_eq!(tower.f_infinity, Lattice::full(1));
    }

    #[test]
    fn t_power_centralizes_matches_tower_membership() {
        for g in [hnn_flip(), bs23()] {
            let tower = g.fk_tower(6);
            for m in -8i64..=8 {
                let e = vec![m];
                for k in 1..=6usize {
                    let by_britton = g.t_power_centralizes(&e, k as u32);
                    let by_tower = g.base().sub_contains(&tower.fixed[k - 1], &e);
                    assert_eq!(by_britton, by_tower, "m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn fc_bound_examples() {
        let g = bs23();
        let tower = g.fk_tower(6);
        let b = g.fc_bound(&tower).unwrap();
        assert!(g.base().sub_is_trivial(&b.bound));
        assert!(b.exact); // F∞ = Fix(φ) = {1}, normal

        let g = hnn_flip();
        let tower = g.fk_tower(4);
        let b = g.fc_bound(&tower).unwrap();
        assert_eq!(b.bound, Lattice::from_columns(1, &[vec![2]]));
        assert!(!b.exact); // F∞ = ⟨a²⟩ ≠ Fix(φ) = {1}
    }

    #[test]
    fn base_fc_refutation_in_bs23() {
        let g = bs23();
        // a ∉ Γ₀ = 2ℤ: chain breaks at level 1
        let r = g.refute_base_fc(&vec![1], 8).unwrap();
        assert_eq!(r.break_level, 1);
        // a² ∈ Γ₀ but φ(a²) = a³ ∉ Γ₀
        let r = g.refute_base_fc(&vec![2], 8).unwrap();
        assert_eq!(r.break_level, 2);
        // flip: a² ∈ F₂, no refutation
        let g = hnn_flip();
        assert!(g.refute_base_fc(&vec![2], 8).is_none());
        // klein: g ∈ F₂
        let g = klein_bottle();
        assert!(g.refute_base_fc(&vec![1], 8).is_none());
    }

    #[test]
    fn finite_base_roundtrip() {
        // base ℤ/6 = <a>, Γ₀ = {0, 2, 4} ≅ ℤ/3, φ(a²) = a⁴ (inversion on Γ₀)
        let z6 = FiniteTableGroup::cyclic(6);
        let base = FiniteHnnBase::new(z6, &[2], &[4]).unwrap();
        assert_eq!(base.base_index(), Some(2));
        let g = HnnGroup::new(base, "t").unwrap();
        laws::check_group_laws(&g, 35, 250, 10).unwrap();
        // t⁻¹ a² t = a⁴
        let red = g.britton_reduce(&[RawItem::T(-1), RawItem::Base(2), RawItem::T(1)]);
        assert_eq!(red, g.embed_base(4));
        let z = g.centre().unwrap();
        // Z(Γ₁) = ℤ/6, Fix(φ) = {1}: trivial centre
        assert!(g.base().sub_is_trivial(&z));
        let tower = g.fk_tower(6);
        // φ² = id on Γ₀ so F₂ = Γ₀
        assert_eq!(tower.fixed[1], alloc::vec![0, 2, 4]);
    }

    #[test]
    fn stable_letter_name_clash_rejected() {
        let base = FreeAbelianGroup::new(Alphabet::new(["t"]).unwrap());
        let base = AbelianHnnBase::new(base, &[vec![1]], &[vec![-1]]).unwrap();
        assert!(matches!(HnnGroup::new(base, "t"), Err(HnnError::StableLetterClash(_))));
    }

    #[test]
    fn phi_validation_rejects_garbage() {
        // ℤ/6 with dom {1, a², a⁴} but φ(a²) = a³: not a map between the
        // closures
        let z6 = FiniteTableGroup::cyclic(6);
        assert!(FiniteHnnBase::new(z6, &[2], &[3]).is_err());
        // abelian: redundant generators with inconsistent images
        let z = FreeAbelianGroup::of_rank(1);
        assert!(AbelianHnnBase::new(z, &[vec![2], vec![4]], &[vec![3], vec![5]]).is_err());
    }
}
