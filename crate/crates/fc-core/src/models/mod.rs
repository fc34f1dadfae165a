//! The [`GroupModel`] interface — exact arithmetic plus canonical forms —
//! and basic concrete instances.
//!
//! Every model keeps its elements in a canonical form, so structural
//! equality (`Eq`/`Hash`/`Ord` on `Elem`) *is* the equality oracle. That
//! exactness contract is load-bearing: every certificate downstream
//! (orbits, coset indices, witnesses) relies on it.

mod abelian;
mod free;
mod product;
mod table;

pub use abelian::FreeAbelianGroup;
pub use free::FreeGroup;
pub use product::DirectProductGroup;
pub use table::{FiniteTableGroup, TableError};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;

use crate::words::{Letter, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// A word used a letter index outside the model's alphabet.
    AlphabetMismatch(WordError),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::AlphabetMismatch(e) => write!(f, "alphabet mismatch: {e}"),
        }
    }
}

/// Exact arithmetic in one concrete group.
///
/// Required laws, checked per model by the test suite:
/// associativity, two-sided identity and inverses, and
/// `eval(u·v) = mul(eval(u), eval(v))`.
pub trait GroupModel {
    /// Canonical element representation. Two `Elem` values compare equal
    /// iff they are the same group element.
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug;

    /// Named generators; indices in words refer to this alphabet.
    fn alphabet(&self) -> &crate::words::Alphabet;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// The element of the `index`-th alphabet generator.
    fn generator(&self, index: usize) -> Self::Elem;

    /// Total size when the group is finite.
    fn is_finite(&self) -> Option<usize> {
        None
    }

    /// Human-readable rendering used in reports.
    fn show(&self, e: &Self::Elem) -> String;

    /// Homomorphic image of a free word.
    fn eval(&self, w: &Word) -> Result<Self::Elem, ModelError> {
        w.validate(self.alphabet()).map_err(ModelError::AlphabetMismatch)?;
        let mut acc = self.identity();
        for &l in w.letters() {
            let g = self.letter_elem(l);
            acc = self.mul(&acc, &g);
        }
        Ok(acc)
    }

    /// Element of one signed letter (index assumed valid).
    fn letter_elem(&self, l: Letter) -> Self::Elem {
        let g = self.generator(l.gen as usize);
        if l.inv {
            self.inv(&g)
        } else {
            g
        }
    }

    fn is_identity(&self, e: &Self::Elem) -> bool {
        *e == self.identity()
    }

    /// All signed generator letters with their elements, in a fixed order.
    /// This is the step set for every BFS (balls, orbits, cosets).
    fn signed_generators(&self) -> Vec<(Letter, Self::Elem)> {
        let n = self.alphabet().len();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            out.push((Letter::new(i, false), self.generator(i)));
        }
        for i in 0..n {
            let l = Letter::new(i, true);
            out.push((l, self.letter_elem(l)));
        }
        out
    }

    fn commutes(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// `a b a⁻¹ b⁻¹`.
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ainv = self.inv(a);
        let binv = self.inv(b);
        self.mul(&self.mul(&ab, &ainv), &binv)
    }

    fn pow(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }
}

/// Least `k ≤ cap` with `gᵏ = 1`, if any.
pub fn element_order<M: GroupModel>(m: &M, g: &M::Elem, cap: usize) -> Option<usize> {
    let mut acc = g.clone();
    for k in 1..=cap {
        if m.is_identity(&acc) {
            return Some(k);
        }
        acc = m.mul(&acc, g);
    }
    None
}

/// Deterministic model-law checks on sampled elements; used by unit tests
/// and replayed by the `verify-paper` suite.
pub mod laws {
    use super::*;
    use crate::rng::SplitMix64;

    /// Random word of length ≤ `max_len` over the model's alphabet.
    pub fn random_word(rng: &mut SplitMix64, n_gens: usize, max_len: usize) -> Word {
        let len = (rng.next() as usize) % (max_len + 1);
        let letters = (0..len).map(|_| {
            let r = rng.next() as usize;
            Letter::new((r / 2) % n_gens, r % 2 == 1)
        });
        Word::from_letters(letters)
    }

    pub fn sample_elements<M: GroupModel>(
        m: &M,
        rng: &mut SplitMix64,
        count: usize,
        max_len: usize,
    ) -> Vec<M::Elem> {
        (0..count)
            .map(|_| {
                let w = random_word(rng, m.alphabet().len(), max_len);
                m.eval(&w).expect("sampled word is over the model alphabet")
            })
            .collect()
    }

    /// Associativity, identity, inverse and canon consistency on `triples`
    /// random triples. Returns a description of the first violation.
    pub fn check_group_laws<M: GroupModel>(
        m: &M,
        seed: u64,
        triples: usize,
        max_len: usize,
    ) -> Result<(), String> {
        let mut rng = SplitMix64::new(seed);
        let e = m.identity();
        if m.mul(&e, &e) != e {
            return Err("identity is not idempotent".into());
        }
        for i in 0..triples {
            let s = sample_elements(m, &mut rng, 3, max_len);
            let (a, b, c) = (&s[0], &s[1], &s[2]);
            if m.mul(&m.mul(a, b), c) != m.mul(a, &m.mul(b, c)) {
                return Err(alloc::format!("associativity fails on triple #{i}"));
            }
            if m.mul(a, &e) != *a || m.mul(&e, a) != *a {
                return Err(alloc::format!("identity law fails on sample #{i}"));
            }
            let ai = m.inv(a);
            if !m.is_identity(&m.mul(a, &ai)) || !m.is_identity(&m.mul(&ai, a)) {
                return Err(alloc::format!("inverse law fails on sample #{i}"));
            }
        }
        Ok(())
    }

    /// `eval(concat(u,v)) = eval(u)·eval(v)` on random word pairs.
    pub fn check_eval_homomorphism<M: GroupModel>(
        m: &M,
        seed: u64,
        pairs: usize,
        max_len: usize,
    ) -> Result<(), String> {
        let mut rng = SplitMix64::new(seed);
        for i in 0..pairs {
            let u = random_word(&mut rng, m.alphabet().len(), max_len);
            let v = random_word(&mut rng, m.alphabet().len(), max_len);
            let lhs = m.eval(&u.concat(&v)).unwrap();
            let rhs = m.mul(&m.eval(&u).unwrap(), &m.eval(&v).unwrap());
            if lhs != rhs {
                return Err(alloc::format!("eval is not homomorphic on pair #{i}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{parse_word, Alphabet};
    use alloc::vec;

    #[test]
    fn eval_on_free_abelian_counts_exponents() {
        let m = FreeAbelianGroup::new(Alphabet::new(["x", "y"]).unwrap());
        let w = parse_word("x*y*x", m.alphabet()).unwrap();
        assert_eq!(m.eval(&w).unwrap(), vec![2, 1]);
    }

    #[test]
    fn eval_on_z2_kills_squares() {
        let m = FiniteTableGroup::cyclic(2);
        let w = parse_word("a^2", m.alphabet()).unwrap();
        assert!(m.is_identity(&m.eval(&w).unwrap()));
    }

    #[test]
    fn eval_rejects_foreign_letters() {
        let m = FiniteTableGroup::cyclic(2);
        let other = Alphabet::new(["a", "b"]).unwrap();
        let w = parse_word("b", &other).unwrap();
        assert!(matches!(m.eval(&w), Err(ModelError::AlphabetMismatch(_))));
    }

    #[test]
    fn element_order_cases() {
        let z6 = FiniteTableGroup::cyclic(6);
        assert_eq!(element_order(&z6, &z6.generator(0), 100), Some(6));

        let z2 = FreeAbelianGroup::new(Alphabet::new(["x", "y"]).unwrap());
        assert_eq!(element_order(&z2, &vec![1, 0], 100), None);
    }

    #[test]
    fn laws_hold_for_basic_models() {
        let z6 = FiniteTableGroup::cyclic(6);
        laws::check_group_laws(&z6, 1, 200, 8).unwrap();
        laws::check_eval_homomorphism(&z6, 2, 200, 8).unwrap();

        let za = FreeAbelianGroup::new(Alphabet::new(["x", "y"]).unwrap());
        laws::check_group_laws(&za, 3, 200, 8).unwrap();
        laws::check_eval_homomorphism(&za, 4, 200, 8).unwrap();

        let f2 = FreeGroup::new(Alphabet::new(["a", "b"]).unwrap());
        laws::check_group_laws(&f2, 5, 200, 8).unwrap();
        laws::check_eval_homomorphism(&f2, 6, 200, 8).unwrap();

        let prod = DirectProductGroup::new(FiniteTableGroup::cyclic(3), za).unwrap();
        laws::check_group_laws(&prod, 7, 200, 8).unwrap();
        laws::check_eval_homomorphism(&prod, 8, 200, 8).unwrap();
    }
}
