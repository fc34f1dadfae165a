//! Direct products of two models, componentwise.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::GroupModel;
use crate::words::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductError(pub String);

impl fmt::Display for ProductError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `A × B` with the concatenated alphabet; generator names must be disjoint.
#[derive(Debug, Clone)]
pub struct DirectProductGroup<A: GroupModel, B: GroupModel> {
    left: A,
    right: B,
    alphabet: Alphabet,
}

impl<A: GroupModel, B: GroupModel> DirectProductGroup<A, B> {
    pub fn new(left: A, right: B) -> Result<Self, ProductError> {
        let names: Vec<String> = left
            .alphabet()
            .names()
            .chain(right.alphabet().names())
            .map(String::from)
            .collect();
        let alphabet = Alphabet::new(names)
            .map_err(|e| ProductError(alloc::format!("product alphabet: {e}")))?;
        Ok(DirectProductGroup { left, right, alphabet })
    }

    pub fn left(&self) -> &A {
        &self.left
    }

    pub fn right(&self) -> &B {
        &self.right
    }
}

impl<A: GroupModel, B: GroupModel> GroupModel for DirectProductGroup<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.inv(&a.0), self.right.inv(&a.1))
    }

    fn generator(&self, index: usize) -> Self::Elem {
        let n = self.left.alphabet().len();
        if index < n {
            (self.left.generator(index), self.right.identity())
        } else {
            (self.left.identity(), self.right.generator(index - n))
        }
    }

    fn is_finite(&self) -> Option<usize> {
        Some(self.left.is_finite()? * self.right.is_finite()?)
    }

    fn show(&self, e: &Self::Elem) -> String {
        alloc::format!("({}, {})", self.left.show(&e.0), self.right.show(&e.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FiniteTableGroup, FreeAbelianGroup};
    use crate::words::parse_word;

    #[test]
    fn componentwise_ops_and_size() {
        let p = DirectProductGroup::new(
            FiniteTableGroup::cyclic_named(2, "s"),
            FreeAbelianGroup::of_rank(1),
        )
        .unwrap();
        assert_eq!(p.alphabet().len(), 2);
        assert_eq!(p.is_finite(), None);
        let w = parse_word("s*x*s*x", p.alphabet()).unwrap();
        assert_eq!(p.eval(&w).unwrap(), (0, alloc::vec![2]));
    }

    #[test]
    fn rejects_name_clash() {
        let a = FiniteTableGroup::cyclic(2);
        let b = FreeAbelianGroup::new(Alphabet::new(["a"]).unwrap());
        assert!(DirectProductGroup::new(a, b).is_err());
    }
}
