//! Free abelian groups ℤⁿ: elements are integer vectors, generators the
//! standard basis.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::GroupModel;
use crate::words::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAbelianGroup {
    alphabet: Alphabet,
}

impl FreeAbelianGroup {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeAbelianGroup { alphabet }
    }

    /// Rank n with generators `x1..xn` (single-letter names `x`, `y`, `z`
    /// for n ≤ 3).
    pub fn of_rank(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        let names: Vec<String> = if n <= 3 {
            ["x", "y", "z"][..n].iter().map(|s| String::from(*s)).collect()
        } else {
            (1..=n).map(|i| alloc::format!("x{i}")).collect()
        };
        FreeAbelianGroup { alphabet: Alphabet::new(names).expect("generated names are valid") }
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }
}

impl GroupModel for FreeAbelianGroup {
    type Elem = Vec<i64>;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Vec<i64> {
        alloc::vec![0; self.rank()]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.checked_add(*y).expect("lattice coordinate overflow"))
            .collect()
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn generator(&self, index: usize) -> Vec<i64> {
        let mut v = self.identity();
        v[index] = 1;
        v
    }

    fn show(&self, e: &Vec<i64>) -> String {
        let mut s = String::from("(");
        for (i, x) in e.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{x}");
        }
        s.push(')');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn componentwise_addition() {
        let m = FreeAbelianGroup::of_rank(2);
        assert_eq!(m.mul(&vec![2, -1], &vec![1, 1]), vec![3, 0]);
        assert_eq!(m.inv(&vec![2, -1]), vec![-2, 1]);
        assert_eq!(m.show(&vec![2, 1]), "(2, 1)");
    }
}
