//! Finite groups given by an explicit multiplication table.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::GroupModel;
use crate::words::Alphabet;

/// Default size cap; the constructor runs an O(n³) associativity check and
/// garbage tables would corrupt every downstream certificate.
pub const DEFAULT_TABLE_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    TooLarge { size: usize, cap: usize },
    NotSquare,
    EntryOutOfRange { row: usize, col: usize },
    NoIdentity,
    NotAssociative { a: usize, b: usize, c: usize },
    NoInverse { element: usize },
    BadGenerator { index: usize },
    GeneratorsDoNotGenerate { reached: usize, size: usize },
    BadElementNames,
    Alphabet(crate::words::AlphabetError),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::TooLarge { size, cap } => write!(f, "table size {size} exceeds cap {cap}"),
            TableError::NotSquare => write!(f, "multiplication table is not square"),
            TableError::EntryOutOfRange { row, col } => {
                write!(f, "table entry at ({row},{col}) is out of range")
            }
            TableError::NoIdentity => write!(f, "table has no two-sided identity"),
            TableError::NotAssociative { a, b, c } => {
                write!(f, "associativity fails at ({a},{b},{c})")
            }
            TableError::NoInverse { element } => {
                write!(f, "element {element} has no two-sided inverse")
            }
            TableError::BadGenerator { index } => write!(f, "generator index {index} out of range"),
            TableError::GeneratorsDoNotGenerate { reached, size } => {
                write!(f, "generators reach only {reached} of {size} elements")
            }
            TableError::BadElementNames => write!(f, "element name list has the wrong length"),
            TableError::Alphabet(e) => write!(f, "{e}"),
        }
    }
}

/// A finite group with full multiplication table, validated as a group law
/// at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTableGroup {
    size: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    alphabet: Alphabet,
    gen_elems: Vec<u32>,
    elem_names: Vec<String>,
}

impl FiniteTableGroup {
    pub fn new(
        table: &[Vec<usize>],
        generators: &[(String, usize)],
        elem_names: Option<Vec<String>>,
    ) -> Result<Self, TableError> {
        Self::with_cap(table, generators, elem_names, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(
        table: &[Vec<usize>],
        generators: &[(String, usize)],
        elem_names: Option<Vec<String>>,
        cap: usize,
    ) -> Result<Self, TableError> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n) {
            return Err(TableError::NotSquare);
        }
        if n > cap {
            return Err(TableError::TooLarge { size: n, cap });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(TableError::EntryOutOfRange { row: r, col: c });
                }
                flat.push(v as u32);
            }
        }
        let mul = |a: usize, b: usize| flat[a * n + b] as usize;

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(TableError::NoIdentity)?;

        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(TableError::NotAssociative { a, b, c });
                    }
                }
            }
        }

        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or(TableError::NoInverse { element: a })?;
            inverse.push(inv as u32);
        }

        let alphabet = Alphabet::new(generators.iter().map(|(name, _)| name.clone()))
            .map_err(TableError::Alphabet)?;
        let mut gen_elems = Vec::with_capacity(generators.len());
        for &(_, g) in generators {
            if g >= n {
                return Err(TableError::BadGenerator { index: g });
            }
            gen_elems.push(g as u32);
        }

        // orbit closure: the designated generators must generate
        let mut seen = alloc::vec![false; n];
        seen[identity] = true;
        let mut frontier = alloc::vec![identity];
        let mut reached = 1;
        while let Some(a) = frontier.pop() {
            for &g in &gen_elems {
                for b in [mul(a, g as usize), mul(a, inverse[g as usize] as usize)] {
                    if !seen[b] {
                        seen[b] = true;
                        reached += 1;
                        frontier.push(b);
                    }
                }
            }
        }
        if reached != n {
            return Err(TableError::GeneratorsDoNotGenerate { reached, size: n });
        }

        let elem_names = match elem_names {
            Some(names) => {
                if names.len() != n {
                    return Err(TableError::BadElementNames);
                }
                names
            }
            None => (0..n)
                .map(|i| {
                    if i == identity {
                        "1".to_string()
                    } else {
                        alloc::format!("#{i}")
                    }
                })
                .collect(),
        };

        Ok(FiniteTableGroup {
            size: n,
            table: flat,
            inverse,
            identity: identity as u32,
            alphabet,
            gen_elems,
            elem_names,
        })
    }

    /// The cyclic group ℤ/n with generator `a` and elements named by powers.
    pub fn cyclic(n: usize) -> Self {
        Self::cyclic_named(n, "a")
    }

    pub fn cyclic_named(n: usize, gen: &str) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => gen.to_string(),
                _ => alloc::format!("{gen}^{k}"),
            })
            .collect();
        let gens = if n == 1 {
            // trivial group still carries a (redundant) generator so that it
            // has a nonempty alphabet
            alloc::vec![(gen.to_string(), 0)]
        } else {
            alloc::vec![(gen.to_string(), 1)]
        };
        Self::new(&table, &gens, Some(names)).expect("cyclic table is a group")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.size as u32
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.size + b as usize]
    }

    pub fn inv_idx(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn identity_idx(&self) -> u32 {
        self.identity
    }

    pub fn elem_name(&self, e: u32) -> &str {
        &self.elem_names[e as usize]
    }

    /// Elements commuting with everything.
    pub fn centre(&self) -> Vec<u32> {
        self.elements()
            .filter(|&z| self.elements().all(|a| self.mul_idx(z, a) == self.mul_idx(a, z)))
            .collect()
    }

    /// Sorted closure of `seeds` under multiplication and inverse.
    pub fn subgroup_closure(&self, seeds: &[u32]) -> Vec<u32> {
        let mut seen = alloc::vec![false; self.size];
        seen[self.identity as usize] = true;
        let mut frontier = alloc::vec![self.identity];
        while let Some(a) = frontier.pop() {
            for &s in seeds {
                for b in [self.mul_idx(a, s), self.mul_idx(a, self.inv_idx(s))] {
                    if !seen[b as usize] {
                        seen[b as usize] = true;
                        frontier.push(b);
                    }
                }
            }
        }
        (0..self.size as u32).filter(|&e| seen[e as usize]).collect()
    }
}

impl GroupModel for FiniteTableGroup {
    type Elem = u32;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_idx(*a, *b)
    }

    fn inv(&self, a: &u32) -> u32 {
        self.inv_idx(*a)
    }

    fn generator(&self, index: usize) -> u32 {
        self.gen_elems[index]
    }

    fn is_finite(&self) -> Option<usize> {
        Some(self.size)
    }

    fn show(&self, e: &u32) -> String {
        self.elem_names[*e as usize].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cyclic_is_valid_and_generated() {
        let z6 = FiniteTableGroup::cyclic(6);
        assert_eq!(z6.size(), 6);
        assert_eq!(z6.identity_idx(), 0);
        assert_eq!(z6.inv_idx(2), 4);
        assert_eq!(z6.centre().len(), 6);
    }

    #[test]
    fn rejects_non_group_table() {
        // constant row: no identity
        let t = vec![vec![0, 0], vec![0, 0]];
        assert!(matches!(
            FiniteTableGroup::new(&t, &[("a".into(), 1)], None),
            Err(TableError::NoIdentity)
        ));
    }

    #[test]
    fn rejects_non_generating_set() {
        // ℤ/4 with only the order-2 element designated
        let t: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        assert!(matches!(
            FiniteTableGroup::new(&t, &[("a".into(), 2)], None),
            Err(TableError::GeneratorsDoNotGenerate { reached: 2, size: 4 })
        ));
    }

    #[test]
    fn subgroup_closure_of_square_in_z4() {
        let z4 = FiniteTableGroup::cyclic(4);
        assert_eq!(z4.subgroup_closure(&[2]), vec![0, 2]);
    }

    #[test]
    fn rejects_oversized_table() {
        let t: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b) % 3).collect()).collect();
        assert!(matches!(
            FiniteTableGroup::with_cap(&t, &[("a".into(), 1)], None, 2),
            Err(TableError::TooLarge { size: 3, cap: 2 })
        ));
    }
}
