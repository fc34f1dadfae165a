//! Free groups: elements are freely reduced words, multiplication is
//! concatenation plus reduction.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::GroupModel;
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeGroup {
    alphabet: Alphabet,
}

impl FreeGroup {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeGroup { alphabet }
    }

    /// Rank n with generators `a, b, c, …` (or `x1..xn` past 26).
    pub fn of_rank(n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        let names: Vec<String> = if n <= 26 {
            (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (1..=n).map(|i| alloc::format!("x{i}")).collect()
        };
        FreeGroup { alphabet: Alphabet::new(names).expect("generated names are valid") }
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }
}

impl GroupModel for FreeGroup {
    type Elem = Word;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Word {
        Word::empty()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.concat(b)
    }

    fn inv(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn generator(&self, index: usize) -> Word {
        Word::generator(index, false)
    }

    fn show(&self, e: &Word) -> String {
        alloc::format!("{}", e.display(&self.alphabet))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    #[test]
    fn multiplication_reduces() {
        let f = FreeGroup::of_rank(2);
        let u = parse_word("a*b", f.alphabet()).unwrap();
        let v = parse_word("b'*a", f.alphabet()).unwrap();
        assert_eq!(f.mul(&u, &v), parse_word("a^2", f.alphabet()).unwrap());
        assert!(f.is_identity(&f.mul(&u, &f.inv(&u))));
    }
}
