//! Words over a generating alphabet: signed-letter sequences, free and
//! cyclic reduction, and the `x*y^-2*x'` text syntax.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// An ordered list of distinct generator names.
///
/// Generator indices are positions in this list; the index↔name mapping is a
/// bijection by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    Empty,
    BadName(String),
    Duplicate(String),
}

impl fmt::Display for AlphabetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetError::Empty => write!(f, "alphabet must have at least one generator"),
            AlphabetError::BadName(n) => write!(f, "bad generator name {n:?}"),
            AlphabetError::Duplicate(n) => write!(f, "duplicate generator name {n:?}"),
        }
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Self, AlphabetError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(AlphabetError::BadName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(AlphabetError::Duplicate(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// One signed letter: a generator index together with an exponent sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen: gen as u32, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// A word over some alphabet, stored as a sequence of signed letters.
///
/// Words do not carry their alphabet; consumers validate letter indices with
/// [`Word::validate`] or at model boundaries. The empty word is the
/// syntactic identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// A letter index that is out of range for the alphabet in use.
    BadIndex { index: u32, alphabet_len: usize },
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::BadIndex { index, alphabet_len } => {
                write!(f, "letter index {index} out of range for alphabet of {alphabet_len} generators")
            }
        }
    }
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word { letters: letters.into_iter().collect() }
    }

    /// Single generator, `gen^±1`.
    pub fn generator(gen: usize, inv: bool) -> Self {
        Word { letters: alloc::vec![Letter::new(gen, inv)] }
    }

    /// `gen^k` with arbitrary integer exponent.
    pub fn power(gen: usize, k: i64) -> Self {
        let inv = k < 0;
        let n = k.unsigned_abs() as usize;
        Word { letters: alloc::vec![Letter::new(gen, inv); n] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), WordError> {
        for l in &self.letters {
            if l.gen as usize >= alphabet.len() {
                return Err(WordError::BadIndex { index: l.gen, alphabet_len: alphabet.len() });
            }
        }
        Ok(())
    }

    /// True when no adjacent pair of mutually inverse letters remains.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// The unique freely reduced form, via a single left-to-right stack pass.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last().is_some_and(|t| t.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    /// Reverses the word and flips every sign.
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }.free_reduce()
    }

    /// Splits a freely reduced word as `conjugator · core · conjugator⁻¹`
    /// with a cyclically reduced core (first and last letters not mutually
    /// inverse).
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        debug_assert!(self.is_reduced());
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo].cancels(self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let core = Word { letters: self.letters[lo..hi].to_vec() };
        let conjugator = Word { letters: self.letters[..lo].to_vec() };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && (self.letters.len() < 2
                || !self.letters[0].cancels(*self.letters.last().unwrap()))
    }

    /// Renders the word in the `x*y^-2*x` syntax; the empty word prints as `1`.
    /// Runs of equal letters collapse to powers, so parse∘print is exact.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls = &self.word.letters;
        if ls.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < ls.len() {
            let mut j = i + 1;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if ls[i].inv { -run } else { run };
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = self.alphabet.name(ls[i].gen as usize);
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Position of a parse failure, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.pos, self.message)
    }
}

pub(crate) struct Scanner<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pub at: usize,
    line: u32,
    line_start: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(text: &'a str) -> Self {
        Scanner { text, bytes: text.as_bytes(), at: 0, line: 1, line_start: 0 }
    }

    pub fn pos(&self) -> Pos {
        Pos { line: self.line, col: (self.at - self.line_start) as u32 + 1 }
    }

    pub fn error<S: Into<String>>(&self, message: S) -> ParseError {
        ParseError { pos: self.pos(), message: message.into() }
    }

    pub fn skip_ws(&mut self) {
        while let Some(&b) = self.bytes.get(self.at) {
            if b == b'\n' {
                self.at += 1;
                self.line += 1;
                self.line_start = self.at;
            } else if b.is_ascii_whitespace() {
                self.at += 1;
            } else {
                break;
            }
        }
    }

    pub fn peek(&self) -> Option<u8> {
        self.bytes.get(self.at).copied()
    }

    pub fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected {:?}", b as char)))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.at >= self.bytes.len()
    }

    pub fn ident(&mut self) -> Option<&'a str> {
        let start = self.at;
        match self.peek() {
            Some(b) if (b as char).is_ascii_alphabetic() || b == b'_' => self.at += 1,
            _ => return None,
        }
        while let Some(b) = self.peek() {
            if (b as char).is_ascii_alphanumeric() || b == b'_' {
                self.at += 1;
            } else {
                break;
            }
        }
        Some(&self.text[start..self.at])
    }

    pub fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.at;
        self.eat(b'-');
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.at += 1;
        }
        self.text[start..self.at]
            .parse::<i64>()
            .map_err(|_| self.error("expected an integer"))
    }
}

/// Parses one word. Grammar: `word := term ('*'? term)*` with
/// `term := name ('^' int)? | name '\''`; `1` denotes the empty word.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, ParseError> {
    let mut sc = Scanner::new(text);
    let w = parse_word_inner(&mut sc, alphabet, &[])?;
    if !sc.at_end() {
        return Err(sc.error("trailing input after word"));
    }
    Ok(w)
}

/// Word parser shared with the presentation grammar; stops before any byte
/// in `stop` (checked after whitespace).
pub(crate) fn parse_word_inner(
    sc: &mut Scanner<'_>,
    alphabet: &Alphabet,
    stop: &[u8],
) -> Result<Word, ParseError> {
    let mut letters: Vec<Letter> = Vec::new();
    let mut any = false;
    loop {
        sc.skip_ws();
        match sc.peek() {
            None => break,
            Some(b) if stop.contains(&b) => break,
            Some(b'*') => {
                sc.at += 1;
                continue;
            }
            Some(b'1') => {
                // explicit identity term
                sc.at += 1;
                any = true;
                continue;
            }
            _ => {}
        }
        let pos_before = sc.pos();
        let Some(name) = sc.ident() else {
            return Err(sc.error("expected a generator name"));
        };
        let Some(gen) = alphabet.index_of(name) else {
            return Err(ParseError {
                pos: pos_before,
                message: alloc::format!("unknown generator {name:?}"),
            });
        };
        any = true;
        if sc.eat(b'\'') {
            letters.push(Letter::new(gen, true));
        } else if sc.eat(b'^') {
            let k = sc.int()?;
            let inv = k < 0;
            for _ in 0..k.unsigned_abs() {
                letters.push(Letter::new(gen, inv));
            }
        } else {
            letters.push(Letter::new(gen, false));
        }
    }
    if !any {
        return Err(sc.error("expected a word"));
    }
    Ok(Word { letters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ab() -> Alphabet {
        Alphabet::new(["x", "y", "z"]).unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text, &ab()).unwrap()
    }

    #[test]
    fn free_reduce_cancels_inverse_pairs() {
        assert_eq!(w("x*x'*y").free_reduce(), w("y"));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        // hand-cancellation oracle: x y y⁻¹ x⁻¹ z → z
        assert_eq!(w("x*y*y^-1*x^-1*z").free_reduce(), w("z"));
    }

    #[test]
    fn free_reduce_is_idempotent() {
        let r = w("x*y*y'*x'*z").free_reduce();
        assert_eq!(r.free_reduce(), r);
        assert!(r.is_reduced());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("x*y*x'").cyclic_reduce();
        assert_eq!(core, w("y"));
        assert_eq!(conj, w("x"));

        let (core, conj) = w("y*x").cyclic_reduce();
        assert_eq!(core, w("y*x"));
        assert!(conj.is_empty());

        let input = w("x*z*y*z'*x'");
        let (core, conj) = input.cyclic_reduce();
        assert_eq!(core, w("y"));
        assert_eq!(conj, w("x*z"));
        // reconstruction identity
        let rebuilt = conj.concat(&core).concat(&conj.inverse());
        assert_eq!(rebuilt, input);
    }

    #[test]
    fn invert_and_concat() {
        assert_eq!(w("x*y").inverse(), w("y'*x'"));
        assert!(w("x").concat(&w("x'")).is_empty());
        assert_eq!(w("x*y").concat(&w("y'*z")), w("x*z"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_word("q", &ab()).is_err());
        assert!(parse_word("x^", &ab()).is_err());
        assert!(parse_word("x )", &ab()).is_err());
        assert!(parse_word("", &ab()).is_err());
    }

    #[test]
    fn print_round_trips() {
        for text in ["x*y^-2*x'", "x^3*z*y'", "1", "x*x*x^-1"] {
            let parsed = w(text);
            let printed = parsed.display(&ab()).to_string();
            assert_eq!(parse_word(&printed, &ab()).unwrap(), parsed);
        }
    }

    #[test]
    fn power_zero_is_empty() {
        assert_eq!(w("x^0"), Word::empty());
        assert_eq!(Word::power(0, 0), Word::empty());
    }
}
