//! Finite presentations `< gens | relators >` and relator checking against
//! concrete models.
//!
//! Presentations are descriptive metadata: the library never tries to solve
//! the word problem from a bare presentation. Their one computational role
//! is validating that maps respect the relators of a cataloged model.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::models::{GroupModel, ModelError};
use crate::words::{parse_word_inner, Alphabet, ParseError, Scanner, Word};

/// A finite presentation: an alphabet plus freely reduced, nonempty relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresError {
    Parse(ParseError),
    TrivialRelator { index: usize },
}

impl fmt::Display for PresError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresError::Parse(e) => write!(f, "{e}"),
            PresError::TrivialRelator { index } => {
                write!(f, "relator #{index} freely reduces to the empty word")
            }
        }
    }
}

impl From<ParseError> for PresError {
    fn from(e: ParseError) -> Self {
        PresError::Parse(e)
    }
}

impl Presentation {
    /// Builds a presentation from parts; relators are freely reduced and must
    /// stay nonempty.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self, PresError> {
        let mut reduced = Vec::with_capacity(relators.len());
        for (index, r) in relators.into_iter().enumerate() {
            let r = r.free_reduce();
            if r.is_empty() {
                return Err(PresError::TrivialRelator { index });
            }
            reduced.push(r);
        }
        Ok(Presentation { alphabet, relators: reduced })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Renders back to `< a, b | r1, r2 >` text. `parse ∘ print` is identity
    /// on the parsed structure.
    pub fn display(&self) -> PresDisplay<'_> {
        PresDisplay(self)
    }
}

pub struct PresDisplay<'a>(&'a Presentation);

impl fmt::Display for PresDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< ")?;
        for (i, n) in self.0.alphabet.names().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, " | ")?;
        for (i, r) in self.0.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r.display(&self.0.alphabet))?;
        }
        write!(f, " >")
    }
}

/// Parses `pres := '<' names '|' relist '>'` where a relation `u = v` is
/// normalized to the relator `u·v⁻¹` and stored freely reduced.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresError> {
    let mut sc = Scanner::new(text);
    sc.skip_ws();
    sc.expect(b'<')?;

    let mut names: Vec<String> = Vec::new();
    loop {
        sc.skip_ws();
        if sc.peek() == Some(b'|') {
            break;
        }
        let Some(name) = sc.ident() else {
            return Err(sc.error("expected a generator name").into());
        };
        names.push(name.into());
        sc.skip_ws();
        if !sc.eat(b',') && sc.peek() != Some(b'|') {
            return Err(sc.error("expected ',' or '|'").into());
        }
    }
    sc.expect(b'|')?;
    let alphabet = Alphabet::new(names).map_err(|e| ParseError {
        pos: sc.pos(),
        message: alloc::format!("{e}"),
    })?;

    let mut relators: Vec<Word> = Vec::new();
    loop {
        sc.skip_ws();
        match sc.peek() {
            Some(b'>') => {
                sc.at += 1;
                break;
            }
            None => return Err(sc.error("unterminated presentation, expected '>'").into()),
            _ => {}
        }
        let lhs = parse_word_inner(&mut sc, &alphabet, &[b',', b'=', b'>'])?;
        sc.skip_ws();
        let relator = if sc.eat(b'=') {
            let rhs = parse_word_inner(&mut sc, &alphabet, &[b',', b'>'])?;
            lhs.concat(&rhs.inverse())
        } else {
            lhs
        };
        relators.push(relator);
        sc.skip_ws();
        if !sc.eat(b',') && sc.peek() != Some(b'>') {
            return Err(sc.error("expected ',' or '>'").into());
        }
    }
    if !sc.at_end() {
        return Err(sc.error("trailing input after presentation").into());
    }
    Presentation::new(alphabet, relators)
}

/// True iff the relator evaluates to the identity in the model.
pub fn relator_holds<M: GroupModel>(model: &M, relator: &Word) -> Result<bool, ModelError> {
    let e = model.eval(relator)?;
    Ok(e == model.identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::words::parse_word;

    #[test]
    fn parses_dihedral() {
        let p = parse_presentation("< x, y | x^2, x*y*x*y >").unwrap();
        assert_eq!(p.alphabet().len(), 2);
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[0], parse_word("x^2", p.alphabet()).unwrap());
    }

    #[test]
    fn parses_free_group_with_empty_relator_list() {
        let p = parse_presentation("< a | >").unwrap();
        assert_eq!(p.alphabet().len(), 1);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn parses_klein_bottle_relator() {
        let p = parse_presentation("< t, g | t^-1*g*t*g >").unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].len(), 4);
    }

    #[test]
    fn equation_form_normalizes_to_relator() {
        let p = parse_presentation("< x, y | x*y*x = y^-1 >").unwrap();
        let q = parse_presentation("< x, y | x*y*x*y >").unwrap();
        assert_eq!(p.relators(), q.relators());
    }

    #[test]
    fn reports_position_of_unknown_generator() {
        let err = parse_presentation("< x |\n x*q >").unwrap_err();
        match err {
            PresError::Parse(e) => {
                assert_eq!(e.pos.line, 2);
                assert!(e.message.contains("unknown generator"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_generator_list_and_trivial_relator() {
        assert!(parse_presentation("< | x >").is_err());
        assert!(matches!(
            parse_presentation("< x | x*x^-1 >"),
            Err(PresError::TrivialRelator { index: 0 })
        ));
    }

    #[test]
    fn print_parse_round_trip() {
        let corpus = [
            "< x, y | x^2, x*y*x*y >",
            "< a | >",
            "< t, g | t^-1*g*t*g >",
            "< a, b | a^4, b^6, a^2*b^-3 >",
            "< a, b | a^2, b^3 >",
            "< a, t | t^-1*a^2*t*a^2 >",
            "< u, v, w | u*v*u'*v', v*w^3 >",
        ];
        for text in corpus {
            let p = parse_presentation(text).unwrap();
            let printed = p.display().to_string();
            assert_eq!(parse_presentation(&printed).unwrap(), p);
        }
    }
}
