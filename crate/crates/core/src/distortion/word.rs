use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::group::{ElementCode, GeneratingSet, GroupSpec, Letter};

/// A word in the generators, evaluated left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Reversed with every letter inverted; evaluates to the inverse element.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// The word repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn append(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `u v u⁻¹ v⁻¹`, emitted literally.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        let mut out = Vec::with_capacity(2 * (u.len() + v.len()));
        out.extend_from_slice(&u.0);
        out.extend_from_slice(&v.0);
        out.extend(u.inverse().0);
        out.extend(v.inverse().0);
        Word(out)
    }

    /// Right-normed nested commutator of the given slot words.
    pub fn nested_commutator(slots: &[Word]) -> Word {
        let (last, rest) = slots.split_last().expect("at least one slot");
        rest.iter().rev().fold(last.clone(), |acc, u| Word::commutator(u, &acc))
    }

    /// Removes adjacent `x x⁻¹` pairs until none remain.
    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(Word)
    }
}

/// Left-to-right product of the letters of `w`.
pub fn word_eval(spec: &GroupSpec, gens: &GeneratingSet, w: &Word) -> Result<ElementCode> {
    let mut elems = Vec::with_capacity(2 * gens.k());
    for gen in 0..gens.k() {
        elems.push(spec.decode(gens.element(spec, Letter::pos(gen))?)?);
        elems.push(spec.decode(gens.element(spec, Letter::neg(gen))?)?);
    }
    let mut acc = vec![0; spec.digits()];
    let mut buf = vec![0; spec.digits()];
    for l in &w.0 {
        let x = elems
            .get(2 * l.gen + l.inverse as usize)
            .ok_or_else(|| Error::Precondition(format!("letter {l} names generator {} of {}", l.gen, gens.k())))?;
        spec.mul_entries(&acc, x, &mut buf);
        std::mem::swap(&mut acc, &mut buf);
    }
    Ok(spec.encode_unchecked(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg(q: u64) -> (GroupSpec, GeneratingSet) {
        let h = GroupSpec::unitriangular(q, 3).unwrap();
        let gens = GeneratingSet::parse(&h, "1,0,0;0,1,0").unwrap();
        (h, gens)
    }

    #[test]
    fn empty_word_is_identity() {
        let (h, gens) = heisenberg(5);
        assert_eq!(word_eval(&h, &gens, &Word::empty()).unwrap(), ElementCode::IDENTITY);
    }

    #[test]
    fn commutator_word() {
        let (h, gens) = heisenberg(5);
        let w: Word = "+0 +1 -0 -1".parse().unwrap();
        assert_eq!(h.decode(word_eval(&h, &gens, &w).unwrap()).unwrap(), vec![0, 0, 1]);
        let built = Word::commutator(&"+0".parse().unwrap(), &"+1".parse().unwrap());
        assert_eq!(built, w);
        assert_eq!(w.to_string(), "+0 +1 -0 -1");
    }

    #[test]
    fn word_times_inverse_is_identity() {
        let (h, gens) = heisenberg(7);
        let w: Word = "+0 +0 -1 +1 +1 -0 +1".parse().unwrap();
        let mut ww = w.clone();
        ww.append(&w.inverse());
        assert_eq!(word_eval(&h, &gens, &ww).unwrap(), ElementCode::IDENTITY);
        assert!(ww.freely_reduced().is_empty());
    }

    #[test]
    fn nested_commutator_lengths() {
        let unit: Word = "+0".parse().unwrap();
        for (c, len) in [(1, 1), (2, 4), (3, 10), (4, 22)] {
            let slots = vec![unit.clone(); c];
            assert_eq!(Word::nested_commutator(&slots).len(), len);
        }
    }

    #[test]
    fn out_of_range_letter() {
        let (h, gens) = heisenberg(5);
        assert!(word_eval(&h, &gens, &"+2".parse().unwrap()).is_err());
        assert!("+0 x".parse::<Word>().is_err());
    }
}
