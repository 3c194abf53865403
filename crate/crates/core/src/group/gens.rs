use std::fmt;
use std::str::FromStr;

use super::ops::ElementCode;
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// A generator or its inverse: index into [`GeneratingSet::positives`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.inverse { '-' } else { '+' }, self.gen)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad letter `{s}`, expected +i or -i"));
        let (inverse, digits) = match s.as_bytes().first() {
            Some(b'+') => (false, &s[1..]),
            Some(b'-') => (true, &s[1..]),
            _ => return Err(bad()),
        };
        let gen = digits.parse().map_err(|_| bad())?;
        Ok(Letter { gen, inverse })
    }
}

/// Positive generators `z_1..z_k` and their symmetric closure `S = {z_i^{±1}}`.
///
/// The closure is stored as a deduplicated neighbour list with one letter
/// per distinct element; the identity is dropped since it only adds loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    positives: Vec<ElementCode>,
    closure: Vec<(ElementCode, Letter)>,
}

impl GeneratingSet {
    pub fn new(spec: &GroupSpec, positives: Vec<ElementCode>) -> Result<Self> {
        if positives.is_empty() {
            return Err(Error::Precondition("generating set needs k >= 1".into()));
        }
        let mut closure: Vec<(ElementCode, Letter)> = Vec::with_capacity(2 * positives.len());
        for (gen, &z) in positives.iter().enumerate() {
            let zi = spec.inv(z)?;
            for (elem, letter) in [(z, Letter::pos(gen)), (zi, Letter::neg(gen))] {
                if elem != spec.identity() && !closure.iter().any(|&(e, _)| e == elem) {
                    closure.push((elem, letter));
                }
            }
        }
        Ok(GeneratingSet { positives, closure })
    }

    pub fn k(&self) -> usize {
        self.positives.len()
    }

    pub fn positives(&self) -> &[ElementCode] {
        &self.positives
    }

    /// The symmetric closure `S` with a letter naming each element.
    pub fn symmetric(&self) -> &[(ElementCode, Letter)] {
        &self.closure
    }

    /// Element named by `letter`.
    pub fn element(&self, spec: &GroupSpec, letter: Letter) -> Result<ElementCode> {
        let z = *self.positives.get(letter.gen).ok_or_else(|| {
            Error::Precondition(format!("letter {letter} names generator {} of {}", letter.gen, self.k()))
        })?;
        if letter.inverse {
            spec.inv(z)
        } else {
            Ok(z)
        }
    }

    pub fn generates(&self, spec: &GroupSpec) -> Result<bool> {
        spec.generates(&self.positives)
    }

    /// Images in `G^ab`, same generator order.
    pub fn abelianised(&self, spec: &GroupSpec) -> Result<GeneratingSet> {
        let ab = spec.abelianisation();
        let images = self.positives.iter().map(|&z| spec.abelianise(z)).collect::<Result<Vec<_>>>()?;
        GeneratingSet::new(&ab, images)
    }

    /// Descriptor form: entry vectors separated by `;`, entries by `,`.
    pub fn describe(&self, spec: &GroupSpec) -> String {
        self.positives
            .iter()
            .map(|&z| {
                let e = spec.decode(z).expect("generators are valid");
                e.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses [`GeneratingSet::describe`] output.
    pub fn parse(spec: &GroupSpec, text: &str) -> Result<Self> {
        let positives = text
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|entry| {
                let digits = entry
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                spec.encode(&digits)
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratingSet::new(spec, positives)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_symmetric_and_deduplicated() {
        let z6 = GroupSpec::abelian(vec![6]).unwrap();
        let s = GeneratingSet::new(&z6, vec![ElementCode(1), ElementCode(3), ElementCode(5), ElementCode(0)]).unwrap();
        let elems: Vec<u64> = s.symmetric().iter().map(|(e, _)| e.0).collect();
        assert_eq!(elems, vec![1, 5, 3]);
        for &(e, _) in s.symmetric() {
            let inv = z6.inv(e).unwrap();
            assert!(s.symmetric().iter().any(|&(f, _)| f == inv));
        }
        for &(e, letter) in s.symmetric() {
            assert_eq!(s.element(&z6, letter).unwrap(), e);
        }
    }

    #[test]
    fn letters_round_trip() {
        for text in ["+0", "-3", "+12"] {
            assert_eq!(text.parse::<Letter>().unwrap().to_string(), text);
        }
        assert!("3".parse::<Letter>().is_err());
        assert!("+x".parse::<Letter>().is_err());
    }

    #[test]
    fn describe_round_trip() {
        let h = GroupSpec::unitriangular(5, 3).unwrap();
        let s = GeneratingSet::parse(&h, "1,0,0;0,1,0;2,3,4").unwrap();
        assert_eq!(s.k(), 3);
        assert_eq!(GeneratingSet::parse(&h, &s.describe(&h)).unwrap(), s);
        assert!(GeneratingSet::parse(&h, "1,0").is_err());
    }
}
