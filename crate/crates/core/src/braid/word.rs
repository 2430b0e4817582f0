use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word in the Artin generators of the braid group on `strands` strands.
///
/// Letters are stored as signed generator indices: `i` is `σ_i` and `-i` is
/// `σ_i⁻¹`, with `1 ≤ |i| ≤ strands - 1`. No simplification is ever applied
/// implicitly; use [`BraidWord::free_reduce`] or the normal form for that.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    strands: usize,
    word: Vec<i32>,
}

impl TryFrom<RawWord> for BraidWord {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        BraidWord::new(raw.strands, raw.word)
    }
}

impl From<BraidWord> for RawWord {
    fn from(w: BraidWord) -> Self {
        RawWord {
            strands: w.strands,
            word: w.letters,
        }
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::TooSmall { needed: 1, got: 0 });
        }
        for &l in &letters {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx >= strands {
                return Err(Error::InvalidGenerator {
                    index: l as i64,
                    strands,
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands > 0, "braid group needs at least one strand");
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// `σ_i` (or `σ_i⁻¹` when `positive` is false).
    pub fn generator(strands: usize, i: usize, positive: bool) -> Result<Self> {
        let l = i as i32;
        BraidWord::new(strands, vec![if positive { l } else { -l }])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub(crate) fn push_word(&mut self, other: &BraidWord) {
        debug_assert_eq!(self.strands, other.strands);
        self.letters.extend_from_slice(&other.letters);
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `self^e`; negative exponents use the inverse word.
    pub fn pow(&self, e: i64) -> BraidWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let reps = e.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    /// Embed into `B_strands` by shifting every generator index by `offset`,
    /// so strand `j` of `self` becomes strand `j + offset`.
    pub fn embed(&self, strands: usize, offset: usize) -> Result<BraidWord> {
        if self.strands + offset > strands {
            return Err(Error::InvalidArgument(format!(
                "cannot embed {} strands at offset {} into {}",
                self.strands, offset, strands
            )));
        }
        let off = offset as i32;
        let letters = self
            .letters
            .iter()
            .map(|&l| if l > 0 { l + off } else { l - off })
            .collect();
        Ok(BraidWord { strands, letters })
    }

    /// Cancel adjacent `σ_i σ_i⁻¹` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    /// Exponent sum; a homomorphism to ℤ.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&l| l > 0)
    }

    /// Parse whitespace-separated signed generator indices, e.g. `"1 -2 2"`.
    /// Commas are accepted as separators as well.
    pub fn parse(strands: usize, text: &str) -> Result<BraidWord> {
        if strands == 0 {
            return Err(Error::TooSmall { needed: 1, got: 0 });
        }
        let mut letters = Vec::new();
        let mut pos = 0;
        for token in text.split(|c: char| c.is_whitespace() || c == ',') {
            if !token.is_empty() {
                let l: i32 = token
                    .parse()
                    .map_err(|_| Error::parse(pos, format!("not a signed integer: {token:?}")))?;
                if l == 0 || l.unsigned_abs() as usize >= strands {
                    return Err(Error::parse(
                        pos,
                        format!("generator {l} out of range for {strands} strands"),
                    ));
                }
                letters.push(l);
            }
            pos += token.len() + 1;
        }
        Ok(BraidWord { strands, letters })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_concatenates_without_reducing() {
        let s1 = BraidWord::generator(3, 1, true).unwrap();
        let s1i = BraidWord::generator(3, 1, false).unwrap();
        let w = s1.compose(&s1i).unwrap();
        assert_eq!(w.letters(), &[1, -1]);

        let e = BraidWord::identity(3);
        assert_eq!(e.compose(&w).unwrap(), w);

        let a = BraidWord::new(3, vec![1, 2]).unwrap();
        let b = BraidWord::new(3, vec![2, 1]).unwrap();
        assert_eq!(a.compose(&b).unwrap().letters(), &[1, 2, 2, 1]);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = BraidWord::identity(3);
        let b = BraidWord::identity(4);
        assert_eq!(
            a.compose(&b),
            Err(Error::StrandMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn generator_range_checked() {
        assert!(BraidWord::new(3, vec![3]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
        assert!(BraidWord::new(3, vec![-2, 2]).is_ok());
    }

    #[test]
    fn parse_reports_position() {
        let w = BraidWord::parse(4, " 1 -2  3").unwrap();
        assert_eq!(w.letters(), &[1, -2, 3]);
        match BraidWord::parse(4, "1 x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(BraidWord::parse(3, "1 3").is_err());
    }

    #[test]
    fn embed_and_pow() {
        let w = BraidWord::new(3, vec![1, -2]).unwrap();
        let e = w.embed(9, 3).unwrap();
        assert_eq!(e.letters(), &[4, -5]);
        assert_eq!(w.pow(-2).letters(), &[2, -1, 2, -1]);
        assert!(w.pow(0).is_empty());
        assert!(w.embed(4, 2).is_err());
    }

    #[test]
    fn free_reduction() {
        let w = BraidWord::new(4, vec![1, 2, -2, -1, 3, 3, -3]).unwrap();
        assert_eq!(w.free_reduce().letters(), &[3]);
    }

    #[test]
    fn json_shape() {
        let w = BraidWord::new(3, vec![1, -2, 2]).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"strands":3,"word":[1,-2,2]}"#);
        let back: BraidWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<BraidWord>(r#"{"strands":3,"word":[3]}"#).is_err());
    }
}
