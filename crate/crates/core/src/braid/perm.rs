use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::BraidWord;

/// A permutation of `{1, …, size}`, stored 0-based.
///
/// Composition follows the functional convention: `p.compose(&q)` is
/// `p ∘ q`, i.e. apply `q` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    /// From 1-based images.
    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::InvalidArgument("permutation images are 1-based".into()));
        }
        Permutation::from_images(one_based.into_iter().map(|i| i - 1).collect())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images.iter().map(|i| i + 1).collect()
    }
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Permutation {
            images: (0..size).collect(),
        }
    }

    /// From 0-based images; fails unless `images` is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation: {images:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// The transposition exchanging `i` and `i+1` (1-based).
    pub fn adjacent_transposition(size: usize, i: usize) -> Self {
        let mut p = Permutation::identity(size);
        p.images.swap(i - 1, i);
        p
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "permutation size mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Disjoint cycles including fixed points, each starting at its smallest
    /// element, 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1, |acc, c| lcm(acc, c.len() as u64))
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    /// Cycle notation, 1-based, omitting fixed points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// The image of a braid under `B_n → S_n`, `σ_i ↦ (i, i+1)`.
///
/// This is a homomorphism for the functional convention:
/// `permutation_of(w1·w2) = permutation_of(w1) ∘ permutation_of(w2)`.
/// Read as strands, the result sends a bottom position to the top position
/// of the strand that ends there.
pub fn permutation_of(w: &BraidWord) -> Permutation {
    let mut p = Permutation::identity(w.strands());
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize;
        p.images.swap(i - 1, i);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_gives_identity() {
        assert!(permutation_of(&BraidWord::identity(5)).is_identity());
    }

    #[test]
    fn alpha0_is_full_cycle() {
        let w = BraidWord::new(5, vec![1, 2, 3, 4]).unwrap();
        let p = permutation_of(&w);
        assert_eq!(p.to_string(), "(1 2 3 4 5)");
    }

    #[test]
    fn alpha2_fixes_last_two() {
        let w = BraidWord::new(6, vec![1, 2, 3, 4, 4]).unwrap();
        let p = permutation_of(&w);
        assert_eq!(p.to_string(), "(1 2 3 4)");
        assert_eq!(p.apply(4), 4);
        assert_eq!(p.apply(5), 5);
    }

    #[test]
    fn serde_is_one_based() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,3,1]");
        assert!(serde_json::from_str::<Permutation>("[1,1,2]").is_err());
        assert!(serde_json::from_str::<Permutation>("[0,1]").is_err());
    }

    #[test]
    fn order_and_inverse() {
        let p = Permutation::from_images(vec![1, 0, 3, 4, 2]).unwrap();
        assert_eq!(p.order(), 6);
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
