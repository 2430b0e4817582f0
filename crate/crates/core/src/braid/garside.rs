//! Left-greedy Garside normal form in the Artin braid group `B_n`.
//!
//! Every braid is written uniquely as `Δ^p · A_1 ⋯ A_r` where each `A_j` is a
//! positive permutation braid different from `Δ` and `1`, and every adjacent
//! pair `(A_j, A_{j+1})` is left-weighted: each crossing that could start
//! `A_{j+1}` already finishes `A_j`. Two words are equal in `B_n` iff their
//! normal forms coincide.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{BraidWord, Permutation};

/// A positive permutation braid: every pair of strands crosses at most once,
/// always positively.
///
/// `pos[s]` is the bottom position of the strand starting at top position
/// `s`; `inv` is its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Simple {
    pos: Vec<u16>,
    inv: Vec<u16>,
}

impl Simple {
    fn identity(n: usize) -> Self {
        let pos: Vec<u16> = (0..n as u16).collect();
        Simple {
            inv: pos.clone(),
            pos,
        }
    }

    fn delta(n: usize) -> Self {
        let pos: Vec<u16> = (0..n as u16).rev().collect();
        Simple {
            inv: pos.clone(),
            pos,
        }
    }

    /// `σ_{i+1}` for the 0-based crossing slot `i`.
    fn generator(n: usize, i: usize) -> Self {
        let mut s = Simple::identity(n);
        s.pos.swap(i, i + 1);
        s.inv.swap(i, i + 1);
        s
    }

    fn from_permutation(p: &Permutation) -> Self {
        // permutation_of sends bottom positions to top positions.
        let inv: Vec<u16> = p.images().iter().map(|&i| i as u16).collect();
        let mut pos = vec![0u16; inv.len()];
        for (b, &t) in inv.iter().enumerate() {
            pos[t as usize] = b as u16;
        }
        Simple { pos, inv }
    }

    fn permutation(&self) -> Permutation {
        Permutation::from_images(self.inv.iter().map(|&i| i as usize).collect())
            .expect("simple braid carries a bijection")
    }

    fn len(&self) -> usize {
        self.pos.len()
    }

    fn is_identity(&self) -> bool {
        self.pos.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    fn is_delta(&self) -> bool {
        let n = self.len();
        self.pos.iter().enumerate().all(|(i, &p)| p as usize == n - 1 - i)
    }

    /// Slot `i` is in the starting set iff the strands starting at `i` and
    /// `i+1` cross.
    fn starts_with(&self, i: usize) -> bool {
        self.pos[i] > self.pos[i + 1]
    }

    /// Slot `i` is in the finishing set iff the strands ending at `i` and
    /// `i+1` have crossed.
    fn finishes_with(&self, i: usize) -> bool {
        self.inv[i] > self.inv[i + 1]
    }

    /// `self ← self · σ_{i+1}`; caller guarantees the product stays simple.
    fn right_multiply(&mut self, i: usize) {
        let a = self.inv[i] as usize;
        let b = self.inv[i + 1] as usize;
        self.inv.swap(i, i + 1);
        self.pos[a] = (i + 1) as u16;
        self.pos[b] = i as u16;
    }

    /// `self ← σ_{i+1}⁻¹ · self`; caller guarantees `i` is a starting slot.
    fn left_divide(&mut self, i: usize) {
        let a = self.pos[i] as usize;
        let b = self.pos[i + 1] as usize;
        self.pos.swap(i, i + 1);
        self.inv[a] = (i + 1) as u16;
        self.inv[b] = i as u16;
    }

    /// Conjugation by `Δ`, which sends `σ_i` to `σ_{n-i}`.
    fn flip(&self) -> Self {
        let n = self.len();
        let top = (n - 1) as u16;
        let mut pos = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for s in 0..n {
            pos[s] = top - self.pos[n - 1 - s];
            inv[s] = top - self.inv[n - 1 - s];
        }
        Simple { pos, inv }
    }

    /// A positive word spelling this permutation braid.
    fn to_letters(&self) -> Vec<i32> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        'outer: loop {
            for i in 0..rest.len() - 1 {
                if rest.starts_with(i) {
                    out.push(i as i32 + 1);
                    rest.left_divide(i);
                    continue 'outer;
                }
            }
            break;
        }
        out
    }
}

/// Make `(a, b)` left-weighted by moving crossings from the front of `b` to
/// the end of `a`. Returns whether anything moved.
fn left_weight(a: &mut Simple, b: &mut Simple) -> bool {
    let n = a.len();
    let mut changed = false;
    'outer: loop {
        for i in 0..n - 1 {
            if b.starts_with(i) && !a.finishes_with(i) {
                a.right_multiply(i);
                b.left_divide(i);
                changed = true;
                continue 'outer;
            }
        }
        return changed;
    }
}

fn is_left_weighted(a: &Simple, b: &Simple) -> bool {
    (0..a.len() - 1).all(|i| !b.starts_with(i) || a.finishes_with(i))
}

/// Append `s` on the right of a left-weighted factor list and restore
/// left-weightedness.
fn push_factor(factors: &mut Vec<Simple>, s: Simple) {
    if s.is_identity() {
        return;
    }
    factors.push(s);
    let mut j = factors.len() - 1;
    while j > 0 {
        let (head, tail) = factors.split_at_mut(j);
        if !left_weight(&mut head[j - 1], &mut tail[0]) {
            break;
        }
        j -= 1;
    }
    while factors.last().is_some_and(Simple::is_identity) {
        factors.pop();
    }
}

/// Canonical form `Δ^delta_power · factors[0] ⋯ factors[r-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GarsideNormalForm {
    strands: usize,
    delta_power: i64,
    factors: Vec<Simple>,
}

impl GarsideNormalForm {
    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The infimum: the exponent of `Δ`.
    pub fn delta_power(&self) -> i64 {
        self.delta_power
    }

    /// Canonical length (number of non-`Δ` factors).
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    /// Factors as permutations, in the `permutation_of` convention.
    pub fn factor_permutations(&self) -> Vec<Permutation> {
        self.factors.iter().map(Simple::permutation).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.delta_power == 0 && self.factors.is_empty()
    }

    /// Rebuild a normal form from its parts, checking every invariant.
    pub fn from_parts(
        strands: usize,
        delta_power: i64,
        factors: &[Permutation],
    ) -> Result<Self> {
        if strands == 0 {
            return Err(Error::TooSmall { needed: 1, got: 0 });
        }
        if strands > MAX_STRANDS {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_STRANDS} strands supported"
            )));
        }
        let mut simples = Vec::with_capacity(factors.len());
        for p in factors {
            if p.size() != strands {
                return Err(Error::StrandMismatch {
                    left: strands,
                    right: p.size(),
                });
            }
            simples.push(Simple::from_permutation(p));
        }
        if simples.first().is_some_and(Simple::is_delta) {
            return Err(Error::InvalidArgument(
                "leading factor Δ belongs in delta_power".into(),
            ));
        }
        if simples.iter().any(Simple::is_identity) {
            return Err(Error::InvalidArgument("identity factor in normal form".into()));
        }
        if let Some(k) = simples
            .windows(2)
            .position(|w| !is_left_weighted(&w[0], &w[1]))
        {
            return Err(Error::InvalidArgument(format!(
                "factors {k} and {} are not left-weighted",
                k + 1
            )));
        }
        Ok(GarsideNormalForm {
            strands,
            delta_power,
            factors: simples,
        })
    }

    /// Spell the normal form back as a braid word.
    pub fn to_word(&self) -> BraidWord {
        let mut w = delta_word(self.strands).pow(self.delta_power);
        for f in &self.factors {
            let letters = f.to_letters();
            w.push_word(&BraidWord::new(self.strands, letters).expect("in range"));
        }
        w
    }
}

/// The positive half twist `Δ = (σ_1⋯σ_{n-1})(σ_1⋯σ_{n-2})⋯σ_1`.
pub fn delta_word(strands: usize) -> BraidWord {
    let mut letters = Vec::with_capacity(strands * (strands.saturating_sub(1)) / 2);
    for top in (1..strands).rev() {
        letters.extend(1..=top as i32);
    }
    BraidWord::new(strands, letters).expect("in range")
}

/// Largest strand count the normal form supports.
pub const MAX_STRANDS: usize = u16::MAX as usize;

/// Left-greedy Garside normal form of `w` in `B_n`.
///
/// Panics if `w` has more than [`MAX_STRANDS`] strands.
pub fn normal_form(w: &BraidWord) -> GarsideNormalForm {
    let n = w.strands();
    assert!(n <= MAX_STRANDS, "normal form supports at most {MAX_STRANDS} strands");
    let w = w.free_reduce();
    if n == 1 {
        return GarsideNormalForm {
            strands: 1,
            delta_power: 0,
            factors: Vec::new(),
        };
    }
    // σ_i⁻¹ = Δ⁻¹ · (Δσ_i⁻¹), and A·Δ⁻¹ = Δ⁻¹·flip(A): every factor is flipped
    // once per inverse letter to its right.
    let total_neg = w.letters().iter().filter(|&&l| l < 0).count();
    let mut negs_after = total_neg;
    let mut factors: Vec<Simple> = Vec::new();
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize - 1;
        let mut s = if l > 0 {
            Simple::generator(n, i)
        } else {
            negs_after -= 1;
            let mut d = Simple::delta(n);
            d.right_multiply(i);
            d
        };
        if negs_after % 2 == 1 {
            s = s.flip();
        }
        push_factor(&mut factors, s);
    }
    let leading = factors.iter().take_while(|f| f.is_delta()).count();
    factors.drain(..leading);
    debug_assert!(factors.windows(2).all(|p| is_left_weighted(&p[0], &p[1])));
    GarsideNormalForm {
        strands: n,
        delta_power: leading as i64 - total_neg as i64,
        factors,
    }
}

/// Decide `w1 = w2` in `B_n`.
pub fn equal_in_artin(w1: &BraidWord, w2: &BraidWord) -> Result<bool> {
    if w1.strands() != w2.strands() {
        return Err(Error::StrandMismatch {
            left: w1.strands(),
            right: w2.strands(),
        });
    }
    // w1 = w2 iff w1·w2⁻¹ is trivial; one normal form is cheaper than two.
    let q = w1.compose(&w2.inverse())?;
    Ok(normal_form(&q).is_identity())
}

#[derive(Serialize, Deserialize)]
struct RawNormalForm {
    strands: usize,
    delta_power: i64,
    factors: Vec<Permutation>,
}

impl Serialize for GarsideNormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawNormalForm {
            strands: self.strands,
            delta_power: self.delta_power,
            factors: self.factor_permutations(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GarsideNormalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawNormalForm::deserialize(d)?;
        GarsideNormalForm::from_parts(raw.strands, raw.delta_power, &raw.factors)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::permutation_of;

    fn w(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn trivial_word() {
        let nf = normal_form(&w(3, &[1, -1]));
        assert_eq!(nf.delta_power(), 0);
        assert_eq!(nf.canonical_length(), 0);
    }

    #[test]
    fn braid_relation() {
        assert_eq!(normal_form(&w(3, &[1, 2, 1])), normal_form(&w(3, &[2, 1, 2])));
        assert!(equal_in_artin(&w(3, &[1, 2, 1]), &w(3, &[2, 1, 2])).unwrap());
        assert!(!equal_in_artin(&w(3, &[1]), &w(3, &[2])).unwrap());
    }

    #[test]
    fn full_twist_two_ways() {
        // (σ1σ2)^3 = (σ1σ2²)^2 = Δ² in B_3
        let a = normal_form(&w(3, &[1, 2, 1, 2, 1, 2]));
        let b = normal_form(&w(3, &[1, 2, 2, 1, 2, 2]));
        assert_eq!(a, b);
        assert_eq!(a.delta_power(), 2);
        assert_eq!(a.canonical_length(), 0);
    }

    #[test]
    fn delta_is_single_power() {
        for n in 2..7 {
            let nf = normal_form(&delta_word(n));
            assert_eq!(nf.delta_power(), 1);
            assert_eq!(nf.canonical_length(), 0);
            let inv = normal_form(&delta_word(n).inverse());
            assert_eq!(inv.delta_power(), -1);
            assert_eq!(inv.canonical_length(), 0);
        }
    }

    #[test]
    fn inverse_generator_form() {
        // σ1⁻¹ = Δ⁻¹ · (σ2σ1) in B_3 after flipping.
        let nf = normal_form(&w(3, &[-1]));
        assert_eq!(nf.delta_power(), -1);
        assert_eq!(nf.canonical_length(), 1);
        assert!(equal_in_artin(&nf.to_word(), &w(3, &[-1])).unwrap());
    }

    #[test]
    fn distinct_permutations_distinct_forms() {
        let a = w(4, &[1, 2, 3]);
        let b = w(4, &[3, 2, 1]);
        assert_ne!(permutation_of(&a), permutation_of(&b));
        assert_ne!(normal_form(&a), normal_form(&b));
    }

    #[test]
    fn strand_mismatch() {
        assert!(equal_in_artin(&w(3, &[1]), &w(4, &[1])).is_err());
    }

    #[test]
    fn from_parts_validates() {
        let nf = normal_form(&w(4, &[1, 2, -3, 1, 3, 2, 2]));
        let rebuilt =
            GarsideNormalForm::from_parts(4, nf.delta_power(), &nf.factor_permutations()).unwrap();
        assert_eq!(rebuilt, nf);
        let id = Permutation::identity(4);
        assert!(GarsideNormalForm::from_parts(4, 0, &[id]).is_err());
        let delta = Simple::delta(4).permutation();
        assert!(GarsideNormalForm::from_parts(4, 0, &[delta]).is_err());
        // σ2 · σ1 is not left-weighted; σ1 · σ1 is.
        let s1 = Permutation::adjacent_transposition(4, 1);
        let s2 = Permutation::adjacent_transposition(4, 2);
        assert!(GarsideNormalForm::from_parts(4, 0, &[s2, s1.clone()]).is_err());
        assert!(GarsideNormalForm::from_parts(4, 0, &[s1.clone(), s1]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let nf = normal_form(&w(4, &[1, -2, 3, 3, 2, -1]));
        let s = serde_json::to_string(&nf).unwrap();
        assert!(s.starts_with(r#"{"strands":4,"delta_power":"#));
        let back: GarsideNormalForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, nf);
    }
}
