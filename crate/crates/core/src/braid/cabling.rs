//! Cabling homomorphisms `B_n → B_{nk}`.
//!
//! Strand `j` of a braid on `n` strands is replaced by a block of `k` parallel
//! strands occupying positions `(j-1)k+1 ..= jk`. A letter `σ_i` becomes the
//! block crossing of blocks `i` and `i+1` (every strand of block `i` passes
//! over every strand of block `i+1` once) together with internal braids: the
//! block at position `i` receives `φ^{a_i}`, the block at position `i+1`
//! receives `φ^{t-a_i}`, and every other block receives `φ^c`. The internal
//! braids are inserted before the block crossing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{delta_word, permutation_of, relation_word, BraidWord};

/// `(φ; a_1, …, a_{n-1}, c, t)` for a cabling of `B_n` with `k`-strand cables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CablingVector {
    phi: BraidWord,
    a: Vec<i64>,
    c: i64,
    t: i64,
}

impl CablingVector {
    /// `phi` must lie in `B_{k-1,1}`: its permutation fixes the last strand.
    pub fn new(phi: BraidWord, a: Vec<i64>, c: i64, t: i64) -> Result<Self> {
        let k = phi.strands();
        if k < 2 {
            return Err(Error::TooSmall { needed: 2, got: k });
        }
        if permutation_of(&phi).apply(k - 1) != k - 1 {
            return Err(Error::CableNotFixing);
        }
        if a.len() < 2 {
            return Err(Error::TooSmall {
                needed: 3,
                got: a.len() + 1,
            });
        }
        Ok(CablingVector { phi, a, c, t })
    }

    /// The sphere-compatible vector: `k = k'(n-1)(n-2) + 1`,
    /// `φ = (σ_1⋯σ_{k-2}σ_{k-1}²)^{k'}`, `c = -1`, `t = 2n-4`, `a` arbitrary.
    pub fn sphere_compatible(n: usize, k_prime: usize, a: Vec<i64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall { needed: 3, got: n });
        }
        if k_prime == 0 {
            return Err(Error::InvalidArgument("k' must be positive".into()));
        }
        if a.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} twist exponents, got {}",
                n - 1,
                a.len()
            )));
        }
        let k = k_prime * (n - 1) * (n - 2) + 1;
        let mut letters: Vec<i32> = (1..k as i32).collect();
        letters.push(k as i32 - 1);
        let phi = BraidWord::new(k, letters)?.pow(k_prime as i64);
        CablingVector::new(phi, a, -1, 2 * n as i64 - 4)
    }

    /// Number of strands in the braid being cabled.
    pub fn n(&self) -> usize {
        self.a.len() + 1
    }

    /// Strands per cable.
    pub fn k(&self) -> usize {
        self.phi.strands()
    }

    pub fn phi(&self) -> &BraidWord {
        &self.phi
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    /// φ-exponents given to the blocks at positions `i` and `i+1` and to the
    /// rest, for the letter `σ_i` (1-based).
    fn letter_exponents(&self, i: usize) -> (i64, i64, i64) {
        let ai = self.a[i - 1];
        (ai, self.t - ai, self.c)
    }
}

/// The block crossing of blocks `i` and `i+1` (1-based) in `B_{nk}`:
/// `∏_{r=1}^{k} σ_{b+k+r-1} σ_{b+k+r-2} ⋯ σ_{b+r}` with `b = (i-1)k`.
pub fn block_crossing(n: usize, k: usize, i: usize) -> BraidWord {
    let b = (i - 1) * k;
    let mut letters = Vec::with_capacity(k * k);
    for r in 1..=k {
        letters.extend((b + r..=b + k + r - 1).rev().map(|j| j as i32));
    }
    BraidWord::new(n * k, letters).expect("in range")
}

fn cable_letter(v: &CablingVector, i: usize) -> BraidWord {
    let (n, k) = (v.n(), v.k());
    let (lo, hi, rest) = v.letter_exponents(i);
    let mut out = BraidWord::identity(n * k);
    for block in 1..=n {
        let e = if block == i {
            lo
        } else if block == i + 1 {
            hi
        } else {
            rest
        };
        if e != 0 {
            out.push_word(&v.phi.pow(e).embed(n * k, (block - 1) * k).expect("fits"));
        }
    }
    out.push_word(&block_crossing(n, k, i));
    out
}

/// `c_v(w)`, letter by letter.
pub fn cable(v: &CablingVector, w: &BraidWord) -> Result<BraidWord> {
    if w.strands() != v.n() {
        return Err(Error::StrandMismatch {
            left: v.n(),
            right: w.strands(),
        });
    }
    let n = v.n();
    let mut pos_cache: Vec<Option<BraidWord>> = vec![None; n];
    let mut out = BraidWord::identity(n * v.k());
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize;
        let cabled = pos_cache[i].get_or_insert_with(|| cable_letter(v, i));
        if l > 0 {
            out.push_word(cabled);
        } else {
            out.push_word(&cabled.inverse());
        }
    }
    Ok(out)
}

/// Cabling with no internal braids at all.
pub fn plain_cable(w: &BraidWord, k: usize) -> BraidWord {
    let n = w.strands();
    let mut out = BraidWord::identity(n * k);
    for &l in w.letters() {
        let x = block_crossing(n, k, l.unsigned_abs() as usize);
        if l > 0 {
            out.push_word(&x);
        } else {
            out.push_word(&x.inverse());
        }
    }
    out
}

/// Total φ-exponent carried by each strand of `w` (indexed by its starting
/// position) once `w` is cabled with `v`.
pub fn exponent_ledger(v: &CablingVector, w: &BraidWord) -> Result<Vec<i64>> {
    if w.strands() != v.n() {
        return Err(Error::StrandMismatch {
            left: v.n(),
            right: w.strands(),
        });
    }
    let n = v.n();
    // at[p] = starting index of the strand currently at position p
    let mut at: Vec<usize> = (0..n).collect();
    let mut ledger = vec![0i64; n];
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize;
        let (lo, hi, rest) = v.letter_exponents(i);
        if l > 0 {
            for (p, &s) in at.iter().enumerate() {
                ledger[s] += match p + 1 {
                    q if q == i => lo,
                    q if q == i + 1 => hi,
                    _ => rest,
                };
            }
        } else {
            // c_v(σ_i⁻¹) = c_v(σ_i)⁻¹: the strand leaving position i+1 undoes `lo`.
            for (p, &s) in at.iter().enumerate() {
                ledger[s] -= match p + 1 {
                    q if q == i + 1 => lo,
                    q if q == i => hi,
                    _ => rest,
                };
            }
        }
        at.swap(i - 1, i);
    }
    Ok(ledger)
}

/// `R_n(k)`: the plain `k`-cabling of `R_n` followed by two full twists of the
/// block where the first cable ends.
pub fn cabled_relation_target(n: usize, k: usize) -> Result<BraidWord> {
    if k < 2 {
        return Err(Error::TooSmall { needed: 2, got: k });
    }
    let r = relation_word(n)?;
    let mut out = plain_cable(&r, k);
    // R_n is pure, so the first cable ends in block 1.
    let end_block = permutation_of(&r).inverse().apply(0);
    let twists = delta_word(k).pow(4).embed(n * k, end_block * k)?;
    out.push_word(&twists);
    Ok(out)
}
