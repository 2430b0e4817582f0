//! The distinguished words of `B_n`: the torsion representatives `α_0, α_1,
//! α_2`, the sphere relation `R_n`, the full twist `ω`, and the identity suite
//! relating them.

use serde::Serialize;

use crate::error::{Error, Result};

use super::perm::gcd;
use super::{equal_in_artin, BraidWord};

fn need_three(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooSmall { needed: 3, got: n });
    }
    Ok(())
}

/// `σ_a σ_{a+1} ⋯ σ_b` (empty when `b < a`).
fn ascending(a: usize, b: usize) -> Vec<i32> {
    (a..=b).map(|i| i as i32).collect()
}

/// `α_0 = σ_1⋯σ_{n-1}`, `α_1 = σ_1⋯σ_{n-2}σ_{n-1}²`, `α_2 = σ_1⋯σ_{n-3}σ_{n-2}²`.
pub fn torsion_element(kind: u8, n: usize) -> Result<BraidWord> {
    need_three(n)?;
    let letters = match kind {
        0 => ascending(1, n - 1),
        1 => {
            let mut l = ascending(1, n - 1);
            l.push((n - 1) as i32);
            l
        }
        2 => {
            let mut l = ascending(1, n - 2);
            l.push((n - 2) as i32);
            l
        }
        k => return Err(Error::InvalidTorsionKind(k)),
    };
    BraidWord::new(n, letters)
}

/// Cycle structure of the permutation of `α_kind^power`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleStructure {
    /// Lengths of the cycles on the `n - kind` rotated points.
    pub cycle_lengths: Vec<usize>,
    /// Old points the element leaves fixed outright (`kind` of them).
    pub fixed_points: usize,
}

/// `(1 ⋯ n-kind)^power` splits into `gcd(power, n-kind)` cycles of length
/// `(n-kind)/gcd(power, n-kind)`.
pub fn torsion_cycle_structure(kind: u8, power: i64, n: usize) -> Result<CycleStructure> {
    need_three(n)?;
    if kind > 2 {
        return Err(Error::InvalidTorsionKind(kind));
    }
    let moved = (n - kind as usize) as u64;
    let g = gcd(power.unsigned_abs() % moved, moved);
    let g = if g == 0 { moved } else { g };
    Ok(CycleStructure {
        cycle_lengths: vec![(moved / g) as usize; g as usize],
        fixed_points: kind as usize,
    })
}

/// `R_n = σ_1 ⋯ σ_{n-1} σ_{n-1} ⋯ σ_1`.
pub fn relation_word(n: usize) -> Result<BraidWord> {
    need_three(n)?;
    let mut l = ascending(1, n - 1);
    l.extend((1..n).rev().map(|i| i as i32));
    BraidWord::new(n, l)
}

/// The full twist `ω = (σ_1⋯σ_{n-1})^n`.
pub fn omega(n: usize) -> Result<BraidWord> {
    Ok(torsion_element(0, n)?.pow(n as i64))
}

/// One identity of the suite with its verdict in `B_n`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Every conjugation and full-twist identity among the torsion elements,
/// decided exactly in `B_n`:
///
/// - `α_0^i σ_1 α_0^{-i} = σ_{1+i}` for `1 ≤ i ≤ n-2`,
/// - `α_1^i σ_1 α_1^{-i} = σ_{1+i}` for `1 ≤ i ≤ n-3`,
/// - `α_0^n = Δ²`, `α_1^{n-1} = α_0^n`,
/// - `(σ_1⋯σ_{n-1}) α_2^{n-2} (σ_{n-1}⋯σ_1) = α_0^n`.
pub fn identity_suite(n: usize) -> Result<Vec<IdentityCheck>> {
    need_three(n)?;
    let a0 = torsion_element(0, n)?;
    let a1 = torsion_element(1, n)?;
    let a2 = torsion_element(2, n)?;
    let s1 = BraidWord::generator(n, 1, true)?;
    let mut out = Vec::new();

    for (label, alpha, top) in [("alpha0", &a0, n - 2), ("alpha1", &a1, n.saturating_sub(3))] {
        for i in 1..=top {
            let lhs = alpha.pow(i as i64).compose(&s1)?.compose(&alpha.pow(-(i as i64)))?;
            let rhs = BraidWord::generator(n, 1 + i, true)?;
            out.push(IdentityCheck {
                name: format!("{label}^{i} s1 {label}^-{i} = s{}", 1 + i),
                holds: equal_in_artin(&lhs, &rhs)?,
            });
        }
    }

    let w = a0.pow(n as i64);
    let full_twist = super::delta_word(n).pow(2);
    out.push(IdentityCheck {
        name: format!("alpha0^{n} = delta^2"),
        holds: equal_in_artin(&w, &full_twist)?,
    });
    out.push(IdentityCheck {
        name: format!("alpha1^{} = alpha0^{n}", n - 1),
        holds: equal_in_artin(&a1.pow(n as i64 - 1), &w)?,
    });
    let descending = BraidWord::new(n, (1..n).rev().map(|i| i as i32).collect())?;
    let conj = a0.compose(&a2.pow(n as i64 - 2))?.compose(&descending)?;
    out.push(IdentityCheck {
        name: format!("s1..s{m} alpha2^{} s{m}..s1 = alpha0^{n}", n - 2, m = n - 1),
        holds: equal_in_artin(&conj, &w)?,
    });
    Ok(out)
}
