use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::point::{chordal_distance, det, ProjectivePoint};

/// Pairs closer than this in the chordal metric are treated as the same
/// point when building maps from them.
const COINCIDENT: f64 = 1e-14;

/// The fractional-linear map `z ↦ (αz + β)/(γz + δ)`, acting on homogeneous
/// pairs as the matrix `[[α, β], [γ, δ]]`. Stored with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    m: [[Complex64; 2]; 2],
}

impl MobiusMap {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let d = alpha * delta - beta * gamma;
        let scale = alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr() + delta.norm_sqr();
        if !(d.norm() > 1e-14 * scale) || !d.norm().is_finite() {
            return Err(Error::InvalidArgument("singular Möbius matrix".into()));
        }
        let s = d.sqrt().inv();
        Ok(MobiusMap {
            m: [[alpha * s, beta * s], [gamma * s, delta * s]],
        })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MobiusMap {
            m: [[one, zero], [zero, one]],
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let (a, b) = p.unit();
        let [[al, be], [ga, de]] = self.m;
        ProjectivePoint::normalized(al * a + be * b, ga * a + de * b)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let (u, v) = (self.m, other.m);
        let mut out = [[Complex64::default(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = u[i][0] * v[0][j] + u[i][1] * v[1][j];
            }
        }
        MobiusMap { m: out }
    }

    pub fn inverse(&self) -> MobiusMap {
        let [[a, b], [c, d]] = self.m;
        MobiusMap {
            m: [[d, -b], [-c, a]],
        }
    }
}

fn check_distinct(pts: &[&ProjectivePoint]) -> Result<()> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if chordal_distance(pts[i], pts[j]) < COINCIDENT {
                return Err(Error::CoincidentPoints(i, j));
            }
        }
    }
    Ok(())
}

/// The unique map sending `z1, z2, z3` to `0, 1, ∞`:
/// `M(w) = [det(w,z1)·det(z2,z3) : det(w,z3)·det(z2,z1)]`.
pub fn mobius_from_triple(
    z1: &ProjectivePoint,
    z2: &ProjectivePoint,
    z3: &ProjectivePoint,
) -> Result<MobiusMap> {
    check_distinct(&[z1, z2, z3])?;
    let (p1, p2, p3) = (z1.unit(), z2.unit(), z3.unit());
    let k1 = det(p2, p3);
    let k3 = det(p2, p1);
    MobiusMap::new(k1 * p1.1, -k1 * p1.0, k3 * p3.1, -k3 * p3.0)
}

/// `[z1, z2; z3, z4] = M_{z1,z2,z3}(z4)`.
pub fn cross_ratio(
    z1: &ProjectivePoint,
    z2: &ProjectivePoint,
    z3: &ProjectivePoint,
    z4: &ProjectivePoint,
) -> Result<ProjectivePoint> {
    Ok(mobius_from_triple(z1, z2, z3)?.apply(z4))
}
