use num_complex::Complex64;
use serde_json::{json, Map};

use crate::error::{Error, Result};

use super::config::{Configuration, SectionOutput, Tolerances};
use super::map::mobius_from_triple;
use super::point::{chordal_distance, ProjectivePoint};

/// Primitive sixth root of unity `e^{iπ/3}`, whose orbit has two points.
pub fn zeta() -> ProjectivePoint {
    ProjectivePoint::finite(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3))
}

fn push_unique(out: &mut Vec<ProjectivePoint>, p: ProjectivePoint, tol: f64) {
    if out.iter().all(|q| chordal_distance(q, &p) > tol) {
        out.push(p);
    }
}

/// The six values `λ, 1/λ, 1−λ, 1/(1−λ), (λ−1)/λ, λ/(λ−1)`, deduplicated at
/// chordal tolerance `tol`.
pub fn d3_orbit(lambda: &ProjectivePoint, tol: f64) -> Vec<ProjectivePoint> {
    let (a, b) = lambda.unit();
    let images = [
        (a, b),
        (b, a),
        (b - a, b),
        (b, b - a),
        (a - b, a),
        (a, a - b),
    ];
    let mut out = Vec::with_capacity(6);
    for (x, y) in images {
        push_unique(&mut out, ProjectivePoint::normalized(x, y), tol);
    }
    out
}

/// Distance from `λ` to the nearest of `0, 1, ∞`.
pub fn distance_to_degenerate(lambda: &ProjectivePoint) -> f64 {
    [ProjectivePoint::real(0.0), ProjectivePoint::real(1.0), ProjectivePoint::infinity()]
        .iter()
        .map(|p| chordal_distance(p, lambda))
        .fold(f64::INFINITY, f64::min)
}

/// All `z4` whose unordered cross-ratio with `z1, z2, z3` is `λ`: the
/// preimages of the orbit of `λ` under `M_{z1,z2,z3}`.
pub fn cross_fiber(
    z1: &ProjectivePoint,
    z2: &ProjectivePoint,
    z3: &ProjectivePoint,
    lambda: &ProjectivePoint,
    tol: &Tolerances,
) -> Result<Vec<ProjectivePoint>> {
    if distance_to_degenerate(lambda) <= tol.sep {
        return Err(Error::DegenerateFiberValue(lambda.to_string()));
    }
    let inv = mobius_from_triple(z1, z2, z3)?.inverse();
    Ok(d3_orbit(lambda, tol.eval).iter().map(|mu| inv.apply(mu)).collect())
}

/// The fiber values used for `m = 2a + 3b + 6c`: `ζ` if `a = 1`, `−1` if
/// `b = 1`, then `c` generic reals from `3, 4, 5, …`, each with a full orbit
/// disjoint from the earlier ones.
pub fn three_point_lambdas(m: usize, tol: f64) -> Result<Vec<ProjectivePoint>> {
    let (a, b) = match m % 6 {
        0 => (0, 0),
        2 => (1, 0),
        3 => (0, 1),
        5 => (1, 1),
        _ => {
            return Err(Error::Infeasible {
                n: 3,
                m,
                reason: "m must be 0 or 2 mod 3".into(),
            })
        }
    };
    let c = (m - 2 * a - 3 * b) / 6;
    let mut lambdas = Vec::new();
    if a == 1 {
        lambdas.push(zeta());
    }
    if b == 1 {
        lambdas.push(ProjectivePoint::real(-1.0));
    }
    let mut taken: Vec<ProjectivePoint> = lambdas.iter().flat_map(|l| d3_orbit(l, tol)).collect();
    let mut candidate = 3.0;
    while lambdas.len() < a + b + c {
        let lam = ProjectivePoint::real(candidate);
        candidate += 1.0;
        let orbit = d3_orbit(&lam, tol);
        let clash = orbit
            .iter()
            .any(|p| taken.iter().any(|q| chordal_distance(p, q) <= tol));
        if orbit.len() == 6 && !clash {
            taken.extend(orbit);
            lambdas.push(lam);
        }
    }
    Ok(lambdas)
}

/// The `n = 3` section: the union of the fibers of the chosen `λ` values.
pub fn section_three(config: &Configuration, m: usize, tol: &Tolerances) -> Result<SectionOutput> {
    if config.n() != 3 {
        return Err(Error::InvalidArgument(format!(
            "three-point section needs n = 3, got {}",
            config.n()
        )));
    }
    let lambdas = three_point_lambdas(m, tol.eval)?;
    let [z1, z2, z3] = [config.points()[0], config.points()[1], config.points()[2]];
    let mut points = Vec::with_capacity(m);
    for lam in &lambdas {
        points.extend(cross_fiber(&z1, &z2, &z3, lam, tol)?);
    }
    let mut params = Map::new();
    params.insert("lambdas".into(), json!(lambdas));
    let out = SectionOutput::new("cross_ratio", points, params);
    out.validate(config, tol)?;
    Ok(out)
}
