//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_sections::mobius::{
    chordal_distance, min_separation, Configuration, MobiusMap, ProjectivePoint, Tolerances,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the sphere.
pub fn random_point(rng: &mut impl Rng) -> ProjectivePoint {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r2 = v.iter().map(|x| x * x).sum::<f64>();
        if r2 > 1e-3 && r2 <= 1.0 {
            return ProjectivePoint::from_sphere(v).unwrap();
        }
    }
}

pub fn random_config(rng: &mut impl Rng, n: usize, min_sep: f64) -> Configuration {
    loop {
        let pts: Vec<ProjectivePoint> = (0..n).map(|_| random_point(rng)).collect();
        if min_separation(&pts) > min_sep {
            return Configuration::new(pts, &Tolerances::default()).unwrap();
        }
    }
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A random map with condition number at most `max_cond` (ratio of the
/// singular values of its unit-determinant matrix).
pub fn random_mobius(rng: &mut impl Rng, max_cond: f64) -> MobiusMap {
    loop {
        let e = [random_complex(rng), random_complex(rng), random_complex(rng), random_complex(rng)];
        let Ok(m) = MobiusMap::new(e[0], e[1], e[2], e[3]) else { continue };
        // With det = 1, σ₁σ₂ = 1 and σ₁² + σ₂² = ‖M‖_F².
        let fro: f64 = m.matrix().iter().flatten().map(|c| c.norm_sqr()).sum();
        let s1 = ((fro + (fro * fro - 4.0).max(0.0).sqrt()) / 2.0).sqrt();
        if s1 * s1 <= max_cond {
            return m;
        }
    }
}

/// All permutations of `0..n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Whether every point of `a` has a partner in `b` within `tol` under a
/// bijection found greedily by nearest distance.
pub fn same_set(a: &[ProjectivePoint], b: &[ProjectivePoint], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|p| {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| chordal_distance(p, &b[i]).total_cmp(&chordal_distance(p, &b[j])));
        match best {
            Some(j) if chordal_distance(p, &b[j]) <= tol => {
                used[j] = true;
                true
            }
            _ => false,
        }
    })
}

/// Affine points of `y² = x(x−1)(x−λ)`; `None` is the point at infinity.
type Pt = Option<(Complex64, Complex64)>;

fn close(u: Complex64, v: Complex64, scale: f64) -> bool {
    (u - v).norm() <= 1e-7 * scale
}

fn add(l: Complex64, p: Pt, q: Pt) -> Pt {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.or(q);
    };
    let a = -(l + 1.0);
    let b = l;
    let scale = 1.0 + x1.norm() + x2.norm() + y1.norm() + y2.norm();
    let s = if close(x1, x2, scale) {
        if close(y1, -y2, scale) {
            return None;
        }
        (x1 * x1 * 3.0 + a * x1 * 2.0 + b) / (y1 * 2.0)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = s * s - a - x1 - x2;
    let y3 = -(y1 + s * (x3 - x1));
    Some((x3, y3))
}

/// Lift `x` to a curve point and report the first `j` with `jP = O`
/// (capped at `max_order`), together with the mismatch between `(j−1)P`
/// and `−P` at that step, relative to the point's size.
pub fn torsion_order(lambda: Complex64, x: Complex64, max_order: usize) -> (Option<usize>, f64) {
    let y = (x * (x - 1.0) * (x - lambda)).sqrt();
    let p = Some((x, y));
    let scale = 1.0 + x.norm() + y.norm();
    let mut q = p;
    for j in 2..=max_order {
        if let Some((xq, yq)) = q {
            let r = ((xq - x).norm() + (yq + y).norm()) / scale;
            if r < 1e-6 {
                return (Some(j), r);
            }
        }
        q = add(lambda, q, p);
    }
    (None, f64::INFINITY)
}

/// Independent statement of the table, written from the residue conditions
/// and the list of known constructions.
pub fn expected_status(n: usize, m: usize) -> sphere_sections::feasibility::Status {
    use sphere_sections::feasibility::Status::*;
    if m == 0 {
        return ExistsConstructive;
    }
    if n == 3 {
        return if m % 3 == 1 { NotExists } else { ExistsConstructive };
    }
    let (ni, q) = (n as i64, (n * (n - 1) * (n - 2)) as i64);
    let allowed = [0, (ni - 1) * (ni - 2), -ni * (ni - 2), -(ni - 2)]
        .iter()
        .any(|r| (m as i64 - r).rem_euclid(q) == 0);
    if !allowed {
        return NotExists;
    }
    let divisible = m as i64 % q == 0;
    match n {
        4 if [6, 16, 24, 30, 48, 70].contains(&m) || m >= 70 || divisible => ExistsConstructive,
        4 => Unknown,
        5 if divisible => ExistsConstructive,
        5 => Unknown,
        _ if divisible => ExistsConstructive,
        _ => NotExists,
    }
}
