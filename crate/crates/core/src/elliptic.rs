//! Four-point sections from torsion of the Legendre curve
//! `y² = x(x−1)(x−λ)` branched over the configuration.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map};

use crate::error::{Error, Result};
use crate::mobius::{
    chordal_distance, cross_separation, d3_orbit, distance_to_degenerate, mobius_from_triple,
    Configuration, MobiusMap, ProjectivePoint, SectionOutput, Tolerances,
};
use crate::poly::{aberth, Poly};
use crate::spacelevel::{section_general, LevelRule};

/// Orbits closer than this to `{0, 1, ∞}` are refused.
pub const CONDITIONING: f64 = 1e-4;

/// Torsion x-values closer than this (chordally) are identified.
const DEDUP: f64 = 1e-8;

/// Sizes the torsion constructions reach directly.
pub const DIRECT_SIZES: [usize; 6] = [6, 16, 24, 30, 48, 70];

/// `y² = x(x−1)(x−λ) = x³ + Ax² + Bx` with `A = −(1+λ)`, `B = λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LegendreCurve {
    lambda: Complex64,
}

impl LegendreCurve {
    pub fn new(lambda: Complex64) -> Result<Self> {
        let d = distance_to_degenerate(&ProjectivePoint::finite(lambda));
        if !(d > 0.0) {
            return Err(Error::DegenerateFiberValue(lambda.to_string()));
        }
        Ok(LegendreCurve { lambda })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `x(x−1)(x−λ)`.
    pub fn rhs(&self, x: Complex64) -> Complex64 {
        x * (x - 1.0) * (x - self.lambda)
    }

    fn a(&self) -> Complex64 {
        -(self.lambda + 1.0)
    }

    fn b(&self) -> Complex64 {
        self.lambda
    }
}

/// Which torsion points a construction uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSpec {
    pub k: usize,
    /// `false`: all `2k`-torsion away from the 2-torsion (`2k² − 2` values).
    /// `true`: points of exact order `4k` (`P(4k)/2` values).
    pub primitive: bool,
}

impl TorsionSpec {
    pub fn full(k: usize) -> Self {
        TorsionSpec { k, primitive: false }
    }

    pub fn primitive(k: usize) -> Self {
        TorsionSpec { k, primitive: true }
    }

    pub fn validate(&self) -> Result<()> {
        let min = if self.primitive { 1 } else { 2 };
        if self.k < min {
            return Err(Error::InvalidArgument(format!(
                "torsion spec needs k >= {min}, got {}",
                self.k
            )));
        }
        if self.order() > 64 {
            return Err(Error::InvalidArgument(format!(
                "torsion order {} exceeds the supported 64",
                self.order()
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        if self.primitive {
            4 * self.k
        } else {
            2 * self.k
        }
    }

    /// Number of x-values, hence of new points.
    pub fn count(&self) -> usize {
        if self.primitive {
            primitive_count(4 * self.k) / 2
        } else {
            2 * self.k * self.k - 2
        }
    }

    /// The spec realizing `m` directly, for `m` in [`DIRECT_SIZES`].
    pub fn for_size(m: usize) -> Option<Self> {
        match m {
            6 => Some(TorsionSpec::full(2)),
            16 => Some(TorsionSpec::full(3)),
            24 => Some(TorsionSpec::primitive(2)),
            30 => Some(TorsionSpec::full(4)),
            48 => Some(TorsionSpec::primitive(3)),
            70 => Some(TorsionSpec::full(6)),
            _ => None,
        }
    }
}

/// Number of elements of exact order `k` in `(ℤ/k)²`:
/// `k² ∏_{p | k} (1 − p⁻²)`, with `P(1) = 1`.
pub fn primitive_count(k: usize) -> usize {
    assert!(k >= 1, "primitive_count needs k >= 1");
    let mut out = k * k;
    let mut rest = k;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            out = out / (p * p) * (p * p - 1);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        out = out / (rest * rest) * (rest * rest - 1);
    }
    out
}

/// The polynomial in `x` whose roots are the x-coordinates of the nonzero
/// `k`-torsion points, each once.
///
/// For odd `k` this is `ψ_k`, of degree `(k²−1)/2`. For even `k` it is
/// `ψ_k·y/2 = x(x−1)(x−λ)·f_k` with `f_k = ψ_k/ψ_2`, of degree `(k²+2)/2`,
/// so that the 2-torsion values `0, 1, λ` are included.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionPolynomial {
    pub k: usize,
    pub poly: Poly,
}

impl DivisionPolynomial {
    pub fn coeffs(&self) -> &[Complex64] {
        self.poly.coeffs()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// The expected degree for order `k`.
    pub fn expected_degree(k: usize) -> usize {
        match k {
            1 => 0,
            k if k % 2 == 1 => (k * k - 1) / 2,
            k => (k * k + 2) / 2,
        }
    }
}

/// Arithmetic the division-polynomial recurrence needs, shared by
/// coefficient vectors and by value/derivative pairs at a point.
trait Ring: Clone {
    fn times(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;

    fn power(&self, e: u32) -> Self {
        let mut out = self.clone();
        for _ in 1..e {
            out = out.times(self);
        }
        out
    }
}

impl Ring for Poly {
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
}

/// A value with its derivative.
#[derive(Clone, Copy, Debug)]
struct Dual(Complex64, Complex64);

impl Ring for Dual {
    fn times(&self, o: &Self) -> Self {
        Dual(self.0 * o.0, self.0 * o.1 + self.1 * o.0)
    }
    fn minus(&self, o: &Self) -> Self {
        Dual(self.0 - o.0, self.1 - o.1)
    }
}

/// Extend `f_0..f_4` to `f_0..f_top` given `ψ_2⁴`.
fn recurrence<T: Ring>(mut f: Vec<T>, psi2_4: &T, top: usize) -> Vec<T> {
    for n in f.len()..=top {
        let m = n / 2;
        let next = if n % 2 == 1 {
            let t1 = f[m + 2].times(&f[m].power(3));
            let t2 = f[m - 1].times(&f[m + 1].power(3));
            if m % 2 == 0 {
                psi2_4.times(&t1).minus(&t2)
            } else {
                t1.minus(&psi2_4.times(&t2))
            }
        } else {
            let t1 = f[m + 2].times(&f[m - 1].power(2));
            let t2 = f[m - 2].times(&f[m + 1].power(2));
            f[m].times(&t1.minus(&t2))
        };
        f.push(next);
    }
    f.truncate(top + 1);
    f
}

/// `f_0, …, f_4` and `ψ_2⁴ = 16(x³ + Ax² + Bx)²` as polynomials, where
/// `f_k = ψ_k` for odd `k` and `ψ_k/ψ_2` for even `k`.
fn recurrence_seed(curve: &LegendreCurve) -> (Vec<Poly>, Poly) {
    let (a, b) = (curve.a(), curve.b());
    let r = |v: f64| Complex64::new(v, 0.0);
    let (b2, b4, b8) = (a * 4.0, b * 2.0, -(b * b));
    // b6 = 0 for this model.
    let f = vec![
        Poly::new(vec![]),
        Poly::from_real(&[1.0]),
        Poly::from_real(&[1.0]),
        Poly::new(vec![b8, r(0.0), b4 * 3.0, b2, r(3.0)]),
        Poly::new(vec![b4 * b8, b2 * b8, b8 * 10.0, r(0.0), b4 * 5.0, b2, r(2.0)]),
    ];
    let four_f = Poly::new(vec![r(0.0), b * 4.0, a * 4.0, r(4.0)]);
    let psi2_4 = &four_f * &four_f;
    (f, psi2_4)
}

/// `f_0, …, f_top` with expanded coefficients.
fn reduced_division_polys(curve: &LegendreCurve, top: usize) -> Vec<Poly> {
    let (f, psi2_4) = recurrence_seed(curve);
    recurrence(f, &psi2_4, top)
}

/// `f_top` and its derivative at `x`, running the recurrence on numbers.
/// Much better conditioned than evaluating the expanded polynomial, whose
/// coefficients cancel heavily near the branch points.
fn eval_reduced(seed: &(Vec<Poly>, Poly), top: usize, x: Complex64) -> Dual {
    let at = |p: &Poly| Dual(p.eval(x), p.derivative().eval(x));
    let f = seed.0.iter().map(at).collect();
    recurrence(f, &at(&seed.1), top)[top]
}

fn reduced_degree(k: usize) -> usize {
    if k % 2 == 1 {
        (k * k - 1) / 2
    } else {
        (k * k - 4) / 2
    }
}

/// Roots of `f_k`, located and certified through [`eval_reduced`].
fn reduced_roots(curve: &LegendreCurve, k: usize) -> Result<Vec<Complex64>> {
    let deg = reduced_degree(k);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let seed = recurrence_seed(curve);
    let radius = recurrence(seed.0.clone(), &seed.1, k)[k].root_radius();
    let ratio = |x: Complex64| {
        let Dual(v, d) = eval_reduced(&seed, k, x);
        let r = v / d;
        if r.re.is_finite() && r.im.is_finite() {
            r
        } else {
            // Overflow far out, where f_k behaves like its leading term.
            x / deg as f64
        }
    };
    let (mut xs, iterations) = aberth(deg, radius, ratio, 500);
    let mut worst = 0.0f64;
    for x in xs.iter_mut() {
        let mut last = f64::INFINITY;
        for _ in 0..10 {
            let step = ratio(*x);
            if !(step.norm() < last) {
                break;
            }
            last = step.norm();
            *x -= step;
        }
        worst = worst.max(ratio(*x).norm() / (1.0 + x.norm()));
    }
    if !(worst <= 1e-11) {
        return Err(Error::RootFinding {
            residual: worst,
            iterations,
        });
    }
    Ok(xs)
}

pub fn division_polynomial(curve: &LegendreCurve, k: usize) -> Result<DivisionPolynomial> {
    if k == 0 {
        return Err(Error::InvalidArgument("division polynomial order must be >= 1".into()));
    }
    let f = reduced_division_polys(curve, k.max(4)).swap_remove(k);
    let poly = if k % 2 == 0 {
        let cubic = Poly::new(vec![Complex64::default(), curve.b(), curve.a(), Complex64::new(1.0, 0.0)]);
        &cubic * &f
    } else {
        f
    };
    Ok(DivisionPolynomial { k, poly })
}

fn proper_divisors(n: usize) -> Vec<usize> {
    (2..n).filter(|d| n % d == 0).collect()
}

fn check_distinct(xs: &[Complex64], expected: usize) -> Result<()> {
    let pts: Vec<ProjectivePoint> = xs.iter().map(|&x| ProjectivePoint::finite(x)).collect();
    let sep = crate::mobius::min_separation(&pts);
    if xs.len() != expected || sep <= DEDUP {
        return Err(Error::Separation {
            separation: sep,
            tolerance: DEDUP,
            hint: format!("expected {expected} distinct torsion x-values, found {}", xs.len()),
        });
    }
    Ok(())
}

/// x-coordinates of the torsion points selected by `spec`, away from the
/// 2-torsion: `2k²−2` values for full `2k`-torsion, `P(4k)/2` for exact
/// order `4k`.
pub fn torsion_x_values(curve: &LegendreCurve, spec: &TorsionSpec) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let order = spec.order();
    let mut xs = reduced_roots(curve, order)?;
    if spec.primitive {
        // Remove x-values of points whose order properly divides 4k: one
        // nearest root of f_{4k} per distinct root of the f_d.
        let mut lower: Vec<Complex64> = Vec::new();
        for d in proper_divisors(order) {
            for x in reduced_roots(curve, d)? {
                let p = ProjectivePoint::finite(x);
                if lower.iter().all(|&y| chordal_distance(&ProjectivePoint::finite(y), &p) > DEDUP) {
                    lower.push(x);
                }
            }
        }
        for x in lower {
            let p = ProjectivePoint::finite(x);
            let (idx, dist) = xs
                .iter()
                .enumerate()
                .map(|(i, &y)| (i, chordal_distance(&ProjectivePoint::finite(y), &p)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("f_4k has more roots than its divisors");
            if dist > 1e-6 {
                return Err(Error::RootFinding {
                    residual: dist,
                    iterations: 0,
                });
            }
            xs.swap_remove(idx);
        }
    }
    check_distinct(&xs, spec.count())?;
    Ok(xs)
}

/// The Möbius map `N` sending the first three points to `0, 1, ∞`, and the
/// curve branched at `0, 1, ∞, λ = N(z4)`.
pub fn legendre_from_config(config: &Configuration) -> Result<(LegendreCurve, MobiusMap)> {
    if config.n() != 4 {
        return Err(Error::InvalidArgument(format!("Legendre curve needs n = 4, got {}", config.n())));
    }
    let z = config.points();
    let n = mobius_from_triple(&z[0], &z[1], &z[2])?;
    let lambda = n.apply(&z[3]).to_affine().ok_or(Error::CoincidentPoints(2, 3))?;
    Ok((LegendreCurve::new(lambda)?, n))
}

/// Labeling of the configuration whose `λ` is best placed for the division
/// polynomials: smallest `max(|λ|, |1−λ|)`.
fn well_placed_labeling(config: &Configuration) -> Result<(LegendreCurve, MobiusMap)> {
    let mut best: Option<(f64, LegendreCurve, MobiusMap)> = None;
    for last in 0..4 {
        // λ runs over its D₃ orbit as the first three labels vary; the order
        // of the first three among themselves is enough.
        let rest: Vec<usize> = (0..4).filter(|&j| j != last).collect();
        for order in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let labels = [rest[order[0]], rest[order[1]], rest[order[2]], last];
            let (curve, n) = legendre_from_config(&config.relabel(&labels)?)?;
            let l = curve.lambda();
            let score = l.norm().max((l - 1.0).norm());
            if best.as_ref().is_none_or(|b| score < b.0 - 1e-12) {
                best = Some((score, curve, n));
            }
        }
    }
    let (_, curve, n) = best.expect("24 labelings examined");
    Ok((curve, n))
}

fn conditioning_guard(curve: &LegendreCurve) -> Result<()> {
    let worst = d3_orbit(&ProjectivePoint::finite(curve.lambda()), 0.0)
        .iter()
        .map(distance_to_degenerate)
        .fold(f64::INFINITY, f64::min);
    if worst < CONDITIONING {
        return Err(Error::IllConditioned { distance: worst });
    }
    Ok(())
}

/// The torsion section: x-values of the selected torsion of the curve over
/// the configuration, pulled back to the sphere.
pub fn section_four_torsion(config: &Configuration, spec: &TorsionSpec, tol: &Tolerances) -> Result<SectionOutput> {
    spec.validate()?;
    if config.n() != 4 {
        return Err(Error::InvalidArgument(format!("torsion section needs n = 4, got {}", config.n())));
    }
    let (curve, n) = well_placed_labeling(config)?;
    conditioning_guard(&curve)?;
    let back = n.inverse();
    let points = torsion_x_values(&curve, spec)?
        .into_iter()
        .map(|x| back.apply(&ProjectivePoint::finite(x)))
        .collect();
    let mut params = Map::new();
    params.insert("torsion".into(), json!(spec));
    params.insert("lambda".into(), json!(curve.lambda()));
    let out = SectionOutput::new("torsion", points, params);
    out.validate(config, tol)?;
    Ok(out)
}

/// Base torsion size used by the planner for each residue mod 24.
fn planner_base(m: usize) -> Option<usize> {
    match m % 24 {
        0 => Some(0),
        6 => Some(6),
        16 => Some(16),
        22 => Some(70),
        _ => None,
    }
}

/// Sections for every `m ≥ 70` with `m mod 24 ∈ {0, 6, 16, 22}` (and the
/// sizes of [`DIRECT_SIZES`]): a torsion base of `0, 6, 16` or `70` points
/// plus `(m − base)/24` levels of the rational-map section, whose clusters
/// are kept closer to the old points than any torsion point.
pub fn section_four_planned(config: &Configuration, m: usize, tol: &Tolerances) -> Result<SectionOutput> {
    if config.n() != 4 {
        return Err(Error::InvalidArgument(format!("planner needs n = 4, got {}", config.n())));
    }
    if m == 0 {
        return Ok(SectionOutput::empty());
    }
    if let Some(spec) = TorsionSpec::for_size(m) {
        let mut out = section_four_torsion(config, &spec, tol)?;
        out.parameters.insert("base".into(), json!(m));
        out.parameters.insert("levels".into(), json!(0));
        return Ok(out);
    }
    let base = match planner_base(m) {
        Some(b) if m >= 70 && m >= b => b,
        _ => {
            return Err(Error::Infeasible {
                n: 4,
                m,
                reason: "planner covers m >= 70 with m mod 24 in {0, 6, 16, 22} and the torsion sizes".into(),
            })
        }
    };
    let levels = (m - base) / 24;
    let mut points = Vec::with_capacity(m);
    let mut rule = LevelRule::default();
    let mut params = Map::new();
    if base > 0 {
        let spec = TorsionSpec::for_size(base).expect("planner bases are torsion sizes");
        let torsion = section_four_torsion(config, &spec, tol)?;
        rule.radius_cap = Some(cross_separation(&torsion.new_points, config.points()) / 3.0);
        points.extend(torsion.new_points);
        params.insert("torsion".into(), json!(spec));
    }
    if levels > 0 {
        points.extend(section_general(config, levels, &rule, tol)?.new_points);
    }
    params.insert("base".into(), json!(base));
    params.insert("levels".into(), json!(levels));
    params.insert("rule".into(), json!(rule));
    let out = SectionOutput::new("planned", points, params);
    out.validate(config, tol)?;
    Ok(out)
}
