//! The general-`n` section: for each old point `z_i` the rational map
//! `R_i = ∏ M_{z_a, z_b, z_i}` over ordered pairs `a ≠ b` of the other
//! points, and the clusters `R_i⁻¹(ε_l)` for large level values `ε_l`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map};

use crate::error::{Error, Result};
use crate::mobius::{chordal_distance, det, Configuration, ProjectivePoint, SectionOutput, Tolerances};
use crate::poly::{roots, Poly, RootOptions};

type Pair = (Complex64, Complex64);

/// How the level values `ε_l` are chosen from a configuration.
fn van_der_corput(mut l: usize) -> f64 {
    let (mut v, mut place) = (0.0, 0.5);
    while l > 0 {
        if l & 1 == 1 {
            v += place;
        }
        place /= 2.0;
        l >>= 1;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRule {
    /// Target cluster radius as a fraction of the configuration's minimum
    /// pairwise chordal distance.
    pub cluster_fraction: f64,
    /// Optional absolute cap on the cluster radius.
    pub radius_cap: Option<f64>,
}

impl Default for LevelRule {
    fn default() -> Self {
        LevelRule {
            cluster_fraction: 0.05,
            radius_cap: None,
        }
    }
}

impl LevelRule {
    fn radius(&self, config: &Configuration) -> f64 {
        let r = self.cluster_fraction * config.separation();
        self.radius_cap.map_or(r, |cap| r.min(cap))
    }

    /// Level `l` sits on the ray of angle `2π·v(l)`, `v` the base-2 van der
    /// Corput sequence: among the first `L` levels neighbouring rays are at
    /// least `π/L` apart, whatever `L` is.
    fn phase(&self, l: usize) -> f64 {
        std::f64::consts::TAU * van_der_corput(l)
    }
}

/// The map `R_i`, of degree `d = (n−1)(n−2)`, with a pole of order `d` at
/// `z_i` and a zero of order `n−2` at every other point.
///
/// In homogeneous form
/// `R_i(w) = G_i ∏_{a≠i} det(w, z_a)^{n−2} / det(w, z_i)^d`
/// with the constant `G_i = ∏_{b≠i} det(z_b, z_i)^{n−2} / ∏_{a<b} (−det(z_a, z_b)²)`,
/// the last product over pairs of points other than `z_i`. Unit-norm
/// representatives are used throughout; the value does not depend on them.
#[derive(Clone, Debug)]
pub struct RationalMap {
    index: usize,
    base: Pair,
    others: Vec<Pair>,
    gain: Complex64,
    zero_order: u32,
}

/// The unit frame `(e, f)` at `z_i`: `w = e + u·f` is a chart of the sphere
/// minus the antipode of `z_i`, centred at `z_i`, with `det(w, e) = −u`.
fn frame(e: Pair) -> (Pair, Pair) {
    (e, (-e.1.conj(), e.0.conj()))
}

pub fn build_rational_map(config: &Configuration, i: usize) -> Result<RationalMap> {
    let n = config.n();
    if n < 4 {
        return Err(Error::TooSmall { needed: 4, got: n });
    }
    if i >= n {
        return Err(Error::InvalidArgument(format!("point index {i} out of range for n = {n}")));
    }
    let pts: Vec<Pair> = config.points().iter().map(|p| p.unit()).collect();
    let base = pts[i];
    let others: Vec<Pair> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect();
    let zero_order = (n - 2) as u32;
    let mut gain = Complex64::new(1.0, 0.0);
    for &b in &others {
        gain *= det(b, base).powu(zero_order);
    }
    for (x, &a) in others.iter().enumerate() {
        for &b in &others[x + 1..] {
            let d = det(a, b);
            gain /= -(d * d);
        }
    }
    Ok(RationalMap {
        index: i,
        base,
        others,
        gain,
        zero_order,
    })
}

impl RationalMap {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn degree(&self) -> usize {
        self.others.len() * self.zero_order as usize
    }

    pub fn zero_order(&self) -> usize {
        self.zero_order as usize
    }

    pub fn gain(&self) -> Complex64 {
        self.gain
    }

    pub fn eval(&self, w: &ProjectivePoint) -> ProjectivePoint {
        let w = w.unit();
        let mut num = self.gain;
        for &a in &self.others {
            num *= det(w, a).powu(self.zero_order);
        }
        let den = det(w, self.base).powu(self.degree() as u32);
        ProjectivePoint::new(num, den).unwrap_or_else(|_| ProjectivePoint::infinity())
    }

    /// The numerator `G_i ∏_a (det(e, z_a) + u·det(f, z_a))^{n−2}` in the
    /// chart `w = e + u·f` centred at `z_i`.
    pub fn numerator(&self) -> Poly {
        self.local_numerator(Complex64::new(1.0, 0.0)).scale(self.gain)
    }

    /// The denominator `(−u)^d` in the same chart.
    pub fn denominator(&self) -> Poly {
        let d = self.degree();
        let mut c = vec![Complex64::default(); d + 1];
        c[d] = Complex64::new(if d % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        Poly::new(c)
    }

    /// `∏_a (det(e, z_a) + r·u·det(f, z_a))^{n−2}`.
    fn local_numerator(&self, r: Complex64) -> Poly {
        let (e, f) = frame(self.base);
        self.others.iter().fold(Poly::from_real(&[1.0]), |acc, &a| {
            let lin = Poly::new(vec![det(e, a), det(f, a) * r]);
            &acc * &lin.pow(self.zero_order)
        })
    }

    /// `ln |G_i ∏_a det(z_i, z_a)^{n−2}|`: the size of `R_i` is about
    /// `exp(this) / |u|^d` close to `z_i`.
    fn log_strength(&self) -> f64 {
        let mut s = self.gain.norm().ln();
        for &a in &self.others {
            s += self.zero_order as f64 * det(self.base, a).norm().ln();
        }
        s
    }

    /// The `d` solutions of `R_i(w) = ε`, where `|ε| = exp(log_modulus)` and
    /// `arg ε = phase`. They cluster around `z_i` when `|ε|` is large.
    pub fn preimages(&self, log_modulus: f64, phase: f64, opts: &RootOptions) -> Result<Vec<ProjectivePoint>> {
        let d = self.degree();
        let (e, f) = frame(self.base);
        // In u: u^d − (−1)^d (G/ε) P(u) = 0. Substituting u = r·v with
        // r^d = |G P(0)| / |ε| leaves v^d − κ P(r v)/|P(0)| with |κ| = 1.
        let r = ((self.log_strength() - log_modulus) / d as f64).exp();
        let p0: Complex64 = self.others.iter().map(|&a| det(e, a).powu(self.zero_order)).product();
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let kappa = Complex64::from_polar(sign, self.gain.arg() - phase) / p0.norm();
        let local = self.local_numerator(Complex64::new(r, 0.0)).scale(-kappa);
        let mut lead = vec![Complex64::default(); d + 1];
        lead[d] = Complex64::new(1.0, 0.0);
        let eq = &Poly::new(lead) + &local;
        let vs = roots(&eq, opts)?;
        Ok(vs
            .into_iter()
            .map(|v| {
                let u = v * r;
                ProjectivePoint::normalized(e.0 + u * f.0, e.1 + u * f.1)
            })
            .collect())
    }
}

/// `ln |ε|` for the given rule: large enough that every cluster radius is
/// at most the rule's radius.
fn level_log_modulus(maps: &[RationalMap], config: &Configuration, rule: &LevelRule) -> f64 {
    let d = maps[0].degree() as f64;
    let strongest = maps.iter().map(RationalMap::log_strength).fold(f64::NEG_INFINITY, f64::max);
    strongest - d * rule.radius(config).ln()
}

fn all_maps(config: &Configuration) -> Result<Vec<RationalMap>> {
    (0..config.n()).map(|i| build_rational_map(config, i)).collect()
}

/// `ε_l(config)` under `rule`. The modulus depends continuously and
/// symmetrically on the configuration; the phase depends only on `l`.
pub fn level_value(config: &Configuration, l: usize, rule: &LevelRule) -> Result<Complex64> {
    if l == 0 {
        return Err(Error::InvalidArgument("levels are numbered from 1".into()));
    }
    let maps = all_maps(config)?;
    Ok(Complex64::from_polar(level_log_modulus(&maps, config, rule).exp(), rule.phase(l)))
}

/// `levels · n(n−1)(n−2)` new points: for each level and each old point,
/// the `(n−1)(n−2)` preimages of the level value, clustered at that point.
pub fn section_general(
    config: &Configuration,
    levels: usize,
    rule: &LevelRule,
    tol: &Tolerances,
) -> Result<SectionOutput> {
    if levels == 0 {
        return Err(Error::InvalidArgument("at least one level is required".into()));
    }
    let maps = all_maps(config)?;
    let log_eps = level_log_modulus(&maps, config, rule);
    let opts = RootOptions::default();
    let mut points = Vec::new();
    for l in 1..=levels {
        for map in &maps {
            points.extend(map.preimages(log_eps, rule.phase(l), &opts)?);
        }
    }
    let mut params = Map::new();
    params.insert("levels".into(), json!(levels));
    params.insert("rule".into(), json!(rule));
    params.insert("log_epsilon".into(), json!(log_eps));
    let out = SectionOutput::new("spacelevel", points, params);
    out.validate(config, tol).map_err(|e| match e {
        Error::Separation { separation, tolerance, hint } => Error::Separation {
            separation,
            tolerance,
            hint: format!("{hint}; try a smaller cluster fraction (larger level values)"),
        },
        other => other,
    })?;
    Ok(out)
}

/// Index of the old point nearest to `p`.
pub fn nearest_old_point(config: &Configuration, p: &ProjectivePoint) -> usize {
    config
        .points()
        .iter()
        .enumerate()
        .min_by(|a, b| chordal_distance(a.1, p).total_cmp(&chordal_distance(b.1, p)))
        .map(|(i, _)| i)
        .expect("configuration is nonempty")
}
