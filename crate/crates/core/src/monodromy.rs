//! Continuation of a section's new points along paths of configurations:
//! certified nearest-neighbour tracking, induced permutations of the new
//! points, and loop closure.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braid::Permutation;
use crate::error::{Error, Result};
use crate::mobius::{chordal_distance, min_separation, set_distance, Configuration, ProjectivePoint, Tolerances};

type Tuple = Vec<ProjectivePoint>;

#[derive(Clone, Debug, PartialEq)]
enum Piece {
    Constant(Tuple),
    /// Counterclockwise half-turn of positions `i-1` and `i` about their
    /// midpoint in the affine chart.
    HalfTwist { base: Tuple, i: usize },
    /// Great-circle interpolation between consecutive tuples.
    Samples(Vec<Tuple>),
}

impl Piece {
    fn at(&self, t: f64) -> Tuple {
        match self {
            Piece::Constant(p) => p.clone(),
            Piece::HalfTwist { base, i } => {
                let mut out = base.clone();
                if t == 0.0 {
                    return out;
                }
                if t == 1.0 {
                    out.swap(i - 1, *i);
                    return out;
                }
                let (a, b) = (affine(&base[i - 1]), affine(&base[*i]));
                let mid = (a + b) * 0.5;
                let rot = Complex64::from_polar(1.0, std::f64::consts::PI * t);
                out[i - 1] = ProjectivePoint::finite(mid + (a - mid) * rot);
                out[*i] = ProjectivePoint::finite(mid + (b - mid) * rot);
                out
            }
            Piece::Samples(tuples) => {
                let segs = tuples.len() - 1;
                let s = (t * segs as f64).min(segs as f64);
                let k = (s.floor() as usize).min(segs - 1);
                let u = s - k as f64;
                tuples[k]
                    .iter()
                    .zip(&tuples[k + 1])
                    .map(|(p, q)| slerp(p, q, u))
                    .collect()
            }
        }
    }
}

fn affine(p: &ProjectivePoint) -> Complex64 {
    p.to_affine().expect("half-twist points are finite")
}

fn slerp(p: &ProjectivePoint, q: &ProjectivePoint, u: f64) -> ProjectivePoint {
    let (a, b) = (p.to_sphere(), q.to_sphere());
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    let theta = dot.acos();
    if theta < 1e-15 {
        return *p;
    }
    let (wa, wb) = (((1.0 - u) * theta).sin() / theta.sin(), (u * theta).sin() / theta.sin());
    ProjectivePoint::from_sphere([
        wa * a[0] + wb * b[0],
        wa * a[1] + wb * b[1],
        wa * a[2] + wb * b[2],
    ])
    .unwrap_or(*p)
}

/// A path `[0, 1] → (ℂP¹)ⁿ` of ordered tuples, built from pieces run one
/// after another, each possibly reversed. Consecutive pieces meet as sets.
///
/// A path remembers the tuple it was built at. Permutations induced along
/// closed paths are indexed by the section evaluated there, so loops at the
/// same basepoint give comparable permutations.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigPath {
    n: usize,
    basepoint: Tuple,
    pieces: Vec<(Piece, bool)>,
}

/// Samples used to check that a path stays separated.
const SEPARATION_SAMPLES: usize = 256;

impl ConfigPath {
    fn single(n: usize, piece: Piece) -> Self {
        ConfigPath {
            n,
            basepoint: piece.at(0.0),
            pieces: vec![(piece, false)],
        }
    }

    pub fn constant(config: &Configuration) -> Self {
        ConfigPath::single(config.n(), Piece::Constant(config.points().to_vec()))
    }

    /// Piecewise great-circle path through the given tuples.
    pub fn samples(tuples: Vec<Tuple>, tol: &Tolerances) -> Result<Self> {
        if tuples.len() < 2 {
            return Err(Error::InvalidArgument("a sampled path needs at least two tuples".into()));
        }
        let n = tuples[0].len();
        if tuples.iter().any(|t| t.len() != n) {
            return Err(Error::InvalidArgument("sampled tuples differ in size".into()));
        }
        for w in tuples.windows(2) {
            for (p, q) in w[0].iter().zip(&w[1]) {
                if chordal_distance(p, &q.antipode()) < 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "consecutive samples {p} and {q} are antipodal"
                    )));
                }
            }
        }
        let path = ConfigPath::single(n, Piece::Samples(tuples));
        path.check_separation(tol)?;
        Ok(path)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The tuple the path was built at; kept by reversal and concatenation.
    pub fn basepoint(&self) -> &[ProjectivePoint] {
        &self.basepoint
    }

    pub fn at(&self, t: f64) -> Tuple {
        let k = self.pieces.len();
        let s = (t.clamp(0.0, 1.0) * k as f64).min(k as f64);
        let idx = (s.floor() as usize).min(k - 1);
        let u = s - idx as f64;
        let (piece, reversed) = &self.pieces[idx];
        piece.at(if *reversed { 1.0 - u } else { u })
    }

    pub fn start(&self) -> Tuple {
        self.at(0.0)
    }

    pub fn end(&self) -> Tuple {
        self.at(1.0)
    }

    /// Whether the end configuration equals the start as a set.
    pub fn is_closed(&self, tol: &Tolerances) -> bool {
        set_distance(&self.start(), &self.end()) <= tol.sep
    }

    pub fn reverse(&self) -> Self {
        ConfigPath {
            n: self.n,
            basepoint: self.basepoint.clone(),
            pieces: self.pieces.iter().rev().map(|(p, r)| (p.clone(), !r)).collect(),
        }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn then(&self, other: &ConfigPath, tol: &Tolerances) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidArgument(format!(
                "cannot join paths on {} and {} points",
                self.n, other.n
            )));
        }
        let gap = set_distance(&self.end(), &other.start());
        if gap > tol.sep {
            return Err(Error::InvalidArgument(format!("paths do not meet (gap {gap:.3e})")));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Ok(ConfigPath {
            n: self.n,
            basepoint: self.basepoint.clone(),
            pieces,
        })
    }

    fn check_separation(&self, tol: &Tolerances) -> Result<()> {
        let samples = SEPARATION_SAMPLES * self.pieces.len();
        for s in 0..=samples {
            let t = s as f64 / samples as f64;
            let sep = min_separation(&self.at(t));
            if sep <= tol.sep {
                return Err(Error::Separation {
                    separation: sep,
                    tolerance: tol.sep,
                    hint: format!("path points collide near t = {t:.4}"),
                });
            }
        }
        Ok(())
    }
}

/// The loop for `σ_i` (1-based) at `basepoint`: `x_i` and `x_{i+1}` swap by
/// a counterclockwise half-turn about their midpoint, the rest stay put.
pub fn generator_loop(n: usize, i: usize, basepoint: &Configuration, tol: &Tolerances) -> Result<ConfigPath> {
    if basepoint.n() != n {
        return Err(Error::InvalidArgument(format!(
            "basepoint has {} points, expected {n}",
            basepoint.n()
        )));
    }
    if i == 0 || i >= n {
        return Err(Error::InvalidGenerator { index: i as i64, strands: n });
    }
    let base = basepoint.points().to_vec();
    if base[i - 1].is_infinity() || base[i].is_infinity() {
        return Err(Error::InvalidArgument("half-twist points must be finite".into()));
    }
    let path = ConfigPath::single(n, Piece::HalfTwist { base, i });
    path.check_separation(tol)?;
    Ok(path)
}

/// The loop of a braid word: generator loops in order, reversed for
/// inverse letters. The empty word gives the constant loop.
pub fn word_loop(basepoint: &Configuration, letters: &[i32], tol: &Tolerances) -> Result<ConfigPath> {
    let n = basepoint.n();
    let mut path: Option<ConfigPath> = None;
    for &l in letters {
        let g = generator_loop(n, l.unsigned_abs() as usize, basepoint, tol)?;
        let g = if l < 0 { g.reverse() } else { g };
        path = Some(match path {
            None => g,
            Some(p) => p.then(&g, tol)?,
        });
    }
    Ok(path.unwrap_or_else(|| ConfigPath::constant(basepoint)))
}

/// Step control for [`track_points`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackOptions {
    pub initial_step: f64,
    pub max_step: f64,
    /// Smallest step in the path parameter before giving up.
    pub floor: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            initial_step: 1.0 / 64.0,
            max_step: 1.0 / 16.0,
            floor: 1e-6,
        }
    }
}

/// The outcome of following a point set along a path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackingResult {
    /// For closed paths, the point starting at reference point `j` ends on
    /// reference point `permutation[j]`. The reference is the initial set
    /// unless given explicitly.
    pub permutation: Option<Permutation>,
    /// Largest distance a point moved in one accepted step; always less
    /// than half of `min_point_gap`.
    pub max_gap: f64,
    /// Smallest distance between two tracked points along the way.
    pub min_point_gap: f64,
    /// Distance between the final and initial sets, or the larger distance
    /// of either to the reference.
    pub closure_mismatch: f64,
    /// Accepted parameter values, starting at 0.
    #[serde(skip)]
    pub times: Vec<f64>,
    /// `correspondences[s][j]`: index at time `times[s+1]` of the point
    /// matched to index `j` at time `times[s]`.
    #[serde(skip)]
    pub correspondences: Vec<Vec<usize>>,
    /// Index at the final time of the point that started as index `j`.
    #[serde(skip)]
    pub endpoint_map: Vec<usize>,
}

impl TrackingResult {
    pub fn closes(&self, tol: &Tolerances) -> bool {
        self.permutation.is_some() && self.closure_mismatch <= tol.sep
    }
}

/// Nearest-neighbour matching of `next` against `prev`, accepted only when
/// it is a bijection and every unmatched pair is more than twice as far
/// apart as the largest matched pair. Returns `(map prev→next, max match)`.
fn certified_match(prev: &[ProjectivePoint], next: &[ProjectivePoint]) -> Option<(Vec<usize>, f64)> {
    let m = prev.len();
    if next.len() != m {
        return None;
    }
    let mut map = vec![usize::MAX; m];
    let mut taken = vec![false; m];
    let mut worst = 0.0f64;
    for (j, p) in prev.iter().enumerate() {
        let (k, d) = next
            .iter()
            .enumerate()
            .map(|(k, q)| (k, chordal_distance(p, q)))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if std::mem::replace(&mut taken[k], true) {
            return None;
        }
        map[j] = k;
        worst = worst.max(d);
    }
    for (j, p) in prev.iter().enumerate() {
        for (k, q) in next.iter().enumerate() {
            if map[j] != k && chordal_distance(p, q) <= 2.0 * worst {
                return None;
            }
        }
    }
    Some((map, worst))
}

/// Follow the point set `f(t)` from `t = 0` to `t = 1`, bisecting the step
/// until each matching is certified. When `closed`, the final set is
/// matched back to the initial one to give the induced permutation.
pub fn track_points(
    f: impl Fn(f64) -> Result<Tuple>,
    closed: bool,
    opts: &TrackOptions,
    tol: &Tolerances,
) -> Result<TrackingResult> {
    let initial = f(0.0)?;
    let reference = closed.then(|| initial.clone());
    follow(f, initial, reference, opts, tol)
}

/// Like [`track_points`] for a closed path, with the permutation indexed by
/// `reference` instead of by `f(0)`. Both ends are matched to it.
pub fn track_points_against(
    f: impl Fn(f64) -> Result<Tuple>,
    reference: Tuple,
    opts: &TrackOptions,
    tol: &Tolerances,
) -> Result<TrackingResult> {
    let initial = f(0.0)?;
    follow(f, initial, Some(reference), opts, tol)
}

fn follow(
    f: impl Fn(f64) -> Result<Tuple>,
    initial: Tuple,
    reference: Option<Tuple>,
    opts: &TrackOptions,
    tol: &Tolerances,
) -> Result<TrackingResult> {
    let mut current = initial.clone();
    let mut endpoint_map: Vec<usize> = (0..initial.len()).collect();
    let mut t = 0.0;
    let mut h = opts.initial_step.min(opts.max_step);
    let mut max_gap = 0.0f64;
    let mut min_point_gap = min_separation(&initial);
    let mut times = vec![0.0];
    let mut correspondences = Vec::new();
    while t < 1.0 {
        let t_next = (t + h).min(1.0);
        let next = f(t_next)?;
        let sep = min_separation(&next);
        if sep <= tol.sep {
            return Err(Error::Separation {
                separation: sep,
                tolerance: tol.sep,
                hint: format!("tracked points collide at t = {t_next:.6}"),
            });
        }
        // No point may move more than half the way to its nearest neighbour.
        let certified = certified_match(&current, &next)
            .filter(|(_, gap)| 2.0 * gap < sep.min(min_separation(&current)));
        match certified {
            Some((map, gap)) => {
                min_point_gap = min_point_gap.min(sep);
                max_gap = max_gap.max(gap);
                for e in endpoint_map.iter_mut() {
                    *e = map[*e];
                }
                correspondences.push(map);
                times.push(t_next);
                current = next;
                t = t_next;
                h = (h * 2.0).min(opts.max_step);
            }
            None => {
                h /= 2.0;
                if h < opts.floor {
                    return Err(Error::TrackingFloor { t, floor: opts.floor });
                }
            }
        }
    }
    let (permutation, closure_mismatch) = match &reference {
        Some(reference) => match (certified_match(&initial, reference), certified_match(&current, reference)) {
            (Some((start, d0)), Some((back, d1))) => {
                let mut images = vec![0; start.len()];
                for (j, &r) in start.iter().enumerate() {
                    images[r] = back[endpoint_map[j]];
                }
                (Some(Permutation::from_images(images)?), d0.max(d1))
            }
            _ => (
                None,
                set_distance(&current, reference).max(set_distance(&initial, reference)),
            ),
        },
        None => (None, set_distance(&current, &initial)),
    };
    Ok(TrackingResult {
        permutation,
        max_gap,
        min_point_gap,
        closure_mismatch,
        times,
        correspondences,
        endpoint_map,
    })
}

/// Track the new points of `section` along `path`.
pub fn track(
    section: &dyn Fn(&Configuration) -> Result<Tuple>,
    path: &ConfigPath,
    opts: &TrackOptions,
    tol: &Tolerances,
) -> Result<TrackingResult> {
    let f = |t: f64| section(&Configuration::new(path.at(t), tol)?);
    if path.is_closed(tol) {
        let reference = section(&Configuration::new(path.basepoint().to_vec(), tol)?)?;
        track_points_against(f, reference, opts, tol)
    } else {
        track_points(f, false, opts, tol)
    }
}

/// Track the old points themselves along `path`.
pub fn track_old_points(path: &ConfigPath, opts: &TrackOptions, tol: &Tolerances) -> Result<TrackingResult> {
    if path.is_closed(tol) {
        track_points_against(|t| Ok(path.at(t)), path.basepoint().to_vec(), opts, tol)
    } else {
        track_points(|t| Ok(path.at(t)), false, opts, tol)
    }
}

/// The permutation of the new points induced by each generator loop
/// `σ_1, …, σ_{n−1}` at `basepoint`.
pub fn induced_permutation_table(
    section: &dyn Fn(&Configuration) -> Result<Tuple>,
    basepoint: &Configuration,
    opts: &TrackOptions,
    tol: &Tolerances,
) -> Result<Vec<Permutation>> {
    let n = basepoint.n();
    (1..n)
        .map(|i| {
            let path = generator_loop(n, i, basepoint, tol)?;
            closed_permutation(track(section, &path, opts, tol)?, tol)
        })
        .collect()
}

fn closed_permutation(r: TrackingResult, tol: &Tolerances) -> Result<Permutation> {
    if !r.closes(tol) {
        return Err(Error::Separation {
            separation: r.closure_mismatch,
            tolerance: tol.sep,
            hint: "loop did not close on the new points".into(),
        });
    }
    Ok(r.permutation.expect("closed result has a permutation"))
}

/// Permutations induced by the two sides of a defining relation of `B_n`:
/// `σ_iσ_jσ_i` and `σ_jσ_iσ_j` when `|i−j| = 1`, `σ_iσ_j` and `σ_jσ_i`
/// otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub left: Vec<i32>,
    pub right: Vec<i32>,
    pub left_permutation: Permutation,
    pub right_permutation: Permutation,
    pub consistent: bool,
}

pub fn relation_consistency(
    section: &dyn Fn(&Configuration) -> Result<Tuple>,
    basepoint: &Configuration,
    i: usize,
    j: usize,
    opts: &TrackOptions,
    tol: &Tolerances,
) -> Result<RelationCheck> {
    if i == j {
        return Err(Error::InvalidArgument("relation needs two distinct generators".into()));
    }
    let (a, b) = (i as i32, j as i32);
    let (left, right) = if i.abs_diff(j) == 1 {
        (vec![a, b, a], vec![b, a, b])
    } else {
        (vec![a, b], vec![b, a])
    };
    let run = |w: &[i32]| -> Result<Permutation> {
        let path = word_loop(basepoint, w, tol)?;
        closed_permutation(track(section, &path, opts, tol)?, tol)
    };
    let left_permutation = run(&left)?;
    let right_permutation = run(&right)?;
    Ok(RelationCheck {
        consistent: left_permutation == right_permutation,
        left,
        right,
        left_permutation,
        right_permutation,
    })
}

/// A path described in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PathSpec {
    Constant,
    Generator { i: usize },
    /// A braid word of generator loops.
    Word { word: Vec<i32> },
    Samples { points: Vec<Tuple> },
}

impl PathSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.column(), format!("path spec: {e}")))
    }

    /// The path at `basepoint`; sampled paths carry their own points.
    pub fn build(&self, basepoint: &Configuration, tol: &Tolerances) -> Result<ConfigPath> {
        match self {
            PathSpec::Constant => Ok(ConfigPath::constant(basepoint)),
            PathSpec::Generator { i } => generator_loop(basepoint.n(), *i, basepoint, tol),
            PathSpec::Word { word } => word_loop(basepoint, word, tol),
            PathSpec::Samples { points } => ConfigPath::samples(points.clone(), tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_twist_swaps_points() {
        let c = Configuration::roots_of_unity(4);
        let tol = Tolerances::default();
        let p = generator_loop(4, 2, &c, &tol).unwrap();
        let end = p.end();
        assert!(chordal_distance(&end[1], &c.points()[2]) < 1e-15);
        assert!(chordal_distance(&end[2], &c.points()[1]) < 1e-15);
        assert!(p.is_closed(&tol));
        assert!(generator_loop(4, 4, &c, &tol).is_err());
    }

    #[test]
    fn old_points_transposed() {
        let c = Configuration::roots_of_unity(5);
        let tol = Tolerances::default();
        for i in 1..5 {
            let r = track_old_points(&generator_loop(5, i, &c, &tol).unwrap(), &TrackOptions::default(), &tol).unwrap();
            assert_eq!(r.permutation.unwrap(), Permutation::adjacent_transposition(5, i));
        }
    }

    #[test]
    fn constant_path_is_trivial() {
        let c = Configuration::roots_of_unity(3);
        let tol = Tolerances::default();
        let r = track_old_points(&ConfigPath::constant(&c), &TrackOptions::default(), &tol).unwrap();
        assert!(r.permutation.unwrap().is_identity());
        assert_eq!(r.max_gap, 0.0);
    }

    #[test]
    fn path_spec_json() {
        let s = PathSpec::from_json(r#"{"type":"generator","i":2}"#).unwrap();
        assert_eq!(s, PathSpec::Generator { i: 2 });
        assert!(PathSpec::from_json(r#"{"type":"warp"}"#).is_err());
        let s = PathSpec::from_json(r#"{"type":"samples","points":[[{"re":0,"im":0},"inf"],[{"re":1,"im":0},"inf"]]}"#).unwrap();
        let path = s.build(&Configuration::roots_of_unity(2), &Tolerances::default()).unwrap();
        assert!(!path.is_closed(&Tolerances::default()));
    }
}
