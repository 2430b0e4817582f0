use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

use super::map::MobiusMap;
use super::point::{chordal_distance, ProjectivePoint};

/// Numerical tolerances shared by every construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Minimum chordal distance for two points to count as distinct.
    pub sep: f64,
    /// Residual allowed in algebraic identities at unit scale.
    pub eval: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sep: 1e-8,
            eval: 1e-10,
        }
    }
}

/// Minimum pairwise chordal distance (`1` for fewer than two points).
pub fn min_separation(points: &[ProjectivePoint]) -> f64 {
    let mut best = 1.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.min(chordal_distance(p, q));
        }
    }
    best
}

/// Minimum chordal distance between a point of `a` and a point of `b`.
pub fn cross_separation(a: &[ProjectivePoint], b: &[ProjectivePoint]) -> f64 {
    a.iter()
        .flat_map(|p| b.iter().map(move |q| chordal_distance(p, q)))
        .fold(1.0, f64::min)
}

/// Hausdorff distance between two point sets of equal size in the chordal
/// metric; infinite when the sizes differ.
pub fn set_distance(a: &[ProjectivePoint], b: &[ProjectivePoint]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one_way = |x: &[ProjectivePoint], y: &[ProjectivePoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| chordal_distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

/// `n` distinct points of the sphere. The order of `points` is a labeling
/// only; constructions treat the configuration as a set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Configuration {
    n: usize,
    points: Vec<ProjectivePoint>,
    #[serde(skip)]
    separation: f64,
}

#[derive(Deserialize)]
struct RawConfig {
    n: usize,
    points: Vec<ProjectivePoint>,
}

impl Configuration {
    pub fn new(points: Vec<ProjectivePoint>, tol: &Tolerances) -> Result<Self> {
        let separation = min_separation(&points);
        if separation <= tol.sep {
            return Err(Error::Separation {
                separation,
                tolerance: tol.sep,
                hint: "configuration points must be distinct".into(),
            });
        }
        Ok(Configuration {
            n: points.len(),
            points,
            separation,
        })
    }

    /// The `n`-th roots of unity.
    pub fn roots_of_unity(n: usize) -> Self {
        let points = (0..n)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                ProjectivePoint::finite(num_complex::Complex64::from_polar(1.0, t))
            })
            .collect();
        Configuration::new(points, &Tolerances::default()).expect("roots of unity are distinct")
    }

    /// Parse `{"n": .., "points": [..]}`, checking the count and separation.
    pub fn from_json(text: &str, tol: &Tolerances) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
            Error::parse(e.column(), format!("configuration JSON: {e}"))
        })?;
        if raw.n != raw.points.len() {
            return Err(Error::InvalidArgument(format!(
                "n = {} but {} points given",
                raw.n,
                raw.points.len()
            )));
        }
        Configuration::new(raw.points, tol)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// The same set with its labels permuted: point `j` of the result is
    /// point `order[j]` of `self`.
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::InvalidArgument("relabeling has wrong length".into()));
        }
        let mut seen = vec![false; self.n];
        for &j in order {
            if j >= self.n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidArgument(format!("{order:?} is not a relabeling")));
            }
        }
        Ok(Configuration {
            n: self.n,
            points: order.iter().map(|&j| self.points[j]).collect(),
            separation: self.separation,
        })
    }

    pub fn transform(&self, m: &MobiusMap, tol: &Tolerances) -> Result<Self> {
        Configuration::new(self.points.iter().map(|p| m.apply(p)).collect(), tol)
    }
}

/// The `m` points a construction adds to a configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionOutput {
    pub m: usize,
    pub method: String,
    pub new_points: Vec<ProjectivePoint>,
    #[serde(default)]
    pub parameters: Map<String, Value>,
}

/// Measured quantities behind the [`SectionOutput`] invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionReport {
    pub count_matches: bool,
    /// Minimum distance among the new points.
    pub new_separation: f64,
    /// Minimum distance from a new point to an old one.
    pub old_separation: f64,
    pub valid: bool,
}

impl SectionOutput {
    pub fn new(method: &str, new_points: Vec<ProjectivePoint>, parameters: Map<String, Value>) -> Self {
        SectionOutput {
            m: new_points.len(),
            method: method.into(),
            new_points,
            parameters,
        }
    }

    pub fn empty() -> Self {
        SectionOutput::new("empty", Vec::new(), Map::new())
    }

    pub fn report(&self, config: &Configuration, tol: &Tolerances) -> SectionReport {
        let new_separation = min_separation(&self.new_points);
        let old_separation = cross_separation(&self.new_points, config.points());
        let count_matches = self.m == self.new_points.len();
        SectionReport {
            count_matches,
            new_separation,
            old_separation,
            valid: count_matches && new_separation > tol.sep && old_separation > tol.sep,
        }
    }

    /// Fails with a separation error unless every invariant holds.
    pub fn validate(&self, config: &Configuration, tol: &Tolerances) -> Result<()> {
        let r = self.report(config, tol);
        if !r.count_matches {
            return Err(Error::InvalidArgument(format!(
                "m = {} but {} points",
                self.m,
                self.new_points.len()
            )));
        }
        let worst = r.new_separation.min(r.old_separation);
        if worst <= tol.sep {
            return Err(Error::Separation {
                separation: worst,
                tolerance: tol.sep,
                hint: if r.old_separation <= tol.sep {
                    "a new point meets the configuration".into()
                } else {
                    "new points collide".into()
                },
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_coincident_points() {
        let p = ProjectivePoint::real(1.0);
        let err = Configuration::new(vec![p, ProjectivePoint::real(2.0), p], &Tolerances::default());
        assert!(matches!(err, Err(Error::Separation { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let c = Configuration::roots_of_unity(3);
        let text = serde_json::to_string(&c).unwrap();
        let back = Configuration::from_json(&text, &Tolerances::default()).unwrap();
        assert!(set_distance(back.points(), c.points()) < 1e-15);
        let bad = r#"{"n":3,"points":[{"re":0,"im":0},"inf"]}"#;
        assert!(Configuration::from_json(bad, &Tolerances::default()).is_err());
    }

    #[test]
    fn set_distance_ignores_order() {
        let a = vec![ProjectivePoint::real(0.0), ProjectivePoint::infinity()];
        let b = vec![ProjectivePoint::infinity(), ProjectivePoint::real(0.0)];
        assert_eq!(set_distance(&a, &b), 0.0);
        assert_eq!(set_distance(&a, &b[..1]), f64::INFINITY);
    }

    #[test]
    fn relabel_checks_permutation() {
        let c = Configuration::roots_of_unity(4);
        assert!(c.relabel(&[3, 2, 1, 0]).is_ok());
        assert!(c.relabel(&[0, 0, 1, 2]).is_err());
    }
}
