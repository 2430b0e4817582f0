//! Which `(n, m)` admit a section, and which construction builds it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::elliptic::{section_four_planned, section_four_torsion, TorsionSpec};
use crate::error::{Error, Result};
use crate::mobius::{section_three, Configuration, SectionOutput, Tolerances};
use crate::spacelevel::{section_general, LevelRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    ExistsConstructive,
    NotExists,
    Unknown,
}

/// A construction this crate can run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case", deny_unknown_fields)]
pub enum Recipe {
    Empty,
    CrossRatio { m: usize },
    Torsion { spec: TorsionSpec },
    Planned { m: usize },
    Spacelevel { levels: usize },
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::Empty => "empty",
            Recipe::CrossRatio { .. } => "cross_ratio",
            Recipe::Torsion { .. } => "torsion",
            Recipe::Planned { .. } => "planned",
            Recipe::Spacelevel { .. } => "spacelevel",
        }
    }

    pub fn run(&self, config: &Configuration, tol: &Tolerances) -> Result<SectionOutput> {
        match self {
            Recipe::Empty => Ok(SectionOutput::empty()),
            Recipe::CrossRatio { m } => section_three(config, *m, tol),
            Recipe::Torsion { spec } => section_four_torsion(config, spec, tol),
            Recipe::Planned { m } => section_four_planned(config, *m, tol),
            Recipe::Spacelevel { levels } => section_general(config, *levels, &LevelRule::default(), tol),
        }
    }
}

/// The result the verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Citation {
    /// Trivial section with no new points.
    EmptySection,
    /// For `n ≥ 4`, `m` must lie in one of four residue classes modulo
    /// `n(n−1)(n−2)`; for `n = 3`, `m ≡ 0, 2 mod 3` exactly.
    ResidueObstruction,
    /// For `n ≥ 6`, `n(n−1)(n−2)` must divide `m`.
    DivisibilityObstruction,
    /// Every multiple of `n(n−1)(n−2)` is realized by rational-map level sets.
    RationalMapConstruction,
    /// `m ≡ 0, 2 mod 3` realized by cross-ratio orbits.
    CrossRatioConstruction,
    /// `n = 4` torsion sizes and every allowed `m ≥ 70`.
    TorsionConstruction,
    /// `n = 4` sizes allowed by the residues but not covered by a known
    /// construction.
    OpenCase,
    /// `n = 5` sizes allowed by the residues and not multiples of 60.
    OpenFivePoint,
}

impl Citation {
    pub fn text(&self) -> &'static str {
        match self {
            Citation::EmptySection => "adding no points is trivially a section",
            Citation::ResidueObstruction => {
                "residue obstruction: m must be congruent to 0, (n-1)(n-2), -n(n-2) or -(n-2) mod n(n-1)(n-2); for n = 3, m = 0 or 2 mod 3"
            }
            Citation::DivisibilityObstruction => {
                "divisibility obstruction: for n >= 6 no section exists unless n(n-1)(n-2) divides m"
            }
            Citation::RationalMapConstruction => {
                "rational-map level sets give a section for every m divisible by n(n-1)(n-2)"
            }
            Citation::CrossRatioConstruction => "cross-ratio orbits give a section for every m = 0 or 2 mod 3 when n = 3",
            Citation::TorsionConstruction => {
                "elliptic torsion gives m = 6, 16, 24, 30, 48, 70, and combined with level sets every m >= 70 with m mod 24 in {0, 6, 16, 22}"
            }
            Citation::OpenCase => "allowed by the residues; no construction known for this m when n = 4",
            Citation::OpenFivePoint => "allowed by the residues; existence for n = 5 is open",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: usize,
    pub m: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recipe: Option<Recipe>,
    pub citation: Citation,
    /// Human-readable form of `citation`.
    pub note: String,
}

impl Verdict {
    fn new(n: usize, m: usize, status: Status, recipe: Option<Recipe>, citation: Citation) -> Self {
        Verdict {
            n,
            m,
            status,
            recipe,
            citation,
            note: citation.text().into(),
        }
    }

    /// Run the recipe, or fail with the verdict when there is none.
    pub fn construct(&self, config: &Configuration, tol: &Tolerances) -> Result<SectionOutput> {
        if config.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "verdict is for n = {}, configuration has {} points",
                self.n,
                config.n()
            )));
        }
        match &self.recipe {
            Some(r) => r.run(config, tol),
            None => Err(Error::Infeasible {
                n: self.n,
                m: self.m,
                reason: format!("{:?}: {}", self.status, self.note),
            }),
        }
    }
}

/// `n(n−1)(n−2)`.
pub fn cluster_modulus(n: usize) -> usize {
    n * (n - 1) * (n - 2)
}

/// The four admissible residues of `m` modulo `n(n−1)(n−2)`:
/// `0, (n−1)(n−2), −n(n−2), −(n−2)`.
pub fn gg_residues(n: usize) -> Result<BTreeSet<usize>> {
    if n < 4 {
        return Err(Error::TooSmall { needed: 4, got: n });
    }
    let q = cluster_modulus(n);
    Ok([0, (n - 1) * (n - 2), q - n * (n - 2), q - (n - 2)]
        .into_iter()
        .map(|r| r % q)
        .collect())
}

fn residue_allowed(n: usize, m: usize) -> bool {
    let residues = gg_residues(n).expect("n >= 4");
    residues.contains(&(m % cluster_modulus(n)))
}

/// The existence status of a section adding `m` points to `n`.
pub fn decide(n: usize, m: usize) -> Result<Verdict> {
    use Citation::*;
    use Status::*;
    if n < 3 {
        return Err(Error::TooSmall { needed: 3, got: n });
    }
    let v = |status, recipe, citation| Ok(Verdict::new(n, m, status, recipe, citation));
    if m == 0 {
        return v(ExistsConstructive, Some(Recipe::Empty), EmptySection);
    }
    if n == 3 {
        return if m % 3 == 1 {
            v(NotExists, None, ResidueObstruction)
        } else {
            v(ExistsConstructive, Some(Recipe::CrossRatio { m }), CrossRatioConstruction)
        };
    }
    let q = cluster_modulus(n);
    if n >= 6 && m % q != 0 {
        return v(NotExists, None, DivisibilityObstruction);
    }
    if !residue_allowed(n, m) {
        return v(NotExists, None, ResidueObstruction);
    }
    match n {
        4 => {
            if let Some(spec) = TorsionSpec::for_size(m) {
                v(ExistsConstructive, Some(Recipe::Torsion { spec }), TorsionConstruction)
            } else if m >= 70 {
                v(ExistsConstructive, Some(Recipe::Planned { m }), TorsionConstruction)
            } else if m % q == 0 {
                v(ExistsConstructive, Some(Recipe::Spacelevel { levels: m / q }), RationalMapConstruction)
            } else {
                v(Unknown, None, OpenCase)
            }
        }
        5 => {
            if m % q == 0 {
                v(ExistsConstructive, Some(Recipe::Spacelevel { levels: m / q }), RationalMapConstruction)
            } else {
                v(Unknown, None, OpenFivePoint)
            }
        }
        _ => v(ExistsConstructive, Some(Recipe::Spacelevel { levels: m / q }), RationalMapConstruction),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues() {
        assert_eq!(gg_residues(4).unwrap(), BTreeSet::from([0, 6, 16, 22]));
        assert_eq!(gg_residues(5).unwrap(), BTreeSet::from([0, 12, 45, 57]));
        assert_eq!(gg_residues(6).unwrap(), BTreeSet::from([0, 20, 96, 116]));
        assert!(gg_residues(3).is_err());
    }

    #[test]
    fn examples() {
        assert_eq!(decide(3, 2).unwrap().status, Status::ExistsConstructive);
        assert_eq!(decide(6, 121).unwrap().status, Status::NotExists);
        assert_eq!(decide(4, 22).unwrap().status, Status::Unknown);
        assert_eq!(decide(4, 4).unwrap().status, Status::NotExists);
        assert_eq!(decide(4, 40).unwrap().status, Status::Unknown);
        assert_eq!(decide(5, 12).unwrap().status, Status::Unknown);
        assert_eq!(decide(5, 13).unwrap().status, Status::NotExists);
        assert!(decide(2, 0).is_err());
    }

    #[test]
    fn verdict_json_round_trip() {
        let v = decide(4, 94).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains(r#""construction":"planned""#));
        assert_eq!(serde_json::from_str::<Verdict>(&text).unwrap(), v);
    }
}
