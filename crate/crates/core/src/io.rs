//! Text formats: JSON readers for the interchange types and a CSV writer
//! for point clouds.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;

use crate::braid::{BraidWord, GarsideNormalForm};
use crate::elliptic::TorsionSpec;
use crate::error::{Error, Result};
use crate::mobius::{Configuration, ProjectivePoint, SectionOutput, Tolerances};
use crate::monodromy::PathSpec;
use crate::spacelevel::nearest_old_point;

/// Parse JSON, reporting the byte offset of a syntax or shape error.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(byte_offset(text, e.line(), e.column()), format!("{what}: {e}")))
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let before: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    before + column.saturating_sub(1)
}

pub fn read_configuration(text: &str, tol: &Tolerances) -> Result<Configuration> {
    Configuration::from_json(text, tol)
}

pub fn read_torsion_spec(text: &str) -> Result<TorsionSpec> {
    let spec: TorsionSpec = parse_json(text, "torsion spec")?;
    spec.validate()?;
    Ok(spec)
}

/// A section output whose declared `m` matches its points.
pub fn read_section_output(text: &str) -> Result<SectionOutput> {
    let out: SectionOutput = parse_json(text, "section output")?;
    if out.m != out.new_points.len() {
        return Err(Error::InvalidArgument(format!(
            "m = {} but {} points given",
            out.m,
            out.new_points.len()
        )));
    }
    Ok(out)
}

pub fn read_normal_form(text: &str) -> Result<GarsideNormalForm> {
    parse_json(text, "normal form")
}

/// A word as JSON, `{"strands": n, "word": [..]}`.
pub fn read_word(text: &str) -> Result<BraidWord> {
    parse_json(text, "braid word")
}

pub fn read_path_spec(text: &str) -> Result<PathSpec> {
    parse_json(text, "path spec")
}

/// CSV rows `re,im,cluster_index`, one per new point. The cluster index is
/// the nearest old point; `inf` is written as `inf,inf`.
pub fn points_csv(points: &[ProjectivePoint], config: Option<&Configuration>) -> String {
    let mut s = String::from("re,im,cluster_index\n");
    for p in points {
        let cluster = config.map(|c| nearest_old_point(c, p).to_string()).unwrap_or_default();
        match p.to_affine() {
            Some(z) => writeln!(s, "{},{},{}", z.re, z.im, cluster),
            None => writeln!(s, "inf,inf,{cluster}"),
        }
        .expect("writing to a string");
    }
    s
}
