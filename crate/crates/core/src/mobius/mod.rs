//! Riemann-sphere arithmetic in homogeneous coordinates: points, Möbius
//! maps, cross-ratios, `D₃` orbits and the three-point section.

mod config;
mod map;
mod orbit;
mod point;

pub use config::{
    cross_separation, min_separation, set_distance, Configuration, SectionOutput, SectionReport,
    Tolerances,
};
pub use map::{cross_ratio, mobius_from_triple, MobiusMap};
pub use orbit::{
    cross_fiber, d3_orbit, distance_to_degenerate, section_three, three_point_lambdas, zeta,
};
pub use point::{chordal_distance, ProjectivePoint};

pub(crate) use point::det;
