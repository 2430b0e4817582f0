use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of ℂP¹ in homogeneous coordinates `[a : b]`, standing for `a/b`.
///
/// The stored pair is normalized so that its larger-modulus component is
/// exactly `1`; `∞` is `[1 : 0]` and `0` is `[0 : 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint {
    a: Complex64,
    b: Complex64,
}

impl ProjectivePoint {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let finite = a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite();
        if !finite || (a.norm_sqr() == 0.0 && b.norm_sqr() == 0.0) {
            return Err(Error::InvalidArgument(format!(
                "[{a} : {b}] is not a point of the projective line"
            )));
        }
        Ok(Self::normalized(a, b))
    }

    /// Normalizes a pair known to be nonzero and finite.
    pub(crate) fn normalized(a: Complex64, b: Complex64) -> Self {
        if a.norm_sqr() >= b.norm_sqr() {
            ProjectivePoint {
                a: Complex64::new(1.0, 0.0),
                b: b / a,
            }
        } else {
            ProjectivePoint {
                a: a / b,
                b: Complex64::new(1.0, 0.0),
            }
        }
    }

    pub fn finite(z: Complex64) -> Self {
        assert!(z.re.is_finite() && z.im.is_finite(), "finite point expected, got {z}");
        Self::normalized(z, Complex64::new(1.0, 0.0))
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        ProjectivePoint {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// The normalized pair `(a, b)`.
    pub fn coords(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    /// A representative of Euclidean norm one.
    pub fn unit(&self) -> (Complex64, Complex64) {
        let r = self.norm();
        (self.a / r, self.b / r)
    }

    fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr()).sqrt()
    }

    pub fn is_infinity(&self) -> bool {
        self.b.norm_sqr() == 0.0
    }

    /// The affine value `a/b`, or `None` at `∞`.
    pub fn to_affine(&self) -> Option<Complex64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.a / self.b)
        }
    }

    /// The diametrically opposite point, `z ↦ -1/z̄`.
    pub fn antipode(&self) -> Self {
        Self::normalized(-self.b.conj(), self.a.conj())
    }

    /// Point on the unit sphere under inverse stereographic projection from
    /// the north pole (`∞ ↦ (0, 0, 1)`).
    pub fn to_sphere(&self) -> [f64; 3] {
        let (a, b) = self.unit();
        let ab = a * b.conj();
        [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
    }

    pub fn from_sphere(v: [f64; 3]) -> Result<Self> {
        let [x, y, z] = v;
        let r = (x * x + y * y + z * z).sqrt();
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("{v:?} is not a direction")));
        }
        let (x, y, z) = (x / r, y / r, z / r);
        // Whichever chart avoids the pole we are near.
        if z <= 0.0 {
            Ok(Self::finite(Complex64::new(x, y) / (1.0 - z)))
        } else {
            Self::new(Complex64::new(1.0, 0.0), Complex64::new(x, -y) / (1.0 + z))
        }
    }
}

/// `a₁b₂ − b₁a₂` for homogeneous pairs.
pub(crate) fn det(p: (Complex64, Complex64), q: (Complex64, Complex64)) -> Complex64 {
    p.0 * q.1 - p.1 * q.0
}

/// Chordal distance `|det(p, q)| / (‖p‖‖q‖)`, which equals
/// `|p − q| / √((1+|p|²)(1+|q|²))` on finite points and lies in `[0, 1]`.
pub fn chordal_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    let d = det(p.coords(), q.coords()).norm() / (p.norm() * q.norm());
    d.min(1.0)
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_affine() {
            None => f.write_str("inf"),
            Some(z) => write!(f, "{z}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Inf(String),
    Finite { re: f64, im: f64 },
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_affine() {
            Some(z) if z.re.is_finite() && z.im.is_finite() => {
                RawPoint::Finite { re: z.re, im: z.im }.serialize(s)
            }
            _ => RawPoint::Inf("inf".into()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match RawPoint::deserialize(d)? {
            RawPoint::Inf(s) if s == "inf" => Ok(ProjectivePoint::infinity()),
            RawPoint::Inf(s) => Err(D::Error::custom(format!("expected \"inf\", got {s:?}"))),
            RawPoint::Finite { re, im } => {
                ProjectivePoint::new(Complex64::new(re, im), Complex64::new(1.0, 0.0))
                    .map_err(D::Error::custom)
            }
        }
    }
}
