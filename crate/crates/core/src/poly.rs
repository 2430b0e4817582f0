//! Dense complex polynomials and a simultaneous root finder.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    c: Vec<Complex64>,
}

impl Poly {
    /// Trailing zero coefficients are dropped; the zero polynomial has no
    /// coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        Poly { c: coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::from_real(&[0.0, 1.0])
    }

    /// `∏ (x − r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Poly::from_real(&[1.0]), |acc, &r| {
            &acc * &Poly::new(vec![-r, Complex64::new(1.0, 0.0)])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.c.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::from_real(&[1.0]);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `p(s·x)`.
    pub fn rescale(&self, s: Complex64) -> Poly {
        let mut f = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.c.len());
        for &c in &self.c {
            out.push(c * f);
            f *= s;
        }
        Poly::new(out)
    }

    /// Geometric mean of the root moduli, `|c_0 / c_n|^{1/n}`.
    pub fn root_radius(&self) -> f64 {
        let n = self.c.len() - 1;
        let r = (self.c[0].norm() / self.c[n].norm()).powf(1.0 / n as f64);
        if r.is_finite() && r > 0.0 {
            r
        } else {
            1.0
        }
    }

    /// Backward error of `z` as a root: `|p(z)| / Σ|c_i||z|^i`.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let scale = self.c.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(z).norm() / scale
    }

    /// `p(z)/p'(z)`, switching to the reversed polynomial outside the unit
    /// disk so that large `|z|` does not overflow.
    fn newton_ratio(&self, z: Complex64) -> Complex64 {
        let n = self.c.len() - 1;
        if z.norm() <= 1.0 {
            let (mut p, mut dp) = (Complex64::default(), Complex64::default());
            for &c in self.c.iter().rev() {
                dp = dp * z + p;
                p = p * z + c;
            }
            p / dp
        } else {
            // p(z) = z^n q(1/z) with q the reversal.
            let w = z.inv();
            let (mut q, mut dq) = (Complex64::default(), Complex64::default());
            for &c in self.c.iter() {
                dq = dq * w + q;
                q = q * w + c;
            }
            // p'/p = n/z − w² q'(w)/q(w)
            let logd = z.inv() * n as f64 - w * w * dq / q;
            logd.inv()
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).copied().unwrap_or_default() + o.c.get(i).copied().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &o.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Complex64::default(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Knobs for [`roots`].
#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Largest acceptable [`Poly::relative_residual`] for a returned root.
    pub residual: f64,
    pub polish_steps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_iterations: 500,
            residual: 1e-12,
            polish_steps: 3,
        }
    }
}

/// All roots of `p` with multiplicity, by Aberth–Ehrlich iteration from a
/// circle of starting points, followed by Newton polishing. Every root is
/// certified by its backward error.
pub fn roots(p: &Poly, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::InvalidArgument("roots of the zero polynomial".into()));
    };
    let zeros_at_origin = p.c.iter().take_while(|c| c.norm_sqr() == 0.0).count();
    let q = Poly::new(p.c[zeros_at_origin..].to_vec());
    let n = deg - zeros_at_origin;
    let mut out = vec![Complex64::default(); zeros_at_origin];
    if n == 0 {
        return Ok(out);
    }
    let (mut z, iterations) = aberth(n, q.root_radius(), |x| q.newton_ratio(x), opts.max_iterations);
    let mut worst = 0.0f64;
    for zi in z.iter_mut() {
        for _ in 0..opts.polish_steps {
            let next = *zi - q.newton_ratio(*zi);
            if next.re.is_finite() && next.im.is_finite() && q.relative_residual(next) <= q.relative_residual(*zi) {
                *zi = next;
            } else {
                break;
            }
        }
        worst = worst.max(q.relative_residual(*zi));
    }
    if !(worst <= opts.residual) {
        return Err(Error::RootFinding {
            residual: worst,
            iterations,
        });
    }
    out.extend(z);
    Ok(out)
}

/// Aberth–Ehrlich iteration for a function with `n` zeros, given only its
/// Newton ratio `f/f'`. Starts on a circle of the given radius and returns
/// the approximations with the number of sweeps used. A non-finite ratio
/// freezes that approximation, so callers must certify the result.
pub fn aberth(
    n: usize,
    radius: f64,
    ratio: impl Fn(Complex64) -> Complex64,
    max_iterations: usize,
) -> (Vec<Complex64>, usize) {
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < max_iterations && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let r = ratio(z[i]);
            let repulse: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = r / (Complex64::new(1.0, 0.0) - r * repulse);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
    }
    (z, iterations)
}
