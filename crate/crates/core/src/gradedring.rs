//! The truncated ring ℚ[h]/(h^{d+1}) of a smooth hypersurface or a K3 surface,
//! with integration, Chern and Todd classes and Mukai vectors of line bundles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::RingError;
use crate::rational::{self, frac, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarietyKind {
    Hypersurface,
    K3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VarietyData {
    pub dim: usize,
    /// `n + 1` for `X ⊂ ℙ^{n+1}`; unused for K3 surfaces.
    pub ambient_dim: usize,
    /// `∫ h^dim`.
    pub degree: u32,
    pub kind: VarietyKind,
}

impl VarietyData {
    pub fn hypersurface(ambient_dim: usize, degree: u32) -> Result<Self, RingError> {
        let vd = VarietyData {
            dim: ambient_dim.saturating_sub(1),
            ambient_dim,
            degree,
            kind: VarietyKind::Hypersurface,
        };
        vd.validate()?;
        Ok(vd)
    }

    pub fn cubic_fourfold() -> Self {
        VarietyData {
            dim: 4,
            ambient_dim: 5,
            degree: 3,
            kind: VarietyKind::Hypersurface,
        }
    }

    /// A polarized K3 surface with `∫ h² = degree`.
    pub fn k3(degree: u32) -> Result<Self, RingError> {
        let vd = VarietyData {
            dim: 2,
            ambient_dim: 0,
            degree,
            kind: VarietyKind::K3,
        };
        vd.validate()?;
        Ok(vd)
    }

    pub fn validate(&self) -> Result<(), RingError> {
        if self.dim == 0 {
            return Err(RingError::InvalidVariety("dimension must be positive".into()));
        }
        if self.degree == 0 {
            return Err(RingError::InvalidVariety("degree must be positive".into()));
        }
        match self.kind {
            VarietyKind::Hypersurface if self.dim + 1 != self.ambient_dim => Err(
                RingError::InvalidVariety("hypersurface needs dim = ambient_dim - 1".into()),
            ),
            VarietyKind::K3 if self.dim != 2 => {
                Err(RingError::InvalidVariety("a K3 surface has dimension 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn is_k3(&self) -> bool {
        self.kind == VarietyKind::K3
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    vd: VarietyData,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "h".into(),
                _ => format!("h^{i}"),
            };
            let coeff = rational::display(c);
            parts.push(match (i, c.is_one()) {
                (0, _) => coeff,
                (_, true) => mono,
                _ => format!("{coeff}*{mono}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
        }
    }
}

impl TruncPoly {
    /// Coefficients beyond the top degree are dropped, missing ones are zero.
    pub fn new(vd: VarietyData, mut coeffs: Vec<Rational>) -> Self {
        coeffs.resize(vd.dim + 1, Rational::zero());
        TruncPoly { vd, coeffs }
    }

    pub fn from_i64(vd: VarietyData, coeffs: &[i64]) -> Self {
        Self::new(vd, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(vd: VarietyData) -> Self {
        Self::new(vd, Vec::new())
    }

    pub fn one(vd: VarietyData) -> Self {
        Self::new(vd, vec![Rational::one()])
    }

    /// `c · h^k`, zero when `k` exceeds the dimension.
    pub fn monomial(vd: VarietyData, k: usize, c: Rational) -> Self {
        let mut p = Self::zero(vd);
        if k <= vd.dim {
            p.coeffs[k] = c;
        }
        p
    }

    pub fn h(vd: VarietyData) -> Self {
        Self::monomial(vd, 1, Rational::one())
    }

    pub fn variety(&self) -> &VarietyData {
        &self.vd
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &TruncPoly) -> Result<(), RingError> {
        if self.vd == other.vd {
            Ok(())
        } else {
            Err(RingError::VarietyMismatch)
        }
    }

    pub fn try_add(&self, other: &TruncPoly) -> Result<TruncPoly, RingError> {
        self.check(other)?;
        Ok(TruncPoly {
            vd: self.vd,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly, RingError> {
        self.check(other)?;
        Ok(TruncPoly {
            vd: self.vd,
            coeffs: series_mul(&self.coeffs, &other.coeffs),
        })
    }

    pub fn scale(&self, s: &Rational) -> TruncPoly {
        TruncPoly {
            vd: self.vd,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> TruncPoly {
        let mut acc = Self::one(self.vd);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∫ a = e · a_d`.
    pub fn integrate(&self) -> Rational {
        &self.coeffs[self.vd.dim] * int(self.vd.degree as i64)
    }

    /// `v^∨ = Σ (-1)^i v_i`.
    pub fn dual(&self) -> TruncPoly {
        TruncPoly {
            vd: self.vd,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
                .collect(),
        }
    }

    fn unit_check(&self) -> Result<(), RingError> {
        if self.coeffs[0].is_one() {
            Ok(())
        } else {
            Err(RingError::ConstantTerm(rational::display(&self.coeffs[0])))
        }
    }

    pub fn inverse(&self) -> Result<TruncPoly, RingError> {
        if self.coeffs[0].is_zero() {
            return Err(RingError::ConstantTerm("0".into()));
        }
        Ok(TruncPoly {
            vd: self.vd,
            coeffs: series_inv(&self.coeffs),
        })
    }

    /// Logarithm of a class with constant term 1.
    pub fn log(&self) -> Result<TruncPoly, RingError> {
        self.unit_check()?;
        Ok(TruncPoly {
            vd: self.vd,
            coeffs: series_log(&self.coeffs),
        })
    }

    /// Exponential of a nilpotent class; the constant term is ignored.
    pub fn exp_nilpotent(&self) -> TruncPoly {
        let mut x = self.coeffs.clone();
        x[0] = Rational::zero();
        TruncPoly {
            vd: self.vd,
            coeffs: series_exp(&x),
        }
    }

    /// The square root with constant term 1.
    pub fn sqrt(&self) -> Result<TruncPoly, RingError> {
        Ok(self.log()?.scale(&frac(1, 2)).exp_nilpotent())
    }
}

impl Add for &TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        self.try_add(rhs).expect("classes on the same variety")
    }
}

impl Sub for &TruncPoly {
    type Output = TruncPoly;
    fn sub(self, rhs: &TruncPoly) -> TruncPoly {
        self.try_add(&-rhs).expect("classes on the same variety")
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        self.scale(&int(-1))
    }
}

/// Panics on a variety mismatch; use [`TruncPoly::mul`] for the checked form.
impl Mul for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        TruncPoly::mul(self, rhs).expect("classes on the same variety")
    }
}

// Truncated power series, all of the same length.

fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn series_inv(a: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let a0 = a[0].recip();
    let mut out = vec![Rational::zero(); n];
    out[0] = a0.clone();
    for k in 1..n {
        let mut s = Rational::zero();
        for j in 1..=k {
            s += &a[j] * &out[k - j];
        }
        out[k] = -(s * &a0);
    }
    out
}

/// `log a` for `a_0 = 1`, via `(log a)' = a'/a`.
fn series_log(a: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let inv = series_inv(a);
    let deriv: Vec<Rational> = (0..n)
        .map(|k| if k + 1 < n { &a[k + 1] * int(k as i64 + 1) } else { Rational::zero() })
        .collect();
    let q = series_mul(&deriv, &inv);
    let mut out = vec![Rational::zero(); n];
    for k in 1..n {
        out[k] = &q[k - 1] / int(k as i64);
    }
    out
}

/// `exp x` for `x_0 = 0`, via `E' = x'E`.
fn series_exp(x: &[Rational]) -> Vec<Rational> {
    let n = x.len();
    let mut out = vec![Rational::zero(); n];
    out[0] = Rational::one();
    for k in 1..n {
        let mut s = Rational::zero();
        for j in 1..=k {
            s += int(j as i64) * &x[j] * &out[k - j];
        }
        out[k] = s / int(k as i64);
    }
    out
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// Coefficients `a_k` of `log(x / (1 - e^{-x})) = Σ a_k x^k`, for `k < n`.
pub fn todd_log_coefficients(n: usize) -> Vec<Rational> {
    // (1 - e^{-x})/x = Σ (-1)^k x^k / (k+1)!
    let f: Vec<Rational> = (0..n)
        .map(|k| {
            let s = if k % 2 == 0 { int(1) } else { int(-1) };
            s / factorial(k + 1)
        })
        .collect();
    series_log(&f).into_iter().map(|c| -c).collect()
}

/// Power sums `p_k` of the Chern roots, from the Chern classes by Newton's identities.
pub fn power_sums(c: &[Rational]) -> Vec<Rational> {
    let n = c.len();
    let mut p = vec![Rational::zero(); n];
    for k in 1..n {
        let mut s = Rational::zero();
        for i in 1..k {
            let term = &c[i] * &p[k - i];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        let last = int(k as i64) * &c[k];
        if k % 2 == 1 {
            s += last;
        } else {
            s -= last;
        }
        p[k] = s;
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChernSource {
    Adjunction,
    /// The standard K3 input `c = 1 + 24 pt`, not an adjunction computation.
    K3Standard,
}

/// Total Chern class of the tangent bundle.
pub fn tangent_chern(vd: &VarietyData) -> Result<(TruncPoly, ChernSource), RingError> {
    vd.validate()?;
    match vd.kind {
        VarietyKind::Hypersurface => {
            let one_h = TruncPoly::from_i64(*vd, &[1, 1]);
            let num = one_h.pow(vd.ambient_dim as u32 + 1);
            let den = TruncPoly::from_i64(*vd, &[1, vd.degree as i64]);
            Ok((&num * &den.inverse()?, ChernSource::Adjunction))
        }
        VarietyKind::K3 => {
            let pt = frac(1, vd.degree as i64);
            Ok((
                TruncPoly::new(*vd, vec![int(1), int(0), int(24) * pt]),
                ChernSource::K3Standard,
            ))
        }
    }
}

/// `(td, √td)` from the total Chern class.
pub fn todd_and_sqrt(c: &TruncPoly) -> Result<(TruncPoly, TruncPoly), RingError> {
    c.unit_check()?;
    let n = c.coeffs.len();
    let a = todd_log_coefficients(n);
    let p = power_sums(&c.coeffs);
    let log_td: Vec<Rational> = a.iter().zip(&p).map(|(x, y)| x * y).collect();
    let log_td = TruncPoly::new(c.vd, log_td);
    let td = log_td.exp_nilpotent();
    let sqrt = log_td.scale(&frac(1, 2)).exp_nilpotent();
    Ok((td, sqrt))
}

pub fn sqrt_todd(vd: &VarietyData) -> Result<TruncPoly, RingError> {
    let (c, _) = tangent_chern(vd)?;
    Ok(todd_and_sqrt(&c)?.1)
}

/// `v(O(i)) = exp(i h) · √td`.
pub fn mukai_vector_line(vd: &VarietyData, i: i64) -> Result<TruncPoly, RingError> {
    let twist = TruncPoly::monomial(*vd, 1, int(i)).exp_nilpotent();
    Ok(&twist * &sqrt_todd(vd)?)
}
