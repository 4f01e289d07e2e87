//! Coordinate vectors with the `l2` inner product, `lp` norms, norming
//! (duality) functionals, and smoothness majorants for the `lp` scale.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// Dense real coordinate vector, the common element type of `l2^n` and `lp^n`.
///
/// All coordinates are finite; constructors reject NaN and infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Wraps a coordinate list, rejecting non-finite entries.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Vector { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            coords: vec![0.0; dim],
        }
    }

    /// Standard basis vector `e_i` (0-based) in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, len: dim });
        }
        let mut v = Self::zeros(dim);
        v.coords[i] = 1.0;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.coords.iter()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Euclidean inner product `sum_i u_i v_i`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Euclidean norm; fast path for `norm_lp(2)`.
    pub fn norm_l2(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `(sum |v_i|^p)^(1/p)` for `p` in `[1, inf]`; `max |v_i|` at `p = inf`.
    pub fn norm_lp(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent { p });
        }
        if p == f64::INFINITY {
            return Ok(self.coords.iter().fold(0.0, |m, c| m.max(c.abs())));
        }
        if p == 1.0 {
            return Ok(self.coords.iter().map(|c| c.abs()).sum());
        }
        if p == 2.0 {
            return Ok(self.norm_l2());
        }
        // Scale out the max to avoid overflow for large p.
        let peak = self.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if peak == 0.0 {
            return Ok(0.0);
        }
        let sum: f64 = self.coords.iter().map(|c| (c.abs() / peak).powf(p)).sum();
        Ok(peak * sum.powf(1.0 / p))
    }

    /// Norming (peak) functional of a nonzero `f` in `lp`, `1 < p < inf`,
    /// returned in dual coordinates: `F_i = sign(f_i) |f_i|^(p-1) / ||f||_p^(p-1)`.
    ///
    /// Satisfies `F(f) = ||f||_p` and `||F||_{p'} = 1` with `p' = p/(p-1)`;
    /// unique in this range of `p`.
    pub fn norming_functional(&self, p: f64) -> Result<Vector> {
        if !(p > 1.0 && p < f64::INFINITY) {
            return Err(Error::InvalidExponent { p });
        }
        let norm = self.norm_lp(p)?;
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let coords = self
            .coords
            .iter()
            .map(|&c| {
                if c == 0.0 {
                    0.0
                } else {
                    c.signum() * (c.abs() / norm).powf(p - 1.0)
                }
            })
            .collect();
        Ok(Vector { coords })
    }

    /// Returns `self` scaled by `c`.
    pub fn scaled(&self, c: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|x| c * x).collect(),
        }
    }

    /// In-place `self += c * other`. Panics on dimension mismatch.
    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "add_scaled dimension mismatch");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += c * b;
        }
    }

    /// Returns `self - other`.
    pub fn minus(&self, other: &Self) -> Result<Vector> {
        self.check_dim(other)?;
        Ok(Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;
    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Vec<f64> {
        v.coords
    }
}

/// Power-type majorant `mu(u) = gamma * u^q` of a modulus of smoothness,
/// with `1 < q <= 2` and the conjugate exponent `p = q/(q-1)` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessMajorant {
    q: f64,
    gamma: f64,
    conjugate: f64,
}

impl SmoothnessMajorant {
    pub fn new(q: f64, gamma: f64) -> Result<Self> {
        if !(q > 1.0 && q <= 2.0) {
            return Err(Error::InvalidExponent { p: q });
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "majorant coefficient gamma must be positive and finite",
            });
        }
        Ok(SmoothnessMajorant {
            q,
            gamma,
            conjugate: q / (q - 1.0),
        })
    }

    /// Majorant for the `lp` modulus of smoothness, `1 < p < inf`:
    /// `(q = p, gamma = 1/p)` for `p <= 2` and `(q = 2, gamma = (p-1)/2)`
    /// for `p >= 2`; the branches agree at `p = 2`.
    pub fn for_lp(p: f64) -> Result<Self> {
        if !(p > 1.0 && p < f64::INFINITY) {
            return Err(Error::InvalidExponent { p });
        }
        if p <= 2.0 {
            Self::new(p, 1.0 / p)
        } else {
            Self::new(2.0, (p - 1.0) / 2.0)
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `p = q/(q-1)`, the exponent appearing in the rate bounds.
    pub fn conjugate_exponent(&self) -> f64 {
        self.conjugate
    }

    /// `mu(u) = gamma * u^q`.
    pub fn eval(&self, u: f64) -> f64 {
        self.gamma * u.powf(self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    #[test]
    fn inner_orthogonal_and_parallel() {
        assert_eq!(vec2(1.0, 0.0).inner(&vec2(0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(vec2(1.0, 1.0).inner(&vec2(1.0, 1.0)).unwrap(), 2.0);
        let f = vec2(0.8, 0.6);
        assert!((f.inner(&f).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let u = vec2(1.0, 0.0);
        let v = Vector::new(vec![1.0]).unwrap();
        assert_eq!(
            u.inner(&v),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(Vector::new(vec![1.0, f64::NAN]), Err(Error::NonFinite));
        assert_eq!(Vector::new(vec![f64::INFINITY]), Err(Error::NonFinite));
    }

    #[test]
    fn lp_norms() {
        assert!((vec2(3.0, 4.0).norm_lp(2.0).unwrap() - 5.0).abs() <= 1e-12);
        let expected = 17f64.powf(0.25);
        assert!((vec2(2.0, 1.0).norm_lp(4.0).unwrap() - expected).abs() <= 1e-12);
        assert!((expected - 2.030543).abs() < 1e-6);
        assert_eq!(Vector::zeros(5).norm_lp(3.7).unwrap(), 0.0);
        assert_eq!(vec2(-2.0, 1.5).norm_lp(f64::INFINITY).unwrap(), 2.0);
        assert_eq!(vec2(-2.0, 1.5).norm_lp(1.0).unwrap(), 3.5);
        assert!(vec2(1.0, 1.0).norm_lp(0.5).is_err());
    }

    #[test]
    fn norming_functional_examples() {
        let e1 = Vector::basis(2, 0).unwrap();
        assert_eq!(e1.norming_functional(2.0).unwrap(), e1);

        let f = vec2(1.0, 1.0);
        let nf = f.norming_functional(2.0).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((nf[0] - r).abs() <= 1e-12 && (nf[1] - r).abs() <= 1e-12);

        // f = (2,1), p = 4: F = (8,1)/17^(3/4).
        let f = vec2(2.0, 1.0);
        let nf = f.norming_functional(4.0).unwrap();
        let scale = 17f64.powf(0.75);
        assert!((nf[0] - 8.0 / scale).abs() <= 1e-12);
        assert!((nf[1] - 1.0 / scale).abs() <= 1e-12);
        // F(f) = ||f||_4 and ||F||_{4/3} = 1.
        assert!((nf.inner(&f).unwrap() - 17f64.powf(0.25)).abs() <= 1e-10);
        assert!((nf.norm_lp(4.0 / 3.0).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn norming_functional_rejects_zero_and_bad_p() {
        assert_eq!(
            Vector::zeros(3).norming_functional(2.0),
            Err(Error::ZeroVector)
        );
        assert!(vec2(1.0, 0.0).norming_functional(1.0).is_err());
        assert!(vec2(1.0, 0.0).norming_functional(f64::INFINITY).is_err());
    }

    #[test]
    fn majorant_for_lp() {
        let m = SmoothnessMajorant::for_lp(2.0).unwrap();
        assert_eq!((m.q(), m.gamma()), (2.0, 0.5));
        let m = SmoothnessMajorant::for_lp(4.0).unwrap();
        assert_eq!((m.q(), m.gamma()), (2.0, 1.5));
        assert_eq!(m.conjugate_exponent(), 2.0);
        let m = SmoothnessMajorant::for_lp(1.5).unwrap();
        assert_eq!(m.q(), 1.5);
        assert!((m.gamma() - 2.0 / 3.0).abs() <= 1e-15);
        assert!((m.conjugate_exponent() - 3.0).abs() <= 1e-12);
        assert!(SmoothnessMajorant::for_lp(1.0).is_err());
        assert!(SmoothnessMajorant::for_lp(0.3).is_err());
        // Both branch formulas coincide at p = 2.
        let low = SmoothnessMajorant::new(2.0, 1.0 / 2.0).unwrap();
        let high = SmoothnessMajorant::new(2.0, (2.0 - 1.0) / 2.0).unwrap();
        assert_eq!(low, high);
    }

    proptest! {
        // Duality identities: F(f) = ||f||_p and ||F||_{p'} = 1.
        #[test]
        fn duality_identities(
            coords in proptest::collection::vec(-10.0f64..10.0, 1..12),
            p in 1.1f64..8.0,
        ) {
            prop_assume!(coords.iter().any(|c| c.abs() > 1e-6));
            let f = Vector::new(coords).unwrap();
            let norm = f.norm_lp(p).unwrap();
            let nf = f.norming_functional(p).unwrap();
            let applied = nf.inner(&f).unwrap();
            prop_assert!((applied - norm).abs() <= 1e-10 * norm.max(1.0));
            let dual_norm = nf.norm_lp(p / (p - 1.0)).unwrap();
            prop_assert!((dual_norm - 1.0).abs() <= 1e-10);
        }

        // Positive scaling leaves the norming functional unchanged.
        #[test]
        fn norming_functional_homogeneous(
            coords in proptest::collection::vec(-10.0f64..10.0, 1..12),
            p in 1.1f64..8.0,
            c in 0.01f64..100.0,
        ) {
            prop_assume!(coords.iter().any(|x| x.abs() > 1e-6));
            let f = Vector::new(coords).unwrap();
            let nf = f.norming_functional(p).unwrap();
            let nf_scaled = f.scaled(c).norming_functional(p).unwrap();
            for i in 0..f.dim() {
                prop_assert!((nf[i] - nf_scaled[i]).abs() <= 1e-12);
            }
        }
    }
}
