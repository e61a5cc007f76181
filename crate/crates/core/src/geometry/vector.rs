use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::Serialize;

/// A point of a finite-dimensional real vector space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Euclidean length, computed with scaling so tiny and huge coordinates
    /// do not under/overflow.
    pub fn euclidean(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        m * self.0.iter().map(|c| (c / m) * (c / m)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (self - other).euclidean()
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * t).collect())
    }

    /// `t * self + (1 - t) * other`
    pub fn lerp(&self, other: &Vector, t: f64) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| t * a + (1.0 - t) * b)
                .collect(),
        )
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector(self.0.iter().map(|&c| f(c)).collect())
    }
}

impl From<Vec<f64>> for Vector {
    fn from(coords: Vec<f64>) -> Self {
        Vector(coords)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(coords: [f64; N]) -> Self {
        Vector(coords.to_vec())
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;

    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

/// A linear functional on [`Vector`]s; evaluation is the coordinate dot product.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Covector(Vec<f64>);

impl Covector {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Covector(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, v: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), v.dim());
        self.0.iter().zip(v.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl From<Vec<f64>> for Covector {
    fn from(coeffs: Vec<f64>) -> Self {
        Covector(coeffs)
    }
}

impl<const N: usize> From<[f64; N]> for Covector {
    fn from(coeffs: [f64; N]) -> Self {
        Covector(coeffs.to_vec())
    }
}

impl Neg for &Covector {
    type Output = Covector;

    fn neg(self) -> Covector {
        Covector(self.0.iter().map(|c| -c).collect())
    }
}

impl Index<usize> for Covector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Vector::from([1.0, 2.0]);
        let b = Vector::from([3.0, -1.0]);
        assert_eq!(&a + &b, Vector::from([4.0, 1.0]));
        assert_eq!(&a - &b, Vector::from([-2.0, 3.0]));
        assert_eq!(2.0 * &a, Vector::from([2.0, 4.0]));
        assert_eq!(a.dot(&b), 1.0);
        assert_eq!(a.lerp(&b, 0.5), Vector::from([2.0, 0.5]));
    }

    #[test]
    fn euclidean_is_scaled() {
        assert_eq!(Vector::from([3.0, 4.0]).euclidean(), 5.0);
        let tiny = Vector::from([3e-200, 4e-200]);
        assert!((tiny.euclidean() / 5e-200 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covector_pairing() {
        let l = Covector::from([0.6, 0.8]);
        assert!((l.eval(&Vector::from([3.0, 4.0])) - 5.0).abs() < 1e-15);
    }
}
