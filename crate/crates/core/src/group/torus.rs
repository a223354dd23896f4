use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::linalg::IntMatrix;

/// Largest denominator used when rounding chart coordinates to the torus.
pub const CHART_DENOMINATOR: i64 = 1 << 24;

/// A point of ℝᵐ/ℤᵐ with exact rational coordinates in `[0, 1)`.
#[derive(Clone, Debug)]
pub struct TorusPoint {
    coords: Vec<Rational64>,
    approx: Vec<f64>,
}

fn frac(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl TorusPoint {
    pub fn new(coords: Vec<Rational64>) -> Self {
        let coords: Vec<Rational64> = coords.into_iter().map(frac).collect();
        let approx = coords.iter().map(|c| c.to_f64().expect("finite rational")).collect();
        Self { coords, approx }
    }

    pub fn zero(m: usize) -> Self {
        Self::new(vec![Rational64::zero(); m])
    }

    /// Grid point `(k₁/n, …, k_m/n)`.
    pub fn grid(ks: &[i64], n: i64) -> Self {
        Self::new(ks.iter().map(|&k| Rational64::new(k, n)).collect())
    }

    /// Rounds real chart coordinates to the nearest multiple of
    /// `1/CHART_DENOMINATOR`.
    pub fn from_f64(xs: &[f64]) -> Self {
        Self::new(
            xs.iter()
                .map(|&x| {
                    let k = (x * CHART_DENOMINATOR as f64).round() as i64;
                    Rational64::new(k.mod_floor(&CHART_DENOMINATOR), CHART_DENOMINATOR)
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        assert_eq!(self.dim(), other.dim(), "torus dimension mismatch");
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> TorusPoint {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, other: &TorusPoint) -> TorusPoint {
        self.add(&other.neg())
    }

    /// Action of an integer matrix on ℝᵐ/ℤᵐ.
    pub fn act(&self, a: &IntMatrix) -> TorusPoint {
        assert_eq!(a.cols(), self.dim());
        Self::new(
            (0..a.rows())
                .map(|i| {
                    a.row(i)
                        .iter()
                        .zip(&self.coords)
                        .fold(Rational64::zero(), |acc, (&aij, c)| acc + c * aij)
                })
                .collect(),
        )
    }

    /// Euclidean norm of the representative of `self − other` in
    /// `[−½, ½)ᵐ`.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.approx
            .iter()
            .zip(&other.approx)
            .map(|(a, b)| {
                let d = a - b;
                let w = d - d.round();
                w * w
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Smallest `n ≥ 1` with `n·self = 0`.
    pub fn order(&self) -> i64 {
        self.coords.iter().fold(1, |acc, c| acc.lcm(c.denom()))
    }
}

impl PartialEq for TorusPoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for TorusPoint {}

impl Hash for TorusPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for TorusPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TorusPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_are_reduced() {
        let p = TorusPoint::new(vec![Rational64::new(5, 4), Rational64::new(-1, 3)]);
        assert_eq!(p.coords(), &[Rational64::new(1, 4), Rational64::new(2, 3)]);
        assert_eq!(p.add(&p.neg()), TorusPoint::zero(2));
    }

    #[test]
    fn distance_wraps() {
        let a = TorusPoint::grid(&[0], 1);
        let b = TorusPoint::grid(&[1], 2);
        assert_eq!(a.distance(&b), 0.5);
        let c = TorusPoint::grid(&[9], 10);
        assert!((a.distance(&c) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn beta_action() {
        let beta = IntMatrix::from_rows(&[[1, 1], [0, -1]]);
        let p = TorusPoint::grid(&[1, 1], 4);
        // (x + y, −y)
        assert_eq!(p.act(&beta), TorusPoint::grid(&[2, 3], 4));
    }
}
