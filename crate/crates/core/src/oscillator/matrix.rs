use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// A finite N×N section of an infinite banded operator.
///
/// Entries in rows and columns below `exact` coincide with the infinite
/// operator. Each product with a band-w factor loses w boundary rows, which
/// is tracked here; [`OperatorMatrix::trusted_interior`] never exceeds N-2.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    exact: usize,
    bandwidth: usize,
}

impl OperatorMatrix {
    /// A section whose entries are all exact (built directly from the
    /// defining action), with the given half-bandwidth.
    pub fn from_exact(entries: DMatrix<Complex64>, bandwidth: usize) -> Self {
        assert!(entries.is_square(), "operator sections are square");
        let exact = entries.nrows();
        OperatorMatrix {
            entries,
            exact,
            bandwidth,
        }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trusted_interior(&self) -> usize {
        self.exact.min(self.order().saturating_sub(2))
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        OperatorMatrix {
            entries: &self.entries * factor,
            exact: self.exact,
            bandwidth: self.bandwidth,
        }
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            entries: self.entries.adjoint(),
            exact: self.exact,
            bandwidth: self.bandwidth,
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_exact(DMatrix::identity(order, order), 0)
    }

    /// [A, B] = AB - BA.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest |entry| of (self - other) on the common trusted block.
    pub fn interior_distance(&self, other: &Self) -> f64 {
        let t = self.trusted_interior().min(other.trusted_interior());
        let mut worst: f64 = 0.0;
        for i in 0..t {
            for j in 0..t {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }

    /// Largest |entry| on the trusted block.
    pub fn interior_max_abs(&self) -> f64 {
        let t = self.trusted_interior();
        let mut worst: f64 = 0.0;
        for i in 0..t {
            for j in 0..t {
                worst = worst.max(self.entries[(i, j)].norm());
            }
        }
        worst
    }

    /// Largest off-diagonal |entry| on the trusted block.
    pub fn interior_offdiagonal_max(&self) -> f64 {
        let t = self.trusted_interior();
        let mut worst: f64 = 0.0;
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    worst = worst.max(self.entries[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn interior_diagonal(&self) -> Vec<Complex64> {
        (0..self.trusted_interior()).map(|i| self.entries[(i, i)]).collect()
    }
}

fn check_orders(a: &OperatorMatrix, b: &OperatorMatrix) {
    assert_eq!(a.order(), b.order(), "operator sections of different order");
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        check_orders(self, rhs);
        OperatorMatrix {
            entries: &self.entries * &rhs.entries,
            exact: self
                .exact
                .min(rhs.exact)
                .saturating_sub(self.bandwidth.max(rhs.bandwidth)),
            bandwidth: self.bandwidth + rhs.bandwidth,
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        check_orders(self, rhs);
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
            exact: self.exact.min(rhs.exact),
            bandwidth: self.bandwidth.max(rhs.bandwidth),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        check_orders(self, rhs);
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
            exact: self.exact.min(rhs.exact),
            bandwidth: self.bandwidth.max(rhs.bandwidth),
        }
    }
}
