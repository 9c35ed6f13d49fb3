//! Qubit state in its two standard representations.
//!
//! A state is either a Bloch vector `s` in the closed unit ball or the
//! density matrix `rho = (I + s . sigma) / 2`. The conversions are exact;
//! validation is tolerance-based so that states coming out of long numerical
//! runs are accepted as long as their defects stay at roundoff scale.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physicality tolerance: accepted Hermiticity and trace defects, eigenvalue
/// negativity, and Bloch-norm excess over the unit ball.
pub const PHYS_TOL: f64 = 1e-12;

type C = Complex64;

const C0: C = C::new(0.0, 0.0);
const C1: C = C::new(1.0, 0.0);

pub const SIGMA_X: [[C; 2]; 2] = [[C0, C1], [C1, C0]];
pub const SIGMA_Y: [[C; 2]; 2] = [
    [C0, C::new(0.0, -1.0)],
    [C::new(0.0, 1.0), C0],
];
pub const SIGMA_Z: [[C; 2]; 2] = [[C1, C0], [C0, C::new(-1.0, 0.0)]];

/// Bloch vector. Physical states satisfy `norm() <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Inside the closed unit ball, within [`PHYS_TOL`].
    pub fn is_physical(&self) -> bool {
        let n = self.norm();
        n.is_finite() && n <= 1.0 + PHYS_TOL
    }

    pub fn add_scaled(&self, d: &BlochVector, c: f64) -> BlochVector {
        BlochVector::new(self.x + c * d.x, self.y + c * d.y, self.z + c * d.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        BlochVector::new(v[0], v[1], v[2])
    }
}

/// 2x2 complex matrix intended to hold a density operator. The container
/// itself is unchecked; [`DensityMatrix::validate`] measures the defects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: [[C; 2]; 2],
}

impl DensityMatrix {
    pub const fn from_entries(m: [[C; 2]; 2]) -> Self {
        DensityMatrix { m }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix::from_entries([[C::new(0.5, 0.0), C0], [C0, C::new(0.5, 0.0)]])
    }

    pub fn entries(&self) -> &[[C; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C {
        self.m[i][j]
    }

    pub fn trace(&self) -> C {
        self.m[0][0] + self.m[1][1]
    }

    pub fn determinant(&self) -> C {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry-wise deviation from `rho = rho^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        d
    }

    pub fn trace_defect(&self) -> f64 {
        (self.trace() - C1).norm()
    }

    /// Smaller eigenvalue of the Hermitian part, from the closed 2x2 form
    /// (a + d)/2 - sqrt(((a - d)/2)^2 + |b|^2).
    pub fn min_eigenvalue(&self) -> f64 {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = (self.m[0][1] + self.m[1][0].conj()) * 0.5;
        let mid = (a + d) / 2.0;
        let r = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
        mid - r
    }

    /// Measure all physicality defects. `pass` requires each of them within
    /// [`PHYS_TOL`] (eigenvalues may undershoot zero by at most that much).
    pub fn validate(&self) -> ValidationReport {
        let hermiticity_defect = self.hermiticity_defect();
        let trace_defect = self.trace_defect();
        let min_eigenvalue = self.min_eigenvalue();
        let finite =
            hermiticity_defect.is_finite() && trace_defect.is_finite() && min_eigenvalue.is_finite();
        ValidationReport {
            hermiticity_defect,
            trace_defect,
            min_eigenvalue,
            pass: finite
                && hermiticity_defect <= PHYS_TOL
                && trace_defect <= PHYS_TOL
                && min_eigenvalue >= -PHYS_TOL,
        }
    }
}

/// Defect measurements from [`DensityMatrix::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub pass: bool,
}

/// Free-function form of [`DensityMatrix::validate`].
pub fn validate_density(rho: &DensityMatrix) -> ValidationReport {
    rho.validate()
}

/// `rho = (I + s . sigma) / 2`. Rejects vectors outside the unit ball.
pub fn bloch_to_density(s: BlochVector) -> Result<DensityMatrix> {
    if !s.is_physical() {
        return Err(Error::UnphysicalBloch { norm: s.norm() });
    }
    Ok(DensityMatrix::from_entries([
        [
            C::new(0.5 * (1.0 + s.z), 0.0),
            C::new(0.5 * s.x, -0.5 * s.y),
        ],
        [
            C::new(0.5 * s.x, 0.5 * s.y),
            C::new(0.5 * (1.0 - s.z), 0.0),
        ],
    ]))
}

/// Pauli expectation vector `(tr(rho sigma_x), tr(rho sigma_y), tr(rho sigma_z))`.
/// The input must pass validation.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    let report = rho.validate();
    if !report.pass {
        return Err(Error::InvalidDensity {
            hermiticity_defect: report.hermiticity_defect,
            trace_defect: report.trace_defect,
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    let m = rho.entries();
    Ok(BlochVector::new(
        (m[0][1] + m[1][0]).re,
        -(m[0][1] - m[1][0]).im,
        (m[0][0] - m[1][1]).re,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn origin_maps_to_maximally_mixed() {
        let rho = bloch_to_density(BlochVector::ORIGIN).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed());
        assert_eq!(rho.trace(), C::new(1.0, 0.0));
        assert_abs_diff_eq!(rho.determinant().re, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn plus_x_density() {
        let rho = bloch_to_density(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(rho.entry(i, j).re, 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(rho.entry(i, j).im, 0.0, epsilon = 1e-15);
            }
        }
        // pure state: rank one
        assert_abs_diff_eq!(rho.determinant().re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.min_eigenvalue(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn plus_y_density_has_imaginary_coherences() {
        let rho = bloch_to_density(BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(rho.entry(0, 1), C::new(0.0, -0.5));
        assert_eq!(rho.entry(1, 0), C::new(0.0, 0.5));
        assert_eq!(density_to_bloch(&rho).unwrap(), BlochVector::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn rejects_vector_outside_ball() {
        let err = bloch_to_density(BlochVector::new(0.8, 0.8, 0.0)).unwrap_err();
        assert!(matches!(err, Error::UnphysicalBloch { .. }));
    }

    #[test]
    fn validation_flags_bad_matrices() {
        // unit trace but a negative eigenvalue
        let rho = DensityMatrix::from_entries([
            [C::new(1.1, 0.0), C0],
            [C0, C::new(-0.1, 0.0)],
        ]);
        let report = rho.validate();
        assert!(!report.pass);
        assert!(report.trace_defect < 1e-15);
        assert!(report.min_eigenvalue < -0.09);
        assert!(density_to_bloch(&rho).is_err());

        // trace off by 0.2
        let rho = DensityMatrix::from_entries([
            [C::new(0.6, 0.0), C0],
            [C0, C::new(0.6, 0.0)],
        ]);
        let report = rho.validate();
        assert!(!report.pass);
        assert!(report.trace_defect > 0.19);

        // non-Hermitian coherences
        let rho = DensityMatrix::from_entries([
            [C::new(0.5, 0.0), C::new(0.2, 0.0)],
            [C::new(0.3, 0.0), C::new(0.5, 0.0)],
        ]);
        assert!(rho.validate().hermiticity_defect > 0.09);
        assert!(!rho.validate().pass);
    }

    #[test]
    fn eigenvalues_of_mixed_state() {
        // |s| = 0.5 along x: eigenvalues (1 +- 0.5)/2
        let rho = bloch_to_density(BlochVector::new(0.5, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(rho.min_eigenvalue(), 0.25, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn round_trip_inside_ball(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
            let s = BlochVector::new(x, y, z);
            prop_assume!(s.norm() <= 1.0);
            let rho = bloch_to_density(s).unwrap();
            let report = rho.validate();
            prop_assert!(report.pass);
            let back = density_to_bloch(&rho).unwrap();
            prop_assert!((back.x - s.x).abs() < 1e-14);
            prop_assert!((back.y - s.y).abs() < 1e-14);
            prop_assert!((back.z - s.z).abs() < 1e-14);
            // purity identity: tr(rho^2) = (1 + |s|^2) / 2 = 1 - 2 det(rho)
            let det = rho.determinant().re;
            prop_assert!((1.0 - 2.0 * det - (1.0 + s.norm_sq()) / 2.0).abs() < 1e-14);
        }
    }
}
