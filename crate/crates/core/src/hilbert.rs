//! Dense complex operators on truncated bosonic modes.
//!
//! Levels are indexed from 0. Joint spaces are ordered `(DQ, JQF)`: the data
//! qubit is subsystem 0 and the filter is subsystem 1, so `embed(op, 0, dims)`
//! is `op ⊗ I` and the joint basis index of `|j, k⟩` is `j * dims[1] + k`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Square complex matrix acting on a (possibly joint) truncated Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix(DMatrix<C64>);

impl OperatorMatrix {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "operator must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = DMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `A ⊗ B`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Largest elementwise `|A − A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.0)
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension(format!(
                "operator dims differ: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

impl<'a> Mul<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &rhs.0)
    }
}

/// Density matrix over the joint truncated space.
///
/// Hermiticity and unit trace are monitored by the integrator rather than
/// enforced on every mutation.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(DMatrix<C64>);

impl DensityMatrix {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        OperatorMatrix::from_matrix(m).map(|op| Self(op.0))
    }

    /// `|index⟩⟨index|`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dim {dim}"
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Ok(Self(m))
    }

    pub fn ground(dim: usize) -> Self {
        Self::basis_state(dim, 0).expect("dim >= 1")
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector; normalizes first.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if amplitudes.is_empty() || norm2 == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let n = amplitudes.len();
        let m = DMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj() / norm2);
        Ok(Self(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn trace_error(&self) -> f64 {
        (self.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.0)
    }

    /// `ρ ← (ρ + ρ†)/2`.
    pub fn symmetrize(&mut self) {
        let adj = self.0.adjoint();
        self.0 += adj;
        self.0 *= C64::new(0.5, 0.0);
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.0)
            .first()
            .copied()
            .unwrap_or(0.0)
    }

    /// Diagonal entries, real parts.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn as_operator(&self) -> OperatorMatrix {
        OperatorMatrix(self.0.clone())
    }
}

fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Lowering operator with `⟨j|c|j+1⟩ = √(j+1)`.
pub fn annihilation(n_levels: usize) -> Result<OperatorMatrix> {
    if n_levels < 2 {
        return Err(Error::InvalidDimension(format!(
            "annihilation operator needs at least 2 levels, got {n_levels}"
        )));
    }
    let mut m = DMatrix::zeros(n_levels, n_levels);
    for j in 0..n_levels - 1 {
        m[(j, j + 1)] = C64::new(((j + 1) as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix(m))
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I`, with `op` in slot `index`.
pub fn embed(op: &OperatorMatrix, index: usize, dims: &[usize]) -> Result<OperatorMatrix> {
    let Some(&slot) = dims.get(index) else {
        return Err(Error::InvalidDimension(format!(
            "subsystem index {index} out of range for {} subsystems",
            dims.len()
        )));
    };
    if slot != op.dim() {
        return Err(Error::InvalidDimension(format!(
            "operator dim {} does not match subsystem {index} dim {slot}",
            op.dim()
        )));
    }
    let mut acc = OperatorMatrix::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        let factor = if k == index {
            op.clone()
        } else {
            OperatorMatrix::identity(d)
        };
        acc = acc.kron(&factor);
    }
    Ok(acc)
}

/// `|level⟩⟨level|` on an `n_levels` mode.
pub fn projector(level: usize, n_levels: usize) -> Result<OperatorMatrix> {
    if level >= n_levels {
        return Err(Error::InvalidArgument(format!(
            "level {level} out of range for {n_levels} levels"
        )));
    }
    let mut m = DMatrix::zeros(n_levels, n_levels);
    m[(level, level)] = C64::new(1.0, 0.0);
    Ok(OperatorMatrix(m))
}

/// `Tr(ρ·op)`.
pub fn expectation(rho: &DensityMatrix, op: &OperatorMatrix) -> Result<C64> {
    if rho.dim() != op.dim() {
        return Err(Error::InvalidDimension(format!(
            "state dim {} does not match operator dim {}",
            rho.dim(),
            op.dim()
        )));
    }
    // Tr(AB) = Σ_ij A_ij B_ji, without forming the product.
    let n = rho.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho.0[(i, j)] * op.0[(j, i)];
        }
    }
    Ok(acc)
}

impl OperatorMatrix {
    /// Checked product, for callers that hold operators of unknown provenance.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self * other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn annihilation_two_levels() {
        let a = annihilation(2).unwrap();
        assert_eq!(a.get(0, 1), c(1.0));
        assert_eq!(a.get(0, 0), c(0.0));
        assert_eq!(a.get(1, 0), c(0.0));
        assert_eq!(a.get(1, 1), c(0.0));
    }

    #[test]
    fn annihilation_sqrt_elements() {
        let a = annihilation(3).unwrap();
        assert!((a.get(1, 2).re - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn number_operator_is_diagonal_ladder() {
        let a = annihilation(4).unwrap();
        let n = &a.dagger() * &a;
        // √j·√j is exact up to one rounding.
        let diff = &n - &OperatorMatrix::from_real_diagonal(&[0.0, 1.0, 2.0, 3.0]);
        assert!(diff.max_abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn annihilation_rejects_single_level() {
        assert!(matches!(annihilation(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn truncated_commutator() {
        for n in 2..7 {
            let a = annihilation(n).unwrap();
            let comm = a.commutator(&a.dagger());
            for i in 0..n {
                for j in 0..n {
                    let expected = if i != j {
                        0.0
                    } else if i == n - 1 {
                        1.0 - n as f64
                    } else {
                        1.0
                    };
                    let got = comm.get(i, j);
                    assert!(got.im == 0.0 && (got.re - expected).abs() <= 8.0 * f64::EPSILON * n as f64, "n={n} ({i},{j}): {got}");
                }
            }
        }
    }

    #[test]
    fn embed_lowering_on_first_slot() {
        let a = annihilation(2).unwrap();
        let e = embed(&a, 0, &[2, 2]).unwrap();
        assert_eq!(e, a.kron(&OperatorMatrix::identity(2)));
        assert_eq!(e.dim(), 4);
    }

    #[test]
    fn embed_identity() {
        let e = embed(&OperatorMatrix::identity(3), 1, &[4, 3]).unwrap();
        assert_eq!(e, OperatorMatrix::identity(12));
    }

    #[test]
    fn embed_projector_acts_on_second_slot() {
        let p = embed(&OperatorMatrix::from_real_diagonal(&[0.0, 1.0]), 1, &[2, 2]).unwrap();
        // |g⟩⊗|e⟩ is joint index 1.
        let rho = DensityMatrix::basis_state(4, 1).unwrap();
        assert_eq!(expectation(&rho, &p).unwrap(), c(1.0));
    }

    #[test]
    fn embed_dimension_mismatch() {
        let a = annihilation(3).unwrap();
        assert!(matches!(embed(&a, 0, &[2, 2]), Err(Error::InvalidDimension(_))));
        assert!(matches!(embed(&a, 2, &[3, 2]), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn projector_cases() {
        assert_eq!(
            projector(1, 4).unwrap(),
            OperatorMatrix::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0])
        );
        let sum = &projector(0, 2).unwrap() + &projector(1, 2).unwrap();
        assert_eq!(sum, OperatorMatrix::identity(2));
        assert_eq!(projector(2, 4).unwrap().trace(), c(1.0));
        assert!(matches!(projector(4, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn expectation_cases() {
        let a = annihilation(3).unwrap();
        let n = &a.dagger() * &a;
        assert_eq!(expectation(&DensityMatrix::ground(3), &n).unwrap(), c(0.0));

        let p1 = embed(&projector(1, 2).unwrap(), 0, &[2, 2]).unwrap();
        // |1⟩⊗|0⟩ is joint index 2.
        let rho = DensityMatrix::basis_state(4, 2).unwrap();
        assert_eq!(expectation(&rho, &p1).unwrap(), c(1.0));

        let mixed = DensityMatrix::maximally_mixed(2);
        let v = expectation(&mixed, &OperatorMatrix::from_real_diagonal(&[0.0, 1.0])).unwrap();
        assert!((v - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let r = expectation(&DensityMatrix::ground(2), &OperatorMatrix::identity(3));
        assert!(matches!(r, Err(Error::InvalidDimension(_))));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = OperatorMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            let m = DMatrix::from_iterator(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)));
            OperatorMatrix(m)
        })
    }

    proptest! {
        #[test]
        fn embed_distributes_over_products(a in arb_matrix(3), b in arb_matrix(3), slot in 0usize..2) {
            let dims = [3, 3];
            let lhs = embed(&(&a * &b), slot, &dims).unwrap();
            let rhs = &embed(&a, slot, &dims).unwrap() * &embed(&b, slot, &dims).unwrap();
            prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
        }

        #[test]
        fn expectation_is_linear(a in arb_matrix(3), b in arb_matrix(3), s in -2.0f64..2.0) {
            let rho = DensityMatrix::maximally_mixed(3);
            let combo = &a + &b.scale_real(s);
            let lhs = expectation(&rho, &combo).unwrap();
            let rhs = expectation(&rho, &a).unwrap() + expectation(&rho, &b).unwrap() * s;
            prop_assert!((lhs - rhs).norm() < 1e-12);
            let id = expectation(&rho, &OperatorMatrix::identity(3)).unwrap();
            prop_assert!((id - rho.trace()).norm() < 1e-15);
        }
    }
}
