//! Gaussian-state substrate for two bosonic modes.
//!
//! Conventions, fixed once for the whole crate:
//! * quadratures `x = (a + a†)/√2`, `y = −i(a − a†)/√2`, ordered `(x_a, y_a, x_b, y_b)`;
//! * vacuum covariance `σ₀ = I/2` (variance-1/2), so a state is pure iff all
//!   symplectic eigenvalues equal 1/2;
//! * symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]`.

use nalgebra::{Matrix4, SMatrix};

use crate::error::{Error, Result};

/// Relative symmetry tolerance for accepting a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// A state is physical when every symplectic eigenvalue is ≥ 1/2 − PHYSICALITY_TOL.
pub const PHYSICALITY_TOL: f64 = 1e-10;
/// A state is treated as pure when every symplectic eigenvalue is within
/// PURITY_TOL of 1/2; this routes QFI computations to the pure-state branch.
pub const PURITY_TOL: f64 = 1e-8;

/// Two-mode symplectic form in the `(x_a, y_a, x_b, y_b)` ordering.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut o = Matrix4::zeros();
    o[(0, 1)] = 1.0;
    o[(1, 0)] = -1.0;
    o[(2, 3)] = 1.0;
    o[(3, 2)] = -1.0;
    o
}

fn max_asymmetry(m: &Matrix4<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Symplectic eigenvalues of a raw 4×4 covariance matrix: the moduli of the
/// eigenvalues of `iΩσ`, one per mode, descending.
///
/// Computed as the singular values of the antisymmetric `σ^{1/2} Ω σ^{1/2}`
/// (similar to `Ωσ`, and normal, so the SVD is backward-stable). The textbook
/// invariant formula `ν±² = (Δ ± √(Δ²−4 det σ))/2` loses half the digits when
/// the two eigenvalues coincide, which is exactly the pure-state case here.
pub fn symplectic_eigenvalues(m: &Matrix4<f64>) -> Result<[f64; 2]> {
    let scale = m.amax();
    let asym = max_asymmetry(m);
    if asym > SYMMETRY_TOL * scale.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = nalgebra::SymmetricEigen::new(*m);
    let wmin = eig.eigenvalues.min();
    if wmin <= 0.0 {
        return Err(Error::Unphysical(wmin));
    }
    let sqrt_ev = eig.eigenvalues.map(|w| w.sqrt());
    let root = &eig.eigenvectors * Matrix4::from_diagonal(&sqrt_ev) * eig.eigenvectors.transpose();
    let core = root * symplectic_form() * root;
    let mut sv: Vec<f64> = core.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok([sv[0], sv[2]])
}

/// Validated 4×4 ground-state covariance in the `(x_a, y_a, x_b, y_b)` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix4 {
    m: Matrix4<f64>,
    nu: [f64; 2],
}

impl CovarianceMatrix4 {
    /// Validates symmetry and physicality (`σ + iΩ/2 ≥ 0`, i.e. every
    /// symplectic eigenvalue ≥ 1/2 up to [`PHYSICALITY_TOL`]).
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let m = 0.5 * (m + m.transpose()); // exact symmetrization after the tolerance check
        let nu = symplectic_eigenvalues(&m)?;
        if nu[1] < 0.5 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(nu[1]));
        }
        Ok(Self { m, nu })
    }

    pub fn vacuum() -> Self {
        Self {
            m: Matrix4::identity() * 0.5,
            nu: [0.5, 0.5],
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Symplectic eigenvalues, one per mode, descending.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        self.nu
    }

    /// True when both symplectic eigenvalues are within [`PURITY_TOL`] of 1/2.
    pub fn is_pure(&self) -> bool {
        (self.nu[0] - 0.5).abs() <= PURITY_TOL && (self.nu[1] - 0.5).abs() <= PURITY_TOL
    }
}

/// Diagonal single-mode covariance `diag(xx, yy)`; the reduced mode-a state of
/// every ground state handled here carries no x–y correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleModeCovariance {
    pub xx: f64,
    pub yy: f64,
}

impl SingleModeCovariance {
    pub fn new(xx: f64, yy: f64) -> Result<Self> {
        if !(xx > 0.0 && yy > 0.0) || !xx.is_finite() || !yy.is_finite() {
            return Err(Error::Unphysical(xx.min(yy)));
        }
        Ok(Self { xx, yy })
    }

    pub fn vacuum() -> Self {
        Self { xx: 0.5, yy: 0.5 }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy
    }

    /// The single symplectic eigenvalue `√(xx·yy)`.
    pub fn nu(&self) -> f64 {
        self.det().sqrt()
    }

    pub fn is_pure(&self) -> bool {
        (self.nu() - 0.5).abs() <= PURITY_TOL
    }
}

/// Mode-a block of a two-mode covariance.
///
/// Errors if the block carries an x–y correlation beyond numerical noise;
/// [`SingleModeCovariance`] is diagonal by construction.
pub fn partial_trace_to_mode_a(sigma: &CovarianceMatrix4) -> Result<SingleModeCovariance> {
    let m = sigma.matrix();
    let xy = m[(0, 1)].abs();
    let scale = m[(0, 0)].abs().max(m[(1, 1)].abs());
    if xy > 1e-10 * scale {
        return Err(Error::Mismatch(format!(
            "mode-a block has x-y correlation {xy:.3e}; diagonal block expected"
        )));
    }
    SingleModeCovariance::new(m[(0, 0)], m[(1, 1)])
}

/// Solves the Stein-type equation `∂σ = 2 σ Ω Φ Ωᵀ σ − Φ/2` for symmetric Φ,
/// as a dense 16×16 linear system `[(σΩ) ⊗ (2σΩ) − I/2] vec(Φ) = vec(∂σ)`.
///
/// The system is singular exactly on pure states; those calls return
/// [`Error::PureStateDegenerate`] and the caller must use the pure-state
/// branch `Φ = −∂σ`. Near-singular systems (pivot ratio below 1e-12) are
/// rejected the same way rather than regularized into garbage.
pub fn stein_solve(sigma: &CovarianceMatrix4, dsigma: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let asym = max_asymmetry(dsigma);
    if asym > SYMMETRY_TOL * dsigma.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    if sigma.is_pure() {
        return Err(Error::PureStateDegenerate);
    }
    let omega = symplectic_form();
    let so = sigma.matrix() * omega;
    let lhs: SMatrix<f64, 16, 16> =
        so.kronecker(&(2.0 * so)) - SMatrix::<f64, 16, 16>::identity() * 0.5;
    let b: SMatrix<f64, 16, 1> = SMatrix::from_column_slice(dsigma.as_slice());
    let lu = lhs.full_piv_lu();
    let (pmax, pmin) = {
        let u = lu.u();
        let mut hi: f64 = 0.0;
        let mut lo = f64::INFINITY;
        for i in 0..16 {
            let p = u[(i, i)].abs();
            hi = hi.max(p);
            lo = lo.min(p);
        }
        (hi, lo)
    };
    if pmin < 1e-12 * pmax {
        return Err(Error::PureStateDegenerate);
    }
    let x = lu
        .solve(&b)
        .ok_or_else(|| Error::NotConverged("Stein system solve failed".into()))?;
    let phi = Matrix4::from_column_slice(x.as_slice());
    let phi = 0.5 * (phi + phi.transpose());
    // residual bound from the operation contract
    let resid = 2.0 * sigma.matrix() * omega * phi * omega.transpose() * sigma.matrix()
        - 0.5 * phi
        - dsigma;
    let rhs_norm = dsigma.norm();
    if rhs_norm > 0.0 && resid.norm() > 1e-9 * rhs_norm {
        return Err(Error::NotConverged(format!(
            "Stein residual {:.3e} exceeds 1e-9 × ‖∂σ‖",
            resid.norm() / rhs_norm
        )));
    }
    Ok(phi)
}

/// Uhlmann fidelity `F = Tr|√(√ρ₁ ρ₂ √ρ₁)|` of two zero-mean pure two-mode
/// Gaussian states, `F = det(σ₁ + σ₂)^{−1/4}`.
///
/// Mixed two-mode inputs are out of scope (every two-mode state handled here
/// is an interacting ground state, hence pure) and are rejected.
pub fn gaussian_fidelity_two_mode(s1: &CovarianceMatrix4, s2: &CovarianceMatrix4) -> Result<f64> {
    if !s1.is_pure() || !s2.is_pure() {
        return Err(Error::Mismatch(
            "two-mode fidelity requires pure states".into(),
        ));
    }
    let f = (s1.matrix() + s2.matrix()).determinant().powf(-0.25);
    Ok(f.min(1.0))
}

/// Uhlmann fidelity of two zero-mean single-mode Gaussian states,
/// `F² = [√(Δ + Λ) − √Λ]⁻¹` with `Δ = det(σ₁+σ₂)` and
/// `Λ = (4 det σ₁ − 1)(4 det σ₂ − 1)/4`.
///
/// The normalization is pinned by `F(vacuum, vacuum) = 1` and certified
/// against the truncated-Fock fidelity oracle in the test suite.
pub fn gaussian_fidelity_single_mode(s1: &SingleModeCovariance, s2: &SingleModeCovariance) -> f64 {
    let delta = (s1.xx + s2.xx) * (s1.yy + s2.yy);
    let lam = ((4.0 * s1.det() - 1.0) * (4.0 * s2.det() - 1.0) / 4.0).max(0.0);
    let f2 = ((delta + lam).sqrt() - lam.sqrt()).recip();
    f2.sqrt().min(1.0)
}

/// Pure-loss channel `σ ↦ (1−η) σ + η I/2`; η = 1 maps every state to the vacuum.
pub fn pure_loss_channel(sigma: &SingleModeCovariance, eta: f64) -> Result<SingleModeCovariance> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::LossOutOfRange(eta));
    }
    SingleModeCovariance::new(
        (1.0 - eta) * sigma.xx + eta * 0.5,
        (1.0 - eta) * sigma.yy + eta * 0.5,
    )
}
