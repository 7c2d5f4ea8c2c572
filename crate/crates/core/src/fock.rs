//! Truncated number-basis backend: squeezed-thermal density matrices, photon
//! statistics, trace distance, Uhlmann fidelity, and the two-mode ground
//! state by sparse Lanczos — the oracles the Gaussian layer is checked
//! against, and the workhorse of the discrimination bounds.
//!
//! All states handled here are real in the Fock basis (real squeezing, real
//! ground states of a real Hamiltonian), so matrices are stored as real
//! symmetric.

use nalgebra::DMatrix;

use crate::dicke::{polariton_frequencies, ModelParams};
use crate::error::{Error, Result};
use crate::estimation::SqueezedThermalParams;

/// Default admissible tail mass of a truncated state.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;
/// Hard ceiling on cutoff escalation; past this the computation reports
/// failure instead of grinding on.
pub const CUTOFF_CEILING: usize = 4096;

/// A density matrix on the truncated Fock space {|0⟩, …, |cutoff⟩}.
#[derive(Clone, Debug)]
pub struct FockDensityMatrix {
    m: DMatrix<f64>,
    cutoff: usize,
    tail_mass: f64,
}

impl FockDensityMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Probability mass lost to the truncation, `1 − Tr ρ ≥ 0`.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }
}

/// `exp(K)` with `K = r/2 (a†² − a²)` on a truncated space: the squeeze
/// operator columns `S(r)|m⟩` up to truncation error near the boundary.
fn squeeze_operator(r: f64, dim: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(dim, dim);
    for m in 0..dim.saturating_sub(2) {
        let v = 0.5 * r * (((m + 1) * (m + 2)) as f64).sqrt();
        k[(m + 2, m)] = v;
        k[(m, m + 2)] = -v;
    }
    k.exp()
}

/// Thermal weights `N^m/(1+N)^{m+1}` for m = 0..dim.
fn thermal_weights(n_thermal: f64, dim: usize) -> Vec<f64> {
    let mut w = vec![0.0; dim];
    if n_thermal <= 0.0 {
        w[0] = 1.0;
        return w;
    }
    let ratio = n_thermal / (1.0 + n_thermal);
    let mut t = 1.0 / (1.0 + n_thermal);
    for wm in w.iter_mut() {
        *wm = t;
        t *= ratio;
    }
    w
}

// The squeeze is applied on a padded working space and the result truncated
// back, so that 1 − Tr ρ honestly measures the mass the cutoff loses.
fn padded_dim(cutoff: usize) -> usize {
    cutoff + 1 + (cutoff / 4).max(16)
}

/// Squeezed thermal state `S(r) ν_th S†(r)` in the truncated Fock basis.
///
/// Errors with a suggested cutoff when the tail mass exceeds `tail_tol`.
pub fn squeezed_thermal_fock(
    stp: &SqueezedThermalParams,
    cutoff: usize,
    tail_tol: f64,
) -> Result<FockDensityMatrix> {
    let dim = padded_dim(cutoff);
    let s = squeeze_operator(stp.r, dim);
    let th = thermal_weights(stp.n_thermal, dim);
    // ρ = B Bᵀ with B = S √th keeps the result symmetric PSD by construction
    let mut b = s;
    for (j, w) in th.iter().enumerate() {
        let scale = w.sqrt();
        b.column_mut(j).scale_mut(scale);
    }
    let full = &b * b.transpose();
    let kept = full.view((0, 0), (cutoff + 1, cutoff + 1)).into_owned();
    let tail_mass = (1.0 - kept.trace()).max(0.0);
    if tail_mass > tail_tol {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail_mass,
            tolerance: tail_tol,
            suggested: (2 * cutoff).min(CUTOFF_CEILING),
        });
    }
    Ok(FockDensityMatrix {
        m: kept,
        cutoff,
        tail_mass,
    })
}

/// Photon-number distribution of a squeezed thermal state, without forming
/// the full density matrix: `p(n) = Σ_m th_m S[n,m]²`.
pub fn squeezed_thermal_diagonal(
    stp: &SqueezedThermalParams,
    cutoff: usize,
    tail_tol: f64,
) -> Result<(Vec<f64>, f64)> {
    let dim = padded_dim(cutoff);
    let s = squeeze_operator(stp.r, dim);
    let th = thermal_weights(stp.n_thermal, dim);
    let mut p = vec![0.0; cutoff + 1];
    for (n, pn) in p.iter_mut().enumerate() {
        let row = s.row(n);
        *pn = row
            .iter()
            .zip(th.iter())
            .map(|(v, w)| w * v * v)
            .sum::<f64>();
    }
    let tail = (1.0 - p.iter().sum::<f64>()).max(0.0);
    if tail > tail_tol {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail_mass: tail,
            tolerance: tail_tol,
            suggested: (2 * cutoff).min(CUTOFF_CEILING),
        });
    }
    Ok((p, tail))
}

/// Diagonal `p(n) = ⟨n|ρ|n⟩`; sums to `1 − tail_mass`.
pub fn photon_number_distribution(rho: &FockDensityMatrix) -> Vec<f64> {
    (0..=rho.cutoff).map(|n| rho.m[(n, n)]).collect()
}

/// Trace distance `½ Σ |eig(ρ₁ − ρ₂)|`.
///
/// Requires equal cutoffs; convergence in the cutoff is the caller's loop
/// (see the discrimination bounds).
pub fn trace_distance(rho1: &FockDensityMatrix, rho2: &FockDensityMatrix) -> Result<f64> {
    if rho1.cutoff != rho2.cutoff {
        return Err(Error::Mismatch(format!(
            "trace distance needs equal cutoffs (got {} and {})",
            rho1.cutoff, rho2.cutoff
        )));
    }
    let diff = &rho1.m - &rho2.m;
    let ew = diff.symmetric_eigenvalues();
    Ok(0.5 * ew.iter().map(|w| w.abs()).sum::<f64>())
}

/// Uhlmann fidelity `Tr √(√ρ₁ ρ₂ √ρ₁)` on the truncated space; the Fock-side
/// oracle for the Gaussian fidelity formulas.
pub fn fock_fidelity(rho1: &FockDensityMatrix, rho2: &FockDensityMatrix) -> Result<f64> {
    if rho1.cutoff != rho2.cutoff {
        return Err(Error::Mismatch(format!(
            "fidelity needs equal cutoffs (got {} and {})",
            rho1.cutoff, rho2.cutoff
        )));
    }
    let eig = nalgebra::SymmetricEigen::new(rho1.m.clone());
    let sqrt_ev = eig.eigenvalues.map(|w| w.max(0.0).sqrt());
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&sqrt_ev)
        * eig.eigenvectors.transpose();
    let core = &root * &rho2.m * &root;
    let core = 0.5 * (&core + core.transpose());
    let ew = core.symmetric_eigenvalues();
    Ok(ew.iter().map(|w| w.max(0.0).sqrt()).sum::<f64>().min(1.0))
}

/// Ground state of the truncated two-mode Hamiltonian, stored as the
/// amplitude matrix ψ[n_a, n_b] on {0..cutoff}².
#[derive(Clone, Debug)]
pub struct TwoModeFockVector {
    amps: DMatrix<f64>,
    cutoff: usize,
    norm_deficit: f64,
    energy: f64,
}

/// y[i,j] += (X ψ)[i,j], X the (a+a†) matrix, applied from the left.
fn add_x_left(y: &mut DMatrix<f64>, psi: &DMatrix<f64>, scale: f64) {
    let n = psi.nrows();
    for j in 0..n {
        for i in 0..n {
            let mut v = 0.0;
            if i + 1 < n {
                v += ((i + 1) as f64).sqrt() * psi[(i + 1, j)];
            }
            if i > 0 {
                v += (i as f64).sqrt() * psi[(i - 1, j)];
            }
            y[(i, j)] += scale * v;
        }
    }
}

/// y[i,j] += (ψ X)[i,j], X applied from the right (mode b).
fn add_x_right(y: &mut DMatrix<f64>, psi: &DMatrix<f64>, scale: f64) {
    let n = psi.nrows();
    for j in 0..n {
        for i in 0..n {
            let mut v = 0.0;
            if j + 1 < n {
                v += ((j + 1) as f64).sqrt() * psi[(i, j + 1)];
            }
            if j > 0 {
                v += (j as f64).sqrt() * psi[(i, j - 1)];
            }
            y[(i, j)] += scale * v;
        }
    }
}

fn x_left(psi: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(psi.nrows(), psi.ncols());
    add_x_left(&mut y, psi, 1.0);
    y
}

fn x_right(psi: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(psi.nrows(), psi.ncols());
    add_x_right(&mut y, psi, 1.0);
    y
}

/// (a − a†) applied from the left; y = −i(a−a†)/√2 moments are built on it.
fn aminus_left(psi: &DMatrix<f64>) -> DMatrix<f64> {
    let n = psi.nrows();
    let mut y = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut v = 0.0;
            if i + 1 < n {
                v += ((i + 1) as f64).sqrt() * psi[(i + 1, j)];
            }
            if i > 0 {
                v -= (i as f64).sqrt() * psi[(i - 1, j)];
            }
            y[(i, j)] = v;
        }
    }
    y
}

fn aminus_right(psi: &DMatrix<f64>) -> DMatrix<f64> {
    let n = psi.nrows();
    let mut y = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut v = 0.0;
            if j + 1 < n {
                v += ((j + 1) as f64).sqrt() * psi[(i, j + 1)];
            }
            if j > 0 {
                v -= (j as f64).sqrt() * psi[(i, j - 1)];
            }
            y[(i, j)] = v;
        }
    }
    y
}

fn apply_hamiltonian(p: &ModelParams, psi: &DMatrix<f64>) -> DMatrix<f64> {
    let n = psi.nrows();
    let mut y = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            y[(i, j)] = (p.omega_a * i as f64 + p.omega_b * j as f64) * psi[(i, j)];
        }
    }
    // λ (a+a†)(b+b†): X from both sides
    let xr = x_right(psi);
    add_x_left(&mut y, &xr, p.lambda);
    // D (a+a†)²: X twice from the left
    let xl = x_left(psi);
    add_x_left(&mut y, &xl, p.d);
    y
}

fn lanczos_ground(
    p: &ModelParams,
    n: usize,
    start: DMatrix<f64>,
    max_iter: usize,
    tol: f64,
) -> Result<(f64, DMatrix<f64>)> {
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut v = start;
    let norm = v.norm();
    v /= norm;
    basis.push(v.clone());

    let ground_of_tridiag = |alphas: &[f64], betas: &[f64]| -> (f64, nalgebra::DVector<f64>) {
        let m = alphas.len();
        let mut t = DMatrix::zeros(m, m);
        for (i, a) in alphas.iter().enumerate() {
            t[(i, i)] = *a;
        }
        for (i, b) in betas.iter().enumerate() {
            t[(i, i + 1)] = *b;
            t[(i + 1, i)] = *b;
        }
        let eig = nalgebra::SymmetricEigen::new(t);
        let mut k0 = 0;
        for k in 1..m {
            if eig.eigenvalues[k] < eig.eigenvalues[k0] {
                k0 = k;
            }
        }
        (eig.eigenvalues[k0], eig.eigenvectors.column(k0).into_owned())
    };

    for it in 0..max_iter {
        let vk = basis.last().unwrap();
        let mut w = apply_hamiltonian(p, vk);
        let alpha = w.dot(vk);
        alphas.push(alpha);
        w -= vk * alpha;
        if it > 0 {
            let prev = &basis[it - 1];
            w -= prev * betas[it - 1];
        }
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for b in &basis {
                let c = w.dot(b);
                w -= b * c;
            }
        }
        let beta = w.norm();
        let (e0, y) = ground_of_tridiag(&alphas, &betas);
        let resid = beta * y[y.len() - 1].abs();
        if resid <= tol * e0.abs().max(1.0) || beta <= 1e-14 || it + 1 == max_iter {
            if resid > tol * e0.abs().max(1.0) && beta > 1e-14 {
                return Err(Error::NotConverged(format!(
                    "Lanczos residual {resid:.3e} after {max_iter} iterations (dim {n})"
                )));
            }
            let mut psi = DMatrix::zeros(n, n);
            for (k, b) in basis.iter().enumerate() {
                psi += b * y[k];
            }
            psi /= psi.norm();
            return Ok((e0, psi));
        }
        betas.push(beta);
        basis.push(w / beta);
    }
    unreachable!()
}

/// Ground state of the truncated Hamiltonian by Lanczos iteration with full
/// reorthogonalization. The start vector |0,0⟩ lies in the even-parity sector
/// containing the ground state, so odd amplitudes stay exactly zero.
pub fn two_mode_ground_fock(p: &ModelParams, cutoff: usize) -> Result<TwoModeFockVector> {
    p.require_strictly_stable()?;
    if cutoff < 2 {
        return Err(Error::InvalidParams("cutoff must be at least 2".into()));
    }
    let n = cutoff + 1;
    let mut start = DMatrix::zeros(n, n);
    start[(0, 0)] = 1.0;
    let (energy, mut psi) = lanczos_ground(p, n, start, 400.min(n * n), 1e-11)?;
    if psi[(0, 0)] < 0.0 {
        psi = -psi; // fix the global sign for determinism
    }
    // mass sitting on the outermost two shells; a proxy for truncation error
    let mut boundary = 0.0;
    for k in 0..n {
        for edge in [n - 1, n - 2] {
            boundary += psi[(edge, k)] * psi[(edge, k)];
            if k < n - 2 {
                boundary += psi[(k, edge)] * psi[(k, edge)];
            }
        }
    }
    Ok(TwoModeFockVector {
        amps: psi,
        cutoff,
        norm_deficit: boundary,
        energy,
    })
}

impl TwoModeFockVector {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &DMatrix<f64> {
        &self.amps
    }

    /// Mass on the outermost shells of the truncation.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    /// Ground-state energy of the truncated Hamiltonian, normal ordering as
    /// written (no constant subtracted); for the exact model this is
    /// `(ω_U + ω_L − ω_a − ω_b)/2`.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Energy of the untruncated model, for convergence checks.
    pub fn exact_energy(p: &ModelParams) -> Result<f64> {
        let spec = polariton_frequencies(p)?;
        Ok(0.5 * (spec.omega_u + spec.omega_l - p.omega_a - p.omega_b))
    }

    pub fn overlap(&self, other: &Self) -> Result<f64> {
        if self.cutoff != other.cutoff {
            return Err(Error::Mismatch(format!(
                "overlap needs equal cutoffs (got {} and {})",
                self.cutoff, other.cutoff
            )));
        }
        Ok(self.amps.dot(&other.amps).abs())
    }

    /// Quadrature covariance extracted from the vector. Real ground states
    /// have identically vanishing x–y moments, so only the diagonal and the
    /// (x_a x_b), (y_a y_b) entries are populated.
    pub fn covariance(&self) -> nalgebra::Matrix4<f64> {
        let psi = &self.amps;
        let xa = x_left(psi);
        let xb = x_right(psi);
        let ma = aminus_left(psi);
        let mb = aminus_right(psi);
        let mut m = nalgebra::Matrix4::zeros();
        m[(0, 0)] = 0.5 * xa.dot(&xa);
        m[(2, 2)] = 0.5 * xb.dot(&xb);
        // y = −i(a−a†)/√2 ⇒ ⟨y²⟩ = ‖(a−a†)ψ‖²/2, ⟨y_a y_b⟩ = −⟨ψ,(a−a†)_a(a−a†)_b ψ⟩/2
        m[(1, 1)] = 0.5 * ma.dot(&ma);
        m[(3, 3)] = 0.5 * mb.dot(&mb);
        m[(0, 2)] = 0.5 * xa.dot(&xb);
        m[(2, 0)] = m[(0, 2)];
        m[(1, 3)] = -0.5 * aminus_right(&ma).dot(psi);
        m[(3, 1)] = m[(1, 3)];
        m
    }

    /// Reduced mode-a density matrix `ρ_a = Tr_b |ψ⟩⟨ψ| = A Aᵀ`.
    pub fn reduced_mode_a(&self) -> FockDensityMatrix {
        let rho = &self.amps * self.amps.transpose();
        let tail = (1.0 - rho.trace()).max(0.0);
        FockDensityMatrix {
            m: rho,
            cutoff: self.cutoff,
            tail_mass: tail,
        }
    }
}
