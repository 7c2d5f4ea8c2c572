//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its measured values and runtime. Tolerances are pinned here, in code.

use std::time::Instant;

use nalgebra::{Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dicke_probe::dicke::{
    ground_state_covariance, ground_state_covariance_closed_form, ModelParams,
};
use dicke_probe::discrimination::{
    critical_exponent_fit, discrimination_report, helstrom_single_mode, helstrom_two_mode,
    homodyne_threshold_error, hypothesis_pair, optimal_pc_threshold,
    photon_counting_threshold_error, DiscriminationOptions,
};
use dicke_probe::estimation::{
    homodyne_fi, lossy_homodyne_fi, lossy_single_mode_qfi, photon_counting_fi, qfi_fidelity_oracle,
    qfi_single_mode, qfi_two_mode, qfi_two_mode_closed_form, qfi_two_mode_stein, reduced_state_params,
    reference_limit, PcOptions, ReferenceLimit,
};
use dicke_probe::fock::{
    fock_fidelity, squeezed_thermal_fock, two_mode_ground_fock,
};
use dicke_probe::symplectic::{
    gaussian_fidelity_single_mode, gaussian_fidelity_two_mode, partial_trace_to_mode_a,
};

fn verdict(tag: &str, pass: bool, detail: &str, t: Instant) {
    println!(
        "[acceptance {tag}] {}: {detail} ({:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        t.elapsed().as_secs_f64()
    );
    assert!(pass, "acceptance {tag} failed: {detail}");
}

fn random_stable(rng: &mut impl Rng) -> ModelParams {
    let omega_a = rng.gen_range(0.5..2.0);
    let omega_b = rng.gen_range(0.5..2.0);
    let lambda = rng.gen_range(0.0..1.0);
    let d_crit = lambda * lambda / omega_b - omega_a / 4.0;
    let d = d_crit + rng.gen_range(0.1..1.0) * omega_a;
    ModelParams::new(omega_a, omega_b, lambda, d).unwrap()
}

#[test]
fn acceptance_01_small_lambda_qfi() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for d in [0.0, 0.1, 1.0] {
        let p = ModelParams::new(1.0, 1.0, 0.0, d).unwrap();
        let h = qfi_two_mode(&p).unwrap();
        let expect = 2.0 / (4.0 * d + 1.0).powi(2);
        worst = worst.max((h - expect).abs() / expect);
    }
    let pass = worst < 1e-9 && t.elapsed().as_secs_f64() < 1.0;
    verdict(
        "01 small-lambda QFI",
        pass,
        &format!("max relative error {worst:.2e} (tolerance 1e-9)"),
        t,
    );
}

#[test]
fn acceptance_02_trk_closed_form_grid() {
    let t = Instant::now();
    let mut worst_closed = 0.0f64;
    let mut worst_routes = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let lam = 0.05 + (2.0 - 0.05) * i as f64 / 19.0;
            let wa = 0.1 + (3.0 - 0.1) * j as f64 / 19.0;
            let p = ModelParams::new(wa, 1.0, lam, lam * lam).unwrap();
            let h = qfi_two_mode(&p).unwrap();
            let printed = reference_limit(&p, ReferenceLimit::TrkQfi).value;
            worst_closed = worst_closed.max((h - printed).abs() / printed.abs());
            let h_stein = qfi_two_mode_stein(&p).unwrap();
            let h_explicit = qfi_two_mode_closed_form(&p).unwrap();
            let eps = (8e-7 / h).sqrt().min(0.05 * p.stability_margin());
            let h_fid = qfi_fidelity_oracle(&p, eps).unwrap();
            for pair in [(h_stein, h_explicit), (h_stein, h_fid), (h_explicit, h_fid)] {
                worst_routes = worst_routes.max((pair.0 - pair.1).abs() / pair.0.abs());
            }
        }
    }
    let pass = worst_closed < 1e-9 && worst_routes < 1e-4 && t.elapsed().as_secs_f64() < 10.0;
    verdict(
        "02 TRK closed form",
        pass,
        &format!(
            "printed-formula deviation {worst_closed:.2e} (<1e-9), route spread {worst_routes:.2e} (<1e-4) on a 20x20 grid"
        ),
        t,
    );
}

#[test]
fn acceptance_03_worked_ratio_81_92() {
    let t = Instant::now();
    // ω_a = ω_b = 2λ with λ = 1/2, D = D_TRK
    let p = ModelParams::new(1.0, 1.0, 0.5, 0.25).unwrap();
    let ratio = homodyne_fi(&p, 0.0).unwrap() / qfi_two_mode(&p).unwrap();
    let dev = (ratio - 81.0 / 92.0).abs() / (81.0 / 92.0);
    let approx = reference_limit(&p, ReferenceLimit::HomodyneRatioSmallLambda).value;
    let dev_approx = (approx - 7.0 / 8.0).abs();
    let pass = dev < 1e-9 && dev_approx < 1e-15 && t.elapsed().as_secs_f64() < 1.0;
    verdict(
        "03 worked ratio 81/92",
        pass,
        &format!("ratio deviation {dev:.2e}, quadratic-law value deviation {dev_approx:.2e}"),
        t,
    );
}

#[test]
fn acceptance_04_ratio_expansion_coefficient() {
    let t = Instant::now();
    let coeff = 0.5; // 8 ω_a²/(ω_a+ω_b)⁴ at ω_a = ω_b = 1
    let mut detail = String::new();
    let mut measured_smallest = f64::NAN;
    for lam in [0.05, 0.02, 0.01] {
        let p = ModelParams::new(1.0, 1.0, lam, 0.0).unwrap();
        let ratio = homodyne_fi(&p, 0.0).unwrap() / qfi_two_mode(&p).unwrap();
        measured_smallest = (1.0 - ratio) / (lam * lam);
        detail.push_str(&format!("λ={lam}: {measured_smallest:.6}  "));
    }
    let dev = (measured_smallest - coeff).abs() / coeff;
    let pass = dev < 0.02 && t.elapsed().as_secs_f64() < 1.0;
    verdict(
        "04 ratio expansion",
        pass,
        &format!("(1-F/H)/λ² {detail} vs 0.5 (2% at the smallest λ; got {dev:.3e})"),
        t,
    );
}

#[test]
fn acceptance_05_critical_divergences() {
    let t = Instant::now();
    // (a) D = 0: H·8ω_a(λ_crit−λ)²/ω_b → 1 on λ_crit−λ ∈ [1e-5, 1e-3]
    let mut worst_a = 0.0f64;
    for k in 0..=10 {
        let eps = 1e-5 * 10f64.powf(2.0 * k as f64 / 10.0);
        let p = ModelParams::new(1.0, 1.0, 0.5 - eps, 0.0).unwrap();
        let h = qfi_two_mode(&p).unwrap();
        worst_a = worst_a.max((h * 8.0 * eps * eps - 1.0).abs());
    }
    // (b) λ = 1: H·8(D−D_crit)² → 1 on D−D_crit ∈ [1e-6, 1e-4]
    let mut worst_b = 0.0f64;
    for k in 0..=10 {
        let eps = 1e-6 * 10f64.powf(2.0 * k as f64 / 10.0);
        let p = ModelParams::new(1.0, 1.0, 1.0, 0.75 + eps).unwrap();
        let h = qfi_two_mode(&p).unwrap();
        worst_b = worst_b.max((h * 8.0 * eps * eps - 1.0).abs());
    }
    // (c) the √(D−D_crit) correction coefficient of F/H near D_crit
    let mut worst_c = 0.0f64;
    for k in 0..=10 {
        let eps = 1e-6 * 10f64.powf(2.0 * k as f64 / 10.0);
        let p = ModelParams::new(1.0, 1.0, 1.0, 0.75 + eps).unwrap();
        let ratio = homodyne_fi(&p, 0.0).unwrap() / qfi_two_mode(&p).unwrap();
        let printed_coeff = 16.0 / 5.0; // 16λ²ω_a^{3/2}/(4λ²ω_aω_b+ω_b⁴) here
        let measured = (1.0 - ratio) / eps.sqrt();
        worst_c = worst_c.max((measured - printed_coeff).abs() / printed_coeff);
    }
    let pass =
        worst_a < 0.02 && worst_b < 0.02 && worst_c < 0.05 && t.elapsed().as_secs_f64() < 10.0;
    verdict(
        "05 critical divergences",
        pass,
        &format!(
            "λ-side {worst_a:.3e} (<2%), D-side {worst_b:.3e} (<2%), ratio coefficient {worst_c:.3e} (<5%)"
        ),
        t,
    );
}

#[test]
fn acceptance_06_measurement_saturation_near_criticality() {
    let t = Instant::now();
    let mut ratios = Vec::new();
    for (wa, wb, lam, d, tag) in [
        (1.0, 1.0, 0.999 * 0.5, 0.0, "λ=0.999λc"),
        (1.0, 1.0, 1.0, 1.001 * 0.75, "D=1.001Dc"),
    ] {
        let p = ModelParams::new(wa, wb, lam, d).unwrap();
        let h = qfi_two_mode(&p).unwrap();
        let f_hd = homodyne_fi(&p, 0.0).unwrap();
        let pc = photon_counting_fi(&p, &PcOptions::default()).unwrap();
        let ha = qfi_single_mode(&p).unwrap();
        ratios.push((
            tag,
            f_hd / h,
            pc.value / h,
            f_hd / ha,
            pc.value / ha,
            pc.converged,
        ));
    }
    let pass = ratios
        .iter()
        .all(|r| r.1 > 0.99 && r.2 > 0.99 && r.5)
        && t.elapsed().as_secs_f64() < 120.0;
    let detail = ratios
        .iter()
        .map(|r| {
            format!(
                "{}: F(hd)/H={:.5} F(pc)/H={:.5} [vs H_a: {:.5}, {:.5}]",
                r.0, r.1, r.2, r.3, r.4
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    verdict(
        "06 measurement saturation (threshold 0.99 vs two-mode H)",
        pass,
        &detail,
        t,
    );
}

#[test]
fn acceptance_07_discrimination_limits() {
    let t = Instant::now();
    let opts = DiscriminationOptions::default();
    let lc = 0.5;

    // all four probabilities → 1/2 at λ = 0.01 λ_crit
    let r0 = discrimination_report(1.0, 1.0, 0.01 * lc, None, &opts).unwrap();
    let near_half = [r0.p_e, r0.p_e_a, r0.p_e_hd, r0.p_e_pc]
        .iter()
        .all(|v| (v - 0.5).abs() < 1e-3);

    // critical exponents over (λ_crit−λ)/λ_crit ∈ [1e-5, 1e-2]
    let rels: Vec<f64> = (0..10)
        .map(|k| 1e-5 * 10f64.powf(3.0 * k as f64 / 9.0))
        .collect();
    let reports: Vec<_> = rels
        .par_iter()
        .map(|rel| {
            let lam = lc * (1.0 - rel);
            discrimination_report(1.0, 1.0, lam, Some(0), &opts).unwrap()
        })
        .collect();
    let series = |f: &dyn Fn(&dicke_probe::discrimination::DiscriminationReport) -> f64| {
        reports
            .iter()
            .map(|r| (r.lambda, f(r)))
            .collect::<Vec<_>>()
    };
    let fit2 = critical_exponent_fit(&series(&|r| r.p_e), lc).unwrap();
    let fita = critical_exponent_fit(&series(&|r| r.p_e_a), lc).unwrap();
    let fith = critical_exponent_fit(&series(&|r| r.p_e_hd), lc).unwrap();
    let fitp = critical_exponent_fit(&series(&|r| r.p_e_pc), lc).unwrap();

    // optimal photon-counting threshold
    let (p0, p1) = hypothesis_pair(1.0, 1.0, 0.49).unwrap();
    let (n_t, _) = optimal_pc_threshold(&p0, &p1, &opts).unwrap();

    let exps_ok = (fit2.exponent - 0.25).abs() <= 0.03
        && (fita.exponent - 0.20).abs() <= 0.05
        && (fith.exponent - fita.exponent).abs() <= 0.05
        && (fitp.exponent - fita.exponent).abs() <= 0.05;
    let pass = near_half && exps_ok && n_t == 0 && t.elapsed().as_secs_f64() < 300.0;
    verdict(
        "07 discrimination limits",
        pass,
        &format!(
            "P_e({:.4},{:.4},{:.4},{:.4})→1/2 ok={near_half}; exponents: two-mode {:.3}, single {:.3}, hd {:.3}, pc {:.3}; n_T = {n_t}",
            r0.p_e, r0.p_e_a, r0.p_e_hd, r0.p_e_pc,
            fit2.exponent, fita.exponent, fith.exponent, fitp.exponent
        ),
        t,
    );
}

#[test]
fn acceptance_08_loss_robustness() {
    let t = Instant::now();
    let p = ModelParams::new(1.0, 1.0, 0.2, 0.04).unwrap();
    let etas: Vec<f64> = (0..100).map(|k| 0.99 * k as f64 / 99.0).collect();
    let mut ok_monotone = true;
    let mut prev: Option<(f64, f64, f64)> = None;
    let mut last_ratio = 0.0;
    for &eta in &etas {
        let ha = lossy_single_mode_qfi(&p, eta).unwrap();
        let f = lossy_homodyne_fi(&p, eta).unwrap();
        let ratio = f / ha;
        if let Some((pha, pf, pratio)) = prev {
            if ha > pha + 1e-12 || f > pf + 1e-12 || ratio < pratio - 1e-12 {
                ok_monotone = false;
            }
        }
        prev = Some((ha, f, ratio));
        last_ratio = ratio;
    }
    let pass = ok_monotone && last_ratio > 0.999 && t.elapsed().as_secs_f64() < 30.0;
    verdict(
        "08 loss robustness",
        pass,
        &format!("monotone {ok_monotone}, ratio at η=0.99: {last_ratio:.6} (>0.999)"),
        t,
    );
}

#[test]
fn acceptance_09_oracle_equivalence_suite() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acce9);
    let instances: Vec<ModelParams> = (0..500).map(|_| random_stable(&mut rng)).collect();

    let results: Vec<(f64, f64, f64, f64)> = instances
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            // Stein route vs Bures quotient
            let h = qfi_two_mode_stein(p).unwrap();
            let eps = (8e-7 / h).sqrt().min(0.05 * p.stability_margin());
            let h_fid = qfi_fidelity_oracle(p, eps).unwrap();
            let qfi_dev = (h - h_fid).abs() / h;

            // constructive σ vs rescaled closed form
            let a = ground_state_covariance(p).unwrap();
            let b = ground_state_covariance_closed_form(p).unwrap();
            let sigma_dev = (a.matrix() - b.matrix()).amax() / a.matrix().amax().max(1.0);

            // Gaussian vs Fock fidelity: reduced single-mode states, plus the
            // two-mode pure overlap on a subsample
            let stp = reduced_state_params(p).unwrap();
            let shifted = ModelParams::new(
                p.omega_a,
                p.omega_b,
                p.lambda,
                p.d + 0.3 * p.stability_margin(),
            )
            .unwrap();
            let stp2 = reduced_state_params(&shifted).unwrap();
            let cutoff = 32usize
                .max((8.0 * (stp.n_thermal + 1.0) * (2.0 * stp.r.abs()).exp()).ceil() as usize)
                .next_multiple_of(32);
            let r1 = squeezed_thermal_fock(&stp, cutoff, 1e-11).unwrap();
            let r2 = squeezed_thermal_fock(&stp2, cutoff, 1e-11).unwrap();
            let f_fock = fock_fidelity(&r1, &r2).unwrap();
            let f_gauss = gaussian_fidelity_single_mode(&stp.covariance(), &stp2.covariance());
            let mut fid_dev = (f_fock - f_gauss).abs();
            if k % 4 == 0 {
                let g1 = two_mode_ground_fock(p, 44).unwrap();
                let g2 = two_mode_ground_fock(&shifted, 44).unwrap();
                let f2_fock = g1.overlap(&g2).unwrap();
                let f2_gauss = gaussian_fidelity_two_mode(
                    &ground_state_covariance(p).unwrap(),
                    &ground_state_covariance(&shifted).unwrap(),
                )
                .unwrap();
                fid_dev = fid_dev.max((f2_fock - f2_gauss).abs());
            }

            // information chain F ≤ H_a ≤ H with 1e-6 slack
            let h_pure = qfi_two_mode(p).unwrap();
            let ha = qfi_single_mode(p).unwrap();
            let f_hd = homodyne_fi(p, 0.0).unwrap();
            let mut chain_violation = (f_hd - ha).max(ha - h_pure).max(-f_hd) / h_pure;
            if k % 8 == 0 {
                let pc = photon_counting_fi(p, &PcOptions::default()).unwrap();
                chain_violation = chain_violation.max((pc.value - ha) / h_pure);
            }
            (qfi_dev, sigma_dev, fid_dev, chain_violation)
        })
        .collect();

    let worst_qfi = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_sigma = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let worst_fid = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let worst_chain = results.iter().map(|r| r.3).fold(f64::MIN, f64::max);
    let pass = worst_qfi < 1e-4
        && worst_sigma < 1e-9
        && worst_fid < 1e-6
        && worst_chain < 1e-6
        && t.elapsed().as_secs_f64() < 300.0;
    verdict(
        "09 oracle equivalence",
        pass,
        &format!(
            "500 instances: |H_stein−H_fid|/H {worst_qfi:.2e} (<1e-4), σ routes {worst_sigma:.2e} (<1e-9), Gaussian-vs-Fock fidelity {worst_fid:.2e} (<1e-6), chain slack {worst_chain:.2e} (<1e-6)"
        ),
        t,
    );
}

#[test]
fn acceptance_10_homogeneity() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acce10);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_stable(&mut rng);
        let h = qfi_two_mode(&p).unwrap();
        for alpha in [0.5, 2.0, 10.0] {
            let hs = qfi_two_mode(&p.scaled(alpha)).unwrap();
            worst = worst.max((hs * alpha * alpha - h).abs() / h);
        }
    }
    let pass = worst < 1e-9 && t.elapsed().as_secs_f64() < 5.0;
    verdict(
        "10 homogeneity",
        pass,
        &format!("max |α²H(α·)−H|/H = {worst:.2e} (<1e-9)"),
        t,
    );
}

/// Ground-state covariance of `½(xᵀK_x x + yᵀK_y y)` through matrix square
/// roots: an independent diagonalization route for the dipole-gauge model
/// `ω̄_a a†a + ω̄_b b†b + λ̄(a+a†)(b+b†) + D̄(b+b†)²`.
fn dipole_direct_covariance(wa: f64, wb: f64, lam: f64, dbar: f64) -> Matrix4<f64> {
    let kx = Matrix2::new(wa, 2.0 * lam, 2.0 * lam, wb + 4.0 * dbar);
    let ky = Matrix2::new(wa, 0.0, 0.0, wb);
    let mat_fn = |m: Matrix2<f64>, f: &dyn Fn(f64) -> f64| {
        let eig = nalgebra::SymmetricEigen::new(m);
        let d = Matrix2::new(f(eig.eigenvalues[0]), 0.0, 0.0, f(eig.eigenvalues[1]));
        eig.eigenvectors * d * eig.eigenvectors.transpose()
    };
    let ky_h = mat_fn(ky, &|v| v.sqrt());
    let ky_mh = mat_fn(ky, &|v| 1.0 / v.sqrt());
    let m = ky_h * kx * ky_h;
    let sxx = 0.5 * ky_h * mat_fn(m, &|v| 1.0 / v.sqrt()) * ky_h;
    let syy = 0.5 * ky_mh * mat_fn(m, &|v| v.sqrt()) * ky_mh;
    // interleave into the (x_a, y_a, x_b, y_b) ordering
    let mut full = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            full[(2 * i, 2 * j)] = sxx[(i, j)];
            full[(2 * i + 1, 2 * j + 1)] = syy[(i, j)];
        }
    }
    full
}

#[test]
fn acceptance_11_dipole_gauge_consistency() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acce11);
    let mut worst = 0.0f64;
    for k in 0..50 {
        // dipole-gauge parameters (ω̄_a, ω̄_b, λ̄, D̄); D̄ attaches to mode b
        let wa: f64 = rng.gen_range(0.5..2.0);
        let wb: f64 = rng.gen_range(0.5..2.0);
        let lam: f64 = rng.gen_range(0.0..0.9);
        let d_crit = lam * lam / wa - wb / 4.0; // swapped-role stability
        let dbar = d_crit + rng.gen_range(0.1..1.0) * wb;

        let p = ModelParams::new(wa, wb, lam, dbar).unwrap();
        let swapped = p.dipole_gauge_map();

        // independent route: matrix-function σ of the dipole Hamiltonian
        let sigma_direct = dipole_direct_covariance(wa, wb, lam, dbar);
        // the swap maps mode a ↔ mode b: permute to compare
        let sigma_swapped = ground_state_covariance(&swapped).unwrap();
        let perm = |m: &Matrix4<f64>| {
            let idx = [2usize, 3, 0, 1];
            let mut out = Matrix4::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    out[(i, j)] = m[(idx[i], idx[j])];
                }
            }
            out
        };
        let sigma_cmp = perm(sigma_swapped.matrix());
        worst = worst.max((sigma_direct - sigma_cmp).amax());

        // Richardson finite differences of the direct σ give an independent
        // QFI, H_a, and F(hd) for the D̄ estimation problem
        let h_step = 1e-3 * wb.min(wa);
        let sig = |d: f64| dipole_direct_covariance(wa, wb, lam, d);
        let diff = |h: f64| (sig(dbar + h) - sig(dbar - h)) / (2.0 * h);
        let (d1, d2, d4) = (diff(h_step), diff(h_step / 2.0), diff(h_step / 4.0));
        let r1 = (4.0 * d2 - d1) / 3.0;
        let r2 = (4.0 * d4 - d2) / 3.0;
        let dsig = (16.0 * r2 - r1) / 15.0;
        let h_direct = -2.0
            * (dsig[(0, 0)] * dsig[(1, 1)] + dsig[(2, 2)] * dsig[(3, 3)]
                + 2.0 * dsig[(0, 2)] * dsig[(1, 3)]);
        let h_swapped = qfi_two_mode(&swapped).unwrap();
        worst = worst.max((h_direct - h_swapped).abs() / h_swapped);

        // measurement on the matter mode of the dipole model = mode a of the
        // swapped parameters
        let block = dicke_probe::symplectic::SingleModeCovariance::new(
            sigma_direct[(2, 2)],
            sigma_direct[(3, 3)],
        )
        .unwrap();
        let f_direct = dicke_probe::estimation::homodyne_fi_from(
            &block,
            dsig[(2, 2)],
            dsig[(3, 3)],
            0.0,
        );
        let f_swapped = homodyne_fi(&swapped, 0.0).unwrap();
        worst = worst.max((f_direct - f_swapped).abs() / f_swapped.abs().max(1e-12));
        let ha_direct =
            dicke_probe::estimation::qfi_single_mode_from(&block, dsig[(2, 2)], dsig[(3, 3)]);
        let ha_swapped = qfi_single_mode(&swapped).unwrap();
        worst = worst.max((ha_direct - ha_swapped).abs() / ha_swapped);

        // reduced-state (N, r) agree, hence so does every Fock-side quantity
        let stp_swapped = reduced_state_params(&swapped).unwrap();
        let n_direct = (block.det().sqrt() - 0.5).max(0.0);
        let r_direct = 0.25 * (block.xx / block.yy).ln();
        worst = worst.max((n_direct - stp_swapped.n_thermal).abs());
        worst = worst.max((r_direct - stp_swapped.r).abs());

        // spot-check the full report including photon counting on a few
        if k % 10 == 0 {
            let pc = photon_counting_fi(&swapped, &PcOptions::default()).unwrap();
            let direct_params = dicke_probe::estimation::SqueezedThermalParams {
                n_thermal: n_direct,
                r: r_direct,
            };
            let (pn, _) =
                dicke_probe::fock::squeezed_thermal_diagonal(&direct_params, pc.cutoff, 1e-9)
                    .unwrap();
            let (pn_sw, _) = dicke_probe::fock::squeezed_thermal_diagonal(
                &stp_swapped,
                pc.cutoff,
                1e-9,
            )
            .unwrap();
            let dev = pn
                .iter()
                .zip(&pn_sw)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    let pass = worst < 1e-9 && t.elapsed().as_secs_f64() < 60.0;
    verdict(
        "11 dipole gauge",
        pass,
        &format!("50 instances, worst deviation {worst:.2e} (<1e-9)"),
        t,
    );
}

#[test]
fn acceptance_helstrom_cross_checks() {
    // supporting evidence for criterion 7: the two Helstrom routes agree with
    // their Fock-side oracles at a representative coupling
    let t = Instant::now();
    let (p0, p1) = hypothesis_pair(1.0, 1.0, 0.45).unwrap();
    let pe = helstrom_two_mode(&p0, &p1).unwrap();
    let g0 = two_mode_ground_fock(&p0, 44).unwrap();
    let g1 = two_mode_ground_fock(&p1, 44).unwrap();
    let f = g0.overlap(&g1).unwrap();
    let pe_fock = 0.5 * (1.0 - (1.0 - f * f).max(0.0).sqrt());
    let dev2 = (pe - pe_fock).abs();

    let opts = DiscriminationOptions::default();
    let pea = helstrom_single_mode(&p0, &p1, &opts).unwrap();
    let pehd = homodyne_threshold_error(&p0, &p1).unwrap();
    let pepc = photon_counting_threshold_error(&p0, &p1, 0, &opts).unwrap();
    let ordered = pe <= pea.value + 1e-9
        && pea.value <= pehd + 1e-9
        && pea.value <= pepc.value + 1e-9;
    let pass = dev2 < 1e-6 && ordered;
    verdict(
        "07s helstrom oracles",
        pass,
        &format!(
            "two-mode Gaussian vs Fock {dev2:.2e} (<1e-6); ordering P_e={:.4} ≤ P_e(a)={:.4} ≤ min(hd {:.4}, pc {:.4})",
            pe, pea.value, pehd, pepc.value
        ),
        t,
    );
}
