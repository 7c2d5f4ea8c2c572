use dicke_probe::discrimination::*;
use dicke_probe::estimation::reduced_state_params;
use dicke_probe::fock::{squeezed_thermal_fock, trace_distance};
use std::time::Instant;

fn main() {
    env_logger::init();
    let rel = 1e-5;
    let lam = 0.5 * (1.0 - rel);
    let (p0, p1) = hypothesis_pair(1.0, 1.0, lam).unwrap();
    let s0 = reduced_state_params(&p0).unwrap();
    let s1 = reduced_state_params(&p1).unwrap();
    println!(
        "state0: N={:.4} r={:.4}; state1: N={:.4} r={:.4}",
        s0.n_thermal, s0.r, s1.n_thermal, s1.r
    );
    for cutoff in [352usize, 704, 1408] {
        let t = Instant::now();
        let r0 = squeezed_thermal_fock(&s0, cutoff, 1.0).unwrap();
        let r1 = squeezed_thermal_fock(&s1, cutoff, 1.0).unwrap();
        let tb = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let d = trace_distance(&r0, &r1).unwrap();
        println!(
            "cutoff {cutoff}: tails {:.2e}/{:.2e}  D = {:.12}  (build {:.1}s eig {:.1}s)",
            r0.tail_mass(),
            r1.tail_mass(),
            d,
            tb,
            t.elapsed().as_secs_f64()
        );
    }
    let t = Instant::now();
    let cv = helstrom_single_mode(&p0, &p1, &DiscriminationOptions::default()).unwrap();
    println!("helstrom_single: {:?} in {:.1}s", cv, t.elapsed().as_secs_f64());
}
