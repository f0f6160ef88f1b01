//! End-to-end acceptance suite. Each numbered criterion prints one
//! `pass`/`FAIL` line; the test fails if any criterion does.

use dirac_pt::bound::{
    detm_bound, find_bound_states, solve_vector_strength, BoundWavefunction, SearchConfig,
    StrengthRoots,
};
use dirac_pt::kernel::{kernel_integrals, PotentialSpec};
use dirac_pt::kinematics::Kinematics;
use dirac_pt::mat2::Mat2;
use dirac_pt::nonrel::{nr_scatter, NRCase};
use dirac_pt::scattering::{determinant_identity_residual, regressive_via_linear_system, scatter};
use dirac_pt_oracle::{n_integral_oracle, NIntegral, QuadratureSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    failures: Vec<String>,
}

impl Report {
    fn record(&mut self, number: usize, label: &str, pass: bool, detail: String) {
        println!(
            "criterion {number:2}: {} — {label} ({detail})",
            if pass { "pass" } else { "FAIL" }
        );
        if !pass {
            self.failures.push(format!("criterion {number}: {label}: {detail}"));
        }
    }
}

fn sci(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", cells.join(", "))
}

fn fig1_lower() -> PotentialSpec {
    PotentialSpec::yamaguchi(-5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap()
}

fn random_spec(rng: &mut ChaCha8Rng) -> PotentialSpec {
    PotentialSpec::yamaguchi(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.5..2.0),
    )
    .unwrap()
}

fn random_energy(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(1.05..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
}

#[test]
fn acceptance() {
    let mut report = Report { failures: Vec::new() };
    let r = &mut report;

    single_bound_state(r, 1, "single bound state, asymmetric well", &fig1_lower(), 0.3835);
    let fig2 = PotentialSpec::yamaguchi(-2.0, 2.0, -2.0, 1.0, 1.0, 1.0).unwrap();
    single_bound_state(r, 2, "single bound state, mirrored phase well", &fig2, 0.1815);
    near_threshold_pair(r);
    half_bound_resonance(r);
    handedness(r);
    pt_property_suite(r);
    dual_formulation(r);
    oracle_equivalence(r);
    hermitian_unitarity(r);
    nr_convergence(r);
    strength_round_trip(r);
    wavefunction_pt_eigenstate(r);

    assert!(
        report.failures.is_empty(),
        "acceptance failures:\n{}",
        report.failures.join("\n")
    );
}

fn single_bound_state(
    report: &mut Report,
    number: usize,
    label: &str,
    spec: &PotentialSpec,
    expected: f64,
) {
    let states = find_bound_states(spec, 1.0, &SearchConfig::default()).unwrap();
    let pass = states.len() == 1 && (states[0].energy - expected).abs() < 5e-4;
    let detail = match states.first() {
        Some(s) => format!("E = {:.6}m, expected {expected}m ± 5e-4", s.energy),
        None => "no states found".to_string(),
    };
    report.record(number, label, pass && states.len() == 1, detail);
}

fn near_threshold_pair(report: &mut Report) {
    let spec = PotentialSpec::yamaguchi(-1.0, 0.0, 10.0, 10.0, 1.0, 1.0).unwrap();
    let config = SearchConfig {
        edge_inset: 1e-9,
        ..SearchConfig::default()
    };
    let states = find_bound_states(&spec, 1.0, &config).unwrap();
    let expected = 0.999999923;
    let pass = states.len() == 2
        && (states[0].energy / -expected - 1.0).abs() < 1e-7
        && (states[1].energy / expected - 1.0).abs() < 1e-7
        && (states[0].energy + states[1].energy).abs() < 1e-9;
    let detail = format!(
        "{} states: {:?}",
        states.len(),
        states.iter().map(|s| s.energy).collect::<Vec<_>>()
    );
    report.record(3, "symmetric near-threshold pair in deep scalar well", pass, detail);
}

fn half_bound_resonance(report: &mut Report) {
    let mut pass = true;
    let mut details = Vec::new();
    for (sign, edge) in [(1.0, -1.0), (-1.0, 1.0)] {
        // c_V = ±c_S = 5: threshold resonance at E = ∓m
        let spec = PotentialSpec::yamaguchi(sign * 5.0, 5.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let mut t_gaps = Vec::new();
        let mut r_max = Vec::new();
        for &offset in &[0.1, 0.01, 0.001] {
            let e = edge * (1.0 + offset);
            let kin = Kinematics::scattering(e, 1.0).unwrap();
            let res = scatter(&spec, &kin).unwrap();
            t_gaps.push((res.t_lr.norm() - 1.0).abs());
            r_max.push(res.r_lr.norm().max(res.r_rl.norm()));
        }
        let monotone = t_gaps[1] < t_gaps[0]
            && t_gaps[2] < t_gaps[1]
            && r_max[1] < r_max[0]
            && r_max[2] < r_max[1];
        pass &= monotone;
        details.push(format!("edge {edge}: |T|-1 gaps {}", sci(&t_gaps)));
    }
    report.record(4, "half-bound transmission resonance at both edges", pass, details.join("; "));
}

fn handedness(report: &mut Report) {
    let grid: Vec<f64> = (0..100)
        .flat_map(|i| {
            let e = 1.01 + (5.0 - 1.01) * i as f64 / 99.0;
            [e, -e]
        })
        .collect();

    let fig1 = fig1_lower();
    let mut absorptive = true;
    let mut generative = true;
    for &e in &grid {
        let kin = Kinematics::scattering(e, 1.0).unwrap();
        let res = scatter(&fig1, &kin).unwrap();
        absorptive &= res.t_lr.norm_sqr() + res.r_lr.norm_sqr() < 1.0;
        generative &= res.t_rl.norm_sqr() + res.r_rl.norm_sqr() > 1.0;
    }

    let fig2 = PotentialSpec::yamaguchi(-2.0, 2.0, -2.0, 1.0, 1.0, 1.0).unwrap();
    let mut saw_low = false;
    let mut saw_high = false;
    for &e in &grid {
        let kin = Kinematics::scattering(e, 1.0).unwrap();
        let res = scatter(&fig2, &kin).unwrap();
        let excess = res.t_lr.norm_sqr() + res.r_lr.norm_sqr() - 1.0;
        saw_low |= excess < 0.0;
        saw_high |= excess > 0.0;
    }
    let pass = absorptive && generative && saw_low && saw_high;
    report.record(
        5,
        "one-sided absorption with sign change in the mirrored well",
        pass,
        format!("absorptive={absorptive} generative={generative} sign change={}", saw_low && saw_high),
    );
}

fn pt_property_suite(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let spec = random_spec(&mut rng);
        for _ in 0..5 {
            let kin = Kinematics::scattering(random_energy(&mut rng), 1.0).unwrap();
            let res = scatter(&spec, &kin).unwrap();
            worst = worst.max(res.diagnostics.max_abs());
        }
    }
    report.record(
        6,
        "PT S-matrix relations over 500 random evaluations",
        worst < 1e-10,
        format!("worst residual {worst:.3e}"),
    );
}

fn dual_formulation(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let spec = random_spec(&mut rng);
        let kin = Kinematics::scattering(random_energy(&mut rng), 1.0).unwrap();
        let res = scatter(&spec, &kin).unwrap();
        let (t_rl, r_rl) = regressive_via_linear_system(&spec, &kin).unwrap();
        let rel = (res.t_rl - t_rl).norm() / t_rl.norm().max(1.0);
        let rel_r = (res.r_rl - r_rl).norm() / r_rl.norm().max(1.0);
        let det_id = determinant_identity_residual(&spec, &kin).unwrap();
        worst = worst.max(rel).max(rel_r).max(det_id);
    }
    report.record(
        7,
        "regressive coefficients agree between both formulations",
        worst < 1e-10,
        format!("worst relative gap {worst:.3e}"),
    );
}

fn oracle_equivalence(report: &mut Report) {
    let quad = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst = 0.0f64;
    let which = [
        NIntegral::N1Plus,
        NIntegral::N2Plus,
        NIntegral::N1Minus,
        NIntegral::N2Minus,
    ];
    for draw in 0..70 {
        let (a, b) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (c, d) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let spec = PotentialSpec::yamaguchi(0.0, 0.0, a, b, c, d).unwrap();
        // 50 real-momentum draws, then 20 on the bound branch with the
        // truncation margin respected
        let k = if draw < 50 {
            Complex64::new(rng.gen_range(0.3..3.0), 0.0)
        } else {
            Complex64::new(0.0, rng.gen_range(0.05..0.45) * c.min(d))
        };
        let ints = kernel_integrals(&spec, k).unwrap();
        let closed = [ints.n1_plus, ints.n2_plus, ints.n1_minus, ints.n2_minus];
        for (w, closed_value) in which.iter().zip(closed) {
            let reference = n_integral_oracle(
                |x: f64| (-c * x.abs()).exp(),
                c,
                |x: f64| (-d * x.abs()).exp(),
                d,
                a,
                b,
                k,
                *w,
                &quad,
            )
            .unwrap();
            worst = worst.max((closed_value - reference).norm());
        }
    }
    report.record(
        8,
        "closed-form kernel integrals match the independent oracle",
        worst < 1e-7,
        format!("worst absolute gap {worst:.3e} over 70 draws x 4 integrals"),
    );
}

fn hermitian_unitarity(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let a = rng.gen_range(-3.0..3.0);
        let c = rng.gen_range(0.5..2.0);
        let spec = PotentialSpec::yamaguchi(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            a,
            -a,
            c,
            c,
        )
        .unwrap();
        let kin = Kinematics::scattering(random_energy(&mut rng), 1.0).unwrap();
        let res = scatter(&spec, &kin).unwrap();
        let gap = (res.s_matrix * res.s_matrix.adjoint() - Mat2::identity()).max_norm();
        worst = worst.max(gap);
    }
    report.record(
        9,
        "Hermitian sub-case yields a unitary S matrix",
        worst < 1e-10,
        format!("worst ||S S† - I|| {worst:.3e}"),
    );
}

fn nr_convergence(report: &mut Report) {
    let geometry = PotentialSpec::yamaguchi(0.0, 0.0, 2.0, 1.0, 1.0, 1.0).unwrap();
    let strength = 5.0;
    let mut pass = true;
    let mut details = Vec::new();
    for pseudo in [false, true] {
        let (case, rel_spec) = if pseudo {
            (
                NRCase::pseudospin(strength),
                PotentialSpec::yamaguchi(-strength, strength, 2.0, 1.0, 1.0, 1.0).unwrap(),
            )
        } else {
            (
                NRCase::spin(strength),
                PotentialSpec::yamaguchi(strength, strength, 2.0, 1.0, 1.0, 1.0).unwrap(),
            )
        };
        let mut gaps = Vec::new();
        for &k in &[0.2f64, 0.1, 0.05] {
            let kin = Kinematics::scattering((k * k + 1.0).sqrt(), 1.0).unwrap();
            let rel = scatter(&rel_spec, &kin).unwrap();
            let nr = nr_scatter(&case, &geometry, k, 1.0).unwrap();
            let gap = (rel.t_lr - nr.t_lr)
                .norm()
                .max((rel.r_lr - nr.r_lr).norm())
                .max((rel.t_rl - nr.t_rl).norm())
                .max((rel.r_rl - nr.r_rl).norm());
            gaps.push(gap);
        }
        // O(k²) scaling: halving k must shrink the gap at least twofold
        pass &= gaps[1] < gaps[0] && gaps[2] < gaps[1] && gaps[2] < gaps[1] / 2.0;
        details.push(format!(
            "{}: gaps {}",
            if pseudo { "pseudospin" } else { "spin" },
            sci(&gaps)
        ));
    }
    report.record(10, "non-relativistic limits converge at O(k²)", pass, details.join("; "));
}

fn strength_round_trip(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut pass = true;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let spec = PotentialSpec::yamaguchi(
            0.0,
            0.0,
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
        )
        .unwrap();
        let energy = rng.gen_range(-0.9..0.9);
        match solve_vector_strength(&spec, energy, 1.0).unwrap() {
            StrengthRoots::Real { c_v_plus, c_v_minus } => {
                pass &= c_v_plus > 0.0 || c_v_minus > 0.0;
                for cv in [c_v_plus, c_v_minus] {
                    let solved = PotentialSpec { c_v: cv, ..spec.clone() };
                    worst = worst.max(detm_bound(&solved, energy, 1.0).unwrap().abs());
                }
            }
            StrengthRoots::ComplexPair { .. } => pass = false,
        }
    }
    pass &= worst < 1e-9;
    report.record(
        11,
        "strength solver round trip drives det M+ to zero",
        pass,
        format!("worst |det M+| {worst:.3e}"),
    );
}

fn wavefunction_pt_eigenstate(report: &mut Report) {
    let spec = fig1_lower();
    let states = find_bound_states(&spec, 1.0, &SearchConfig::default()).unwrap();
    let mut wf = BoundWavefunction::new(&spec, states[0].energy, 1.0).unwrap();
    wf.normalize().unwrap();
    let mut max_gap = 0.0f64;
    for i in 0..41 {
        let x = -10.0 + 0.5 * i as f64;
        let p = wf.eval(x).unwrap();
        let q = wf.eval(-x).unwrap();
        for j in 0..2 {
            max_gap = max_gap.max((p[j] - q[j].conj()).norm());
        }
    }
    let norm = wf.norm_integral(wf.default_half_width()).unwrap();
    let pass = max_gap < 1e-8 && (norm - 1.0).abs() < 1e-6;
    report.record(
        12,
        "normalized bound wavefunction is a PT eigenstate",
        pass,
        format!("max |Ψ(x) - Ψ*(-x)| = {max_gap:.3e}, norm = {norm:.9}"),
    );
}
