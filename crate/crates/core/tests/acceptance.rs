//! One PASS/FAIL line per acceptance criterion.
//!
//! Exits non-zero when a criterion fails, except for clauses listed in
//! `KNOWN_UNATTAINABLE`, which are still printed as FAIL together with the reason.

mod common;

use std::f64::consts::{FRAC_PI_8, PI};
use std::time::{Duration, Instant};

use qpq_core::adversaries::{
    alice_joint_helstrom, alice_usd_interpret, bb84_memory_attack_basis_mode, biased_p_c, bob_attack,
    max_analytic_product, no_signaling_audit, register_ensembles, BobStrategy, RegisterMode, USD_SUCCESS,
};
use qpq_core::experiments::{
    combine_experiment, monte_carlo, non_decreasing_steps, printed, table1, usd_curve, TABLE1_PRINTED,
};
use qpq_core::protocol::{bob_announce, bob_prepare, run_protocol, AnnouncementMode, Round};
use qpq_core::quantum::{
    parity_mixtures, rho_conclusive, rho_inconclusive, trace_distance, usd_bound, NORTH_EAST, SOUTH_WEST,
};
use qpq_core::rng::stream;
use qpq_core::stats::{chi_square_homogeneity, proportion, sigma_distance};
use qpq_core::{AliceStrategy, Interpretation, ProtocolConfig};
use rand::Rng;

/// Clauses that fail for a mathematical reason, not an implementation one.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "AC5",
    "1 − F(ρ_even, ρ_odd) is identical for k = 2m − 1 and k = 2m, so the curve is \
     non-increasing with strict drops only between pairs",
)];

const SEED: u64 = 20_240_611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let rows = table1();
    let elapsed = start.elapsed();
    let mut bad = Vec::new();
    for (row, want) in rows.iter().zip(TABLE1_PRINTED) {
        let (p0, n_bar) = printed(row);
        if (p0.as_str(), n_bar.as_str()) != want {
            bad.push(format!("N={} k={}: got ({p0}, {n_bar}) want {want:?}", row.n, row.k));
        }
    }
    let pass = bad.is_empty() && rows.len() == 6 && elapsed < Duration::from_secs(1);
    let r = &rows[3];
    outcome(
        pass,
        format!(
            "6 rows, N=5e4 k=7 → P0={:.3} n̄={:.2}; {} mismatches; {:.1?}",
            r.p0,
            r.n_bar,
            bad.len(),
            elapsed
        ) + &bad.iter().map(|b| format!("; {b}")).collect::<String>(),
    )
}

fn ac2() -> Outcome {
    let start = Instant::now();
    let cfg = ProtocolConfig::new(1000, 4).with_seed(SEED);
    let mc = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 2000).expect("honest runs");
    let elapsed = start.elapsed();
    let (c, n) = mc.conclusive_counts();
    let sig = sigma_distance(c, n, 0.25);
    let mean = mc.known_mean();
    let disp = mc.dispersion();
    let pass = sig <= 3.0 && mean.contains(3.91) && disp.contains(1.0) && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "conclusive {:.5} ({sig:.2}σ); n̄ {:.3} CI [{:.3}, {:.3}] ∋ 3.91; var/mean {:.3} CI [{:.3}, {:.3}]; {:.1?}",
            c as f64 / n as f64,
            mean.value,
            mean.lo,
            mean.hi,
            disp.value,
            disp.lo,
            disp.hi,
            elapsed
        ),
    )
}

fn ac3() -> Outcome {
    let mut rng = stream(SEED, 3);
    let samples = 1_000_000u64;
    let mut hits = 0u64;
    let mut wrong = 0u64;
    for _ in 0..samples {
        let sent = bob_prepare(&mut rng);
        let pair = bob_announce(sent, &mut rng);
        if let Interpretation::Conclusive { bit } = alice_usd_interpret(pair, sent, &mut rng).expect("valid pair") {
            hits += 1;
            wrong += (bit != sent.bit()) as u64;
        }
    }
    let sig = sigma_distance(hits, samples, USD_SUCCESS);
    let cfg = ProtocolConfig::new(50_000, 7).with_seed(SEED + 3);
    let mc = monte_carlo(&cfg, AliceStrategy::IndividualUsd, BobStrategy::Honest, 600).expect("usd runs");
    let mean = mc.known_mean();
    let analytic = 50_000.0 * USD_SUCCESS.powi(7);
    let pass = sig <= 3.0 && wrong == 0 && mean.contains(9.3) && mc.total_mismatches() == 0;
    outcome(
        pass,
        format!(
            "per-qubit {:.5} ({sig:.2}σ from {USD_SUCCESS:.5}), {wrong} wrong; N=5e4 k=7 n̄ {:.3} CI [{:.3}, {:.3}] ∋ 9.3 (exact {analytic:.4})",
            hits as f64 / samples as f64,
            mean.value,
            mean.lo,
            mean.hi
        ),
    )
}

fn ac4() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let j = alice_joint_helstrom(k).expect("k in range");
        let matrix = j.matrix.expect("dense route");
        let closed = 0.5 + 0.5 / 2f64.powi(k as i32).sqrt();
        worst = worst.max((matrix - closed).abs());
    }
    let k7 = alice_joint_helstrom(7).expect("k = 7").matrix.expect("dense route");
    let pass = worst < 1e-9 && format!("{k7:.4}") == "0.5442";
    outcome(pass, format!("max |matrix − closed form| = {worst:.2e} for k=1..10; k=7 → {k7:.4}"))
}

fn ac5() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let (e, o) = parity_mixtures(k).expect("k in range");
        let d = trace_distance(&e, &o).expect("same dimension");
        worst = worst.max((d - 2f64.powf(-(k as f64) / 2.0)).abs());
    }
    let curve = usd_curve(10).expect("k in range");
    let first = curve[0].bound;
    let flat = non_decreasing_steps(&curve);
    let pass = worst < 1e-9 && flat.is_empty() && format!("{first:.4}") == "0.2929";
    let values: Vec<String> = curve.iter().map(|p| format!("{:.6}", p.bound)).collect();
    outcome(
        pass,
        format!(
            "max |D − 2^(−k/2)| = {worst:.2e}; k=1 bound {first:.4}; 1−F = [{}]; not decreasing at k = {flat:?}",
            values.join(", ")
        ),
    )
}

fn ac6() -> Outcome {
    let lo = FRAC_PI_8.sin().powi(2);
    let hi = FRAC_PI_8.cos().powi(2);
    let analytic_ok = (biased_p_c(NORTH_EAST) - 0.1464).abs() < 1e-4 && (biased_p_c(SOUTH_WEST) - 0.8536).abs() < 1e-4;
    let trials = 1_000_000u64;
    let ne = bob_attack(BobStrategy::BiasedState { phi: NORTH_EAST }, trials, SEED + 6).expect("valid phi");
    let sw = bob_attack(BobStrategy::BiasedState { phi: SOUTH_WEST }, trials, SEED + 7).expect("valid phi");
    let sig = |e: &qpq_core::stats::Estimate, p: f64| {
        let k = (e.value * e.n as f64).round() as u64;
        sigma_distance(k, e.n, p)
    };
    let s_ne = sig(&ne.p_c, biased_p_c(NORTH_EAST));
    let s_sw = sig(&sw.p_c, biased_p_c(SOUTH_WEST));
    let s_err = sig(&ne.bit_error_rate, 0.5);
    let sweep: Vec<f64> = (0..181).map(|i| biased_p_c(i as f64 * PI / 181.0)).collect();
    let (min, max) = sweep.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let confined = min >= lo - 1e-12 && max <= hi + 1e-12;
    let pass = analytic_ok && s_ne <= 3.0 && s_sw <= 3.0 && s_err <= 3.0 && confined;
    outcome(
        pass,
        format!(
            "p_c(π/8) {:.5} ({s_ne:.2}σ), p_c(5π/8) {:.5} ({s_sw:.2}σ), bit error at π/8 {:.5} ({s_err:.2}σ); sweep p_c ∈ [{min:.5}, {max:.5}]",
            ne.p_c.value, sw.p_c.value, ne.bit_error_rate.value
        ),
    )
}

fn ac7() -> Outcome {
    let trials = 1_000_000u64;
    let ens = register_ensembles(trials, SEED + 8).expect("entangled rounds");
    let dc = ens.conclusive.max_abs_diff(rho_conclusive().matrix());
    let dn = ens.inconclusive.max_abs_diff(rho_inconclusive().matrix());
    let report = bob_attack(
        BobStrategy::EntangledRegister { mode: RegisterMode::ConclusivenessBasis },
        trials,
        SEED + 9,
    )
    .expect("entangled rounds");
    let guess = report.conclusiveness_guess_rate;
    let bound = 0.5 + 2f64.sqrt() / 4.0;
    let bit_err = report.bit_error_rate;
    let wrong = (bit_err.value * bit_err.n as f64).round() as u64;
    let bit_guess = proportion(bit_err.n - wrong, bit_err.n);
    let infeasible = !usd_bound(&rho_conclusive(), &rho_inconclusive()).expect("2×2").feasible;
    let pass = dc < 5e-3 && dn < 5e-3 && guess.contains(bound) && bit_guess.contains(0.5) && infeasible;
    outcome(
        pass,
        format!(
            "|ρ_c − diag(½,½)| {dc:.1e}, |ρ_n − ρ_n*| {dn:.1e} (off-diag {:.4}); conclusiveness guess {:.5} CI [{:.5}, {:.5}] ∋ {bound:.5}; bit guess {:.5} CI ∋ 0.5: {}; USD infeasible: {infeasible}",
            ens.inconclusive[(0, 1)],
            guess.value,
            guess.lo,
            guess.hi,
            bit_guess.value,
            bit_guess.contains(0.5)
        ),
    )
}

fn ac8() -> Outcome {
    let reports = no_signaling_audit(181, 100_000, SEED + 10).expect("sweep");
    let outside: Vec<String> = reports
        .iter()
        .filter(|r| !r.basis_guess_rate.contains(0.5))
        .map(|r| r.strategy.to_string())
        .collect();
    let worst = reports
        .iter()
        .map(|r| (r.basis_guess_rate.value - 0.5).abs())
        .fold(0.0, f64::max);
    let max_product = max_analytic_product(&reports);
    let pass = outside.is_empty() && max_product <= 0.5 && reports.len() == 183;
    outcome(
        pass,
        format!(
            "{} strategies; max |basis guess − ½| {worst:.5}; outside CI: {outside:?}; max analytic p_c·p_b {max_product:.6}",
            reports.len()
        ),
    )
}

fn ac9() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (i, &(n, k)) in [(16, 1), (100, 4), (1000, 7), (5000, 9)].iter().enumerate() {
        let cfg = ProtocolConfig::new(n, k).with_seed(SEED + 20 + i as u64);
        let mut rng = stream(SEED, 90 + i as u64);
        let db: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let key = bb84_memory_attack_basis_mode(&cfg, &db, n / 2).expect("basis mode run");
        let ok = key.known_count() == n && key.mismatches().is_empty();
        pass &= ok;
        details.push(format!("N={n} k={k}: {}/{n} known, {} errors", key.known_count(), key.mismatches().len()));
    }
    outcome(pass, details.join("; "))
}

fn ac10() -> Outcome {
    // Round trip.
    let mut wrong = 0;
    let runs = 300;
    for i in 0..runs {
        let mut rng = stream(SEED + 30, i);
        let n = rng.random_range(1..400);
        let k = rng.random_range(1..4);
        let db: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let target = rng.random_range(0..n);
        let cfg = ProtocolConfig::new(n, k).with_seed(rng.random());
        match run_protocol(&cfg, &db, target, AliceStrategy::Honest, BobStrategy::Honest) {
            Ok(t) if t.retrieved_bit == db[target] && t.key.mismatches().is_empty() => {}
            Ok(_) => wrong += 1,
            Err(qpq_core::Error::RestartLimitExceeded { .. }) => {}
            Err(_) => wrong += 1,
        }
    }

    // Loss invariance.
    let detected = 200_000;
    let lossless = Round::new(AliceStrategy::Honest, BobStrategy::Honest, 1.0, AnnouncementMode::Sarg).expect("honest");
    let lossy = Round::new(AliceStrategy::Honest, BobStrategy::Honest, 0.1, AnnouncementMode::Sarg).expect("honest");
    let a = common::alice_view_histogram(&lossless, detected, &mut stream(SEED + 31, 0)).expect("rounds");
    let b = common::alice_view_histogram(&lossy, detected, &mut stream(SEED + 31, 1)).expect("rounds");
    let chi = chi_square_homogeneity(&a, &b);

    // Determinism.
    let cfg = ProtocolConfig::new(500, 3).with_seed(SEED + 32);
    let r1 = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 50).expect("runs").report().to_json();
    let r2 = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 50).expect("runs").report().to_json();
    let db = vec![1u8; 500];
    let t1 = run_protocol(&cfg, &db, 7, AliceStrategy::Honest, BobStrategy::Honest).expect("run").to_json(true);
    let t2 = run_protocol(&cfg, &db, 7, AliceStrategy::Honest, BobStrategy::Honest).expect("run").to_json(true);
    let bytes = |v: &serde_json::Value| serde_json::to_vec(v).expect("serialize");
    let deterministic = r1 == r2 && bytes(&t1) == bytes(&t2);

    // Combining, reported only.
    let combine = combine_experiment(3, 10_000, 6, 40, SEED + 33).expect("combine");

    let pass = wrong == 0 && chi.p_value > 0.01 && deterministic;
    outcome(
        pass,
        format!(
            "{runs} round trips, {wrong} wrong; loss χ²={:.2} dof={} p={:.3}; byte-identical reruns: {deterministic}; combine m=3 N=1e4 k=6: P(exactly one)={:.3} {:?}",
            chi.statistic, chi.dof, chi.p_value, combine.p_exactly_one.value, combine.distribution
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "table I reproduction", ac1),
        ("AC2", "honest Monte Carlo", ac2),
        ("AC3", "individual USD attack", ac3),
        ("AC4", "joint Helstrom", ac4),
        ("AC5", "parity trace distance and USD curve", ac5),
        ("AC6", "biased-state bounds", ac6),
        ("AC7", "entangled-register attack", ac7),
        ("AC8", "no-signaling sweep", ac8),
        ("AC9", "BB84 contrast mode", ac9),
        ("AC10", "property suite", ac10),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!("{mark} {id} {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), o.detail);
        match (o.pass, known) {
            (false, Some(why)) => println!("     {id} known unattainable: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => println!("     {id} was listed as unattainable but passed"),
            (true, None) => {}
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
