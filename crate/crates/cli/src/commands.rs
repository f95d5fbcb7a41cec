use std::f64::consts::FRAC_PI_8;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use rand::Rng;
use serde_json::{json, Value};

use qpq_core::adversaries::{
    alice_joint_helstrom, bb84_memory_attack, bb84_memory_attack_basis_mode, bob_attack, joint_helstrom_trials,
    max_analytic_product, no_signaling_audit, sweep_csv, AttackReport, USD_SUCCESS,
};
use qpq_core::experiments::{
    combine_experiment, key_stats, monte_carlo, non_decreasing_steps, printed, table1, usd_curve, usd_curve_csv,
    ExperimentReport, TABLE1_PRINTED,
};
use qpq_core::rng::{derive_seed, stream};
use qpq_core::stats::sigma_distance;
use qpq_core::{run_protocol, AliceStrategy, BobStrategy, ProtocolConfig, RegisterMode};

use crate::args::{AliceAttack, BobAttack, Command, ProtocolArgs, RegisterArg};
use crate::config::{read_database, FileConfig};

/// Tag for the stream that generates the demo database.
const DATABASE_STREAM: u64 = 0xDB;

pub struct Outcome {
    pub report: ExperimentReport,
    /// Command-specific payload stored next to the report.
    pub data: Value,
    /// Human-readable summary for stdout.
    pub summary: String,
    /// Extra files written besides the JSON report.
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn new(report: ExperimentReport, data: Value) -> Self {
        let summary = report.to_text();
        Self {
            report,
            data,
            summary,
            files: Vec::new(),
        }
    }
}

pub struct Context {
    pub file: FileConfig,
    pub seed: u64,
    pub verbose: bool,
}

impl Context {
    fn protocol(&self, p: &ProtocolArgs, n: usize, k: usize) -> Result<ProtocolConfig> {
        let mut cfg = ProtocolConfig::new(p.n.or(self.file.n).unwrap_or(n), p.k.or(self.file.k).unwrap_or(k));
        cfg.eta = p.eta.or(self.file.eta).unwrap_or(1.0);
        cfg.seed = self.seed;
        if let Some(m) = self.file.max_restarts {
            cfg.max_restarts = m;
        }
        cfg.record_qubits = self.verbose;
        cfg.validate()?;
        Ok(cfg)
    }

    fn trials(&self, flag: Option<u64>, default: u64) -> Result<u64> {
        let t = flag.or(self.file.trials).unwrap_or(default);
        if t == 0 {
            bail!("--trials must be at least 1");
        }
        Ok(t)
    }
}

pub fn dispatch(cmd: &Command, ctx: &Context) -> Result<Outcome> {
    match cmd {
        Command::Run { protocol, target, db } => run(ctx, protocol, *target, db.as_deref()),
        Command::Table1 => Ok(table(ctx)),
        Command::AttackAlice { strategy, protocol, trials } => attack_alice(ctx, *strategy, protocol, *trials),
        Command::AttackBob { strategy, phi, mode, trials } => attack_bob(ctx, *strategy, *phi, *mode, *trials),
        Command::Sweep { points, trials, csv } => sweep(ctx, *points, *trials, csv.as_deref()),
        Command::UsdCurve { k_max, csv } => curve(ctx, *k_max, csv.as_deref()),
        Command::Combine { m, protocol, trials } => combine(ctx, *m, protocol, *trials),
    }
}

fn run(ctx: &Context, p: &ProtocolArgs, target: Option<usize>, db_path: Option<&Path>) -> Result<Outcome> {
    let (db, cfg) = match db_path {
        Some(path) => {
            let db = read_database(path)?;
            if db.is_empty() {
                bail!("database file {} is empty", path.display());
            }
            let n = p.n.or(ctx.file.n).unwrap_or(db.len());
            if n != db.len() {
                bail!("--n {n} does not match the {}-bit database", db.len());
            }
            let cfg = ctx.protocol(p, n, 4)?;
            (db, cfg)
        }
        None => {
            let cfg = ctx.protocol(p, 1000, 4)?;
            let mut rng = stream(derive_seed(ctx.seed, DATABASE_STREAM), 0);
            ((0..cfg.n).map(|_| rng.random_range(0..2u8)).collect(), cfg)
        }
    };
    let target = target.or(ctx.file.target).unwrap_or(0);
    if target >= cfg.n {
        bail!("--target {target} outside [0, {})", cfg.n);
    }
    let t = run_protocol(&cfg, &db, target, AliceStrategy::Honest, BobStrategy::Honest)?;
    let mut r = ExperimentReport::new("run");
    r.param("config", &cfg).param("target", target);
    r.check(
        "retrieved_bit_matches",
        t.is_correct(),
        format!("retrieved {} for X[{target}] = {}", t.retrieved_bit, t.database_bit),
    );
    r.check(
        "known_bits_error_free",
        t.key.mismatches().is_empty(),
        format!("{} known bits, {} mismatches", t.key.known_count(), t.key.mismatches().len()),
    );
    let summary = format!(
        "N={} k={} target={} restarts={} known={:?} j={} s={} retrieved={} X[i]={}\n",
        cfg.n,
        cfg.k,
        target,
        t.restarts(),
        t.key.known_indices(),
        t.chosen_j,
        t.shift,
        t.retrieved_bit,
        t.database_bit
    );
    let mut o = Outcome::new(r, t.to_json(ctx.verbose));
    o.summary = summary + &o.summary;
    Ok(o)
}

fn table(_ctx: &Context) -> Outcome {
    let rows = table1();
    let mut r = ExperimentReport::new("table1");
    let mut text = format!("{:>9} {:>3} {:>7} {:>7} {:>9}\n", "N", "k", "P0", "n_bar", "e^-n_bar");
    for (row, want) in rows.iter().zip(TABLE1_PRINTED) {
        let (p0, n_bar) = printed(row);
        text += &format!("{:>9} {:>3} {:>7} {:>7} {:>9.4}\n", row.n, row.k, p0, n_bar, row.poisson_approx);
        let name = format!("N={} k={}", row.n, row.k);
        r.analytic(&format!("{name} P0"), row.p0).analytic(&format!("{name} n_bar"), row.n_bar);
        r.check(
            &format!("{name} printed"),
            (p0.as_str(), n_bar.as_str()) == want,
            format!("({p0}, {n_bar}) vs {want:?}"),
        );
        r.check(
            &format!("{name} poisson"),
            (row.p0 - row.poisson_approx).abs() <= 0.003,
            format!("|P0 − e^-n̄| = {:.5}", (row.p0 - row.poisson_approx).abs()),
        );
    }
    let mut o = Outcome::new(r, json!(rows));
    o.summary = text + &o.summary;
    o
}

fn attack_alice(ctx: &Context, strategy: AliceAttack, p: &ProtocolArgs, trials: Option<u64>) -> Result<Outcome> {
    match strategy {
        AliceAttack::Usd => {
            let cfg = ctx.protocol(p, 50_000, 7)?;
            let trials = ctx.trials(trials, 200)?;
            let mc = monte_carlo(&cfg, AliceStrategy::IndividualUsd, BobStrategy::Honest, trials as usize)?;
            let mut r = mc.report();
            r.id = "attack-alice-usd".into();
            r.analytic("usd_success", USD_SUCCESS);
            Ok(Outcome::new(r, json!({ "records": mc.records })))
        }
        AliceAttack::Helstrom => {
            let k = p.k.or(ctx.file.k).unwrap_or(7);
            let trials = ctx.trials(trials, 100_000)?;
            let j = alice_joint_helstrom(k)?;
            let e = joint_helstrom_trials(k, trials, ctx.seed)?;
            let mut r = ExperimentReport::new("attack-alice-helstrom");
            r.param("k", k).param("trials", trials).param("seed", ctx.seed);
            r.analytic("closed_form", j.closed_form);
            if let Some(m) = j.matrix {
                r.analytic("dense_matrix", m);
            }
            if let Some(s) = j.structured {
                r.analytic("block_matrix", s);
            }
            r.empirical("guess_rate", e);
            r.check("routes_agree", j.max_deviation() < 1e-9, format!("max deviation {:.2e}", j.max_deviation()));
            r.check(
                "empirical_ci",
                e.contains(j.closed_form),
                format!("{:.5} in [{:.5}, {:.5}]", e.value, e.lo, e.hi),
            );
            Ok(Outcome::new(r, json!(j)))
        }
        AliceAttack::Bb84 => {
            let cfg = ctx.protocol(p, 1000, 4)?;
            let db = vec![0u8; cfg.n];
            let basis = bb84_memory_attack_basis_mode(&cfg, &db, 0)?;
            let mut r = ExperimentReport::new("attack-alice-bb84");
            r.param("config", &cfg);
            r.check(
                "entire_key_known",
                basis.known_count() == cfg.n && basis.mismatches().is_empty(),
                format!("{}/{} known, {} errors", basis.known_count(), cfg.n, basis.mismatches().len()),
            );
            let sarg = match bb84_memory_attack(&cfg, &db, 0) {
                Ok(key) => json!({ "known": key.known_count(), "errors": key.mismatches().len() }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            r.analytic("sarg_expected_known", key_stats(cfg.n, cfg.k, USD_SUCCESS)?.n_bar);
            Ok(Outcome::new(
                r,
                json!({ "basis_mode_known": basis.known_count(), "sarg_mode": sarg }),
            ))
        }
    }
}

fn bob_checks(r: &mut ExperimentReport, a: &AttackReport) {
    let cnt = |e: &qpq_core::stats::Estimate| ((e.value * e.n as f64).round() as u64, e.n);
    let (c, n) = cnt(&a.p_c);
    let sig = sigma_distance(c, n, a.analytic.p_c);
    r.check("p_c_3sigma", sig <= 3.0, format!("{:.5} vs {:.5} ({sig:.2}σ)", a.p_c.value, a.analytic.p_c));
    r.check(
        "basis_guess_half",
        a.basis_guess_rate.contains(0.5),
        format!("{:.5} in [{:.5}, {:.5}]", a.basis_guess_rate.value, a.basis_guess_rate.lo, a.basis_guess_rate.hi),
    );
    r.check(
        "product_bound",
        a.analytic.product <= 0.5,
        format!("p_c·p_b = {:.5}", a.analytic.product),
    );
}

fn bob_report(id: &str, a: &AttackReport, seed: u64) -> ExperimentReport {
    let mut r = ExperimentReport::new(id);
    r.param("strategy", a.strategy).param("trials", a.trials).param("seed", seed);
    r.analytic("p_c", a.analytic.p_c)
        .analytic("p_b", a.analytic.p_b)
        .analytic("product", a.analytic.product);
    r.empirical("p_c", a.p_c)
        .empirical("p_b", a.p_b)
        .empirical("bit_error_rate", a.bit_error_rate)
        .empirical("conclusiveness_guess_rate", a.conclusiveness_guess_rate)
        .empirical("basis_guess_rate", a.basis_guess_rate);
    bob_checks(&mut r, a);
    r
}

fn attack_bob(
    ctx: &Context,
    strategy: BobAttack,
    phi: Option<f64>,
    mode: Option<RegisterArg>,
    trials: Option<u64>,
) -> Result<Outcome> {
    let trials = ctx.trials(trials, 1_000_000)?;
    let bob = match strategy {
        BobAttack::Bias => {
            if mode.is_some() {
                bail!("--mode applies to --strategy entangle only");
            }
            BobStrategy::biased(phi.or(ctx.file.phi).unwrap_or(FRAC_PI_8))?
        }
        BobAttack::Entangle => {
            if phi.is_some() {
                bail!("--phi applies to --strategy bias only");
            }
            let mode = match mode.unwrap_or(RegisterArg::Conclusiveness) {
                RegisterArg::Honest => RegisterMode::HonestBasis,
                RegisterArg::Conclusiveness => RegisterMode::ConclusivenessBasis,
            };
            BobStrategy::EntangledRegister { mode }
        }
    };
    let a = bob_attack(bob, trials, ctx.seed)?;
    let r = bob_report("attack-bob", &a, ctx.seed);
    Ok(Outcome::new(r, json!(a)))
}

fn sweep(ctx: &Context, points: Option<usize>, trials: Option<u64>, csv: Option<&Path>) -> Result<Outcome> {
    let points = points.or(ctx.file.points).unwrap_or(181);
    if points == 0 {
        bail!("--points must be at least 1");
    }
    let trials = ctx.trials(trials, 100_000)?;
    let reports = no_signaling_audit(points, trials, ctx.seed)?;
    let mut r = ExperimentReport::new("sweep");
    r.param("points", points).param("trials_per_strategy", trials).param("seed", ctx.seed);
    let max_product = max_analytic_product(&reports);
    r.analytic("max_product", max_product);
    let outside: Vec<String> = reports
        .iter()
        .filter(|a| !a.basis_guess_rate.contains(0.5))
        .map(|a| a.strategy.to_string())
        .collect();
    r.check("max_product_bound", max_product <= 0.5, format!("max p_c·p_b = {max_product:.6}"));
    r.check(
        "basis_guess_half",
        outside.is_empty(),
        format!("{} of {} strategies outside the 99% CI {outside:?}", outside.len(), reports.len()),
    );
    let lo = FRAC_PI_8.sin().powi(2);
    let hi = FRAC_PI_8.cos().powi(2);
    let confined = reports.iter().all(|a| a.analytic.p_c >= lo - 1e-12 && a.analytic.p_c <= hi + 1e-12);
    r.check("p_c_confined", confined, format!("p_c within [{lo:.5}, {hi:.5}]"));
    let path = csv.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("qpq-sweep.csv"));
    fs::write(&path, sweep_csv(&reports)?)?;
    let mut o = Outcome::new(r, json!(reports));
    o.summary = format!("max p_c·p_b = {max_product:.6}\n") + &o.summary;
    o.files.push(path);
    Ok(o)
}

fn curve(ctx: &Context, k_max: Option<usize>, csv: Option<&Path>) -> Result<Outcome> {
    let k_max = k_max.or(ctx.file.k_max).unwrap_or(10);
    let points = usd_curve(k_max)?;
    let mut r = ExperimentReport::new("usd-curve");
    r.param("k_max", k_max);
    for p in &points {
        r.analytic(&format!("k={:02}", p.k), p.bound);
    }
    let first = points[0].bound;
    r.check(
        "k1_value",
        (first - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12,
        format!("{first:.6}"),
    );
    let flat = non_decreasing_steps(&points);
    let non_increasing = points.windows(2).all(|w| w[1].bound <= w[0].bound + 1e-12);
    r.check("non_increasing", non_increasing, "");
    r.check(
        "strictly_decreasing",
        flat.is_empty(),
        if flat.is_empty() {
            String::new()
        } else {
            format!("equal to the previous value at k = {flat:?}")
        },
    );
    let path = csv.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("qpq-usd-curve.csv"));
    fs::write(&path, usd_curve_csv(&points)?)?;
    let mut o = Outcome::new(r, json!(points));
    o.files.push(path);
    Ok(o)
}

fn combine(ctx: &Context, m: Option<usize>, p: &ProtocolArgs, trials: Option<u64>) -> Result<Outcome> {
    let m = m.or(ctx.file.m).unwrap_or(3);
    let cfg = ctx.protocol(p, 10_000, 6)?;
    let trials = ctx.trials(trials, 200)?;
    let c = combine_experiment(m, cfg.n, cfg.k, trials as usize, ctx.seed)?;
    let mut r = ExperimentReport::new("combine");
    r.param("m", m).param("n", cfg.n).param("k", cfg.k).param("trials", trials).param("seed", ctx.seed);
    r.empirical("p_exactly_one", c.p_exactly_one);
    r.check(
        "never_empty",
        !c.distribution.contains_key(&0),
        format!("final known-bit counts {:?}", c.distribution),
    );
    Ok(Outcome::new(r, json!(c)))
}
