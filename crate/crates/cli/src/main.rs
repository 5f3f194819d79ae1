//! `qlamperti`: JSON in, verdicts and CSV reports out.
//!
//! Exit status 0 means every asserted property holds, 1 a genuine negative
//! verdict, 2 an input or usage error.

mod output;
mod schema;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use qlamperti::acceptance;
use qlamperti::classical::{
    doubly_stochastic_check, frobenius_perron_of, koopman_of, multiplicativity_check,
    weighted_permutation_decompose,
};
use qlamperti::io::{defect_csv, matrix_to_json, SuperOperatorJson};
use qlamperti::lp::{
    integrability_constant, norm_scale_report, schatten_norm, weighted_inner, weighted_norm,
};
use qlamperti::mpc::{run_descriptor, MpcDescriptor, DEFAULT_DENSITIES};
use qlamperti::superop::{
    change_of_representation_demo, implementability_check, inverse_weighted_transport,
    isometry_check, jordan_check, jordan_classify, lamperti_decompose, weighted_isometry_transport,
    NormKind,
};
use qlamperti::{CheckConfig, Error, Tolerance};

use output::{Format, Report};
use schema::*;

/// Input or usage problem; always exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "qlamperti", version, about = "Non-commutative L^p isometries, implementability and decompositions")]
struct Cli {
    /// Relative tolerance of every comparison
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for sampled checks (overrides a descriptor's own seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of random trials in sampled checks
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schatten norm, and the state-weighted norm when `rho` is given
    Norm { input: String },
    /// Weighted inner product Tr(ρ^{1/2} A* ρ^{1/2} B)
    Inner { input: String },
    /// Weighted isometry transport τ_p V τ_p^{-1} (or its inverse)
    Transport { input: String },
    /// Least c with T_*(ρ) ⪯ cρ
    Integrability { input: String },
    /// Jordan morphism check and classification
    Jordan { input: String },
    /// Sampled L^p isometry test against the weighted norm of `rho`
    Isometry { input: String },
    /// Factorization T = W λ J of an onto Schatten isometry
    Decompose { input: String },
    /// Implementability of a unital positive weighted isometry
    Implementable { input: String },
    /// Implementability of Λ∘Ad(U^t)∘Λ^{-1} for t = 1..steps
    ChangeRep { input: String },
    /// Finite classical operators
    Classical {
        #[command(subcommand)]
        op: ClassicalCommand,
    },
    /// Truncated Bernoulli shift experiments
    Mpc {
        #[command(subcommand)]
        op: MpcCommand,
    },
    /// Runs the whole acceptance suite
    Selftest,
    /// Direction of the weighted norm as p grows
    NormScale { input: Option<String> },
}

#[derive(Subcommand, Debug)]
enum ClassicalCommand {
    /// Koopman matrix of a point map
    Koopman { input: String },
    /// Frobenius–Perron matrix of a point map on a measure space
    Fp { input: String },
    /// Positivity, integral preservation and unitality
    DsCheck { input: String },
    /// Weighted-permutation decomposition of an L^p isometry
    Lamperti { input: String },
    /// Multiplicativity on the basis functions
    Multiplicative { input: String },
}

#[derive(Subcommand, Debug)]
enum MpcCommand {
    /// Every identity and verdict for a descriptor
    Run { input: String },
}

fn config(cli: &Cli) -> Result<CheckConfig, UsageError> {
    let mut cfg = CheckConfig::default();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(UsageError(format!("--tol must be positive (got {tol})")));
        }
        cfg.tol = Tolerance::new(tol, cfg.tol.abs);
    }
    if let Some(trials) = cli.trials {
        if trials == 0 {
            return Err(UsageError("--trials must be >= 1".into()));
        }
        cfg.trials = trials;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<Report, UsageError> {
    let cfg = config(cli)?;
    let tol = cfg.tol;
    match &cli.command {
        Command::Norm { input } => {
            let (a, p, m) = load::<NormInput>(input)?.parse(tol)?;
            let schatten = schatten_norm(&a, p)?;
            let weighted = m.as_ref().map(|m| weighted_norm(&a, m, p)).transpose()?;
            Report::new(
                "norm",
                true,
                json!({"p": p.to_string(), "schatten": schatten, "weighted": weighted}),
            )
        }
        Command::Inner { input } => {
            let (a, b, m) = load::<InnerInput>(input)?.parse(tol)?;
            let z = weighted_inner(&a, &b, &m)?;
            Report::new("inner", true, json!({"inner": [z.re, z.im]}))
        }
        Command::Transport { input } => {
            let s = load::<SuperopInput>(input)?.parse(tol)?;
            let t = match s.direction {
                TransportDirection::Forward => weighted_isometry_transport(&s.t, &s.m, s.p)?,
                TransportDirection::Inverse => inverse_weighted_transport(&s.t, &s.m, s.p)?,
            };
            Report::new("transport", true, SuperOperatorJson::from_superop(&t))
        }
        Command::Integrability { input } => {
            let s = load::<SuperopInput>(input)?.parse(tol)?;
            match integrability_constant(&s.t, &s.m, &cfg) {
                Ok(c) => Report::new("integrability", true, json!({"positive": true, "c": c})),
                Err(Error::NotPositive(min)) => Report::new(
                    "integrability",
                    false,
                    json!({"positive": false, "min_eigenvalue": min, "c": null}),
                ),
                Err(e) => Err(e.into()),
            }
        }
        Command::Jordan { input } => {
            let s = load::<SuperopInput>(input)?.parse(tol)?;
            let report = jordan_check(&s.t, tol)?;
            let class = if report.is_jordan {
                match jordan_classify(&s.t, tol) {
                    Ok(c) => Some(c),
                    Err(Error::NotClassifiable(_)) => None,
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            let holds = class.is_some();
            Report::new("jordan", holds, json!({"check": report, "classification": class}))
        }
        Command::Isometry { input } => {
            let s = load::<SuperopInput>(input)?.parse(tol)?;
            let r = isometry_check(&s.t, NormKind::Weighted(&s.m), s.p, &cfg)?;
            Report::new("isometry", r.is_isometry, &r)
        }
        Command::Decompose { input } => {
            let s = load::<SuperopInput>(input)?.parse(tol)?;
            match lamperti_decompose(&s.t, s.p, &cfg) {
                Ok(d) => Report::new("decompose", true, &d),
                Err(Error::NotDecomposable { reason, defect, witness }) => Report::new(
                    "decompose",
                    false,
                    json!({"reason": reason, "defect": defect, "witness": matrix_to_json(&witness)}),
                ),
                Err(e) => Err(e.into()),
            }
        }
        Command::Implementable { input } => {
            let s = load::<SuperopInput>(input)?.parse(tol)?;
            let r = implementability_check(&s.t, &s.m, s.p, &cfg)?;
            Report::new("implementable", r.implementable, &r)
        }
        Command::ChangeRep { input } => {
            let doc = load::<ChangeRepInput>(input)?;
            let (u, lambda, m) = doc.parse(tol)?;
            let r = change_of_representation_demo(&u, &lambda, &m, doc.steps, &cfg)?;
            Report::new("change-rep", r.all_implementable, &r)
        }
        Command::Classical { op } => classical(op, &cfg),
        Command::Mpc {
            op: MpcCommand::Run { input },
        } => {
            let mut desc = load::<MpcDescriptor>(input)?;
            if let Some(seed) = cli.seed {
                desc.seed = seed;
            }
            let samples = cli.trials.unwrap_or(DEFAULT_DENSITIES);
            let r = run_descriptor(&desc, samples, &cfg)?;
            let holds = r.identities_hold && r.implementability.implementable;
            let csv = defect_csv(&r.rows)?;
            Ok(Report::new("mpc run", holds, &r)?.with_csv(csv))
        }
        Command::Selftest => {
            let outcomes = acceptance::run_all();
            let holds = outcomes.iter().all(|o| o.passed);
            for o in &outcomes {
                eprintln!("{o}");
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| UsageError(e.to_string());
            w.write_record(["id", "name", "passed", "detail"]).map_err(err)?;
            for o in &outcomes {
                w.write_record([o.id.to_string(), o.name.to_string(), o.passed.to_string(), o.detail.clone()])
                    .map_err(err)?;
            }
            let csv = String::from_utf8(w.into_inner().map_err(|e| UsageError(e.to_string()))?)
                .map_err(|e| UsageError(e.to_string()))?;
            Ok(Report::new("selftest", holds, &outcomes)?.with_csv(csv))
        }
        Command::NormScale { input } => {
            let doc = match input {
                Some(i) => load::<NormScaleInput>(i)?,
                None => NormScaleInput::default(),
            };
            let seed = cfg.seed;
            let m = doc.parse(tol, seed)?;
            let trials = cli.trials.unwrap_or(500);
            let r = norm_scale_report(&m, trials, seed, tol)?;
            let csv = r.to_csv()?;
            let holds = !matches!(r.direction, qlamperti::lp::ScaleDirection::Mixed);
            Ok(Report::new("norm-scale", holds, &r)?.with_csv(csv))
        }
    }
}

fn classical(op: &ClassicalCommand, cfg: &CheckConfig) -> Result<Report, UsageError> {
    let tol = cfg.tol;
    match op {
        ClassicalCommand::Koopman { input } => {
            let (s, _) = load::<PointMapInput>(input)?.parse()?;
            let k = koopman_of(&s);
            Report::new("classical koopman", true, json!({"matrix": matrix_to_json(k.matrix())}))
        }
        ClassicalCommand::Fp { input } => {
            let (s, sp) = load::<PointMapInput>(input)?.parse()?;
            let u = frobenius_perron_of(&s, &sp)?;
            Report::new("classical fp", true, json!({"matrix": matrix_to_json(u.matrix())}))
        }
        ClassicalCommand::DsCheck { input } => {
            let (w, sp, _) = load::<ClassicalInput>(input)?.parse()?;
            let r = doubly_stochastic_check(&w, &sp, tol)?;
            Report::new("classical ds-check", r.ok, &r)
        }
        ClassicalCommand::Lamperti { input } => {
            let (v, sp, p) = load::<ClassicalInput>(input)?.parse()?;
            let r = weighted_permutation_decompose(&v, &sp, p, tol)?;
            Report::new("classical lamperti", r.isometric, &r)
        }
        ClassicalCommand::Multiplicative { input } => {
            let (k, _, _) = load::<ClassicalInput>(input)?.parse()?;
            let r = multiplicativity_check(&k, tol);
            Report::new("classical multiplicative", r.multiplicative, &r)
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), UsageError> {
    let text = report.render(cli.format)?;
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = dispatch(&cli).and_then(|r| emit(&cli, &r).map(|_| r.holds));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
