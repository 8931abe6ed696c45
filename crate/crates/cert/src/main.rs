use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use crn_cert::{
    analyze_json, certificate_json, equilibrium_json, parse_vector, read_network, simulation_summary, to_pretty_json,
    write_trajectory_csv,
};
use crn_core::dynamics::{
    find_equilibrium, omega_limit_siphon_check, simulate, DynamicsError, EquilibriumOptions, Kinetics,
    SimulationOptions,
};
use crn_core::dynamics::diagnostics::DEFAULT_ZERO_THRESHOLD;
use crn_core::siphon::minimal_semi_locking_sets;
use crn_core::{certify, structure_report, Overall, ReactionNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NOT_CERTIFIED: u8 = 2;

#[derive(Parser)]
#[command(name = "crn-cert", version, about = "Analyze, certify and simulate chemical reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report and minimal siphons.
    Analyze(Common),
    /// Global stability certificate; exit status 2 when not certified.
    Certify(Common),
    /// Integrate mass-action dynamics and write a trajectory CSV.
    Simulate(Common),
    /// Positive equilibrium in the compatibility class of `--c`.
    Equilibrium(Common),
}

#[derive(Args)]
struct Common {
    /// Network description (.crn).
    file: PathBuf,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit JSON instead of text (analyze, certify).
    #[arg(long)]
    json: bool,
    /// Initial state, comma separated; random when omitted.
    #[arg(long)]
    x0: Option<String>,
    /// Class anchor for `equilibrium`, comma separated; all ones when omitted.
    #[arg(long)]
    c: Option<String>,
    #[arg(long, default_value_t = 100.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-8)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-10)]
    atol: f64,
    /// Seed for the random initial state.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn set_label(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}

fn analyze(args: &Common) -> Result<u8> {
    let net = read_network(&args.file)?;
    let rep = structure_report(&net);
    let cat = minimal_semi_locking_sets(&net)?;
    let doc = analyze_json(&net, &rep, &cat);
    let text = if args.json {
        to_pretty_json(&doc)?
    } else {
        let s = &doc.structure;
        let mut t = String::new();
        writeln!(t, "species: {}", s.species.join(" "))?;
        writeln!(t, "complexes n={} linkage classes l={} rank s={} deficiency={}", s.n, s.l, s.s, s.deficiency)?;
        writeln!(t, "weakly reversible: {}", s.weakly_reversible)?;
        for cl in &s.linkage_classes {
            writeln!(t, "linkage class: {}", cl.join(", "))?;
        }
        for sp in &doc.siphons {
            writeln!(t, "minimal siphon {}{}", set_label(&sp.species), if sp.locking { " (locking)" } else { "" })?;
        }
        t
    };
    emit(&args.out, &text)?;
    Ok(0)
}

fn run_certify(args: &Common) -> Result<u8> {
    let net = read_network(&args.file)?;
    let cert = certify(&net)?;
    let doc = certificate_json(&net, &cert);
    let text = if args.json {
        to_pretty_json(&doc)?
    } else {
        let mut t = String::new();
        for v in &doc.verdicts {
            writeln!(t, "{} {}", set_label(&v.w), v.status)?;
        }
        writeln!(t, "{}", doc.overall)?;
        for r in &doc.reasons {
            writeln!(t, "  {}", r)?;
        }
        t
    };
    emit(&args.out, &text)?;
    Ok(if cert.overall == Overall::GloballyStable { 0 } else { NOT_CERTIFIED })
}

fn initial_state(args: &Common, net: &ReactionNetwork) -> Result<Vec<f64>> {
    let m = net.species_count();
    match &args.x0 {
        Some(s) => parse_vector(s, m, "--x0"),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            Ok((0..m).map(|_| rng.gen_range(0.1..2.0)).collect())
        }
    }
}

fn run_simulate(args: &Common) -> Result<u8> {
    let net = read_network(&args.file)?;
    let x0 = initial_state(args, &net)?;
    // The Lyapunov column needs the class equilibrium, which exists only
    // under the deficiency zero hypotheses.
    let reference = if structure_report(&net).deficiency_zero_hypotheses() {
        Some(find_equilibrium(&net, &Kinetics::MassAction, &x0, &EquilibriumOptions::default())?.x_bar)
    } else {
        None
    };
    let opts = SimulationOptions { rtol: args.rtol, atol: args.atol, reference, ..Default::default() };
    let traj = simulate(&net, &Kinetics::MassAction, &x0, args.t_end, &opts)?;
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &net, &traj)?;
    emit(&args.out, std::str::from_utf8(&buf)?)?;
    let omega = omega_limit_siphon_check(&net, &traj, DEFAULT_ZERO_THRESHOLD);
    let summary = simulation_summary(&net, &traj, &omega);
    eprintln!("{}", serde_json::to_string(&summary)?);
    Ok(0)
}

fn run_equilibrium(args: &Common) -> Result<u8> {
    let net = read_network(&args.file)?;
    let m = net.species_count();
    let c = match &args.c {
        Some(s) => parse_vector(s, m, "--c")?,
        None => vec![1.0; m],
    };
    let opts = EquilibriumOptions::default();
    match find_equilibrium(&net, &Kinetics::MassAction, &c, &opts) {
        Ok(r) => {
            emit(&args.out, &to_pretty_json(&equilibrium_json(&net, &r, &opts))?)?;
            Ok(0)
        }
        Err(DynamicsError::HypothesesUnmet(reason)) => {
            eprintln!("refused: {}: {}", crn_core::certify::HYPOTHESES_FAIL, reason);
            Ok(NOT_CERTIFIED)
        }
        Err(e) => Err(e.into()),
    }
}

fn validate(args: &Common) -> Result<()> {
    anyhow::ensure!(args.rtol > 0.0 && args.atol > 0.0, "tolerances must be positive");
    anyhow::ensure!(args.t_end.is_finite() && args.t_end > 0.0, "--t-end must be positive");
    anyhow::ensure!(Path::new(&args.file).exists(), "{} does not exist", args.file.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => validate(a).and_then(|_| analyze(a)),
        Command::Certify(a) => validate(a).and_then(|_| run_certify(a)),
        Command::Simulate(a) => validate(a).and_then(|_| run_simulate(a)),
        Command::Equilibrium(a) => validate(a).and_then(|_| run_equilibrium(a)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}
