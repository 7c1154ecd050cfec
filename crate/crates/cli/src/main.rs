mod artifacts;
mod config;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lhode::derivation::{derive, Derivation};

use artifacts::Doc;
use config::{Opts, RunConfig};

/// Structure relations and differential equations for Laguerre-Hahn
/// orthogonal polynomials.
#[derive(Parser)]
#[command(name = "lhode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure relations and every equation, unreduced.
    Derive(Opts),
    /// Equations divided by the common factor of their coefficients.
    Reduce(Opts),
    /// Symbolic recurrence checks, then the numeric oracle.
    Verify(Opts),
    /// Degrees of Phi, psi, B and the class number.
    Class(Opts),
    /// One document with relations and reduced equations.
    Emit(Opts),
    /// derive, reduce, verify and emit.
    All(Opts),
}

pub enum Failure {
    Config(String),
    Verification(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Config(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Verification(msg) => {
                eprintln!("verification failed: {msg}");
                ExitCode::from(1)
            }
        }
    }
}

fn derive_all(cfg: &RunConfig) -> Result<Vec<Derivation>, Failure> {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .instances
            .iter()
            .map(|inst| s.spawn(move || derive(&cfg.family, inst.at())))
            .collect();
        handles.into_iter().map(|h| h.join().expect("derivation thread")).collect()
    });
    results
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Verification(e.to_string()))
}

fn write(cfg: &RunConfig, name: &str, content: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?;
            let path = dir.join(name);
            std::fs::write(&path, content).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "==> {name} <==");
            let _ = out.write_all(content.as_bytes());
            Ok(())
        }
    }
}

fn file_name(cfg: &RunConfig, d: &Derivation, step: &str) -> String {
    format!("{}.{}.{step}.{}", cfg.family.name, d.instance().slug(), cfg.ext())
}

fn cmd_derive(cfg: &RunConfig, ds: &[Derivation]) -> Result<(), Failure> {
    for d in ds {
        let mut doc = Doc::new(cfg.format);
        artifacts::header(&mut doc, &cfg.family.name, d);
        artifacts::relations(&mut doc, &d.relations, true);
        artifacts::equations(&mut doc, d);
        write(cfg, &file_name(cfg, d, "derive"), &doc.finish())?;
    }
    Ok(())
}

fn cmd_reduce(cfg: &RunConfig, ds: &[Derivation]) -> Result<(), Failure> {
    for d in ds {
        let mut doc = Doc::new(cfg.format);
        artifacts::header(&mut doc, &cfg.family.name, d);
        artifacts::reduced(&mut doc, d, true);
        write(cfg, &file_name(cfg, d, "reduce"), &doc.finish())?;
    }
    Ok(())
}

fn cmd_emit(cfg: &RunConfig, ds: &[Derivation]) -> Result<(), Failure> {
    let mut doc = Doc::new(cfg.format);
    for d in ds {
        artifacts::header(&mut doc, &cfg.family.name, d);
        artifacts::relations(&mut doc, &d.relations, false);
        artifacts::reduced(&mut doc, d, false);
    }
    write(cfg, &format!("{}.{}", cfg.family.name, cfg.ext()), &doc.finish())
}

fn cmd_verify(cfg: &RunConfig, ds: &[Derivation]) -> Result<(), Failure> {
    let report = verify::run(cfg, ds)?;
    println!("{}", verify::summary(&report));
    if cfg.out.is_some() {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        write(cfg, &format!("{}.report.json", cfg.family.name), &(json + "\n"))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification(verify::first_failure(&report)))
    }
}

fn cmd_class(cfg: &RunConfig) {
    let f = &cfg.family;
    let r = f.class_degrees();
    let deg = |d: Option<usize>| d.map_or("-inf".to_string(), |d| d.to_string());
    println!("family: {}", f.name);
    println!("deg Phi = {}, deg psi = {}, deg B = {}", deg(r.deg_phi), deg(r.deg_psi), deg(r.deg_b));
    match r.s {
        Some(s) => println!("class s = {s}"),
        None => println!("class s undefined"),
    }
    if f.is_semiclassical() {
        println!("B = 0: semiclassical");
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let (opts, which) = match &command {
        Command::Derive(o) => (o, "derive"),
        Command::Reduce(o) => (o, "reduce"),
        Command::Verify(o) => (o, "verify"),
        Command::Class(o) => (o, "class"),
        Command::Emit(o) => (o, "emit"),
        Command::All(o) => (o, "all"),
    };
    let cfg = config::build(opts).map_err(Failure::Config)?;
    if which == "class" {
        cmd_class(&cfg);
        return Ok(());
    }
    let ds = derive_all(&cfg)?;
    match which {
        "derive" => cmd_derive(&cfg, &ds),
        "reduce" => cmd_reduce(&cfg, &ds),
        "verify" => cmd_verify(&cfg, &ds),
        "emit" => cmd_emit(&cfg, &ds),
        _ => {
            cmd_derive(&cfg, &ds)?;
            cmd_reduce(&cfg, &ds)?;
            let verdict = cmd_verify(&cfg, &ds);
            cmd_emit(&cfg, &ds)?;
            verdict
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
