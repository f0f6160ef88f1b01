//! `dirac-pt`: sweeps, bound-state searches and invariant checks for the
//! non-local separable PT-symmetric Dirac potential.
//!
//! All inputs are dimensionless multiples of the mass `m` (couplings and
//! kernel parameters scale linearly with `m`, energies as `E/m`), so
//! results are invariant under `--mass`; the flag exists for dimensional
//! sanity checks.

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{resolve, ConfigError, FileConfig};
use dirac_pt::bound::{self, SearchConfig, StrengthRoots};
use dirac_pt::kernel::PotentialSpec;
use dirac_pt::kinematics::Kinematics;
use dirac_pt::nonrel::{nr_scatter, NRCase};
use dirac_pt::scattering::{
    determinant_identity_residual, parity_flip_check, regressive_via_linear_system, scatter,
};
use output::{ConfigValue, Format, Table};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dirac-pt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy sweep of transmission/reflection moduli and PT residuals
    Sweep(SweepArgs),
    /// Search for bound states on (-m, m)
    Bound(BoundArgs),
    /// Solve the vector coupling strength for a prescribed bound energy
    SolveStrength(SolveStrengthArgs),
    /// Verify the PT invariants at one energy; nonzero exit on violation
    Check(CheckArgs),
    /// Tabulate det M+ over the bound window for root inspection
    Detscan(DetscanArgs),
    /// Compare relativistic coefficients with the non-relativistic limit
    Nrlimit(NrlimitArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Scalar coupling c_S in units of m
    #[arg(long, allow_negative_numbers = true)]
    cs: Option<f64>,
    /// Vector coupling c_V in units of m
    #[arg(long, allow_negative_numbers = true)]
    cv: Option<f64>,
    /// Kernel phase a in units of m
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Kernel phase b in units of m
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Decay constant of g(x) = exp(-c|x|) in units of m
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Decay constant of h(y) = exp(-d|y|) in units of m
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    /// Particle mass (energy scale)
    #[arg(long, allow_negative_numbers = true)]
    mass: Option<f64>,
    /// Flat key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Lower edge of the sweep, E/m
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    /// Upper edge of the sweep, E/m
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Skip the non-scattering band |E| <= m instead of erroring
    #[arg(long)]
    exclude_gap: Option<bool>,
    /// relativistic, nr-spin or nr-pseudospin (NR strength read from cv)
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Scan grid size
    #[arg(long)]
    points: Option<usize>,
    /// Root refinement tolerance in units of m
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Edge exclusion at ±m, units of m
    #[arg(long, allow_negative_numbers = true)]
    edge_inset: Option<f64>,
}

#[derive(Args)]
struct SolveStrengthArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Target bound energy E/m in (-1, 1)
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Scattering energy E/m, |E/m| > 1
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
}

#[derive(Args)]
struct DetscanArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    edge_inset: Option<f64>,
}

#[derive(Args)]
struct NrlimitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// spin (c_V = c_S) or pseudospin (c_V = -c_S); strength read from cv
    #[arg(long)]
    case: Option<String>,
    /// Lower momentum k/m
    #[arg(long, allow_negative_numbers = true)]
    kmin: Option<f64>,
    /// Upper momentum k/m
    #[arg(long, allow_negative_numbers = true)]
    kmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Kernel(#[from] dirac_pt::kernel::KernelError),
    #[error(transparent)]
    Scattering(#[from] dirac_pt::scattering::ScatteringError),
    #[error(transparent)]
    Bound(#[from] dirac_pt::bound::BoundError),
    #[error(transparent)]
    Kinematics(#[from] dirac_pt::kinematics::KinematicsError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Fully resolved potential parameters, in absolute units.
struct Potential {
    cs: f64,
    cv: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    mass: f64,
    format: Format,
    out: Option<PathBuf>,
    file: FileConfig,
}

impl Potential {
    fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let mass = resolve(args.mass, file.get_f64("mass")?, 1.0);
        if mass <= 0.0 || mass.is_nan() {
            return Err(CliError::Invalid(format!("mass must be positive, got {mass}")));
        }
        let format = match args.format {
            Some(f) => f,
            None => match file.get_str("format") {
                None | Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(other) => {
                    return Err(CliError::Invalid(format!("unknown format {other:?}")))
                }
            },
        };
        Ok(Self {
            cs: resolve(args.cs, file.get_f64("cs")?, 0.0) * mass,
            cv: resolve(args.cv, file.get_f64("cv")?, 0.0) * mass,
            a: resolve(args.a, file.get_f64("a")?, 0.0) * mass,
            b: resolve(args.b, file.get_f64("b")?, 0.0) * mass,
            c: resolve(args.c, file.get_f64("c")?, 1.0) * mass,
            d: resolve(args.d, file.get_f64("d")?, 1.0) * mass,
            mass,
            format,
            out: args.out.clone(),
            file,
        })
    }

    fn spec(&self) -> Result<PotentialSpec, CliError> {
        Ok(PotentialSpec::yamaguchi(
            self.cs, self.cv, self.a, self.b, self.c, self.d,
        )?)
    }

    /// Echo the resolved potential (back in units of m) into a table header.
    fn echo(&self, table: &mut Table) {
        let m = self.mass;
        table.push_config("cs", ConfigValue::Float(self.cs / m));
        table.push_config("cv", ConfigValue::Float(self.cv / m));
        table.push_config("a", ConfigValue::Float(self.a / m));
        table.push_config("b", ConfigValue::Float(self.b / m));
        table.push_config("c", ConfigValue::Float(self.c / m));
        table.push_config("d", ConfigValue::Float(self.d / m));
        table.push_config("mass", ConfigValue::Float(m));
    }

    fn emit(&self, table: &Table) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                let mut buf = Vec::new();
                table.write(&mut buf, self.format)?;
                std::fs::write(path, buf)?;
            }
            None => {
                let stdout = std::io::stdout();
                table.write(&mut stdout.lock(), self.format)?;
            }
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Bound(args) => cmd_bound(&args),
        Command::SolveStrength(args) => cmd_solve_strength(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Detscan(args) => cmd_detscan(&args),
        Command::Nrlimit(args) => cmd_nrlimit(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode, CliError> {
    let pot = Potential::resolve(&args.common)?;
    let spec = pot.spec()?;
    let m = pot.mass;
    let emin = resolve(args.emin, pot.file.get_f64("emin")?, -5.0);
    let emax = resolve(args.emax, pot.file.get_f64("emax")?, 5.0);
    let points = resolve(args.points, pot.file.get_usize("points")?, 400);
    let exclude_gap = resolve(args.exclude_gap, pot.file.get_bool("exclude_gap")?, true);
    let mode = args
        .mode
        .clone()
        .or_else(|| pot.file.get_str("mode").map(String::from))
        .unwrap_or_else(|| "relativistic".to_string());
    if points < 2 {
        return Err(CliError::Invalid(format!("points must be >= 2, got {points}")));
    }
    if emin >= emax {
        return Err(CliError::Invalid(format!(
            "emin ({emin}) must be below emax ({emax})"
        )));
    }

    let mut table = Table::default();
    pot.echo(&mut table);
    table.push_config("emin", ConfigValue::Float(emin));
    table.push_config("emax", ConfigValue::Float(emax));
    table.push_config("points", ConfigValue::Int(points));
    table.push_config("exclude_gap", ConfigValue::Bool(exclude_gap));
    table.push_config("mode", ConfigValue::Text(mode.clone()));
    table.columns = [
        "e_over_m",
        "t_lr_sq",
        "r_lr_sq",
        "r_rl_sq",
        "prog_sum",
        "reg_sum",
        "det_s_mod",
        "pt_residual",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    let mut skipped: Vec<f64> = Vec::new();
    for idx in 0..points {
        let e_over_m = emin + (emax - emin) * idx as f64 / (points - 1) as f64;
        let energy = e_over_m * m;
        let kin = match Kinematics::scattering(energy, m) {
            Ok(kin) => kin,
            Err(_) if exclude_gap => {
                skipped.push(e_over_m);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let result = match mode.as_str() {
            "relativistic" => scatter(&spec, &kin)?,
            "nr-spin" => nr_scatter(&NRCase::spin(pot.cv), &spec, kin.k.re, m)?,
            "nr-pseudospin" => nr_scatter(&NRCase::pseudospin(pot.cv), &spec, kin.k.re, m)?,
            other => return Err(CliError::Invalid(format!("unknown mode {other:?}"))),
        };
        let det_s = result.s_matrix.det();
        table.rows.push(vec![
            e_over_m,
            result.t_lr.norm_sqr(),
            result.r_lr.norm_sqr(),
            result.r_rl.norm_sqr(),
            result.t_lr.norm_sqr() + result.r_lr.norm_sqr(),
            result.t_rl.norm_sqr() + result.r_rl.norm_sqr(),
            det_s.norm(),
            result.diagnostics.max_abs(),
        ]);
    }
    if !skipped.is_empty() {
        table.comments.push(format!(
            "gap: skipped {} non-scattering points in [{}, {}] (units of m)",
            skipped.len(),
            skipped.first().unwrap(),
            skipped.last().unwrap()
        ));
    }
    pot.emit(&table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(args: &BoundArgs) -> Result<ExitCode, CliError> {
    let pot = Potential::resolve(&args.common)?;
    let spec = pot.spec()?;
    let m = pot.mass;
    let defaults = SearchConfig::default();
    let search = SearchConfig {
        grid_points: resolve(args.points, pot.file.get_usize("points")?, defaults.grid_points),
        tol: resolve(args.tol, pot.file.get_f64("tol")?, defaults.tol) * m,
        edge_inset: resolve(
            args.edge_inset,
            pot.file.get_f64("edge_inset")?,
            defaults.edge_inset,
        ),
    };
    let states = bound::find_bound_states(&spec, m, &search)?;

    let mut table = Table::default();
    pot.echo(&mut table);
    table.push_config("points", ConfigValue::Int(search.grid_points));
    table.push_config("tol", ConfigValue::Float(search.tol / m));
    table.push_config("edge_inset", ConfigValue::Float(search.edge_inset));
    table
        .comments
        .push(format!("{} bound state(s) found", states.len()));
    table.columns = ["e_over_m", "kbar_over_m", "det_residual", "pt_residual", "i_plus_ratio"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for s in &states {
        table.rows.push(vec![
            s.energy / m,
            s.kbar / m,
            s.det_residual,
            s.pt_residual,
            s.i_plus_ratio,
        ]);
    }
    pot.emit(&table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve_strength(args: &SolveStrengthArgs) -> Result<ExitCode, CliError> {
    let pot = Potential::resolve(&args.common)?;
    let spec = pot.spec()?;
    let m = pot.mass;
    let e_over_m = resolve(args.energy, pot.file.get_f64("energy")?, 0.0);
    let energy = e_over_m * m;

    let mut table = Table::default();
    pot.echo(&mut table);
    table.push_config("energy", ConfigValue::Float(e_over_m));
    match bound::solve_vector_strength(&spec, energy, m)? {
        StrengthRoots::Real { c_v_plus, c_v_minus } => {
            table.columns = ["cv_over_m", "det_residual"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            for cv in [c_v_plus, c_v_minus] {
                let solved = PotentialSpec { c_v: cv, ..spec.clone() };
                let residual = bound::detm_bound(&solved, energy, m)?.abs();
                table.rows.push(vec![cv / m, residual]);
            }
        }
        StrengthRoots::ComplexPair { re, im } => {
            table
                .comments
                .push("no real roots: complex-conjugate pair".to_string());
            table.columns = ["cv_re_over_m", "cv_im_over_m"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            table.rows.push(vec![re / m, im / m]);
            table.rows.push(vec![re / m, -im / m]);
        }
    }
    pot.emit(&table)?;
    Ok(ExitCode::SUCCESS)
}

const CHECK_TOL: f64 = 1e-8;

fn cmd_check(args: &CheckArgs) -> Result<ExitCode, CliError> {
    let pot = Potential::resolve(&args.common)?;
    let spec = pot.spec()?;
    let m = pot.mass;
    let e_over_m = resolve(args.energy, pot.file.get_f64("energy")?, 2.0);
    let kin = Kinematics::scattering(e_over_m * m, m)?;

    let result = scatter(&spec, &kin)?;
    let (t_rl_sys, r_rl_sys) = regressive_via_linear_system(&spec, &kin)?;
    let dual = (result.t_rl - t_rl_sys)
        .norm()
        .max((result.r_rl - r_rl_sys).norm());
    let parity = parity_flip_check(&spec, &kin)?;
    let det_identity = determinant_identity_residual(&spec, &kin)?;

    let mut table = Table::default();
    pot.echo(&mut table);
    table.push_config("energy", ConfigValue::Float(e_over_m));
    table.columns = vec!["residual".to_string()];
    let mut checks = vec![
        ("det_s_modulus", result.diagnostics.det_s_modulus_minus_one.abs()),
        ("t_modulus_gap", result.diagnostics.t_modulus_gap.abs()),
        (
            "reflection_phase",
            result.diagnostics.reflection_phase_residual.abs(),
        ),
        ("dual_formulation", dual),
        ("parity_flip", parity),
        ("determinant_identity", det_identity),
    ];
    // Hermitian sub-case: g = h with opposite phases makes S unitary
    if pot.a == -pot.b && pot.c == pot.d {
        let ssd = result.s_matrix * result.s_matrix.adjoint();
        let unitarity = (ssd - dirac_pt::mat2::Mat2::identity()).max_norm();
        checks.push(("unitarity", unitarity));
    }
    let mut all_pass = true;
    for (name, residual) in &checks {
        let pass = *residual < CHECK_TOL;
        all_pass &= pass;
        table.comments.push(format!(
            "{name}: {} ({})",
            output::fmt_e(*residual),
            if pass { "pass" } else { "FAIL" }
        ));
        table.rows.push(vec![*residual]);
    }
    pot.emit(&table)?;
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}

fn cmd_detscan(args: &DetscanArgs) -> Result<ExitCode, CliError> {
    let pot = Potential::resolve(&args.common)?;
    let spec = pot.spec()?;
    let m = pot.mass;
    let inset = resolve(args.edge_inset, pot.file.get_f64("edge_inset")?, 1e-6);
    let emin = resolve(args.emin, pot.file.get_f64("emin")?, -1.0 + inset);
    let emax = resolve(args.emax, pot.file.get_f64("emax")?, 1.0 - inset);
    let points = resolve(args.points, pot.file.get_usize("points")?, 512);
    if points < 2 || emin >= emax || emin <= -1.0 || emax >= 1.0 {
        return Err(CliError::Invalid(format!(
            "detscan window must satisfy -1 < emin < emax < 1 with points >= 2 \
             (emin = {emin}, emax = {emax}, points = {points})"
        )));
    }

    let mut table = Table::default();
    pot.echo(&mut table);
    table.push_config("emin", ConfigValue::Float(emin));
    table.push_config("emax", ConfigValue::Float(emax));
    table.push_config("points", ConfigValue::Int(points));
    table.push_config("edge_inset", ConfigValue::Float(inset));
    table.columns = ["e_over_m", "detm"].iter().map(|s| s.to_string()).collect();
    for idx in 0..points {
        let e_over_m = emin + (emax - emin) * idx as f64 / (points - 1) as f64;
        let det = bound::detm_bound(&spec, e_over_m * m, m)?;
        table.rows.push(vec![e_over_m, det]);
    }
    pot.emit(&table)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_nrlimit(args: &NrlimitArgs) -> Result<ExitCode, CliError> {
    let pot = Potential::resolve(&args.common)?;
    let m = pot.mass;
    let case_name = args
        .case
        .clone()
        .or_else(|| pot.file.get_str("case").map(String::from))
        .unwrap_or_else(|| "spin".to_string());
    let (case, rel_spec) = match case_name.as_str() {
        "spin" => (
            NRCase::spin(pot.cv),
            PotentialSpec::yamaguchi(pot.cv, pot.cv, pot.a, pot.b, pot.c, pot.d)?,
        ),
        "pseudospin" => (
            NRCase::pseudospin(pot.cv),
            PotentialSpec::yamaguchi(-pot.cv, pot.cv, pot.a, pot.b, pot.c, pot.d)?,
        ),
        other => return Err(CliError::Invalid(format!("unknown case {other:?}"))),
    };
    let geometry = PotentialSpec::yamaguchi(0.0, 0.0, pot.a, pot.b, pot.c, pot.d)?;
    let kmin = resolve(args.kmin, pot.file.get_f64("kmin")?, 0.05);
    let kmax = resolve(args.kmax, pot.file.get_f64("kmax")?, 0.5);
    let points = resolve(args.points, pot.file.get_usize("points")?, 10);
    if points < 2 || kmin <= 0.0 || kmin.is_nan() || kmin >= kmax {
        return Err(CliError::Invalid(format!(
            "nrlimit window must satisfy 0 < kmin < kmax with points >= 2 \
             (kmin = {kmin}, kmax = {kmax}, points = {points})"
        )));
    }

    let mut table = Table::default();
    pot.echo(&mut table);
    table.push_config("case", ConfigValue::Text(case_name));
    table.push_config("kmin", ConfigValue::Float(kmin));
    table.push_config("kmax", ConfigValue::Float(kmax));
    table.push_config("points", ConfigValue::Int(points));
    table.columns = ["k_over_m", "nr_t_lr_sq", "nr_r_lr_sq", "rel_t_lr_sq", "rel_r_lr_sq", "max_gap"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for idx in 0..points {
        let k = (kmin + (kmax - kmin) * idx as f64 / (points - 1) as f64) * m;
        let energy = (k * k + m * m).sqrt();
        let kin = Kinematics::scattering(energy, m)?;
        let rel = scatter(&rel_spec, &kin)?;
        let nr = nr_scatter(&case, &geometry, k, m)?;
        let gap = (rel.t_lr - nr.t_lr)
            .norm()
            .max((rel.r_lr - nr.r_lr).norm())
            .max((rel.t_rl - nr.t_rl).norm())
            .max((rel.r_rl - nr.r_rl).norm());
        table.rows.push(vec![
            k / m,
            nr.t_lr.norm_sqr(),
            nr.r_lr.norm_sqr(),
            rel.t_lr.norm_sqr(),
            rel.r_lr.norm_sqr(),
            gap,
        ]);
    }
    pot.emit(&table)?;
    Ok(ExitCode::SUCCESS)
}
