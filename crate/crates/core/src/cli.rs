//! Command-line driver. `run` returns the process exit status: 0 on
//! success, 1 on domain errors, 2 on usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;

use crate::bloch::to_bloch;
use crate::canonical::{classify_with, Classification, Side};
use crate::discord::{analyze_with, OptimizerConfig};
use crate::error::{Error, Result};
use crate::prescribe::{activate_with, table};
use crate::report::{self, Format, Report, Value};
use crate::rsp::{self, AngleChoice, EquatorialTarget};
use crate::state_file::{load_density, write_bloch, write_dm};
use crate::unitary::{generator_convention, NonlocalAngles};
use crate::verify::{self, SampleKind, SampleSpec};

#[derive(Debug, Parser)]
#[command(name = "discord-forge", version, about = "Two-qubit discord analysis and activation")]
pub struct Cli {
    /// Output style.
    #[arg(long, global = true, default_value = "human")]
    pub format: Format,
    /// Nonzero-discord threshold.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Hemisphere lattice size for the measurement search (at least 256).
    #[arg(long, global = true, default_value_t = crate::discord::DEFAULT_LATTICE)]
    pub lattice: usize,
    /// Output file (for `activate`, the transformed state).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Cq,
    Qc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileKind {
    Dm,
    Bloch,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutual information, both one-way discords and geometric discord.
    Analyze {
        #[arg(long)]
        state: PathBuf,
    },
    /// Structural zero-discord classification.
    Classify {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
    },
    /// Canonicalise, look up the prescribed nonlocal unitary and apply it.
    Activate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        side: SideArg,
        /// Skip the table and use these angles, e.g. `1/2pi,0,1/2pi`.
        #[arg(long)]
        angles: Option<NonlocalAngles>,
    },
    /// Remote state preparation fidelity and the singlet simulator.
    Rsp {
        #[arg(long, conflicts_with = "phi")]
        state: Option<PathBuf>,
        /// `auto` or an angle triple.
        #[arg(long)]
        angles: Option<String>,
        /// Build ¼(I + I⊗n·σ) from `n1,n2,n3`.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        simulate_singlet: bool,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
    },
    /// Seeded statistical checks.
    Verify {
        #[arg(long)]
        theorem: Option<u8>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// `all` or a row identifier such as `CQ-02`.
        #[arg(long)]
        appendix: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Number of Bloch-map consistency trials.
        #[arg(long)]
        consistency: Option<usize>,
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Emit seeded random states.
    Sample {
        /// generic, cq, qc, product or a row identifier.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value = "dm")]
        file_kind: FileKind,
        /// Write one file per sample here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Validated global settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub tol: f64,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self> {
        if !(cli.tol > 0.0 && cli.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("--tol must be positive, got {}", cli.tol)));
        }
        Ok(Self {
            format: cli.format,
            tol: cli.tol,
            seed: cli.seed,
            optimizer: OptimizerConfig::with_lattice(cli.lattice)?,
            out: cli.out.clone(),
        })
    }
}

/// Honours `DISCORD_FORGE_THREADS` (0 or unset means automatic).
fn configure_threads() {
    if let Some(n) = std::env::var("DISCORD_FORGE_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // A pool may already exist when `run` is called twice in one process.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

pub fn run<I, T>(argv: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    configure_threads();
    match dispatch(&cli.command, &cfg, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn emit(cfg: &RunConfig, reports: &[Report], stdout: &mut dyn std::io::Write) -> Result<()> {
    let text: String = reports.iter().map(|r| r.emit(cfg.format)).collect::<Vec<_>>().join(match cfg.format {
        Format::Human => "\n",
        Format::Machine => "",
    });
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(
    cmd: &Command,
    cfg: &RunConfig,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> Result<i32> {
    match cmd {
        Command::Analyze { state } => {
            let dm = load_density(state)?;
            let mut r = report::discord_report(&analyze_with(&dm, &cfg.optimizer));
            r.text("convention", generator_convention()?.to_string());
            emit(cfg, &[r], stdout)?;
            Ok(0)
        }
        Command::Classify { state, side } => classify_cmd(state, *side, cfg, stdout),
        Command::Activate { state, side, angles } => activate_cmd(state, *side, *angles, cfg, stdout),
        Command::Rsp {
            state,
            angles,
            phi,
            simulate_singlet,
            theta,
            shots,
        } => {
            if *simulate_singlet {
                let out = rsp::simulate_singlet_rsp(EquatorialTarget::new(*theta)?, *shots, cfg.seed)?;
                emit(cfg, &[report::singlet_report(*theta, cfg.seed, &out)], stdout)?;
                return Ok(0);
            }
            rsp_cmd(state.as_deref(), angles.as_deref(), phi.as_deref(), cfg, stdout, stderr)
        }
        Command::Verify {
            theorem,
            samples,
            appendix,
            trials,
            consistency,
            witness_dir,
        } => verify_cmd(*theorem, *samples, appendix.as_deref(), *trials, *consistency, witness_dir.as_deref(), cfg, stdout),
        Command::Sample {
            kind,
            count,
            file_kind,
            out_dir,
        } => sample_cmd(kind, *count, *file_kind, out_dir.as_deref(), cfg, stdout),
    }
}

fn sides(arg: SideArg) -> Vec<Side> {
    match arg {
        SideArg::Cq => vec![Side::Cq],
        SideArg::Qc => vec![Side::Qc],
        SideArg::Both => vec![Side::Cq, Side::Qc],
    }
}

fn classify_cmd(state: &Path, side: SideArg, cfg: &RunConfig, stdout: &mut dyn std::io::Write) -> Result<i32> {
    let s = to_bloch(&load_density(state)?);
    let mut reports = Vec::new();
    let mut code = 0;
    for side in sides(side) {
        let key = |k: &str| format!("{}_{k}", side.to_string().to_lowercase());
        let mut r = Report::new(format!("classification {side}"));
        match classify_with(&s, side, cfg.tol, &cfg.optimizer) {
            Ok(Classification::ZeroDiscord(case)) => {
                r.text(&key("class"), "zero-discord")
                    .text(&key("family"), case.family.to_string())
                    .text(&key("pattern"), case.pattern.to_string())
                    .push(&key("m"), Value::Vec3(case.m.into()))
                    .push(&key("n"), Value::Vec3(case.n.into()))
                    .push(&key("s"), Value::Vec3(case.s.into()));
                match crate::prescribe::lookup(&case) {
                    Ok(e) => r.text(&key("row"), e.id()).text(&key("angles"), e.angles.to_string()),
                    Err(e) => r.text(&key("row"), "none").text(&key("note"), e.to_string()),
                };
            }
            Ok(Classification::NotZeroDiscord { discord }) => {
                r.text(&key("class"), "not-zero-discord").num(&key("discord"), discord);
            }
            Err(Error::AmbiguousClassification { discord, .. }) => {
                r.text(&key("class"), "ambiguous").num(&key("discord"), discord);
                code = 1;
            }
            Err(e) => return Err(e),
        }
        reports.push(r);
    }
    emit(cfg, &reports, stdout)?;
    Ok(code)
}

fn activate_cmd(
    state: &Path,
    side: SideArg,
    angles: Option<NonlocalAngles>,
    cfg: &RunConfig,
    stdout: &mut dyn std::io::Write,
) -> Result<i32> {
    let side = match side {
        SideArg::Cq => Side::Cq,
        SideArg::Qc => Side::Qc,
        SideArg::Both => return Err(Error::InvalidArgument("activate needs --side cq or --side qc".into())),
    };
    let s = to_bloch(&load_density(state)?);
    let rec = activate_with(&s, side, None, angles, cfg.tol, &cfg.optimizer)?;
    let mut r = Report::new(format!("activation {side}"));
    r.text("side", side.to_string())
        .text("family", rec.matched_case.family.to_string())
        .text("pattern", rec.matched_case.pattern.to_string())
        .text("row", rec.row_id.clone().unwrap_or_else(|| "override".into()))
        .text("angles", rec.angles.to_string())
        .num(&format!("D_{}", side.measured().discord_label().replace('/', "")), rec.output_discord)
        .push("activated", Value::Flag(rec.output_discord > cfg.tol));
    let state_text = write_bloch(&rec.output);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &state_text)?;
            stdout.write_all(r.emit(cfg.format).as_bytes())?;
        }
        None => {
            stdout.write_all(r.emit(cfg.format).as_bytes())?;
            stdout.write_all(state_text.as_bytes())?;
        }
    }
    Ok(0)
}

fn parse_vec3(text: &str) -> Result<Vector3<f64>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!("expected n1,n2,n3, got {text:?}")));
    }
    let mut v = Vector3::zeros();
    for (k, p) in parts.iter().enumerate() {
        v[k] = p
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {p:?}")))?;
    }
    Ok(v)
}

fn rsp_cmd(
    state: Option<&Path>,
    angles: Option<&str>,
    phi: Option<&str>,
    cfg: &RunConfig,
    stdout: &mut dyn std::io::Write,
    stderr: &mut dyn std::io::Write,
) -> Result<i32> {
    let mut extra = Report::new("phi family");
    let (dm, default_choice) = match (state, phi) {
        (Some(path), None) => (load_density(path)?, Some(AngleChoice::Auto)),
        (None, Some(text)) => {
            let n = parse_vec3(text)?;
            let case = rsp::phi_case_angles(&n);
            extra.text("phi_regime", case.map_or("none".into(), |c| c.regime.to_string()));
            for w in rsp::phi_dead_branches() {
                let _ = writeln!(stderr, "warning: {w}");
            }
            (rsp::phi_state(&n)?, case.map(|c| AngleChoice::Explicit(c.angles)))
        }
        _ => return Err(Error::InvalidArgument("rsp needs exactly one of --state or --phi".into())),
    };
    let choice = match angles {
        Some("auto") => Some(AngleChoice::Auto),
        Some(text) => Some(AngleChoice::Explicit(text.parse()?)),
        None => default_choice,
    };
    let Some(choice) = choice else {
        extra.text("result", "no regime applies; fidelity 1e-2 not reachable with the listed unitaries");
        emit(cfg, &[extra], stdout)?;
        return Ok(0);
    };
    let r = rsp::modified_protocol(&dm, choice)?;
    let mut rep = report::rsp_report(&r);
    rep.text("convention", generator_convention()?.to_string());
    let mut reports = vec![rep];
    if !extra.fields.is_empty() {
        reports.insert(0, extra);
    }
    emit(cfg, &reports, stdout)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    theorem: Option<u8>,
    samples: usize,
    appendix: Option<&str>,
    trials: usize,
    consistency: Option<usize>,
    witness_dir: Option<&Path>,
    cfg: &RunConfig,
    stdout: &mut dyn std::io::Write,
) -> Result<i32> {
    let mut results = Vec::new();
    if let Some(k) = theorem {
        let kind = match k {
            1 => SampleKind::Cq,
            2 => SampleKind::Qc,
            3 => SampleKind::Product,
            _ => return Err(Error::InvalidArgument(format!("no theorem {k} (expected 1, 2 or 3)"))),
        };
        let spec = SampleSpec::new(kind, samples, cfg.seed)?;
        results.push(verify::verify_theorem(k, &spec, cfg.tol)?);
    }
    if let Some(which) = appendix {
        if which.eq_ignore_ascii_case("all") {
            results.extend(verify::appendix_all(trials, cfg.seed, cfg.tol));
        } else {
            let e = crate::prescribe::entry_by_id(which)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown row {which:?}")))?;
            results.push(verify::appendix_contradiction_check(e, trials, cfg.seed, cfg.tol));
        }
    }
    if let Some(n) = consistency {
        results.push(verify::bloch_map_consistency(n, cfg.seed)?);
    }
    if results.is_empty() {
        return Err(Error::InvalidArgument(
            "verify needs --theorem, --appendix or --consistency".into(),
        ));
    }
    if let Some(dir) = witness_dir {
        for r in &results {
            verify::write_witnesses(r, dir)?;
        }
    }
    let mut reports: Vec<Report> = results.iter().map(|r| report::verification_report(r, cfg.format)).collect();
    if cfg.format == Format::Machine {
        // Keys must stay unique across several reports in one stream.
        for (r, res) in reports.iter_mut().zip(&results) {
            let prefix = res.check.to_string();
            for (k, _) in r.fields.iter_mut() {
                if results.len() > 1 {
                    *k = format!("{prefix}.{k}");
                }
            }
        }
    }
    let mut summary = Report::new("summary");
    summary.text("convention", generator_convention()?.to_string());
    summary.push(
        "all_passed",
        Value::Flag(results.iter().all(|r| r.all_passed())),
    );
    reports.push(summary);
    emit(cfg, &reports, stdout)?;
    Ok(0)
}

fn sample_cmd(
    kind: &str,
    count: usize,
    file_kind: FileKind,
    out_dir: Option<&Path>,
    cfg: &RunConfig,
    stdout: &mut dyn std::io::Write,
) -> Result<i32> {
    let spec = SampleSpec::new(kind.parse()?, count, cfg.seed)?;
    let ext = match file_kind {
        FileKind::Dm => "dm",
        FileKind::Bloch => "bloch",
    };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
    }
    for i in 0..count {
        let s = verify::sample_bloch(&spec, i)?;
        let text = match file_kind {
            FileKind::Dm => write_dm(&crate::bloch::from_bloch(&s)?),
            FileKind::Bloch => write_bloch(&s),
        };
        match out_dir {
            Some(dir) => std::fs::write(dir.join(format!("sample-{i:05}.{ext}")), text)?,
            None => write!(stdout, "# sample {i} kind={} seed={}\n{text}", spec.kind, spec.seed)?,
        }
    }
    Ok(0)
}

/// All row identifiers, for help text and tests.
pub fn row_ids() -> Vec<String> {
    [Side::Cq, Side::Qc]
        .iter()
        .flat_map(|&s| table(s).iter().map(|e| e.id()))
        .collect()
}
