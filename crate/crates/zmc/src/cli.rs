//! Argument parsing and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{
    cmd_examples, cmd_family, cmd_region, cmd_surface, cmd_verify, deform_params, linspace, load_source, FamilyOpts,
    MeshOpts, RegionOpts, Setting, Source, SourceOpts, SweepKind,
};
use crate::config::{Config, Origin};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "zmc", version, about = "Zero-mean-curvature surface families: meshes, graphness checks and region maps")]
pub struct Cli {
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Triangulated mesh of one surface.
    Surface {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        mesh: MeshArgs,
        /// Mesh path; a `.singular` sidecar is written next to it. Without it
        /// the mesh goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Univalence report for the horizontal projection, as JSON.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Oracle grid resolution.
        #[arg(long)]
        resolution: Option<usize>,
        /// Exit with status 3 when the oracle is inconclusive.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified graph/non-graph intervals checked against the oracle on a
    /// (θ, ρ, sign c) grid.
    Region {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        theta_samples: Option<usize>,
        #[arg(long)]
        rho_max: Option<f64>,
        #[arg(long)]
        rho_samples: Option<usize>,
        /// Oracle grid resolution.
        #[arg(long)]
        resolution: Option<usize>,
        /// Report certificates only; the oracle column reads `skipped`.
        #[arg(long)]
        no_oracle: bool,
        /// Seed surface for the seeded argument (replaces the defaults
        /// (0, 1, ±1)).
        #[arg(long, allow_negative_numbers = true)]
        seed_theta: Option<f64>,
        #[arg(long)]
        seed_lambda: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        seed_c: Option<f64>,
        /// Arcwise-connectivity constant of the image of h.
        #[arg(long = "M", value_name = "M")]
        m: Option<f64>,
        /// Output prefix: writes PREFIX.csv and PREFIX.json.
        #[arg(long, default_value = "region")]
        out: PathBuf,
        #[arg(long, hide = true)]
        inject_false_certificate: bool,
    },
    /// One mesh per value of a one-parameter sweep, plus a manifest.
    Family {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long, value_enum)]
        sweep: SweepArg,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        /// Defaults to 8 for theta (one full period, endpoint excluded) and
        /// 9 otherwise.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "out-dir", alias = "out", default_value = "family")]
        out_dir: PathBuf,
    },
    /// List the built-in examples.
    Examples {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SweepArg {
    Theta,
    Lambda,
    C,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// `enneper`, `exponential`, `scherk` or a data file.
    pub source: String,
    /// Exponent of the Enneper or exponential family.
    #[arg(long)]
    pub n: Option<u32>,
    /// Half-width W of the truncated half-plane for `exponential`.
    #[arg(long)]
    pub truncation: Option<f64>,
    /// Put `exponential` on the unit disk instead of the half-plane.
    #[arg(long)]
    pub disk: bool,
    /// Restrict disk data to `|w| < R`.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Quadrature tolerance (else config `tol`, then ZMC_DEFAULT_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Sets |c| = rho/lambda², keeping the sign of c.
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    /// Rings (disks) or cells per side (rectangles, polygons).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Spokes of the polar grid.
    #[arg(long)]
    pub spokes: Option<usize>,
}

/// Accumulates resolved options for echoing into outputs.
struct Resolver {
    cfg: Config,
    echo: Vec<Setting>,
}

impl Resolver {
    fn get<T: std::str::FromStr + Copy + ToString>(&mut self, cli: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        let (v, origin) = self.cfg.resolve(cli, key, default)?;
        self.push(key, v, origin);
        Ok(v)
    }

    fn opt<T: std::str::FromStr + Copy + ToString>(&mut self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        let v = self.cfg.resolve_opt(cli, key)?;
        if let Some(x) = v {
            let origin = if cli.is_some() { Origin::Cli } else { Origin::Config };
            self.push(key, x, origin);
        }
        Ok(v)
    }

    fn flag(&mut self, cli: bool, key: &str) -> Result<bool, CliError> {
        let v = self.cfg.flag(cli, key)?;
        if v {
            self.push(key, v, if cli { Origin::Cli } else { Origin::Config });
        }
        Ok(v)
    }

    fn push(&mut self, key: &str, v: impl ToString, origin: Origin) {
        self.echo.push(Setting {
            key: key.into(),
            value: v.to_string(),
            origin: origin.as_str().into(),
        });
    }

    fn source(&mut self, a: &SourceArgs) -> Result<Source, CliError> {
        let (tol, origin) = self.cfg.tolerance(a.tol)?;
        self.push("tol", tol, origin);
        let opts = SourceOpts {
            name: a.source.clone(),
            n: self.opt(a.n, "n")?,
            truncation: self.opt(a.truncation, "truncation")?,
            exp_disk: self.flag(a.disk, "disk")?,
            radius: self.opt(a.radius, "radius")?,
            tol,
        };
        load_source(&opts)
    }

    fn params(&mut self, a: &ParamArgs) -> Result<zmc_core::DeformParams, CliError> {
        let theta = self.get(a.theta, "theta", 0.0)?;
        let lambda = self.get(a.lambda, "lambda", 1.0)?;
        let c = self.get(a.c, "c", 1.0)?;
        let rho = self.opt(a.rho, "rho")?;
        deform_params(theta, lambda, c, rho)
    }

    fn mesh(&mut self, a: &MeshArgs) -> Result<MeshOpts, CliError> {
        Ok(MeshOpts {
            rings: self.get(a.grid, "grid", 96)?,
            spokes: self.get(a.spokes, "spokes", 256)?,
        })
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "zmc: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let mut r = Resolver { cfg, echo: Vec::new() };
    match cli.command {
        Command::Surface {
            source,
            params,
            mesh,
            out,
        } => {
            let src = r.source(&source)?;
            let p = r.params(&params)?;
            let m = r.mesh(&mesh)?;
            cmd_surface(&src, &p, &m, &r.echo, out.as_deref(), stdout)?;
        }
        Command::Verify {
            source,
            params,
            resolution,
            strict,
            out,
        } => {
            let src = r.source(&source)?;
            let p = r.params(&params)?;
            let n = r.get(resolution, "resolution", 256)?;
            let strict = r.flag(strict, "strict")?;
            cmd_verify(&src, &p, n, strict, &r.echo, out.as_deref(), stdout)?;
        }
        Command::Region {
            source,
            theta_samples,
            rho_max,
            rho_samples,
            resolution,
            no_oracle,
            seed_theta,
            seed_lambda,
            seed_c,
            m,
            out,
            inject_false_certificate,
        } => {
            let src = r.source(&source)?;
            let st = r.opt(seed_theta, "seed-theta")?;
            let sl = r.opt(seed_lambda, "seed-lambda")?;
            let sc = r.opt(seed_c, "seed-c")?;
            let seed = if st.is_some() || sl.is_some() || sc.is_some() {
                Some(deform_params(st.unwrap_or(0.0), sl.unwrap_or(1.0), sc.unwrap_or(1.0), None)?)
            } else {
                None
            };
            let o = RegionOpts {
                theta_samples: r.get(theta_samples, "theta-samples", 8)?,
                rho_max: r.get(rho_max, "rho-max", 4.0)?,
                rho_samples: r.get(rho_samples, "rho-samples", 9)?,
                resolution: r.get(resolution, "resolution", 128)?,
                oracle: !r.flag(no_oracle, "no-oracle")?,
                seed,
                linear_conn: r.opt(m, "M")?,
                inject_false_certificate,
            };
            cmd_region(&src, &o, &r.echo, &out)?;
        }
        Command::Family {
            source,
            params,
            mesh,
            sweep,
            from,
            to,
            steps,
            out_dir,
        } => {
            let src = r.source(&source)?;
            let base = r.params(&params)?;
            let m = r.mesh(&mesh)?;
            let kind = match sweep {
                SweepArg::Theta => SweepKind::Theta,
                SweepArg::Lambda => SweepKind::Lambda,
                SweepArg::C => SweepKind::C,
            };
            r.push("sweep", kind.as_str(), Origin::Cli);
            let default_steps = if kind == SweepKind::Theta { 8 } else { 9 };
            let steps = r.get(steps, "steps", default_steps)?;
            let values = match kind {
                SweepKind::Theta => {
                    let full = std::f64::consts::TAU * (steps.saturating_sub(1)) as f64 / steps.max(1) as f64;
                    linspace(r.get(from, "from", 0.0)?, r.get(to, "to", full)?, steps)
                }
                SweepKind::Lambda => linspace(r.get(from, "from", 0.6)?, r.get(to, "to", 2.0)?, steps),
                SweepKind::C => linspace(r.get(from, "from", -1.0)?, r.get(to, "to", 1.0)?, steps),
            };
            let o = FamilyOpts {
                kind,
                values,
                base,
                mesh: m,
            };
            cmd_family(&src, &o, &r.echo, &out_dir)?;
        }
        Command::Examples { json } => cmd_examples(json, stdout)?,
    }
    Ok(())
}
