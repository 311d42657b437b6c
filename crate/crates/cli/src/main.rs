use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fekete_dyn::dynamics::{
    brolin_sample, julia_capacity, raster, Bbox, DynGreenEvaluator, DEFAULT_BURN_IN,
};
use fekete_dyn::harness::{emit, run, ExperimentKind, ExperimentSpec};
use fekete_dyn::heights::{canonical_height, rumely_height, weil_height, AlgebraicNumber};
use fekete_dyn::metric::{klimek_distance, GreenPair, GreenSide};
use fekete_dyn::polyarith::parse_rational;
use fekete_dyn::potential::{capacity_estimate, CompactSetModel, SetOptions, SetSpec};
use fekete_dyn::{Complex64, IntPolynomial};
use serde_json::{json, Value};

/// Potential theory, polynomial dynamics and heights over ℚ.
#[derive(Parser)]
#[command(name = "fekete-dyn", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity of a set (`--set`) or of a filled Julia set (`--poly`).
    Capacity {
        #[command(flatten)]
        target: Target,
        /// Fekete points for the transfinite diameter of a set.
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Green function values at points `re,im`.
    Green {
        #[command(flatten)]
        target: Target,
        #[arg(long = "at", required = true, value_parser = parse_point, allow_hyphen_values = true)]
        points: Vec<Complex64>,
    },
    /// Escape-time raster of a filled Julia set, as PGM plus JSON sidecar.
    Julia {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 256)]
        size: usize,
        /// Half-width of the square window; defaults to the escape radius.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Brolin measure atoms as `re,im,weight` CSV.
    Brolin {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Klimek distance between two sides, sets first, then Julia sets.
    Klimek {
        #[arg(long = "set")]
        sets: Vec<PathBuf>,
        #[arg(long = "poly", allow_hyphen_values = true)]
        polys: Vec<String>,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weil, Rumely or canonical height of an algebraic number.
    Height {
        method: HeightKind,
        /// Minimal polynomial of α.
        #[command(flatten)]
        poly: OptPolyArg,
        /// α as a rational `p/q`, instead of a minimal polynomial.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Set for the Rumely height.
        #[arg(long)]
        set: Option<PathBuf>,
        /// Map for the canonical height.
        #[arg(long = "dyn", allow_hyphen_values = true)]
        map: Option<String>,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run an experiment from a config file and write its outputs.
    Experiment {
        kind: Option<String>,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HeightKind {
    Weil,
    Rumely,
    Canonical,
}

#[derive(Args)]
struct PolyArg {
    /// Coefficients `c0 c1 ... cd`, or a file holding them.
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "poly_file"
    )]
    poly: Option<String>,
    #[arg(long, conflicts_with = "poly")]
    poly_file: Option<PathBuf>,
}

#[derive(Args)]
struct OptPolyArg {
    /// Coefficients `c0 c1 ... cd`, or a file holding them.
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, conflicts_with = "poly")]
    poly_file: Option<PathBuf>,
}

#[derive(Args)]
struct Target {
    /// Set config (TOML or JSON).
    #[arg(long, conflicts_with_all = ["poly", "poly_file"])]
    set: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long)]
    poly_file: Option<PathBuf>,
}

fn parse_point(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = re.trim().parse().map_err(|_| format!("bad point {s:?}"))?;
    let im = im.trim().parse().map_err(|_| format!("bad point {s:?}"))?;
    Ok(Complex64::new(re, im))
}

/// Inline coefficients, falling back to a file path.
fn read_poly(text: &str) -> Result<IntPolynomial> {
    match text.parse() {
        Ok(p) => Ok(p),
        Err(inline) if Path::new(text).is_file() => {
            read_poly_file(Path::new(text)).context(inline.to_string())
        }
        Err(e) => Err(e.into()),
    }
}

fn read_poly_file(path: &Path) -> Result<IntPolynomial> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn either_poly(inline: &Option<String>, file: &Option<PathBuf>) -> Result<Option<IntPolynomial>> {
    match (inline, file) {
        (Some(s), _) => read_poly(s).map(Some),
        (None, Some(f)) => read_poly_file(f).map(Some),
        (None, None) => Ok(None),
    }
}

fn load_set(path: &Path) -> Result<CompactSetModel> {
    let spec =
        SetSpec::from_file(path).with_context(|| format!("reading set {}", path.display()))?;
    Ok(spec.build(SetOptions::default())?)
}

enum Resolved {
    Set(Box<CompactSetModel>),
    Julia(IntPolynomial),
}

impl Target {
    fn resolve(&self) -> Result<Resolved> {
        if let Some(path) = &self.set {
            return Ok(Resolved::Set(Box::new(load_set(path)?)));
        }
        match either_poly(&self.poly, &self.poly_file)? {
            Some(p) => Ok(Resolved::Julia(p)),
            None => bail!("one of --set, --poly, --poly-file is required"),
        }
    }
}

fn print(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn capacity(target: &Target, n: usize) -> Result<()> {
    match target.resolve()? {
        Resolved::Set(e) => {
            let est = capacity_estimate(&e, n)?;
            print(&json!({
                "set": e.kind().name(),
                "capacity": e.capacity(),
                "log_capacity": e.log_capacity(),
                "transfinite_diameter": est.value,
                "n": est.n,
                "degenerate": est.degenerate,
            }))
        }
        Resolved::Julia(p) => {
            let cap = julia_capacity(&p)?;
            print(&json!({ "poly": p.to_string(), "capacity": cap, "log_capacity": cap.ln() }))
        }
    }
}

fn green(target: &Target, points: &[Complex64]) -> Result<()> {
    let values: Vec<f64> = match target.resolve()? {
        Resolved::Set(e) => points.iter().map(|&z| e.green(z)).collect(),
        Resolved::Julia(p) => {
            let eval = DynGreenEvaluator::from_int(&p)?;
            points.iter().map(|&z| eval.green(z)).collect()
        }
    };
    let rows: Vec<Value> = points
        .iter()
        .zip(values)
        .map(|(z, g)| json!({ "z": [z.re, z.im], "green": g }))
        .collect();
    print(&Value::Array(rows))
}

fn julia(poly: &PolyArg, out: &Path, size: usize, radius: Option<f64>) -> Result<()> {
    let p = either_poly(&poly.poly, &poly.poly_file)?.expect("required by clap");
    let eval = DynGreenEvaluator::from_int(&p)?;
    let bbox = Bbox::centered(radius.unwrap_or_else(|| eval.escape_radius()))?;
    let r = raster(&eval, bbox, size, size)?;
    r.save(out)?;
    print(&json!({ "pgm": out, "filled_area": r.filled_area(), "g_max": r.g_max() }))
}

fn brolin(poly: &PolyArg, n: usize, burn_in: usize, seed: u64, out: Option<&Path>) -> Result<()> {
    let p = either_poly(&poly.poly, &poly.poly_file)?.expect("required by clap");
    let mu = brolin_sample(&DynGreenEvaluator::from_int(&p)?, n, burn_in, seed)?;
    match out {
        Some(path) => {
            let f = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            mu.write_csv(std::io::BufWriter::new(f))?;
        }
        None => mu.write_csv(std::io::stdout().lock())?,
    }
    Ok(())
}

fn klimek(sets: &[PathBuf], polys: &[String], samples: usize, seed: u64) -> Result<()> {
    if sets.len() + polys.len() != 2 {
        bail!("klimek needs exactly two sides (--set and/or --poly)");
    }
    let mut sides: Vec<GreenSide> = Vec::with_capacity(2);
    for path in sets {
        sides.push(load_set(path)?.into());
    }
    for text in polys {
        let eval = DynGreenEvaluator::from_int(&read_poly(text)?)?;
        sides.push(GreenSide::julia(eval, samples, seed)?);
    }
    let right = sides.pop().expect("two sides");
    let left = sides.pop().expect("two sides");
    let k = klimek_distance(&GreenPair { left, right })?;
    print(&serde_json::to_value(k)?)
}

fn height(
    method: HeightKind,
    poly: &OptPolyArg,
    alpha: Option<&str>,
    set: Option<&Path>,
    map: Option<&str>,
    as_json: bool,
) -> Result<()> {
    let alpha = match (either_poly(&poly.poly, &poly.poly_file)?, alpha) {
        (Some(_), Some(_)) => bail!("give either --poly or --alpha, not both"),
        (Some(m), None) => AlgebraicNumber::from_minpoly(&m)?,
        (None, Some(a)) => AlgebraicNumber::rational(&parse_rational(a)?),
        (None, None) => bail!("one of --poly, --poly-file, --alpha is required"),
    };
    let report = match method {
        HeightKind::Weil => weil_height(&alpha),
        HeightKind::Rumely => {
            let set = set.context("rumely height needs --set")?;
            rumely_height(&alpha, &load_set(set)?)?
        }
        HeightKind::Canonical => {
            let map = map.context("canonical height needs --dyn")?;
            canonical_height(&read_poly(map)?, &alpha)?
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if as_json {
        print(&serde_json::to_value(&report)?)
    } else {
        println!("{}", report.total);
        Ok(())
    }
}

fn experiment(kind: Option<&str>, config: &Path, out: &Path, seed: Option<u64>) -> Result<bool> {
    let mut spec = ExperimentSpec::from_file(config)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let kind = kind.map(ExperimentKind::parse).transpose()?;
    let report = run(&spec, kind)?;
    let files = emit(&report, &spec.outputs, out)?;
    for f in &files {
        println!("{}", f.display());
    }
    for v in &report.violations {
        match v.n {
            Some(n) => eprintln!("violation: {} at n={n}: {}", v.check, v.detail),
            None => eprintln!("violation: {}: {}", v.check, v.detail),
        }
    }
    if let Some(failure) = &report.failure {
        eprintln!("failure: {failure}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Capacity { target, n } => capacity(target, *n).map(|_| true),
        Command::Green { target, points } => green(target, points).map(|_| true),
        Command::Julia {
            poly,
            out,
            size,
            radius,
        } => julia(poly, out, *size, *radius).map(|_| true),
        Command::Brolin {
            poly,
            n,
            burn_in,
            seed,
            out,
        } => brolin(poly, *n, *burn_in, *seed, out.as_deref()).map(|_| true),
        Command::Klimek {
            sets,
            polys,
            samples,
            seed,
        } => klimek(sets, polys, *samples, *seed).map(|_| true),
        Command::Height {
            method,
            poly,
            alpha,
            set,
            map,
            json,
        } => height(
            *method,
            poly,
            alpha.as_deref(),
            set.as_deref(),
            map.as_deref(),
            *json,
        )
        .map(|_| true),
        Command::Experiment {
            kind,
            config,
            out,
            seed,
        } => experiment(kind.as_deref(), config, out, *seed),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
