use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sl2rep::admissibility::{admissibility_verdict, VerdictConfig, VerdictKind};
use sl2rep::cohomology::cohomology_report_with;
use sl2rep::deformation::{extend_to_order, DEFAULT_ORDER};
use sl2rep::linalg2::{Mat2C, Sl2Element};
use sl2rep::presentation::{abelianization, parse_presentation, Presentation};
use sl2rep::report::{stamp, to_canonical_string};
use sl2rep::repvar::{abelian_representations, dedup_by_conjugacy, weeks_geometric, Representation};
use sl2rep::{Error, Tolerances};

mod demo;

/// SL₂(ℂ) representation varieties of finitely presented groups.
#[derive(Debug, Parser)]
#[command(name = "sl2rep", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Relator residual accepted for input representations.
    #[arg(long = "tol-rep", global = true, default_value_t = 1e-9, value_parser = positive)]
    pub tol_rep: f64,
    /// Relative singular-value cut for numerical ranks.
    #[arg(long = "tol-rank", global = true, default_value_t = 1e-8, value_parser = positive)]
    pub tol_rank: f64,
    /// Ball radius for drift scans.
    #[arg(long = "ball", value_name = "L", global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub ball: u32,
    /// Truncation order for deformations.
    #[arg(long = "order", value_name = "N", global = true, default_value_t = DEFAULT_ORDER as u32, value_parser = clap::value_parser!(u32).range(1..))]
    pub order: u32,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long = "json", value_name = "PATH", global = true)]
    pub json: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long = "seed", value_name = "S", global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Options {
    fn tolerances(&self) -> Tolerances {
        Tolerances { rep: self.tol_rep, rank: self.tol_rank, ..Tolerances::default() }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a presentation and echo it in normal form.
    Parse { file: PathBuf },
    /// Abelianization and, when finite, the diagonal representations through it.
    Abelian { file: PathBuf },
    /// Z¹, B¹, H¹ and centralizer dimensions at a representation.
    Cohomology {
        file: PathBuf,
        /// Representation JSON (defaults to the trivial representation).
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    /// Extend every first-order slice direction order by order.
    Deform {
        file: PathBuf,
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    /// Admissibility verdict relative to a reference embedding.
    Admissible {
        file: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        /// Reference embedding (defaults to the Weeks geometric representation for the Weeks group).
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        /// Required growth of the minimal drift per unit word length.
        #[arg(long, default_value_t = 0.1)]
        slope_floor: f64,
        /// Additive allowance on the minimal drift.
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
    },
    /// End-to-end run on the Weeks manifold group.
    WeeksDemo,
}

/// Report, human summary and exit status of one command.
pub struct Outcome {
    pub kind: &'static str,
    pub report: Value,
    pub summary: Vec<String>,
    pub inconclusive: bool,
}

fn read_presentation(path: &Path) -> Result<Presentation> {
    let text = fs::read_to_string(path).with_context(|| format!("cli: reading {}", path.display()))?;
    Ok(parse_presentation(text.trim_end())?)
}

/// Reads `{"images": [...], "presentation"?: "..."}`; a present presentation must
/// match the one given on the command line.
fn read_representation(path: &Path, p: &Presentation, tol: &Tolerances) -> Result<Representation> {
    let text = fs::read_to_string(path).with_context(|| format!("cli: reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("cli: parsing {}", path.display()))?;
    if let Some(s) = value.get("presentation").and_then(Value::as_str) {
        if &parse_presentation(s)? != p {
            return Err(Error::PresentationMismatch.into());
        }
    }
    let images: Vec<Mat2C> = serde_json::from_value(value.get("images").cloned().unwrap_or(Value::Null))
        .with_context(|| format!("cli: {} needs an `images` array of 2×2 complex matrices", path.display()))?;
    let images = images.into_iter().map(Sl2Element::new).collect::<sl2rep::Result<Vec<_>>>()?;
    let rho = Representation::new(p.clone(), images)?;
    if rho.residual() > tol.rep {
        return Err(Error::OffVariety { residual: rho.residual() }.into());
    }
    Ok(rho)
}

fn rep_or_trivial(path: Option<&Path>, p: &Presentation, tol: &Tolerances) -> Result<Representation> {
    match path {
        Some(path) => read_representation(path, p, tol),
        None => Ok(Representation::trivial(p)),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    let tol = opts.tolerances();
    match &cli.command {
        Command::Parse { file } => {
            let p = read_presentation(file)?;
            let relators: Vec<String> = p.relators().iter().map(|r| p.format_word(r)).collect();
            Ok(Outcome {
                kind: "parse",
                summary: vec![format!("presentation: {p}")],
                report: json!({
                    "presentation": p.to_string(),
                    "generators": p.generator_names(),
                    "relators": relators,
                    "relator_lengths": p.relators().iter().map(|r| r.len()).collect::<Vec<_>>(),
                }),
                inconclusive: false,
            })
        }
        Command::Abelian { file } => {
            let p = read_presentation(file)?;
            let ab = abelianization(&p);
            let mut summary = vec![format!(
                "invariant factors: {:?}, free rank {}",
                ab.invariant_factors, ab.rank_free
            )];
            let mut report = json!({
                "presentation": p.to_string(),
                "invariant_factors": ab.invariant_factors,
                "rank_free": ab.rank_free,
            });
            if ab.rank_free == 0 {
                let reps = abelian_representations(&p)?;
                let classes = dedup_by_conjugacy(&reps).len();
                summary.push(format!("{} diagonal representations, {classes} up to conjugacy", reps.len()));
                report["representations"] =
                    Value::Array(reps.iter().map(|r| serde_json::to_value(r.to_json()).expect("plain data")).collect());
                report["conjugacy_classes"] = json!(classes);
            }
            Ok(Outcome { kind: "abelian", report, summary, inconclusive: false })
        }
        Command::Cohomology { file, rep } => {
            let p = read_presentation(file)?;
            let rho = rep_or_trivial(rep.as_deref(), &p, &tol)?;
            let r = cohomology_report_with(&rho, tol.rank)?;
            let mut summary = vec![format!(
                "dim Z1 = {}, dim B1 = {}, dim H1 = {}, dim centralizer = {}",
                r.dim_z1, r.dim_b1, r.dim_h1, r.dim_centralizer
            )];
            summary.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
            Ok(Outcome { kind: "cohomology", report: r.to_json(), summary, inconclusive: false })
        }
        Command::Deform { file, rep } => {
            let p = read_presentation(file)?;
            let rho = rep_or_trivial(rep.as_deref(), &p, &tol)?;
            let r = cohomology_report_with(&rho, tol.rank)?;
            let order = opts.order as usize;
            let mut directions = Vec::new();
            let mut summary = vec![format!("dim H1 = {}", r.dim_h1)];
            for (k, c) in r.slice_basis().iter().enumerate() {
                let out = extend_to_order(c, order)?;
                summary.push(match out.obstructed_at {
                    Some(at) => format!("direction {k}: obstructed at order {at}"),
                    None => format!("direction {k}: extends to order {order}"),
                });
                directions.push(out.to_json());
            }
            Ok(Outcome {
                kind: "deform",
                report: json!({
                    "order": order,
                    "cohomology": r.to_json(),
                    "directions": directions,
                }),
                summary,
                inconclusive: false,
            })
        }
        Command::Admissible { file, rep, reference, slope_floor, slack } => {
            let p = read_presentation(file)?;
            let rho = read_representation(rep, &p, &tol)?;
            let rho_ref = match reference {
                Some(path) => read_representation(path, &p, &tol)?,
                None if p == Presentation::weeks() => weeks_geometric(0)?,
                None => bail!("cli: --ref is required unless the presentation is the Weeks group"),
            };
            let cfg = VerdictConfig { radius: opts.ball as usize, slope_floor: *slope_floor, slack: *slack };
            let v = admissibility_verdict(&p, &rho_ref, &rho, &cfg)?;
            Ok(Outcome {
                kind: "admissible",
                summary: vec![format!("{}: {}", v.kind.as_str(), v.rationale)],
                inconclusive: v.kind == VerdictKind::Inconclusive,
                report: json!({
                    "representation": serde_json::to_value(rho.to_json()).expect("plain data"),
                    "reference": serde_json::to_value(rho_ref.to_json()).expect("plain data"),
                    "ball": cfg.radius,
                    "slope_floor": cfg.slope_floor,
                    "slack": cfg.slack,
                    "result": v.to_json(),
                }),
            })
        }
        Command::WeeksDemo => demo::weeks_demo(opts),
    }
}

fn emit(outcome: &Outcome, json_path: Option<&Path>) -> Result<()> {
    let text = to_canonical_string(&stamp(outcome.kind, outcome.report.clone()));
    match json_path {
        Some(p) if p == Path::new("-") => print!("{text}"),
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("cli: writing {}", p.display()))?;
            for line in &outcome.summary {
                println!("{line}");
            }
        }
        None => {
            for line in &outcome.summary {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors exit 1; exit 2 is reserved for inconclusive verdicts
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|o| emit(&o, cli.opts.json.as_deref()).map(|_| o.inconclusive));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
