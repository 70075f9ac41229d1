mod config;
mod symbol;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use cmzv::evaluator::{
    eval_cyc, eval_mzsv, eval_mzv, last_shell, Arithmetic, TruncationSpec, Value,
};
use cmzv::relations::{
    enumerate_family, EnumerationBounds, Family, Relation, RelationMatrix, Symbol, SymbolEvaluator,
};
use cmzv::selftest::{run_selftest, Level};
use cmzv::CmzvError;
use serde_json::json;

use config::{Config, Format, CONFIG_ENV};
use symbol::parse_symbol;

const SYMBOL_HELP: &str = "\
Symbols:
  zeta K            ordinary value, e.g. `zeta 1,2` or `zeta (1,2)`
  zetastar K        star value, e.g. `zetastar 1,2`
  cyc [(..),(..)]   cyclic value, e.g. `cyc [(2),(1)]`
An index is a comma- or space-separated list of positive integers.";

#[derive(Parser)]
#[command(name = "cmzv", version, about = "Cyclic multiple zeta values: evaluation and relations", after_help = SYMBOL_HELP)]
struct Cli {
    /// TOML config file (overrides the CMZV_CONFIG variable)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a truncated value
    #[command(after_help = SYMBOL_HELP)]
    Eval {
        /// Symbol words, e.g. `zeta 1,2`
        #[arg(required = true, num_args = 1..)]
        symbol: Vec<String>,
        #[arg(long)]
        cutoff: Option<u64>,
        #[arg(long, value_enum, default_value = "float")]
        mode: Mode,
    },
    /// Write every relation of a family at one weight
    Relations {
        #[command(flatten)]
        select: Select,
        /// Output file (stdout if absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank over Q of a family at one weight
    Rank {
        #[command(flatten)]
        select: Select,
    },
    /// Check relations numerically
    Verify {
        /// JSON-lines file of relations
        #[arg(long = "in", conflicts_with_all = ["family", "weight", "max_weight"])]
        input: Option<PathBuf>,
        #[arg(long)]
        family: Option<Family>,
        /// Exactly this weight
        #[arg(long, conflicts_with = "max_weight")]
        weight: Option<u32>,
        /// Every weight up to this one
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        cutoff: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "float")]
        mode: Mode,
    },
    /// Run the exact identity suites
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct Select {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    weight: u32,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Exact,
    Float,
}

impl Mode {
    fn spec(self, cutoff: u64) -> TruncationSpec {
        match self {
            Mode::Exact => TruncationSpec::exact(cutoff),
            Mode::Float => TruncationSpec::float(cutoff),
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Failures mapped onto exit codes.
enum Failure {
    /// Some relation or suite did not pass.
    Check,
    /// Bad input of any kind.
    Usage(anyhow::Error),
    Divergent(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<CmzvError>() {
            Some(CmzvError::Divergent(s)) => Failure::Divergent(s.clone()),
            _ => Failure::Usage(e),
        }
    }
}

impl From<CmzvError> for Failure {
    fn from(e: CmzvError) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Divergent(s)) => {
            eprintln!("error: divergent value {s}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let mut cfg = Config::load(cli.config.as_deref())
        .with_context(|| format!("loading config (flag or {CONFIG_ENV})"))?;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let mut out = std::io::stdout().lock();
    let text = match cli.command {
        Command::Eval { symbol, cutoff, mode } => {
            cmd_eval(&cfg, &symbol.join(" "), mode.spec(cutoff.unwrap_or(cfg.cutoff)))?
        }
        Command::Relations { select, out: path } => {
            let rels = relations(&cfg, select.family, select.weight)?;
            let text = render_relations(&cfg, &rels, select.weight)?;
            if let Some(p) = path {
                fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
                return Ok(());
            }
            text
        }
        Command::Rank { select } => {
            let rels = relations(&cfg, select.family, select.weight)?;
            let m = RelationMatrix::new(&rels, select.weight)?;
            match cfg.format {
                Format::Json => format!(
                    "{}\n",
                    json!({"family": select.family.name(), "weight": select.weight,
                           "relations": rels.len(), "symbols": m.columns().len(), "rank": m.rank()})
                ),
                _ => format!(
                    "{} weight {}: {} relations over {} symbols, rank {}\n",
                    select.family,
                    select.weight,
                    rels.len(),
                    m.columns().len(),
                    m.rank()
                ),
            }
        }
        Command::Verify { input, family, weight, max_weight, cutoff, tol, mode } => {
            let rels = match (input, family) {
                (Some(p), _) => read_relations(&p)?,
                (None, Some(f)) => {
                    let weights = match (weight, max_weight) {
                        (Some(w), _) => w..=w,
                        (None, Some(w)) => 2..=w,
                        (None, None) => 2..=cfg.max_weight,
                    };
                    let mut all = Vec::new();
                    for w in weights {
                        all.extend(relations(&cfg, f, w)?);
                    }
                    all
                }
                (None, None) => {
                    return Err(Failure::Usage(anyhow!("verify needs --in or --family")))
                }
            };
            let spec = mode.spec(cutoff.unwrap_or(cfg.cutoff));
            let (text, ok) = cmd_verify(&cfg, &rels, spec, tol.unwrap_or(cfg.tol));
            out.write_all(text.as_bytes()).map_err(anyhow::Error::from)?;
            return if ok { Ok(()) } else { Err(Failure::Check) };
        }
        Command::Selftest { level, seed } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = run_selftest(level, seed.unwrap_or(cfg.seed));
            let text = match cfg.format {
                Format::Json => format!("{}\n", report.to_json()),
                _ => report.to_text(),
            };
            out.write_all(text.as_bytes()).map_err(anyhow::Error::from)?;
            return if report.all_passed() { Ok(()) } else { Err(Failure::Check) };
        }
    };
    out.write_all(text.as_bytes()).map_err(anyhow::Error::from)?;
    Ok(())
}

fn cmd_eval(cfg: &Config, text: &str, spec: TruncationSpec) -> Result<String, Failure> {
    let sym = parse_symbol(text)?;
    let eval = |t: TruncationSpec| match &sym {
        Symbol::Mzv(k) => eval_mzv(k, t),
        Symbol::Mzsv(k) => eval_mzsv(k, t),
        Symbol::Cyc(k) => eval_cyc(k, t),
    };
    let value = eval(spec)?;
    let shown = match &value {
        Value::Exact(r) => r.to_string(),
        Value::Float(v) => format!("{v:.15e}"),
    };
    Ok(match cfg.format {
        Format::Json => {
            let index = match &sym {
                Symbol::Mzv(k) | Symbol::Mzsv(k) => json!(k),
                Symbol::Cyc(k) => json!(k.blocks()),
            };
            let tail = match spec.arithmetic {
                Arithmetic::Float => Some(format!("{:e}", last_shell(eval, spec)?)),
                Arithmetic::Exact => None,
            };
            let mode = match spec.arithmetic {
                Arithmetic::Exact => "exact",
                Arithmetic::Float => "float",
            };
            format!(
                "{}\n",
                json!({
                    "symbol": sym.key(),
                    "kind": sym.kind(),
                    "index": index,
                    "cutoff": spec.cutoff,
                    "mode": mode,
                    "value": shown,
                    "error_bound": null,
                    "tail_estimate": tail,
                })
            )
        }
        _ => format!("{shown}\n"),
    })
}

fn relations(cfg: &Config, family: Family, weight: u32) -> Result<Vec<Relation>, Failure> {
    if weight > cfg.max_weight {
        return Err(Failure::Usage(anyhow!(
            "weight {weight} exceeds the configured maximum {}",
            cfg.max_weight
        )));
    }
    let bounds = EnumerationBounds { max_blocks: cfg.max_blocks };
    Ok(enumerate_family(family, weight, bounds)?)
}

fn render_relations(cfg: &Config, rels: &[Relation], weight: u32) -> Result<String, Failure> {
    Ok(match cfg.format {
        Format::Csv => RelationMatrix::new(rels, weight)?.to_csv(),
        Format::Text => rels.iter().map(|r| format!("{r}\n")).collect(),
        Format::Json => rels.iter().map(|r| format!("{}\n", r.to_json_line())).collect(),
    })
}

fn read_relations(path: &PathBuf) -> Result<Vec<Relation>, Failure> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let r = Relation::from_json_line(line)
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        out.push(r);
    }
    if out.is_empty() {
        bail_usage(format!("{} holds no relations", path.display()))?;
    }
    Ok(out)
}

fn bail_usage(msg: String) -> Result<(), Failure> {
    Err(Failure::Usage(anyhow::Error::msg(msg)))
}

fn cmd_verify(cfg: &Config, rels: &[Relation], spec: TruncationSpec, tol: f64) -> (String, bool) {
    let ev = SymbolEvaluator::new(spec);
    ev.prefetch(rels.iter().flat_map(|r| r.terms().keys()));
    let mut text = String::new();
    let mut passed = 0;
    for r in rels {
        let rep = ev.verify(r, tol);
        passed += usize::from(rep.passed);
        match cfg.format {
            Format::Json => {
                text.push_str(&json!({"relation": r.to_json(), "report": rep.to_json()}).to_string());
                text.push('\n');
            }
            _ => text.push_str(&format!("{rep} | {r}\n")),
        }
    }
    if cfg.format != Format::Json {
        text.push_str(&format!("summary: {passed}/{} passed\n", rels.len()));
    }
    (text, passed == rels.len())
}
