//! The `totref` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or is
//! inconclusive, 2 for usage and input errors, 3 when a hypothesis of the
//! requested statement does not hold.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{module_g, module_h, verify_complex, verify_total_reflexivity};
use crate::hom::{
    brute_force_hom_oracle, evaluation_set, hom_presentation, run_family, verify_end_op_iso, verify_end_ring,
    verify_ext_swap, verify_hom_g_ab_a, verify_hom_hg,
};
use crate::io::{load_ring, ModuleFile, PairFile};
use crate::module::PresentedModule;
use crate::report::{Verdict, VerificationReport, SCHEMA_VERSION};
use crate::ring::{Element, Ring};
use crate::zerodiv::{pair_report, verify_exact_pair, ExactPair};

/// Default enumeration budget for brute-force checks.
const DEFAULT_MAX_CARRIER: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "totref", version, about = "Totally reflexive modules from exact pairs of zero divisors")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact pairs of zero divisors.
    #[command(subcommand)]
    Pair(PairCmd),
    /// The modules G_a, H_a and the periodic complex.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Hom-modules and the statements about them.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Brute-force cross-checks over finite rings.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Debug, Args)]
struct RingArgs {
    /// Ring definition file.
    #[arg(long)]
    ring: Option<PathBuf>,
    /// Pair file (ring plus x and y); overrides --ring, --x and --y.
    #[arg(long)]
    pair: Option<PathBuf>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Degree bound D for graded computations.
    #[arg(long, default_value_t = 8)]
    degree: u32,
}

#[derive(Debug, Subcommand)]
enum PairCmd {
    /// Check Ann(x) = (y), Ann(y) = (x) and regularity.
    Verify(RingArgs),
}

#[derive(Debug, Subcommand)]
enum FamilyCmd {
    /// Print the module files of G_a and H_a.
    Build {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
    },
    /// Exactness of the periodic complex and its self-duality.
    VerifyComplex {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 6)]
        length: usize,
    },
    /// Total reflexivity of G_a and H_a.
    VerifyTr {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 4)]
        i_max: usize,
    },
    /// The whole battery for a_n = b_1 ... b_n. The last b is repeated up
    /// to n_max.
    RunMain {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
}

#[derive(Debug, Subcommand)]
enum HomCmd {
    /// Presentation of Hom(source, target). Modules are module files or
    /// `G:<a>` / `H:<a>` for members of the families.
    Compute {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Hom(H_b, G_a) = Hom(H_a, G_b) = G_ab and the dual statements.
    VerifyHg {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Hom(G_ab, G_a) = H_b, Hom(G_a, G_ab) = G_b and the statements for H.
    VerifyGaba {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// End(G_a) = A = End(H_a), no idempotents, and End(G_a)^op = End(G_a*).
    VerifyEnd {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 4096)]
        budget: usize,
    },
    /// Ext^i(H_b, G_a) against Ext^i(H_a, G_b) and the two companion swaps.
    VerifyExt {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 3)]
        i_max: usize,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Enumerate Hom(source, target) and compare with the computed presentation.
    Hom {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
}

impl RingArgs {
    fn ring(&self) -> Result<Ring> {
        match (&self.pair, &self.ring) {
            (Some(p), _) => Ok(PairFile::load(p)?.0),
            (None, Some(r)) => load_ring(r),
            (None, None) => Err(usage("--ring or --pair is required")),
        }
    }

    fn exact_pair(&self) -> Result<ExactPair> {
        if let Some(p) = &self.pair {
            return PairFile::load_verified(p, self.degree);
        }
        let ring = self.ring()?;
        let (Some(x), Some(y)) = (&self.x, &self.y) else {
            return Err(usage("--x and --y are required"));
        };
        verify_exact_pair(&ring, &ring.parse(x)?, &ring.parse(y)?, self.degree)?.with_regularity(self.degree)
    }

    fn module(&self, spec: &str) -> Result<PresentedModule> {
        if let Some((kind, a)) = spec.split_once(':').filter(|(k, _)| *k == "G" || *k == "H") {
            let pair = self.exact_pair()?;
            let a = pair.parse(a)?;
            return if kind == "G" { module_g(&pair, &a) } else { module_h(&pair, &a) };
        }
        let ring = self.ring()?;
        let file: ModuleFile = serde_json::from_str(&std::fs::read_to_string(spec)?)?;
        file.module_over(&ring)
    }
}

fn usage(msg: &str) -> Error {
    Error::Parse { offset: 0, message: msg.to_string() }
}

fn element(pair: &ExactPair, text: &str) -> Result<Element> {
    pair.parse(text)
}

/// What a command produced: a payload for the JSON envelope, its text
/// rendering, and the verdict that decides the exit code.
struct Outcome {
    payload: Value,
    text: String,
    verdict: Verdict,
    first_failure: Option<Value>,
}

impl Outcome {
    fn report(r: VerificationReport) -> Result<Outcome> {
        let first_failure = r.first_failure().map(|f| json!({ "check": f.check, "subject": f.subject }));
        Ok(Outcome { payload: serde_json::to_value(&r)?, text: r.to_text(), verdict: r.verdict, first_failure })
    }

    fn data(payload: &impl Serialize, text: String) -> Result<Outcome> {
        Ok(Outcome { payload: serde_json::to_value(payload)?, text, verdict: Verdict::Pass, first_failure: None })
    }
}

fn max_carrier() -> usize {
    std::env::var("TOTREF_MAX_CARRIER").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_CARRIER)
}

fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Pair(PairCmd::Verify(r)) => {
            let ring = r.ring()?;
            let (Some(x), Some(y)) = (&r.x, &r.y) else {
                let pair = r.exact_pair()?;
                return Outcome::report(pair_report(&pair, r.degree)?);
            };
            let pair = verify_exact_pair(&ring, &ring.parse(x)?, &ring.parse(y)?, r.degree)?;
            Outcome::report(pair_report(&pair, r.degree)?)
        }
        Command::Family(FamilyCmd::Build { ring, a }) => {
            let pair = ring.exact_pair()?;
            let a = element(&pair, &a)?;
            let files = [ModuleFile::from_module(&module_g(&pair, &a)?), ModuleFile::from_module(&module_h(&pair, &a)?)];
            let text = files
                .iter()
                .map(|f| format!("{}: {:?}", f.label.as_deref().unwrap_or(""), f.presentation))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome::data(&files, text + "\n")
        }
        Command::Family(FamilyCmd::VerifyComplex { ring, a, length }) => {
            let pair = ring.exact_pair()?;
            Outcome::report(verify_complex(&pair, &element(&pair, &a)?, length, ring.degree)?)
        }
        Command::Family(FamilyCmd::VerifyTr { ring, a, i_max }) => {
            let pair = ring.exact_pair()?;
            Outcome::report(verify_total_reflexivity(&pair, &element(&pair, &a)?, i_max, ring.degree)?)
        }
        Command::Family(FamilyCmd::RunMain { ring, b, n_max }) => {
            let pair = ring.exact_pair()?;
            let mut bs = b.iter().map(|t| element(&pair, t)).collect::<Result<Vec<_>>>()?;
            while bs.len() < n_max {
                bs.push(bs.last().expect("at least one b").clone());
            }
            let fam = run_family(&pair, &bs, n_max, ring.degree)?;
            let mut text = String::new();
            for m in &fam.modules {
                text += &format!("{}: mu = {}, reflexive {:?}, indecomposable {:?}\n", m.label, m.mu, m.totally_reflexive, m.indecomposable);
            }
            for e in &fam.non_isomorphic {
                text += &format!("{} !~ {}: {:?}\n", e.left, e.right, e.verdict);
            }
            for e in &fam.hom_table {
                text += &format!("{}: {:?}\n", e.identities.join("; "), e.verdict);
            }
            text += &fam.report.to_text();
            let first_failure = fam.report.first_failure().map(|f| json!({ "check": f.check, "subject": f.subject }));
            Ok(Outcome { payload: serde_json::to_value(&fam)?, text, verdict: fam.verdict, first_failure })
        }
        Command::Hom(HomCmd::Compute { ring, source, target }) => {
            let (m, n) = (ring.module(&source)?, ring.module(&target)?);
            let hp = hom_presentation(m.presentation(), n.presentation(), ring.degree)?;
            let mut text = format!("Hom({}, {}) at {}\n", m.label(), n.label(), hp.scope);
            for (g, d) in hp.generators.iter().zip(&hp.degrees) {
                text += &format!("  generator {g}{}\n", d.map(|d| format!(" (degree {d})")).unwrap_or_default());
            }
            text += &format!("  relations {}\n", hp.relations);
            Outcome::data(&hp, text)
        }
        Command::Hom(HomCmd::VerifyHg { ring, a, b }) => {
            let pair = ring.exact_pair()?;
            Outcome::report(verify_hom_hg(&pair, &element(&pair, &a)?, &element(&pair, &b)?, ring.degree)?)
        }
        Command::Hom(HomCmd::VerifyGaba { ring, a, b }) => {
            let pair = ring.exact_pair()?;
            Outcome::report(verify_hom_g_ab_a(&pair, &element(&pair, &a)?, &element(&pair, &b)?, ring.degree)?)
        }
        Command::Hom(HomCmd::VerifyEnd { ring, a, budget }) => {
            let pair = ring.exact_pair()?;
            let a = element(&pair, &a)?;
            let end = verify_end_ring(&pair, &a, ring.degree, budget)?;
            let op = verify_end_op_iso(&pair, &a, ring.degree)?;
            Outcome::report(VerificationReport::new("end", format!("a = {a}")).child(end).child(op))
        }
        Command::Hom(HomCmd::VerifyExt { ring, a, b, i_max }) => {
            let pair = ring.exact_pair()?;
            Outcome::report(verify_ext_swap(&pair, &element(&pair, &a)?, &element(&pair, &b)?, i_max, ring.degree)?)
        }
        Command::Oracle(OracleCmd::Hom { ring, source, target }) => {
            let (m, n) = (ring.module(&source)?, ring.module(&target)?);
            let budget = max_carrier();
            let oracle = brute_force_hom_oracle(m.presentation(), n.presentation(), budget)?;
            let hp = hom_presentation(m.presentation(), n.presentation(), ring.degree)?;
            let computed = evaluation_set(&hp, budget)?;
            let missing = oracle.difference(&computed).count();
            let extra = computed.difference(&oracle).count();
            Outcome::report(
                VerificationReport::new("hom-oracle", format!("Hom({}, {})", m.label(), n.label()))
                    .fact("oracle_count", oracle.len())
                    .fact("computed_count", computed.len())
                    .fact("missing", missing)
                    .fact("extra", extra)
                    .require(missing == 0 && extra == 0, "computed Hom differs from the enumeration"),
            )
        }
    }
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::PreconditionFailed(_) | Error::UnitInput(_) | Error::NotAUnit(_) | Error::UnsupportedQuotient(_) => {
            ("precondition-failed", 3)
        }
        Error::NotAComplex | Error::InvalidResolution(_) | Error::EquivalenceViolation(_) => ("check-failed", 1),
        Error::InconclusiveStrategy(_) => ("inconclusive", 1),
        Error::TooLarge(_) => ("too-large", 2),
        _ => ("usage", 2),
    }
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

/// Run the command line `args` (including the program name). Reports go
/// to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let format = cli.format;
    let result = execute(cli.command);
    let (body, code) = match result {
        Ok(o) => {
            let code = match o.verdict {
                Verdict::Pass => 0,
                _ => 1,
            };
            let body = match format {
                Format::Json => {
                    let mut env = json!({ "schema": SCHEMA_VERSION, "verdict": o.verdict, "report": o.payload });
                    if let Some(f) = o.first_failure {
                        env["first_failure"] = f;
                    }
                    serde_json::to_string_pretty(&env).expect("serializable") + "\n"
                }
                Format::Text => o.text,
            };
            (body, code)
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            match format {
                Format::Json => {
                    let env = json!({ "schema": SCHEMA_VERSION, "error": { "kind": kind, "message": e.to_string() } });
                    (serde_json::to_string_pretty(&env).expect("serializable") + "\n", code)
                }
                Format::Text => {
                    let _ = writeln!(err, "error ({kind}): {e}");
                    (String::new(), code)
                }
            }
        }
    };
    if !body.is_empty() {
        if let Err(e) = emit(out, cli.out.as_ref(), &body) {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    }
    code
}
