//! The `ordercert` command line.
//!
//! Exit codes: `0` success, `1` a relation or derivation failed, `2` a fact
//! could not be decided or a search found nothing, `3` bad input or I/O.

pub mod cert;
pub mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use ordercert_core::exactpl::{format_rational, int};
use ordercert_core::orderlogic::facts::{theorem_table_for, FactStatus};
use ordercert_core::orderlogic::search::{
    sign_search, verify_nonlo_witness, CayleyOracle, IdentityOracle, LatticeOracle, NonLoWitness,
    PlaneOracle, SearchBound, SkewOracle,
};
use ordercert_core::orderlogic::{
    check_derivation, lemma_table, script_lemma_gen, script_theorem_main, AtomTable, CheckError, Derivation, Verdict,
};
use ordercert_core::plane::{verify_mirrored_relations_for, WitnessConfig, DEFAULT_SEED};
use ordercert_core::skew::{verify_relations_for, Generators, RelationReport};

use cert::{canonical_json, CertError, CertKind, Certificate};
use parse::{format_point, parse_perturbation, parse_point, parse_word, SyntaxError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const SEED_VAR: &str = "ORDERCERT_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Cert { path: PathBuf, source: CertError },
    #[error("{0}")]
    Usage(String),
    #[error("{SEED_VAR}: cannot parse {0:?} as an integer seed")]
    Seed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Script {
    Theorem,
    Lemma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleName {
    /// ℤ/2 with one atom `g`, `g² = 1`.
    TestZ2,
    /// ℤⁿ; atoms are `;`-separated integer vectors.
    Lattice,
    /// Exact skew elements; atoms are `,`-separated words in a, b, c, d.
    Skew,
    /// Plane words; atoms may use ch, dh and ^eta.
    Plane,
}

impl OracleName {
    fn as_str(self) -> &'static str {
        match self {
            OracleName::TestZ2 => "test-z2",
            OracleName::Lattice => "lattice",
            OracleName::Skew => "skew",
            OracleName::Plane => "plane",
        }
    }

    fn default_atoms(self) -> &'static str {
        match self {
            OracleName::TestZ2 => "g",
            OracleName::Lattice => "1,0;0,1",
            OracleName::Skew | OracleName::Plane => "a,b",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ordercert", version, about = "Exact verification and proof certificates for a non-left-orderable group of plane homeomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output style on stdout.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Leave the timestamp out of written certificates.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Replace one generator before computing, e.g. `d:=d b`.
    #[arg(long, global = true, value_name = "SPEC")]
    pub perturb: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every relation among the generators and their mirror images.
    Verify {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compute ε and compare it with β^-36.
    Epsilon,
    /// Build the fact base, check a shipped derivation, and certify it.
    Prove {
        #[arg(long, value_enum, default_value = "theorem")]
        script: Script,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    CheckCert { path: PathBuf },
    /// Image of a point under a word, e.g. `eval "c^d" "0,0"`.
    Eval { word: String, point: String },
    /// Look for a non-left-orderability witness.
    Search {
        #[arg(long, value_enum, default_value = "skew")]
        oracle: OracleName,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_name = "LIST")]
        atoms: Option<String>,
        #[arg(long, default_value_t = 1 << 16)]
        max_products: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

struct Ctx<'a> {
    format: Format,
    timestamp: bool,
    perturb: Option<String>,
    gens: Generators,
    cfg: WitnessConfig,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn parse_seed(raw: &str) -> Result<u64, CliError> {
    let t = raw.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| CliError::Seed(raw.to_string()))
}

/// Seed for witness-point search, honoring `ORDERCERT_SEED`.
pub fn witness_config() -> Result<WitnessConfig, CliError> {
    let seed = match std::env::var(SEED_VAR) {
        Ok(v) => parse_seed(&v)?,
        Err(_) => DEFAULT_SEED,
    };
    Ok(WitnessConfig { seed, ..WitnessConfig::default() })
}

fn generators(perturb: Option<&str>) -> Result<Generators, CliError> {
    match perturb {
        Some(spec) => Ok(parse_perturbation(spec)?),
        None => Ok(Generators::standard()),
    }
}

fn write_cert(path: &Path, c: &Certificate) -> Result<(), CliError> {
    std::fs::write(path, c.to_canonical()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_cert(path: &Path) -> Result<Certificate, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Certificate::parse(&text).map_err(|source| CliError::Cert { path: path.to_path_buf(), source })
}

fn payload<T: for<'de> serde::Deserialize<'de>>(c: &Certificate, path: &Path) -> Result<T, CliError> {
    c.payload_as().map_err(|source| CliError::Cert { path: path.to_path_buf(), source })
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let setup = witness_config().and_then(|cfg| Ok((cfg, generators(cli.perturb.as_deref())?)));
    let (cfg, gens) = match setup {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut cx =
        Ctx { format: cli.format, timestamp: !cli.no_timestamp, perturb: cli.perturb.clone(), gens, cfg, out, err };
    let result = match cli.command {
        Command::Verify { out } => cmd_verify(&mut cx, out),
        Command::Epsilon => cmd_epsilon(&mut cx),
        Command::Prove { script, out } => cmd_prove(&mut cx, script, out),
        Command::CheckCert { path } => cmd_check_cert(&mut cx, &path),
        Command::Eval { word, point } => cmd_eval(&mut cx, &word, &point),
        Command::Search { oracle, depth, atoms, max_products, out } => {
            cmd_search(&mut cx, oracle, depth, atoms, max_products, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(cx.err, "error: {e}");
            EXIT_INPUT
        }
    }
}

macro_rules! say {
    ($cx:expr, $($arg:tt)*) => {
        let _ = writeln!($cx.out, $($arg)*);
    };
}

fn emit_json(cx: &mut Ctx, v: &Value) {
    say!(cx, "{}", canonical_json(v).unwrap_or_default());
}

fn relation_payload(rel: &RelationReport, mir: &RelationReport, perturb: Option<&str>) -> Value {
    json!({
        "relations": rel,
        "mirrored": mir,
        "all_hold": rel.all_hold() && mir.all_hold(),
        "perturbation": perturb,
    })
}

fn cmd_verify(cx: &mut Ctx, out: Option<PathBuf>) -> Result<i32, CliError> {
    let rel = verify_relations_for(&cx.gens);
    let mir = verify_mirrored_relations_for(&cx.gens, &cx.cfg);
    let ok = rel.all_hold() && mir.all_hold();
    let body = relation_payload(&rel, &mir, cx.perturb.as_deref());
    let path = out.unwrap_or_else(|| PathBuf::from("relations.cert.json"));
    write_cert(&path, &Certificate::new(CertKind::RelationReport, &body, cx.timestamp).expect("report serializes"))?;
    match cx.format {
        Format::Json => emit_json(cx, &body),
        Format::Text => {
            say!(cx, "relations among the generators:\n{rel}");
            say!(cx, "mirrored relations:\n{mir}");
            let failed = rel.failures().chain(mir.failures()).count();
            if ok {
                say!(cx, "all {} relations hold", rel.entries.len() + mir.entries.len());
            } else {
                say!(cx, "{failed} relation(s) FAILED");
            }
            say!(cx, "certificate: {}", path.display());
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_epsilon(cx: &mut Ctx) -> Result<i32, CliError> {
    let factors = cx.gens.epsilon_factors();
    let eps = cx.gens.epsilon();
    let target = cx.gens.beta.power(-36);
    let origin = (int(0), int(0));
    let offsets: Vec<_> = factors.iter().map(|f| f.eval_point(&origin).1).collect();
    let sum = offsets.iter().fold(int(0), |a, b| a + b);
    let equal = eps == target;
    let fmt_list = |xs: &[ordercert_core::exactpl::Rational]| xs.iter().map(format_rational).collect::<Vec<_>>();
    match cx.format {
        Format::Json => {
            let body = json!({
                "epsilon": eps,
                "offsets": fmt_list(&offsets),
                "offset_sum": format_rational(&sum),
                "factor_breakpoints": factors.iter().map(|f| fmt_list(&f.breakpoint_xs())).collect::<Vec<_>>(),
                "equals_beta_pow_minus_36": equal,
            });
            emit_json(cx, &body);
        }
        Format::Text => {
            say!(cx, "epsilon x-part: {}", eps.x_part);
            say!(cx, "epsilon shift:  {}", eps.shift);
            say!(cx, "offsets at x = 0: ({}) sum {}", fmt_list(&offsets).join(", "), format_rational(&sum));
            for (k, f) in factors.iter().enumerate() {
                say!(cx, "breakpoints of c^(d a^{k}): {{{}}}", fmt_list(&f.breakpoint_xs()).join(", "));
            }
            say!(cx, "epsilon = b^-36: {}", if equal { "yes" } else { "NO" });
        }
    }
    Ok(if equal { EXIT_OK } else { EXIT_FALSE })
}

fn fact_base(cx: &Ctx, script: Script) -> (AtomTable, Derivation) {
    match script {
        Script::Theorem => (theorem_table_for(&cx.gens, &cx.cfg).table, script_theorem_main()),
        Script::Lemma => (lemma_table().0, script_lemma_gen()),
    }
}

fn report_verdict(cx: &mut Ctx, d: &Derivation, table: &AtomTable, verdict: &Verdict) -> i32 {
    let code = match verdict {
        Verdict::Valid => EXIT_OK,
        Verdict::Invalid { reason: CheckError::UnverifiedFact(id), .. }
            if table.fact(id).is_some_and(|f| f.status == FactStatus::Refuted) =>
        {
            EXIT_FALSE
        }
        Verdict::Invalid { reason, .. } if reason.is_fact_problem() => EXIT_UNKNOWN,
        Verdict::Invalid { .. } => EXIT_FALSE,
    };
    let unsettled: Vec<_> = table.facts().iter().filter(|f| !f.status.citable()).collect();
    match cx.format {
        Format::Json => {
            let (status, at, reason) = match verdict {
                Verdict::Valid => ("valid", None, None),
                Verdict::Invalid { at, reason } => ("invalid", Some(at.clone()), Some(reason.to_string())),
            };
            let body = json!({
                "derivation": d.name,
                "steps": d.steps().len(),
                "branches": d.leaf_count(),
                "verdict": status,
                "at": at,
                "reason": reason,
                "unsettled_facts": unsettled.iter().map(|f| json!({"id": f.id, "status": f.status})).collect::<Vec<_>>(),
            });
            emit_json(cx, &body);
        }
        Format::Text => {
            say!(cx, "fact base: {} facts, {} citable", table.facts().len(), table.facts().len() - unsettled.len());
            for f in &unsettled {
                let s = match f.status {
                    FactStatus::Refuted => "refuted",
                    _ => "undecided",
                };
                say!(cx, "  {} {s}: {}", f.id, f.kind);
            }
            say!(cx, "derivation {}: {} steps, {} branches", d.name, d.steps().len(), d.leaf_count());
            match verdict {
                Verdict::Valid => {
                    say!(cx, "verdict: valid");
                }
                Verdict::Invalid { at, reason } => {
                    say!(cx, "verdict: INVALID at step {at}: {reason}");
                }
            }
        }
    }
    code
}

fn cmd_prove(cx: &mut Ctx, script: Script, out: Option<PathBuf>) -> Result<i32, CliError> {
    let (table, d) = fact_base(cx, script);
    let verdict = check_derivation(&d, &table);
    let code = report_verdict(cx, &d, &table, &verdict);
    if verdict.is_valid() {
        let default = match script {
            Script::Theorem => "theorem.cert.json",
            Script::Lemma => "lemma.cert.json",
        };
        let path = out.unwrap_or_else(|| PathBuf::from(default));
        let body = json!({ "base": script, "derivation": d, "facts": table.facts() });
        write_cert(&path, &Certificate::new(CertKind::Derivation, &body, cx.timestamp).expect("derivation serializes"))?;
        if cx.format == Format::Text {
            say!(cx, "certificate: {}", path.display());
        }
    }
    Ok(code)
}

#[derive(serde::Deserialize)]
struct DerivationPayload {
    base: Script,
    derivation: Derivation,
}

#[derive(serde::Deserialize)]
struct WitnessPayload {
    oracle: String,
    atoms: String,
    witness: NonLoWitness,
}

#[derive(serde::Deserialize)]
struct RelationPayload {
    relations: RelationReport,
    mirrored: RelationReport,
    perturbation: Option<String>,
}

fn cmd_check_cert(cx: &mut Ctx, path: &Path) -> Result<i32, CliError> {
    let c = read_cert(path)?;
    match c.kind {
        CertKind::Derivation => {
            let p: DerivationPayload = payload(&c, path)?;
            let (table, _) = fact_base(cx, p.base);
            let verdict = check_derivation(&p.derivation, &table);
            Ok(report_verdict(cx, &p.derivation, &table, &verdict))
        }
        CertKind::NonloWitness => {
            let p: WitnessPayload = payload(&c, path)?;
            let name = OracleName::from_str(&p.oracle, false).map_err(CliError::Usage)?;
            let (oracle, _) = build_oracle(cx, name, &p.atoms)?;
            let ok = verify_nonlo_witness(&p.witness, oracle.as_ref());
            say!(cx, "witness over {} atoms: {}", p.witness.atoms.len(), if ok { "valid" } else { "INVALID" });
            Ok(if ok { EXIT_OK } else { EXIT_FALSE })
        }
        CertKind::RelationReport => {
            let p: RelationPayload = payload(&c, path)?;
            let gens = generators(p.perturbation.as_deref())?;
            let rel = verify_relations_for(&gens);
            let mir = verify_mirrored_relations_for(&gens, &cx.cfg);
            let reproduced = rel == p.relations && mir == p.mirrored;
            let ok = reproduced && rel.all_hold() && mir.all_hold();
            say!(
                cx,
                "relation report {}; {}",
                if reproduced { "reproduced" } else { "NOT reproduced" },
                if rel.all_hold() && mir.all_hold() { "all relations hold" } else { "some relations FAIL" }
            );
            Ok(if ok { EXIT_OK } else { EXIT_FALSE })
        }
    }
}

fn cmd_eval(cx: &mut Ctx, word: &str, point: &str) -> Result<i32, CliError> {
    let w = parse_word(word)?.to_plane(&cx.gens);
    let p = parse_point(point)?;
    let image = w.eval(&p);
    match cx.format {
        Format::Json => emit_json(cx, &json!({"point": format_point(&p), "image": format_point(&image)})),
        Format::Text => {
            say!(cx, "{}", format_point(&image));
        }
    }
    Ok(EXIT_OK)
}

fn split_list(s: &str, sep: char) -> Vec<&str> {
    s.split(sep).map(str::trim).filter(|t| !t.is_empty()).collect()
}

fn build_oracle(cx: &Ctx, name: OracleName, atoms: &str) -> Result<(Box<dyn IdentityOracle>, Vec<String>), CliError> {
    Ok(match name {
        OracleName::TestZ2 => (Box::new(CayleyOracle::z2()), vec!["g".to_string()]),
        OracleName::Lattice => {
            let mut vecs = Vec::new();
            for a in split_list(atoms, ';') {
                let v: Result<Vec<i64>, _> = split_list(a, ',').iter().map(|x| x.parse::<i64>()).collect();
                vecs.push(v.map_err(|_| CliError::Usage(format!("bad lattice vector {a:?}")))?);
            }
            let labels = vecs.iter().map(|v| format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))).collect();
            (Box::new(LatticeOracle { atoms: vecs }), labels)
        }
        OracleName::Skew => {
            let mut els = Vec::new();
            for a in split_list(atoms, ',') {
                let e = parse_word(a)?
                    .to_skew(&cx.gens)
                    .ok_or_else(|| CliError::Usage(format!("{a:?} is not a word in a, b, c, d")))?;
                els.push(e);
            }
            (Box::new(SkewOracle { atoms: els }), split_list(atoms, ',').iter().map(|s| s.to_string()).collect())
        }
        OracleName::Plane => {
            let mut ws = Vec::new();
            for a in split_list(atoms, ',') {
                ws.push(parse_word(a)?.to_plane(&cx.gens));
            }
            (Box::new(PlaneOracle { atoms: ws, config: cx.cfg }), split_list(atoms, ',').iter().map(|s| s.to_string()).collect())
        }
    })
}

fn cmd_search(
    cx: &mut Ctx,
    name: OracleName,
    depth: usize,
    atoms: Option<String>,
    max_products: usize,
    out: Option<PathBuf>,
) -> Result<i32, CliError> {
    let atoms = atoms.unwrap_or_else(|| name.default_atoms().to_string());
    let (oracle, labels) = build_oracle(cx, name, &atoms)?;
    let bound = SearchBound { max_len: depth, max_products };
    let found = match sign_search(&labels, oracle.as_ref(), bound) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(cx.err, "oracle failure: {e}");
            return Ok(EXIT_UNKNOWN);
        }
    };
    let Some(w) = found else {
        match cx.format {
            Format::Json => emit_json(cx, &Value::Null),
            Format::Text => {
                say!(cx, "no witness up to depth {depth}");
            }
        }
        return Ok(EXIT_UNKNOWN);
    };
    let path = out.unwrap_or_else(|| PathBuf::from("witness.cert.json"));
    let body = json!({ "oracle": name.as_str(), "atoms": atoms, "depth": depth, "witness": w });
    write_cert(&path, &Certificate::new(CertKind::NonloWitness, &body, cx.timestamp).expect("witness serializes"))?;
    match cx.format {
        Format::Json => emit_json(cx, &serde_json::to_value(&w).expect("witness serializes")),
        Format::Text => {
            for line in w.lines() {
                say!(cx, "{line}");
            }
        }
    }
    let _ = writeln!(cx.err, "certificate: {}", path.display());
    Ok(EXIT_OK)
}
