//! qgraft: build R-matrices, assemble Majid pairs, inspect braided algebras,
//! run rewriting systems and grafting presets, and replay the regression
//! fixture suite.
//!
//! Exit codes: 0 all requested checks pass, 1 a check failed (stdout carries
//! a machine-readable failure object), 2 usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qgraft_core::braided::{pairing_rank, radical_basis, relations_from_pair, NCPolynomial, Side};
use qgraft_core::graft::GraftSpec;
use qgraft_core::braided::Word;
use qgraft_core::qlinalg::{embed_on_triple, CompositeMatrix, IndexShape, Slot};
use qgraft_core::qscalar::{parse_scalar, rat_int, Rat, Scalar};
use qgraft_core::rewrite::{
    complete, hilbert_dims, normal_form, orient, overlaps, parse_dsl, resolve, ParsedSystem,
    RewriteSystem,
};
use qgraft_core::rmatrix::{check_frt, majid_pair, standard_r, tensor_r, Module, RepSpec};
use qgraft_core::QError;

mod fixtures;

#[derive(Parser)]
#[command(
    name = "qgraft",
    version,
    about = "Exact R-matrix, braided-algebra and quantum-group grafting toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a standard minuscule R-matrix as JSON
    Rmat(RmatArgs),
    /// Tensor standard R-matrices into one composite matrix
    Tensor(TensorArgs),
    /// Check identities of a matrix loaded from JSON
    Check(CheckArgs),
    /// Construct the normalized Majid pair (R, R') and report its checks
    Pair(PairArgs),
    /// Braided vector algebra diagnostics for a Majid pair
    Braided(BraidedArgs),
    /// Orient, complete and query a rewriting system from a DSL file
    Rewrite(RewriteArgs),
    /// Grafting pipelines
    Graft(GraftArgs),
    /// Run the regression fixture suite
    Fixtures(FixturesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleArg {
    Natural,
    Dual,
}

impl From<ModuleArg> for Module {
    fn from(m: ModuleArg) -> Module {
        match m {
            ModuleArg::Natural => Module::Natural,
            ModuleArg::Dual => Module::Dual,
        }
    }
}

#[derive(Args)]
struct RmatArgs {
    /// module dimension n (an sl_n natural or dual module)
    #[arg(long)]
    rank: usize,
    #[arg(long, value_enum, default_value = "natural")]
    module: ModuleArg,
    /// root normalization d, a positive half-integer such as 1 or 1/2
    #[arg(long, default_value = "1", value_parser = parse_rat_arg)]
    norm: Rat,
    /// write the matrix JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TensorArgs {
    /// factor as RANK:MODULE:NORM, e.g. 3:natural:1 or 2:dual:1/2; repeatable
    #[arg(long = "factor", required = true, value_parser = parse_factor_arg)]
    factors: Vec<RepSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(subcommand)]
    what: CheckWhat,
}

#[derive(Subcommand)]
enum CheckWhat {
    /// R12 R13 R23 = R23 R13 R12 on the triple tensor space
    Ybe {
        file: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// (R^-1)^t1 P (R^t2)^-1 P K0 = c K0; prints the constant c
    Frt {
        file: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long = "factor", required = true, value_parser = parse_factor_arg)]
    factors: Vec<RepSpec>,
    /// braiding eigenvalue normalized to -1, e.g. "-1" or "-q^(1/2)"
    #[arg(long, allow_hyphen_values = true)]
    eigen: String,
    /// write {"r": …, "rprime": …} matrices here
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Vector,
    Covector,
}

#[derive(Args)]
struct BraidedArgs {
    #[arg(long = "factor", required = true, value_parser = parse_factor_arg)]
    factors: Vec<RepSpec>,
    #[arg(long, allow_hyphen_values = true)]
    eigen: String,
    /// largest graded degree to analyze
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, value_enum, default_value = "vector")]
    side: SideArg,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RewriteArgs {
    /// DSL file: gens …; order a < b; rel …;
    #[arg(long)]
    system: PathBuf,
    /// degree bound for orientation, ambiguities and completion
    #[arg(long = "max-degree")]
    max_degree: usize,
    /// print graded dimensions of the completed system
    #[arg(long)]
    hilbert: bool,
    /// list ambiguities and certify resolvability by bounded completion
    #[arg(long = "check-confluence")]
    check_confluence: bool,
    /// reduce a word like "x*y^2*z" to normal form
    #[arg(long = "normal-form")]
    normal_form: Option<String>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GraftArgs {
    #[command(subcommand)]
    action: GraftAction,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    #[value(name = "typeA")]
    TypeA,
    F4,
    Rank1,
}

#[derive(Subcommand)]
enum GraftAction {
    /// Run a grafting preset end to end and emit its presentation
    Run {
        #[arg(long, value_enum)]
        preset: PresetArg,
        /// first factor dimension for typeA
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// second factor dimension for typeA
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// braided-algebra certification depth
        #[arg(long = "max-degree", default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=6))]
        max_degree: u8,
        /// write the report JSON here
        #[arg(long)]
        report: Option<PathBuf>,
        /// print the report JSON instead of the presentation text
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct FixturesArgs {
    /// print the fixture list as JSON instead of text lines
    #[arg(long)]
    json: bool,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Input-side failure: bad files, bad flags, unparseable content. Exit 2.
struct InputError(String);

impl From<QError> for InputError {
    fn from(e: QError) -> Self {
        InputError(e.to_string())
    }
}

fn parse_rat_arg(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| format!("bad rational `{s}`: {e}"))
}

fn parse_factor_arg(s: &str) -> Result<RepSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected RANK:MODULE:NORM, got `{s}`"));
    }
    let rank: usize = parts[0].parse().map_err(|e| format!("bad rank `{}`: {e}", parts[0]))?;
    let module = match parts[1] {
        "natural" => Module::Natural,
        "dual" => Module::Dual,
        other => return Err(format!("module must be natural or dual, got `{other}`")),
    };
    let norm = parse_rat_arg(parts[2])?;
    RepSpec::new(rank, module, norm).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, InputError> {
    match cli.cmd {
        Cmd::Rmat(a) => rmat_cmd(a),
        Cmd::Tensor(a) => tensor_cmd(a),
        Cmd::Check(a) => check_cmd(a),
        Cmd::Pair(a) => pair_cmd(a),
        Cmd::Braided(a) => braided_cmd(a),
        Cmd::Rewrite(a) => rewrite_cmd(a),
        Cmd::Graft(a) => graft_cmd(a),
        Cmd::Fixtures(a) => fixtures_cmd(a),
    }
}

/// Pretty-printed with sorted keys, so repeated runs are byte-identical.
fn emit(value: &Value, report: Option<&Path>) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    println!("{text}");
    if let Some(path) = report {
        fs::write(path, format!("{text}\n")).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn write_matrix(m: &CompositeMatrix, out: Option<&Path>) -> Result<(), InputError> {
    let text = m.to_json().to_string();
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn load_matrix(path: &Path) -> Result<CompositeMatrix, InputError> {
    let text =
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    CompositeMatrix::from_json(&v).map_err(InputError::from)
}

fn rmat_cmd(a: RmatArgs) -> Result<ExitCode, InputError> {
    let spec = RepSpec::new(a.rank, a.module.into(), a.norm)?;
    write_matrix(&standard_r(&spec), a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn tensor_cmd(a: TensorArgs) -> Result<ExitCode, InputError> {
    let rs: Vec<CompositeMatrix> = a.factors.iter().map(standard_r).collect();
    write_matrix(&tensor_r(&rs)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn check_cmd(a: CheckArgs) -> Result<ExitCode, InputError> {
    match a.what {
        CheckWhat::Ybe { file, report } => {
            let r = load_matrix(&file)?;
            let r12 = embed_on_triple(&r, Slot::S12);
            let r13 = embed_on_triple(&r, Slot::S13);
            let r23 = embed_on_triple(&r, Slot::S23);
            let lhs = r12.matmul(&r13).matmul(&r23);
            let rhs = r23.matmul(&r13).matmul(&r12);
            let diff = lhs.sub(&rhs);
            let first = diff.entries().next().map(|(i, j, v)| (i, j, v.clone()));
            match first {
                None => {
                    emit(&json!({"check": "ybe", "ok": true}), report.as_deref())?;
                    Ok(ExitCode::SUCCESS)
                }
                Some((i, j, v)) => {
                    // composite indices of the triple tensor space
                    let mut dims = r.shape().dims().to_vec();
                    let leg = dims.clone();
                    dims.extend_from_slice(&leg);
                    dims.extend_from_slice(&leg);
                    let shape = IndexShape::new(dims);
                    emit(
                        &json!({
                            "check": "ybe",
                            "ok": false,
                            "first_mismatch": {
                                "row": shape.unflatten(i),
                                "col": shape.unflatten(j),
                                "difference": v.to_string(),
                            },
                        }),
                        report.as_deref(),
                    )?;
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        CheckWhat::Frt { file, report } => {
            let r = load_matrix(&file)?;
            match check_frt(&r) {
                Ok(c) => {
                    emit(
                        &json!({"check": "frt", "ok": true, "frt_const": c.to_string()}),
                        report.as_deref(),
                    )?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ QError::FrtViolation(_)) => {
                    emit(
                        &json!({"check": "frt", "ok": false, "error": e.to_string()}),
                        report.as_deref(),
                    )?;
                    Ok(ExitCode::FAILURE)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn build_pair(
    factors: &[RepSpec],
    eigen: &str,
) -> Result<Result<qgraft_core::rmatrix::MajidPair, QError>, InputError> {
    let eigen: Scalar = parse_scalar(eigen).map_err(|e| InputError(format!("--eigen: {e}")))?;
    let rs: Vec<CompositeMatrix> = factors.iter().map(standard_r).collect();
    let big = tensor_r(&rs)?;
    Ok(majid_pair(&big, &eigen))
}

fn pair_cmd(a: PairArgs) -> Result<ExitCode, InputError> {
    match build_pair(&a.factors, &a.eigen)? {
        Ok(pair) => {
            let mut eigenvalues: Vec<Scalar> = pair.eigenvalues.clone();
            eigenvalues.sort_by(|x, y| x.sort_cmp(y));
            let frt = match check_frt(&pair.r) {
                Ok(c) => c,
                Err(e) => {
                    emit(&json!({"ok": false, "error": e.to_string()}), a.report.as_deref())?;
                    return Ok(ExitCode::FAILURE);
                }
            };
            emit(
                &json!({
                    "ok": true,
                    "lambda": pair.lambda.to_string(),
                    "eigenvalues": eigenvalues.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "frt_const": frt.to_string(),
                }),
                a.report.as_deref(),
            )?;
            if let Some(out) = &a.out {
                let v = json!({"r": pair.r.to_json(), "rprime": pair.rprime.to_json()});
                fs::write(out, format!("{v}\n"))
                    .map_err(|e| InputError(format!("{}: {e}", out.display())))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            emit(&json!({"ok": false, "error": e.to_string()}), a.report.as_deref())?;
            Ok(ExitCode::FAILURE)
        }
    }
}

fn braided_cmd(a: BraidedArgs) -> Result<ExitCode, InputError> {
    let side = match a.side {
        SideArg::Vector => Side::Vector,
        SideArg::Covector => Side::Covector,
    };
    match build_pair(&a.factors, &a.eigen)? {
        Ok(pair) => {
            let alg = relations_from_pair(&pair, side);
            let mut ranks = vec![1usize];
            for d in 1..=a.degree {
                ranks.push(pairing_rank(&pair, d));
            }
            let radical_dims: Vec<usize> =
                (2..=a.degree).map(|d| radical_basis(&pair, d, side).len()).collect();
            emit(
                &json!({
                    "ok": true,
                    "generators": alg.num_generators(),
                    "quad_relations": alg.quad_relations.len(),
                    "pairing_ranks": ranks,
                    "radical_dims": radical_dims,
                }),
                a.report.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            emit(&json!({"ok": false, "error": e.to_string()}), a.report.as_deref())?;
            Ok(ExitCode::FAILURE)
        }
    }
}

/// Renders a polynomial in declared generator names, in DSL syntax.
fn render_poly(p: &NCPolynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let render_word = |w: &Word| -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut k = 0usize;
        while k < w.len() {
            let g = w[k];
            let mut run = 1usize;
            while k + run < w.len() && w[k + run] == g {
                run += 1;
            }
            let name = &names[g as usize];
            parts.push(if run == 1 { name.clone() } else { format!("{name}^{run}") });
            k += run;
        }
        parts.join("*")
    };
    let mut out = String::new();
    for (i, (w, c)) in p.terms().enumerate() {
        let (neg, mag) = match c.as_monomial() {
            Some((_, r)) if r < rat_int(0) => (true, -c),
            _ => (false, c.clone()),
        };
        let prefix = if mag.is_one() {
            String::new()
        } else if mag.as_monomial().is_some() {
            format!("{mag}*")
        } else {
            format!("({mag})*")
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&prefix);
        out.push_str(&render_word(w));
    }
    out
}

/// Parses "x*y^2*z" over declared generator names.
fn parse_word(text: &str, names: &[String]) -> Result<Word, InputError> {
    let mut word = Word::new();
    for part in text.split('*') {
        let part = part.trim();
        if part.is_empty() {
            return Err(InputError(format!("empty factor in word `{text}`")));
        }
        let (name, pow) = match part.split_once('^') {
            Some((n, p)) => {
                let pow: usize =
                    p.parse().map_err(|e| InputError(format!("bad power `{p}`: {e}")))?;
                (n, pow)
            }
            None => (part, 1),
        };
        let g = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| InputError(format!("unknown generator `{name}`")))?;
        word.extend(std::iter::repeat(g as u16).take(pow));
    }
    Ok(word)
}

fn rewrite_cmd(a: RewriteArgs) -> Result<ExitCode, InputError> {
    let text = fs::read_to_string(&a.system)
        .map_err(|e| InputError(format!("{}: {e}", a.system.display())))?;
    let ParsedSystem { generators, order, relations } = parse_dsl(&text)?;
    let mut ok = true;
    let mut out = serde_json::Map::new();
    out.insert("generators".into(), json!(generators));

    let oriented: Option<RewriteSystem> = match orient(&relations, order, a.max_degree) {
        Ok(sys) => Some(sys),
        Err(e) => {
            ok = false;
            out.insert("error".into(), json!(e.to_string()));
            None
        }
    };

    if let Some(sys) = &oriented {
        out.insert("rules".into(), json!(sys.rules.len()));
        let render_rule_word =
            |w: &Word| render_poly(&NCPolynomial::from_term(w.clone(), Scalar::one()), &generators);

        if a.check_confluence {
            let mut ambiguities = Vec::new();
            let mut raw_unresolved = 0usize;
            for ov in overlaps(sys) {
                let res = resolve(sys, &ov);
                if !res.resolvable {
                    raw_unresolved += 1;
                }
                ambiguities.push(json!({
                    "word": render_rule_word(&ov.word()),
                    "degree": ov.degree(),
                    "inclusion": ov.inclusion,
                    "resolvable": res.resolvable,
                }));
            }
            out.insert("ambiguities".into(), json!(ambiguities));
            out.insert("raw_confluent".into(), json!(raw_unresolved == 0));
            match complete(sys) {
                Ok(done) => {
                    out.insert(
                        "completion".into(),
                        json!({"certified": true, "rules": done.rules.len()}),
                    );
                }
                Err(e) => {
                    ok = false;
                    out.insert(
                        "completion".into(),
                        json!({"certified": false, "error": e.to_string()}),
                    );
                }
            }
        }

        if ok && (a.hilbert || a.normal_form.is_some()) {
            match complete(sys) {
                Ok(done) => {
                    if a.hilbert {
                        out.insert("hilbert".into(), json!(hilbert_dims(&done, a.max_degree)));
                    }
                    if let Some(word_text) = &a.normal_form {
                        let word = parse_word(word_text, &generators)?;
                        let nf = normal_form(
                            &done,
                            &NCPolynomial::from_term(word, Scalar::one()),
                        );
                        out.insert(
                            "normal_form".into(),
                            json!({"input": word_text, "result": render_poly(&nf, &generators)}),
                        );
                    }
                }
                Err(e) => {
                    ok = false;
                    out.insert("error".into(), json!(e.to_string()));
                }
            }
        }
    }

    out.insert("ok".into(), json!(ok));
    emit(&Value::Object(out), a.report.as_deref())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn graft_cmd(a: GraftArgs) -> Result<ExitCode, InputError> {
    let GraftAction::Run { preset, n, m, max_degree, report, json } = a.action;
    let mut spec = match preset {
        PresetArg::TypeA => GraftSpec::type_a(n, m)?,
        PresetArg::F4 => GraftSpec::f4(),
        PresetArg::Rank1 => GraftSpec::rank1(),
    };
    spec.max_degree = max_degree as usize;
    match qgraft_core::graft::run_pipeline(&spec) {
        Ok(rep) => {
            let value = rep.to_json();
            if json {
                println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            } else {
                print!("{}", rep.presentation);
                for w in &rep.warnings {
                    println!("warning: {w}");
                }
            }
            if let Some(path) = &report {
                let text = serde_json::to_string_pretty(&value).expect("serializable");
                fs::write(path, format!("{text}\n"))
                    .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            emit(&json!({"ok": false, "error": e.to_string()}), report.as_deref())?;
            Ok(ExitCode::FAILURE)
        }
    }
}

fn fixtures_cmd(a: FixturesArgs) -> Result<ExitCode, InputError> {
    let results = fixtures::run_all();
    let failed = results.iter().filter(|f| f.outcome == fixtures::Outcome::Fail).count();
    let erratum =
        results.iter().filter(|f| f.outcome == fixtures::Outcome::ErratumFlagged).count();
    let passed = results.len() - failed - erratum;
    let as_json = json!({
        "fixtures": results
            .iter()
            .map(|f| {
                json!({
                    "name": f.name,
                    "outcome": f.outcome.json_name(),
                    "detail": f.detail,
                })
            })
            .collect::<Vec<_>>(),
        "passed": passed,
        "erratum_flagged": erratum,
        "failed": failed,
    });
    if a.json {
        println!("{}", serde_json::to_string_pretty(&as_json).expect("serializable"));
    } else {
        for f in &results {
            println!("{:>8}  {}: {}", f.outcome.label(), f.name, f.detail);
        }
        println!("passed {passed}, erratum-flagged {erratum}, failed {failed}");
    }
    if let Some(path) = &a.report {
        let text = serde_json::to_string_pretty(&as_json).expect("serializable");
        fs::write(path, format!("{text}\n"))
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
