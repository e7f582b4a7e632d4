use clap::{Args, Parser, Subcommand};
use qcover::braid::{Braid, BraidWord};
use qcover::cover::{Cover, CoverElement};
use qcover::expr::{Evaluator, Value};
use qcover::modules::{ModuleVector, Representation, SimpleModule};
use qcover::pbw::{PbwMonomial, PlusJ, U0JElement};
use qcover::root::{CartanDatum, DatumError, Weight};
use qcover::verify::{self, Suite};
use serde_json::{json, Value as Json};
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "qcover", version, about = "Exact computation in quantum covering groups")]
struct Cli {
    /// Cartan datum: a JSON file, or one of the presets b2super, a2, spin, rank1-odd.
    #[arg(long, global = true, default_value = "b2super")]
    datum: String,

    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the datum axioms and print its derived data.
    Validate,
    /// Evaluate an expression to canonical normal form.
    Eval { expr: String },
    /// Apply a braid word such as "T1 T2^-1" to an expression.
    Braid {
        #[arg(long)]
        word: String,
        expr: String,
    },
    /// List a PBW basis with norms.
    Pbw(PbwArgs),
    /// Gram matrix of a PBW basis and its orthogonality certificate.
    Gram(PbwArgs),
    /// Weight spaces of V(λ) and matrices of operators on them.
    Module {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Vec<i64>,
        /// A braid word ("T1", "T2^-1 T1") or an expression in U ("E_1", "F_2^(2)").
        #[arg(long)]
        op: Vec<String>,
    },
    /// Run verification suites; all of them when no --suite is given.
    Verify {
        #[arg(long)]
        suite: Vec<String>,
    },
}

#[derive(Args)]
struct PbwArgs {
    /// Reduced word as a positive braid word; defaults to a reduced word of w0.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Use the inverse symmetries.
    #[arg(long)]
    inverse: bool,
}

/// Exit status 1 is a failed verification, 2 bad input.
enum Failure {
    Verification(String),
    Usage(String),
}

type Outcome = Result<Report, Failure>;

struct Report {
    text: String,
    json: Json,
    passed: bool,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn load_datum(spec: &str) -> Result<CartanDatum, Failure> {
    let preset = match spec {
        "b2super" | "b2-super" => Some(CartanDatum::b2_super()),
        "a2" => Some(CartanDatum::a2()),
        "spin" => Some(CartanDatum::spin_rank2()),
        "rank1-odd" => Some(CartanDatum::rank1_odd()),
        _ => None,
    };
    if let Some(d) = preset {
        return Ok(d);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("{spec}: {e}")))?;
    CartanDatum::from_json(&text).map_err(|e| match e {
        DatumError::Json(_) => usage(format!("{spec}: {e}")),
        _ => Failure::Verification(format!("{spec}: invalid datum: {e}")),
    })
}

fn one_based(w: &[usize]) -> Vec<usize> {
    w.iter().map(|i| i + 1).collect()
}

fn datum_json(d: &CartanDatum) -> Json {
    json!({ "cartan": d.matrix(), "parity": d.parities(), "d": d.ds() })
}

fn validate(d: &CartanDatum) -> Outcome {
    let n = d.rank();
    let sym: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| d.d(i) * d.a(i, j)).collect()).collect();
    let longest = d.longest_word().ok().map(|w| one_based(&w));
    let odd = one_based(&d.odd());
    let mut text = format!("valid datum of rank {n}\n");
    text += &format!("cartan matrix: {:?}\n", d.matrix());
    text += &format!("odd indices: {odd:?}\n");
    text += &format!("symmetrized: {sym:?}\n");
    match &longest {
        Some(w) => text += &format!("finite type, longest word {w:?}"),
        None => text += "not of finite type",
    }
    let json = json!({
        "schema": SCHEMA,
        "command": "validate",
        "valid": true,
        "datum": datum_json(d),
        "rank": n,
        "odd": odd,
        "symmetrized": sym,
        "finite_type": longest.is_some(),
        "longest_word": longest,
    });
    Ok(Report { text, json, passed: true })
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Scalar(_) => "scalar",
        Value::Half(_) => "half",
        Value::Cover(_) => "cover",
    }
}

fn eval(braid: &Braid, expr: &str) -> Outcome {
    let ev = Evaluator::new(braid);
    let v = ev.eval_str(expr).map_err(usage)?;
    let text = ev.render(&v);
    let json = json!({ "schema": SCHEMA, "command": "eval", "input": expr, "kind": kind(&v), "value": text });
    Ok(Report { text, json, passed: true })
}

fn apply_braid(braid: &Braid, word: &str, expr: &str) -> Outcome {
    let w = BraidWord::parse(word, braid.cover().rank()).map_err(usage)?;
    let ev = Evaluator::new(braid);
    let u = braid.cover();
    let x: CoverElement = match ev.eval_str(expr).map_err(usage)? {
        Value::Scalar(c) => u.scalar(c),
        Value::Cover(x) => x,
        Value::Half(_) => return Err(usage("braid symmetries act on U, not on the half algebra")),
    };
    let y = braid.apply_word(&w, &x);
    let text = ev.render(&Value::Cover(y));
    let json = json!({ "schema": SCHEMA, "command": "braid", "word": w.to_string(), "input": expr, "value": text });
    Ok(Report { text, json, passed: true })
}

fn u0j_text(x: &U0JElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = x
        .iter()
        .map(|(a, c)| {
            if a.iter().all(|&e| e == 0) {
                format!("({c})")
            } else {
                let exps: Vec<String> = a.iter().map(|e| e.to_string()).collect();
                format!("({c})*J{{{}}}", exps.join(","))
            }
        })
        .collect();
    parts.join(" + ")
}

fn pbw_setup(cover: &Arc<Cover>, args: &PbwArgs) -> Result<(PlusJ, Vec<usize>, i8, Vec<PbwMonomial>), Failure> {
    let p = PlusJ::new(cover.clone());
    let word = match &args.word {
        Some(text) => {
            let w = BraidWord::parse(text, cover.rank()).map_err(usage)?;
            if w.0.iter().any(|l| l.sign < 0) {
                return Err(usage("a PBW word must be a positive braid word"));
            }
            w.0.iter().map(|l| l.index).collect()
        }
        None => cover.datum().longest_word().map_err(|e| usage(format!("no default word: {e}")))?,
    };
    let sign = if args.inverse { -1 } else { 1 };
    let basis = p.pbw_basis(&word, sign, args.degree).map_err(usage)?;
    Ok((p, word, sign, basis))
}

fn monomial_json(p: &PlusJ, ev: &Evaluator, m: &PbwMonomial) -> Json {
    json!({
        "exponents": m.exponents,
        "weight": m.weight.0,
        "element": ev.render(&Value::Cover(p.embed(&m.element))),
    })
}

fn pbw(braid: &Braid, args: &PbwArgs) -> Outcome {
    let (p, word, sign, basis) = pbw_setup(&braid.cover_arc(), args)?;
    let ev = Evaluator::new(braid);
    let mut text = format!("PBW basis for word {:?}, sign {sign}, degree <= {}\n", one_based(&word), args.degree);
    let mut items = Vec::new();
    for (k, m) in basis.iter().enumerate() {
        let norm = p.form(&m.element, &m.element);
        text += &format!("{k:>3} c={:?} weight={:?} norm={}\n", m.exponents, m.weight.0, u0j_text(&norm));
        let mut j = monomial_json(&p, &ev, m);
        j["norm"] = json!(u0j_text(&norm));
        j["norm_product"] = json!(p.norm_product(m).to_string());
        items.push(j);
    }
    let json = json!({
        "schema": SCHEMA,
        "command": "pbw",
        "word": one_based(&word),
        "sign": sign,
        "degree": args.degree,
        "basis": items,
    });
    Ok(Report { text: text.trim_end().to_string(), json, passed: true })
}

fn gram(braid: &Braid, args: &PbwArgs) -> Outcome {
    let (p, word, sign, basis) = pbw_setup(&braid.cover_arc(), args)?;
    let cert = p.gram_certificate(&basis);
    let matrix: Vec<Vec<String>> = cert.matrix.iter().map(|r| r.iter().map(u0j_text).collect()).collect();
    let blocks: Vec<Json> = cert
        .blocks
        .iter()
        .map(|b| {
            json!({
                "weight": b.weight.0,
                "members": b.members,
                "word_rank": b.word_rank,
                "orthogonal": b.orthogonal,
                "regular": b.regular,
                "pi_powers": b.pi_powers,
                "holds": b.holds(),
            })
        })
        .collect();
    let passed = cert.holds();
    let mut text = format!("Gram certificate for word {:?}, sign {sign}, degree <= {}\n", one_based(&word), args.degree);
    for b in &cert.blocks {
        text += &format!(
            "{} weight={:?} size={} rank={} orthogonal={} regular={}\n",
            if b.holds() { "ok  " } else { "FAIL" },
            b.weight.0,
            b.members.len(),
            b.word_rank,
            b.orthogonal,
            b.regular
        );
    }
    let json = json!({
        "schema": SCHEMA,
        "command": "gram",
        "word": one_based(&word),
        "sign": sign,
        "degree": args.degree,
        "passed": passed,
        "blocks": blocks,
        "matrix": matrix,
    });
    Ok(Report { text: text.trim_end().to_string(), json, passed })
}

enum Operator {
    Braid(BraidWord),
    Element(CoverElement),
}

fn module(braid: &Braid, lambda: &[i64], ops: &[String]) -> Outcome {
    let cover = braid.cover_arc();
    if lambda.len() != cover.rank() {
        return Err(usage(format!("--lambda needs {} entries", cover.rank())));
    }
    let v = SimpleModule::new(cover.clone(), Weight(lambda.to_vec())).map_err(usage)?;
    let ev = Evaluator::new(braid);
    let mut parsed = Vec::new();
    for op in ops {
        let o = match BraidWord::parse(op, cover.rank()) {
            Ok(w) if !w.0.is_empty() => Operator::Braid(w),
            _ => match ev.eval_str(op).map_err(usage)? {
                Value::Cover(x) => Operator::Element(x),
                Value::Scalar(c) => Operator::Element(cover.scalar(c)),
                Value::Half(_) => return Err(usage(format!("{op}: not an element of U"))),
            },
        };
        parsed.push((op.clone(), o));
    }
    let apply = |o: &Operator, x: &ModuleVector| -> ModuleVector {
        match o {
            Operator::Braid(w) => w.0.iter().rev().fold(x.clone(), |acc, l| v.braid(l.index, l.sign, &acc)),
            Operator::Element(u) => v.act(u, x),
        }
    };
    let mut text = format!("V({lambda:?}) of dimension {}\n", v.dim());
    let mut spaces = Vec::new();
    for (s, sp) in v.spaces().iter().enumerate() {
        text += &format!("weight {:?}: dim {}\n", sp.weight.0, sp.dim());
        let mut op_json = serde_json::Map::new();
        for (name, o) in &parsed {
            let block = v.operator_block(s, &|x| apply(o, x));
            let entry = match block {
                None => json!({ "target": Json::Null, "matrix": [] }),
                Some((t, cols)) => {
                    let rows = cols.first().map_or(0, |c| c.len());
                    let matrix: Vec<Vec<String>> =
                        (0..rows).map(|r| cols.iter().map(|c| c[r].to_string()).collect()).collect();
                    text += &format!("  {name} -> weight {:?}: {matrix:?}\n", v.space(t).weight.0);
                    json!({ "target": v.space(t).weight.0, "matrix": matrix })
                }
            };
            op_json.insert(name.clone(), entry);
        }
        spaces.push(json!({ "weight": sp.weight.0, "dim": sp.dim(), "operators": op_json }));
    }
    let json = json!({
        "schema": SCHEMA,
        "command": "module",
        "lambda": lambda,
        "dim": v.dim(),
        "spaces": spaces,
    });
    Ok(Report { text: text.trim_end().to_string(), json, passed: true })
}

fn run_verify(cover: &Arc<Cover>, names: &[String]) -> Outcome {
    let mut suites: Vec<Suite> = if names.is_empty() {
        Suite::ALL.to_vec()
    } else {
        names.iter().map(|n| n.parse::<Suite>().map_err(usage)).collect::<Result<_, _>>()?
    };
    suites.sort();
    suites.dedup();
    let reports: Vec<verify::SuiteReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|&s| scope.spawn(move || verify::run(s, cover))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let passed = reports.iter().all(|r| r.passed());
    let mut text = String::new();
    for r in &reports {
        for c in &r.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            text += &format!("{status} {}/{} ({} cases)", r.suite, c.name, c.cases);
            if let Some(x) = &c.counterexample {
                text += &format!(": {x}");
            }
            text.push('\n');
        }
    }
    text += if passed { "all checks passed" } else { "verification failed" };
    let json = json!({
        "schema": SCHEMA,
        "command": "verify",
        "datum": datum_json(cover.datum()),
        "passed": passed,
        "suites": reports,
    });
    Ok(Report { text, json, passed })
}

fn dispatch(cli: &Cli) -> Outcome {
    let datum = load_datum(&cli.datum)?;
    if let Command::Validate = cli.command {
        return validate(&datum);
    }
    let cover = Arc::new(Cover::new(Arc::new(datum)));
    let braid = Braid::new(cover.clone());
    match &cli.command {
        Command::Validate => unreachable!(),
        Command::Eval { expr } => eval(&braid, expr),
        Command::Braid { word, expr } => apply_braid(&braid, word, expr),
        Command::Pbw(a) => pbw(&braid, a),
        Command::Gram(a) => gram(&braid, a),
        Command::Module { lambda, op } => module(&braid, lambda, op),
        Command::Verify { suite } => run_verify(&cover, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(r) => {
            // a closed pipe (`qcover ... | head`) is not an error
            let text = if cli.json { serde_json::to_string_pretty(&r.json).expect("report serializes") } else { r.text };
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if r.passed { 0 } else { 1 })
        }
        Err(Failure::Verification(msg)) => {
            if cli.json {
                let j = json!({ "schema": SCHEMA, "passed": false, "error": msg });
                let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&j).expect("report serializes"));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
