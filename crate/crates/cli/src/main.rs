use clap::{Args, Parser, Subcommand, ValueEnum};
use ik4::clip::{
    build_saturated_model, check_truth_lemma, saturate, validate, SaturationConfig, SaturationResult,
};
use ik4::enumeration::{countermodel_search, FrameFilter, SearchOutcome};
use ik4::formula::{ClosureSet, Formula, LabelPoset};
use ik4::hilbert::{check_proof, parse_proof};
use ik4::ltree::{
    count_nice_trees, embeds_into, enumerate_nice_trees, equivalent_sim, nicify, nlt_bound, parse_tree,
    render_tree, sim_classes, strictify, Embedding, LabelledTree, Normalized,
};
use ik4::oracle::{FiniteModelOracle, OracleError};
use ik4::semantics::{
    extension, parse_model, render_model, valid_in_frame, FrameCondition, Model, Variant,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "ik4", version, about = "Countermodels, saturation and proof checking for IK4")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Bd,
    Fs,
    P,
    W,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Bd => Variant::BD,
            VariantArg::Fs => Variant::FS,
            VariantArg::P => Variant::P,
            VariantArg::W => Variant::W,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its closure.
    Parse { formula: String },
    /// Load a model file and report the four frame conditions.
    CheckModel { file: PathBuf },
    /// Worlds of a model forcing a formula.
    Eval {
        file: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Bd)]
        variant: VariantArg,
    },
    /// Truth of a formula at every world of a model, or with --frame under
    /// every valuation of the model's frame.
    Valid {
        file: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Bd)]
        variant: VariantArg,
        #[arg(long)]
        frame: bool,
    },
    /// Search IK4 frames up to a size bound for a countermodel.
    Decide {
        formula: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Saturate the countermodel found and check the resulting model.
        #[arg(long)]
        saturate: bool,
        #[command(flatten)]
        sat: SatArgs,
        /// Write the countermodel to this file.
        #[arg(long)]
        emit_model: Option<PathBuf>,
    },
    /// Saturate from a world of a model file that refutes the formula.
    Saturate {
        file: PathBuf,
        formula: String,
        /// Start world; defaults to the least refuting one.
        #[arg(long)]
        world: Option<usize>,
        #[command(flatten)]
        sat: SatArgs,
    },
    /// Labelled trees over the label poset of a formula.
    Trees(TreesArgs),
    /// Check a proof file.
    CheckProof { file: PathBuf },
}

#[derive(Args)]
struct SatArgs {
    /// Print every repair and dreary check.
    #[arg(long)]
    trace: bool,
    /// Revalidate the clip after every repair.
    #[arg(long)]
    check_invariants: bool,
    #[arg(long, default_value_t = 100_000)]
    max_tips: usize,
}

#[derive(Args)]
struct TreesArgs {
    /// Formula whose closure labels the trees.
    #[arg(long)]
    formula: String,
    #[command(subcommand)]
    op: TreeOp,
}

#[derive(Subcommand)]
enum TreeOp {
    /// Height, strictness, niceness and canonical code.
    Check { tree: String },
    /// Contract duplicate edges until the tree is strict.
    Strictify { tree: String },
    /// Nicify a strict tree.
    Nicify { tree: String },
    /// An embedding of the first tree into the second.
    Embed { from: String, into: String },
    /// Mutual embeddability.
    Equiv { left: String, right: String },
    /// One nice tree per isomorphism class up to a height.
    Enumerate {
        #[arg(long)]
        height: usize,
    },
    /// Exact nice-tree count and the recurrence bound.
    Count {
        #[arg(long)]
        height: usize,
    },
    /// One representative per mutual-embeddability class.
    Classes {
        /// Give up after this many representatives.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    File(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::File(_) => "file",
            CliError::Invariant(_) => "invariant",
        }
    }
}

/// One result: prose lines and a JSON record carrying the same data.
struct Report {
    lines: Vec<String>,
    json: Value,
    code: u8,
}

impl Report {
    fn new(json: Value) -> Self {
        Report {
            lines: Vec::new(),
            json,
            code: 0,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(r) => {
            match cli.format {
                Format::Human => r.lines.iter().for_each(|l| println!("{l}")),
                Format::Json => println!("{}", r.json),
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            match cli.format {
                Format::Human => eprintln!("error: {e}"),
                Format::Json => eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()})),
            }
            ExitCode::from(e.code())
        }
    }
}

fn formula(text: &str) -> Result<Formula, CliError> {
    ik4::parse(text).map_err(|e| CliError::Usage(format!("formula `{text}`: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn model(path: &Path) -> Result<Model, CliError> {
    parse_model(&read(path)?).map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}

fn worlds(set: &ik4::BitSet) -> Vec<usize> {
    set.iter().collect()
}

fn run(cmd: Command) -> Result<Report, CliError> {
    match cmd {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            let closure = ClosureSet::new(&f);
            let members: Vec<String> = closure.members().iter().map(|m| m.to_string()).collect();
            let mut r = Report::new(json!({
                "formula": f.to_string(),
                "length": f.length(),
                "depth": f.depth(),
                "closure_size": closure.len(),
                "closure": members,
            }));
            r.line(format!("formula: {f}"));
            r.line(format!("length: {}", f.length()));
            r.line(format!("depth: {}", f.depth()));
            r.line(format!("closure ({}):", closure.len()));
            for (i, m) in members.iter().enumerate() {
                r.line(format!("  {i}: {m}"));
            }
            Ok(r)
        }
        Command::CheckModel { file } => {
            let m = model(&file)?;
            let mut r = Report::new(Value::Null);
            r.line(format!("worlds: {}", m.size()));
            let mut conds = serde_json::Map::new();
            for c in FrameCondition::ALL {
                let v = m.frame().violation(c);
                match v {
                    None => r.line(format!("{c}: holds")),
                    Some((a, b, d)) => r.line(format!("{c}: fails at ({a}, {b}, {d})")),
                }
                conds.insert(c.name().into(), json!({"holds": v.is_none(), "violation": v.map(|(a, b, d)| [a, b, d])}));
            }
            r.json = json!({"worlds": m.size(), "conditions": conds});
            Ok(r)
        }
        Command::Eval { file, formula: text, variant } => {
            let m = model(&file)?;
            let f = formula(&text)?;
            let ext = extension(&m, &f, variant.into());
            let ws = worlds(&ext);
            let mut r = Report::new(json!({
                "formula": f.to_string(),
                "variant": format!("{:?}", Variant::from(variant)),
                "worlds": ws,
                "everywhere": ext.count() == m.size(),
            }));
            r.line(format!("{f} holds at {:?}", ws));
            Ok(r)
        }
        Command::Valid { file, formula: text, variant, frame } => {
            let m = model(&file)?;
            let f = formula(&text)?;
            let v = Variant::from(variant);
            let mut r = Report::new(Value::Null);
            if frame {
                match valid_in_frame(m.frame(), &f, v) {
                    Ok(()) => {
                        r.line(format!("VALID on the frame: {f}"));
                        r.json = json!({"formula": f.to_string(), "scope": "frame", "valid": true});
                    }
                    Err(fals) => {
                        let val: serde_json::Map<String, Value> =
                            fals.valuation.iter().map(|(p, s)| (p.to_string(), json!(worlds(s)))).collect();
                        r.line(format!("INVALID on the frame: {f} fails at world {}", fals.world));
                        for (p, s) in &val {
                            r.line(format!("  val {p} {s}"));
                        }
                        r.json = json!({"formula": f.to_string(), "scope": "frame", "valid": false,
                            "world": fals.world, "valuation": val});
                    }
                }
            } else {
                let ext = extension(&m, &f, v);
                let failing: Vec<usize> = (0..m.size()).filter(|&w| !ext.contains(w)).collect();
                if failing.is_empty() {
                    r.line(format!("VALID in the model: {f}"));
                } else {
                    r.line(format!("INVALID in the model: {f} fails at {failing:?}"));
                }
                r.json = json!({"formula": f.to_string(), "scope": "model", "valid": failing.is_empty(),
                    "failing": failing});
            }
            Ok(r)
        }
        Command::Decide { formula: text, bound, saturate: sat, sat: args, emit_model } => {
            if bound == 0 || bound > 5 {
                return Err(CliError::Usage("--bound must be between 1 and 5".into()));
            }
            let f = formula(&text)?;
            let mut r = Report::new(Value::Null);
            match countermodel_search(&f, bound, &FrameFilter::ik4()) {
                SearchOutcome::ExhaustedBound(b) => {
                    r.line(format!("NO-COUNTERMODEL bound={b}"));
                    r.json = json!({"formula": f.to_string(), "verdict": "NO-COUNTERMODEL", "bound": b});
                }
                SearchOutcome::Countermodel { model: m, world } => {
                    let body = render_model(&m);
                    r.line(format!("COUNTERMODEL size={} world={world}", m.size()));
                    r.lines.extend(body.lines().map(|l| format!("  {l}")));
                    let mut out = json!({"formula": f.to_string(), "verdict": "COUNTERMODEL",
                        "size": m.size(), "world": world, "model": body});
                    if let Some(path) = emit_model {
                        std::fs::write(&path, &body)
                            .map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
                    }
                    if sat {
                        let (lines, value, ok) = saturation_report(&m, &f, world, &args)?;
                        r.lines.extend(lines);
                        out["saturation"] = value;
                        if !ok {
                            r.code = 4;
                        }
                    }
                    r.json = out;
                }
            }
            Ok(r)
        }
        Command::Saturate { file, formula: text, world, sat } => {
            let m = model(&file)?;
            let f = formula(&text)?;
            let ext = extension(&m, &f, Variant::BD);
            let start = match world {
                Some(w) if w >= m.size() => {
                    return Err(CliError::Usage(format!("world {w} out of range for {} worlds", m.size())))
                }
                Some(w) if ext.contains(w) => {
                    return Err(CliError::Usage(format!("world {w} forces {f}")));
                }
                Some(w) => w,
                None => (0..m.size())
                    .find(|&w| !ext.contains(w))
                    .ok_or_else(|| CliError::Usage(format!("no world refutes {f}")))?,
            };
            let (lines, value, ok) = saturation_report(&m, &f, start, &sat)?;
            let mut r = Report::new(value);
            r.lines = lines;
            if !ok {
                r.code = 4;
            }
            Ok(r)
        }
        Command::Trees(args) => trees(args),
        Command::CheckProof { file } => {
            let text = read(&file)?;
            let bad = |e: ik4::hilbert::ProofError| CliError::File(format!("{}: {e}", file.display()));
            let p = parse_proof(&text).map_err(bad)?;
            let report = check_proof(&p).map_err(bad)?;
            let mut r = Report::new(json!({
                "ok": report.ok,
                "lines": p.lines.len(),
                "first_bad_line": report.first_bad_line,
                "message": report.message,
            }));
            match (&report.first_bad_line, &report.message) {
                (None, _) => r.line(format!("OK {} lines", p.lines.len())),
                (Some(n), msg) => {
                    r.line(format!("REJECTED at line {n}: {}", msg.as_deref().unwrap_or("")));
                    r.code = 1;
                }
            }
            Ok(r)
        }
    }
}

/// Saturates from `world`, builds the finite model and checks it. The flag
/// is false when a checked invariant fails.
fn saturation_report(m: &Model, f: &Formula, world: usize, args: &SatArgs) -> Result<(Vec<String>, Value, bool), CliError> {
    let closure = Arc::new(ClosureSet::new(f));
    let oracle = FiniteModelOracle::new(m.clone(), closure).map_err(|e| match e {
        OracleError::FrameCondition { .. } | OracleError::Heredity { .. } => CliError::File(e.to_string()),
        _ => CliError::Invariant(e.to_string()),
    })?;
    let config = SaturationConfig {
        max_tips: args.max_tips,
        record_trace: args.trace,
        check_invariants: args.check_invariants,
    };
    let res: SaturationResult<usize> =
        saturate(&oracle, world, &config).map_err(|e| CliError::Invariant(e.to_string()))?;
    let report = validate(&res.clip, &oracle);
    let sm = build_saturated_model(&res, &oracle).map_err(|e| CliError::Invariant(e.to_string()))?;
    let truth = check_truth_lemma(&res.clip, &oracle, &sm);
    let refutes = sm.world_of(0).is_some_and(|w| !extension(&sm.model, f, Variant::BD).contains(w));
    let conds: Vec<(FrameCondition, bool)> =
        FrameCondition::ALL.iter().map(|&c| (c, sm.model.frame().satisfies(c))).collect();
    // Upward confluence is reported but not required.
    let ok = report.is_ok()
        && truth.is_empty()
        && refutes
        && conds.iter().all(|&(c, holds)| holds || c == FrameCondition::Upward);

    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    let truth_json: Vec<Value> = truth
        .iter()
        .map(|t| json!({"tip": t.tip, "formula": oracle_formula(&oracle, t.formula), "at_tip": t.at_tip}))
        .collect();
    let trace: Vec<String> = res.trace.iter().map(|e| e.to_string()).collect();
    let body = render_model(&sm.model);

    let mut lines = vec![
        format!("SATURATED start={world} alpha_f={} beta_f={} tips={}", res.alpha_f, res.beta_f, res.clip.len()),
        format!("slice sizes: {:?}", res.slice_sizes()),
        format!("loop-back edges: {:?}", sm.loop_edges),
    ];
    if violations.is_empty() {
        lines.push("clip: valid".into());
    } else {
        lines.extend(violations.iter().map(|v| format!("clip violation: {v}")));
    }
    for (c, holds) in &conds {
        lines.push(format!("saturated frame {c}: {}", if *holds { "holds" } else { "fails" }));
    }
    if truth.is_empty() {
        lines.push("truth lemma: holds".into());
    } else {
        for t in &truth_json {
            lines.push(format!("truth lemma fails: {t}"));
        }
    }
    lines.push(format!("root refutes {f}: {refutes}"));
    lines.push("saturated model:".into());
    lines.extend(body.lines().map(|l| format!("  {l}")));
    if args.trace {
        lines.push("trace:".into());
        lines.extend(trace.iter().map(|e| format!("  {e}")));
    }

    let cond_json: serde_json::Map<String, Value> =
        conds.iter().map(|(c, h)| (c.name().to_string(), json!(h))).collect();
    let mut value = json!({
        "start": world,
        "alpha_f": res.alpha_f,
        "beta_f": res.beta_f,
        "tips": res.clip.len(),
        "slice_sizes": res.slice_sizes(),
        "loop_edges": sm.loop_edges,
        "valid": report.is_ok(),
        "violations": violations,
        "conditions": cond_json,
        "truth_lemma": truth_json,
        "refutes": refutes,
        "model": body,
        "ok": ok,
    });
    if args.trace {
        value["trace"] = json!(trace);
    }
    Ok((lines, value, ok))
}

fn oracle_formula(o: &FiniteModelOracle, id: usize) -> String {
    use ik4::oracle::WorldOracle;
    o.closure().get(id).to_string()
}

fn tree(poset: &Arc<LabelPoset>, text: &str) -> Result<LabelledTree<LabelPoset>, CliError> {
    parse_tree(poset.clone(), text).map_err(|e| CliError::Usage(format!("tree `{text}`: {e}")))
}

fn embedding_json(e: &Embedding) -> Value {
    json!(e.map.iter().map(|(a, b)| [*a, *b]).collect::<Vec<_>>())
}

fn normalized(r: &mut Report, n: &Normalized<LabelPoset>) {
    let text = render_tree(&n.tree);
    r.line(text.clone());
    r.line(format!("nodes: {}", n.tree.len()));
    r.line(format!("forward: {:?}", n.forward.map));
    r.json = json!({"tree": text, "nodes": n.tree.len(), "forward": embedding_json(&n.forward),
        "backward": embedding_json(&n.backward)});
}

fn trees(args: TreesArgs) -> Result<Report, CliError> {
    let f = formula(&args.formula)?;
    let poset = Arc::new(LabelPoset::new(Arc::new(ClosureSet::new(&f))));
    let tree_err = |e: ik4::ltree::TreeError| CliError::Usage(e.to_string());
    let mut r = Report::new(Value::Null);
    match args.op {
        TreeOp::Check { tree: text } => {
            let t = tree(&poset, &text)?;
            let code: String = t.canonical_code().iter().map(|b| format!("{b:02x}")).collect();
            r.line(format!("nodes: {}", t.len()));
            r.line(format!("height: {}", t.height()));
            r.line(format!("strict: {}", t.is_strict()));
            r.line(format!("nice: {}", t.is_nice()));
            r.line(format!("code: {code}"));
            r.json = json!({"nodes": t.len(), "height": t.height(), "strict": t.is_strict(),
                "nice": t.is_nice(), "code": code});
        }
        TreeOp::Strictify { tree: text } => normalized(&mut r, &strictify(&tree(&poset, &text)?)),
        TreeOp::Nicify { tree: text } => normalized(&mut r, &nicify(&tree(&poset, &text)?).map_err(tree_err)?),
        TreeOp::Embed { from, into } => {
            let (s, t) = (tree(&poset, &from)?, tree(&poset, &into)?);
            match embeds_into(&s, &t).map_err(tree_err)? {
                Some(e) => {
                    r.line(format!("EMBEDS {:?}", e.map));
                    r.json = json!({"embeds": true, "embedding": embedding_json(&e)});
                }
                None => {
                    r.line("NO-EMBEDDING");
                    r.json = json!({"embeds": false});
                }
            }
        }
        TreeOp::Equiv { left, right } => {
            let (s, t) = (tree(&poset, &left)?, tree(&poset, &right)?);
            let eq = equivalent_sim(&s, &t).map_err(tree_err)?;
            r.line(if eq.is_some() { "EQUIVALENT" } else { "NOT-EQUIVALENT" });
            r.json = json!({"equivalent": eq.is_some()});
        }
        TreeOp::Enumerate { height } => {
            let count = count_nice_trees(&*poset, height);
            if count.as_ref().is_none_or(|c| *c > 1_000_000u32.into()) {
                return Err(CliError::Usage(format!("too many nice trees of height <= {height} to list")));
            }
            let ts: Vec<String> = enumerate_nice_trees(poset.clone(), height).iter().map(render_tree).collect();
            r.lines = ts.clone();
            r.json = json!({"height": height, "count": ts.len(), "trees": ts});
        }
        TreeOp::Count { height } => {
            let count = count_nice_trees(&*poset, height).map(|c| c.to_string());
            let bound = poset
                .cardinality()
                .and_then(|c| u64::try_from(c).ok())
                .and_then(|c| nlt_bound(height, c))
                .map(|b| b.to_string());
            let show = |o: &Option<String>| o.clone().unwrap_or_else(|| "too large".into());
            r.line(format!("nice trees: {}", show(&count)));
            r.line(format!("nlt bound: {}", show(&bound)));
            r.json = json!({"height": height, "count": count, "nlt_bound": bound});
        }
        TreeOp::Classes { limit } => {
            let reps = sim_classes(poset.clone(), limit)
                .ok_or_else(|| CliError::Usage(format!("more than {limit} classes")))?;
            let ts: Vec<String> = reps.iter().map(render_tree).collect();
            r.lines = ts.clone();
            r.json = json!({"count": ts.len(), "trees": ts});
        }
    }
    Ok(r)
}
