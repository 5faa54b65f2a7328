mod suites;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use weylcalc::diagram::{self, catalog, identify, DiagramName};
use weylcalc::oracle;
use weylcalc::rewrite::{self, LongCycle};
use weylcalc::rootsys::{Family, Root, RootSystem, RootSystemId};
use weylcalc::weyl::{self, Order};

const ROOT_GRAMMAR: &str = "Root literals are signed sums of basis vectors e1..e9 with optional \
rational coefficients: `e1-e2`, `2e3`, `1/2e1+1/2e2`, or a whole sum over 2 as \
`(e1-e2-e3+e4-e5+e6-e7+e8)/2`. Lists are comma separated.";

#[derive(Parser)]
#[command(name = "weylcalc", version, about = "Exact Weyl-group and Carter-diagram calculator", after_help = ROOT_GRAMMAR)]
struct Cli {
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root counts of a system, or the full root list.
    Rootsys {
        family: String,
        rank: usize,
        /// Print every root, one per line, in lexicographic order.
        #[arg(long)]
        list: bool,
    },
    /// Characteristic polynomial of a product of reflections.
    Charpoly {
        #[arg(long)]
        system: String,
        /// Comma-separated roots, applied left to right as a matrix product.
        #[arg(long)]
        word: String,
    },
    /// Diagram of a root set with its admissibility verdict.
    Diagram {
        #[arg(long)]
        system: String,
        #[arg(long)]
        roots: String,
        /// Comma-separated vertex labels; defaults to the root literals.
        #[arg(long)]
        labels: Option<String>,
    },
    /// Run a long-cycle elimination script: d6b2, e7b2, e8b3, e8b5, dl:<l>.
    Transform { name: String },
    /// Run a verification suite: table1, titsform, fivecycle, uniqueness, orbits, parity.
    Verify { suite: String },
    /// Number of W-orbits on k-sets of mutually orthogonal roots.
    Orbits {
        #[arg(long)]
        system: String,
        #[arg(long)]
        k: usize,
    },
    /// Catalog representative of a named diagram, e.g. `E8(a3)`.
    Catalog { name: String },
    /// Graphviz text for a catalog diagram or an explicit root set.
    RenderDot {
        name: Option<String>,
        #[arg(long, requires = "roots")]
        system: Option<String>,
        #[arg(long, requires = "system")]
        roots: Option<String>,
    },
}

/// Failures, split by exit code.
enum Failure {
    Usage(String),
    /// Suite report for stdout, or an error message for stderr.
    Report(String),
    Verification(String),
}

type Outcome = Result<String, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_system(s: &str) -> Result<RootSystem, Failure> {
    let id: RootSystemId = s.parse().map_err(usage)?;
    RootSystem::build(id).map_err(usage)
}

fn parse_roots(sys: &RootSystem, list: &str) -> Result<Vec<Root>, Failure> {
    let roots = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Root::parse(s, sys.ambient_dim))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    if roots.is_empty() {
        return Err(Failure::Usage("empty root list".into()));
    }
    if let Some(bad) = roots.iter().find(|r| !sys.is_root(r)) {
        return Err(Failure::Usage(format!("{bad} is not a root of {}", sys.id)));
    }
    Ok(roots)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn rootsys(family: &str, rank: usize, list: bool, pretty: bool) -> Outcome {
    let family: Family = family.parse().map_err(usage)?;
    let id = RootSystemId::new(family, rank).map_err(usage)?;
    let sys = RootSystem::build(id).map_err(usage)?;
    if list {
        return Ok(sys.all_roots().iter().map(|r| format!("{r}\n")).collect());
    }
    let long = sys.all_roots().iter().filter(|r| sys.norm_class(r) == weylcalc::rootsys::NormClass::Long).count();
    if pretty {
        return Ok(format!(
            "system        {}\nambient dim   {}\nroots         {}\npositive      {}\nlong roots    {}\nW order       {}\nsimple roots  {}\nmax root      {}\n",
            sys.id,
            sys.ambient_dim,
            sys.all_roots().len(),
            sys.positive_roots().len(),
            long,
            oracle::weyl_group_order(sys.id),
            strings(&sys.simple_roots).join(", "),
            sys.max_root()
        ));
    }
    Ok(to_json(&json!({
        "schema": "weylcalc/rootsys/v1",
        "system": sys.id.to_string(),
        "rank": sys.rank(),
        "ambient_dim": sys.ambient_dim,
        "roots": sys.all_roots().len(),
        "positive_roots": sys.positive_roots().len(),
        "long_roots": long,
        "weyl_group_order": oracle::weyl_group_order(sys.id).to_string(),
        "simple_roots": strings(&sys.simple_roots),
        "max_root": sys.max_root().to_string(),
    })))
}

fn order_json(o: Order) -> Value {
    match o {
        Order::Finite(n) => json!(n),
        Order::Infinite => json!("infinite"),
        Order::Unresolved(cap) => json!(format!("unresolved below {cap}")),
    }
}

fn charpoly(system: &str, word: &str, pretty: bool) -> Outcome {
    let sys = parse_system(system)?;
    let roots = parse_roots(&sys, word)?;
    let w = weyl::evaluate_roots(&sys, &roots).map_err(usage)?;
    let chi = w.charpoly();
    let span = diagram::span_charpoly_of_word(&roots);
    let order = weyl::order_or_infinite(&w, 10_000);
    if pretty {
        return Ok(format!("charpoly       {chi}\nspan charpoly  {span}\norder          {}\n", order_json(order)));
    }
    Ok(to_json(&json!({
        "schema": "weylcalc/charpoly/v1",
        "system": sys.id.to_string(),
        "word": strings(&roots),
        "charpoly": chi.to_string(),
        "span_charpoly": span.to_string(),
        "order": order_json(order),
    })))
}

fn diagram_report(sys: &RootSystem, d: &diagram::LabeledDiagram) -> Value {
    let cycles: Vec<Vec<usize>> = diagram::try_cycles(&d.diagram.clone()).unwrap_or_default();
    let name = if d.independent && diagram::is_admissible(d) { identify(d).ok().flatten() } else { None };
    json!({
        "schema": "weylcalc/diagram/v1",
        "system": sys.id.to_string(),
        "roots": strings(&d.roots),
        "diagram": d.diagram,
        "independent": d.independent,
        "admissible": diagram::is_admissible(d),
        "dotted_parity_ok": diagram::dotted_parity_ok(&d.diagram),
        "cycles": cycles,
        "identified": name.map(|n| n.to_string()),
    })
}

fn diagram_cmd(system: &str, roots: &str, labels: Option<&str>, pretty: bool) -> Outcome {
    let sys = parse_system(system)?;
    let roots = parse_roots(&sys, roots)?;
    let labels: Vec<String> = match labels {
        Some(l) => l.split(',').map(|s| s.trim().to_string()).collect(),
        None => strings(&roots),
    };
    let d = diagram::from_labeled_roots(&sys, &labels, &roots).map_err(usage)?;
    let report = diagram_report(&sys, &d);
    if pretty {
        let mut out = String::new();
        for (i, v) in d.diagram.vertices.iter().enumerate() {
            out.push_str(&format!("{i:>3}  {:<8} {:?}\n", v.label, v.norm));
        }
        for e in &d.diagram.edges {
            out.push_str(&format!("{:>3} -- {:<3} {:?} {:?}\n", e.i, e.j, e.style, e.weight));
        }
        out.push_str(&format!(
            "independent {}\nadmissible  {}\nidentified  {}\n",
            d.independent,
            report["admissible"],
            report["identified"].as_str().unwrap_or("-")
        ));
        return Ok(out);
    }
    Ok(to_json(&report))
}

fn transform(name: &str, pretty: bool) -> Outcome {
    let which: LongCycle = name.parse().map_err(usage)?;
    let trace = rewrite::transform_long_cycle(which).map_err(|e| Failure::Verification(e.to_string()))?;
    let records = trace.records();
    if pretty {
        let mut out = format!("{} -> {}  charpoly {}\n", which.start(), which.target(), trace.initial.charpoly().display_in("t"));
        for (i, r) in records.iter().enumerate() {
            out.push_str(&format!("{i:>3} {:<5} {:<55} {}\n", r.op, r.detail, r.labels.join(" ")));
        }
        return Ok(out);
    }
    Ok(to_json(&json!({
        "schema": "weylcalc/trace/v1",
        "script": which.to_string(),
        "start": which.start().to_string(),
        "target": which.target().to_string(),
        "charpoly": trace.initial.charpoly().to_string(),
        "replay_verified": trace.verify(),
        "steps": records,
    })))
}

fn orbits(system: &str, k: usize, pretty: bool) -> Outcome {
    let sys = parse_system(system)?;
    if k == 0 || k > sys.rank() {
        return Err(Failure::Usage(format!("k must be in 1..={}", sys.rank())));
    }
    let n = oracle::orthogonal_tuple_orbits(&sys, k);
    if pretty {
        return Ok(format!("{} k={k}: {n} orbits\n", sys.id));
    }
    Ok(to_json(&json!({ "schema": "weylcalc/orbits/v1", "system": sys.id.to_string(), "k": k, "orbits": n })))
}

fn catalog_cmd(name: &str, pretty: bool) -> Outcome {
    let name: DiagramName = name.parse().map_err(usage)?;
    let entry = catalog(&name).map_err(usage)?;
    let labels: Vec<String> = entry.diagram.diagram.vertices.iter().map(|v| v.label.clone()).collect();
    if pretty {
        let mut out = format!("{}  charpoly {}\n", entry.name, entry.charpoly);
        for (l, r) in labels.iter().zip(&entry.diagram.roots) {
            out.push_str(&format!("  {l:<6} {r}\n"));
        }
        return Ok(out);
    }
    Ok(to_json(&json!({
        "schema": "weylcalc/catalog/v1",
        "name": entry.name.to_string(),
        "system": entry.diagram.system.to_string(),
        "labels": labels,
        "roots": strings(&entry.diagram.roots),
        "charpoly": entry.charpoly.to_string(),
        "diagram": entry.diagram.diagram,
    })))
}

fn render_dot(name: Option<&str>, system: Option<&str>, roots: Option<&str>) -> Outcome {
    match (name, system, roots) {
        (Some(n), None, None) => {
            let name: DiagramName = n.parse().map_err(usage)?;
            let entry = catalog(&name).map_err(usage)?;
            Ok(diagram::to_dot(&entry.diagram.diagram, &entry.name.to_string()))
        }
        (None, Some(s), Some(r)) => {
            let sys = parse_system(s)?;
            let roots = parse_roots(&sys, r)?;
            let d = diagram::from_roots(&sys, &roots).map_err(usage)?;
            Ok(diagram::to_dot(&d.diagram, &sys.id.to_string()))
        }
        _ => Err(Failure::Usage("render-dot takes a catalog name or --system with --roots".into())),
    }
}

fn verify(suite: &str) -> Outcome {
    let items = suites::run(suite).map_err(Failure::Usage)?;
    let mut out = String::new();
    let mut failed = 0;
    for it in &items {
        let tag = if it.pass { "PASS" } else { "FAIL" };
        if !it.pass {
            failed += 1;
        }
        if it.detail.is_empty() {
            out.push_str(&format!("{tag} {suite}: {}\n", it.name));
        } else {
            out.push_str(&format!("{tag} {suite}: {} ({})\n", it.name, it.detail));
        }
    }
    out.push_str(&format!("{suite}: {} passed, {failed} failed\n", items.len() - failed));
    if failed > 0 {
        Err(Failure::Report(out))
    } else {
        Ok(out)
    }
}

fn run(cli: Cli) -> Outcome {
    let pretty = cli.pretty;
    match cli.command {
        Command::Rootsys { family, rank, list } => rootsys(&family, rank, list, pretty),
        Command::Charpoly { system, word } => charpoly(&system, &word, pretty),
        Command::Diagram { system, roots, labels } => diagram_cmd(&system, &roots, labels.as_deref(), pretty),
        Command::Transform { name } => transform(&name, pretty),
        Command::Verify { suite } => verify(&suite),
        Command::Orbits { system, k } => orbits(&system, k, pretty),
        Command::Catalog { name } => catalog_cmd(&name, pretty),
        Command::RenderDot { name, system, roots } => render_dot(name.as_deref(), system.as_deref(), roots.as_deref()),
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Report(_) | Failure::Verification(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli) {
        Ok(text) => {
            let _ = stdout.lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.exit_code();
            match failure {
                Failure::Report(text) => {
                    let _ = stdout.lock().write_all(text.as_bytes());
                }
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
                Failure::Usage(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}
