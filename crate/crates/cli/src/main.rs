use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use reachhom::cofib::{cofib_check, excision_check, mayer_vietoris_check};
use reachhom::demo::{hexagons, homology_table, triangles, DemoReport};
use reachhom::digraph::{face_graph, hasse_diagram, parse_edge_list, parse_facet_list, parse_vertex_list, parse_vertex_map};
use reachhom::kunneth::{kunneth_check, Product};
use reachhom::mpss::{convergence_check, SpectralPage};
use reachhom::preorder::condensation;
use reachhom::rcomplex::{reachability_homology, relative_homology, HomologyOptions, DEFAULT_CAP};
use reachhom::{CoeffRing, DiGraph, DiGraphMap, Error, GroupSummary, HomologySummary, Method};

#[derive(Parser)]
#[command(name = "reachhom", version, about = "Reachability homology of directed graphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Coefficients: Z, Q or Fp:<prime>.
    #[arg(long, global = true, default_value = "Z")]
    ring: String,
    /// Highest homological degree reported.
    #[arg(long, global = true, default_value_t = 6)]
    max_degree: usize,
    /// condensation, truncated or both.
    #[arg(long, global = true, default_value = "condensation")]
    method: String,
    /// Largest number of generators allowed in any degree.
    #[arg(long, global = true, env = "REACHHOM_CAP_GENERATORS", default_value_t = DEFAULT_CAP,
          value_parser = positive)]
    cap: usize,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Diagnostics on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Reachability homology of an edge-list graph (`-` reads stdin).
    Homology {
        #[arg(default_value = "-")]
        graph: PathBuf,
    },
    /// Relative homology RH(G, A) for a vertex list A.
    Relative { graph: PathBuf, subset: PathBuf },
    /// Box or strong product of two graphs, as an edge list.
    Product {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value = "box")]
        product: ProductKind,
    },
    /// Compares the homology of products with the Künneth prediction.
    KunnethCheck {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        product: ProductChoice,
    },
    /// Decides whether A ↪ X is a long cofibration, cross-checked against Dwyer.
    CofibCheck { x: PathBuf, subset: PathBuf },
    /// Excision for the pushout of X ← A → Y.
    ExcisionCheck { x: PathBuf, subset: PathBuf, y: PathBuf, map: PathBuf },
    /// Mayer–Vietoris exactness for the pushout of X ← A → Y.
    MvCheck { x: PathBuf, subset: PathBuf, y: PathBuf, map: PathBuf },
    /// Pages of the length spectral sequence and its convergence.
    Mpss {
        #[arg(default_value = "-")]
        graph: PathBuf,
        /// Last page to compute; defaults to the first page known to be E∞.
        #[arg(long)]
        max_page: Option<usize>,
    },
    /// Face graph or Hasse diagram of a facet list, as an edge list.
    Simplicial {
        #[arg(default_value = "-")]
        facets: PathBuf,
        #[arg(long, conflicts_with = "hasse")]
        face: bool,
        #[arg(long)]
        hasse: bool,
    },
    /// Homology of the built-in example graphs.
    Demo {
        #[arg(value_enum)]
        which: DemoName,
    },
    /// Strongly connected components and their order.
    Condensation {
        #[arg(default_value = "-")]
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductKind {
    Box,
    Strong,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductChoice {
    Box,
    Strong,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Hexagons,
    Triangles,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 1.0 && v.fract() == 0.0 && v <= usize::MAX as f64 => Ok(v as usize),
        _ => Err(format!("expected a positive integer, got {s}")),
    }
}

struct Failure {
    kind: String,
    detail: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource { .. } => 3,
            Error::Verification(_) => 1,
            _ => 2,
        };
        Failure { kind: e.kind().to_string(), detail: e.to_string(), code }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure { kind: "io".into(), detail: format!("{}: {e}", path.display()), code: 2 }
}

enum Output {
    /// A JSON document, a human rendering, and whether a check passed.
    Report { json: Value, table: String, pass: bool },
    /// Plain text meant for piping (edge lists).
    Text(String),
}

impl Output {
    fn report<T: Serialize>(value: &T, table: String, pass: bool) -> Self {
        Output::Report { json: serde_json::to_value(value).expect("serializable"), table, pass }
    }

    fn json<T: Serialize>(value: &T, pass: bool) -> Self {
        let json = serde_json::to_value(value).expect("serializable");
        let table = serde_json::to_string_pretty(&json).expect("serializable");
        Output::Report { json, table, pass }
    }
}

struct Ctx {
    ring: CoeffRing,
    opts: HomologyOptions,
    verbose: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("reachhom: {}", msg.as_ref());
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut s).map_err(|e| io_failure(path, e))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    }
    Ok(s)
}

fn read_graph(ctx: &Ctx, path: &Path) -> Result<DiGraph, Failure> {
    let g = parse_edge_list(&read(path)?)?;
    ctx.note(format!("{}: {} vertices, {} edges", path.display(), g.n(), g.edge_count()));
    if g.has_loops() {
        ctx.note(format!("{}: loops dropped; they do not affect reachability", path.display()));
        return Ok(g.without_loops());
    }
    Ok(g)
}

fn read_subset(g: &DiGraph, path: &Path) -> Result<Vec<usize>, Failure> {
    Ok(g.resolve(&parse_vertex_list(&read(path)?))?)
}

fn read_gluing(
    ctx: &Ctx,
    x: &Path,
    subset: &Path,
    y: &Path,
    map: &Path,
) -> Result<(DiGraph, Vec<usize>, DiGraph, DiGraphMap), Failure> {
    let xg = read_graph(ctx, x)?;
    let a = read_subset(&xg, subset)?;
    let yg = read_graph(ctx, y)?;
    let pairs = parse_vertex_map(&read(map)?)?;
    let f = DiGraphMap::from_pairs(&xg.induced_subgraph_in_order(&a), &yg, &pairs)?;
    Ok((xg, a, yg, f))
}

fn group_table(groups: &[GroupSummary]) -> String {
    let mut out = String::from("degree  betti  torsion\n");
    for g in groups {
        let t = if g.torsion.is_empty() {
            "-".to_string()
        } else {
            g.torsion.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
        };
        let _ = writeln!(out, "{:>6}  {:>5}  {t}", g.degree, g.betti);
    }
    out
}

fn summary_output(s: &HomologySummary) -> Output {
    Output::report(s, format!("ring {}\n{}", ring_label(s), group_table(&s.groups)), true)
}

fn ring_label(s: &HomologySummary) -> String {
    match s.p {
        Some(p) => format!("Fp:{p}"),
        None => s.ring.to_string(),
    }
}

fn demo_output(rep: &DemoReport) -> Output {
    let mut table = format!("ring {}\n", rep.ring);
    for g in &rep.graphs {
        let edges: Vec<String> = g.edges.iter().map(|[u, v]| format!("{u}→{v}")).collect();
        let _ = writeln!(table, "\n{}: {}", g.name, edges.join(" "));
        table.push_str(&group_table(&g.groups));
    }
    Output::report(rep, table, true)
}

fn pages_table(pages: &[SpectralPage]) -> String {
    let mut out = String::new();
    for p in pages {
        let _ = writeln!(out, "E^{} (rows k, columns s)", p.r);
        for (k, row) in p.ranks.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            let _ = writeln!(out, "  k={k}: {}", cells.join(""));
        }
    }
    out
}

fn run(cmd: Command, ctx: &Ctx) -> Result<Output, Failure> {
    let (ring, opts) = (ctx.ring, ctx.opts);
    let k = opts.max_degree;
    match cmd {
        Command::Homology { graph } => {
            let g = read_graph(ctx, &graph)?;
            Ok(summary_output(&reachability_homology(&g, ring, opts)?))
        }
        Command::Relative { graph, subset } => {
            let g = read_graph(ctx, &graph)?;
            let a = read_subset(&g, &subset)?;
            Ok(summary_output(&relative_homology(&g, &a, ring, opts)?))
        }
        Command::Product { g, h, product } => {
            let (g, h) = (read_graph(ctx, &g)?, read_graph(ctx, &h)?);
            let p = match product {
                ProductKind::Box => Product::Box,
                ProductKind::Strong => Product::Strong,
            };
            Ok(Output::Text(p.build(&g, &h).to_edge_list()))
        }
        Command::KunnethCheck { g, h, product } => {
            let (g, h) = (read_graph(ctx, &g)?, read_graph(ctx, &h)?);
            let products = match product {
                ProductChoice::Box => vec![Product::Box],
                ProductChoice::Strong => vec![Product::Strong],
                ProductChoice::Both => vec![Product::Box, Product::Strong],
            };
            let rep = kunneth_check(&g, &h, ring, k, &products)?;
            Ok(Output::json(&rep, rep.pass))
        }
        Command::CofibCheck { x, subset } => {
            let g = read_graph(ctx, &x)?;
            let a = read_subset(&g, &subset)?;
            let rep = cofib_check(&g, &a)?;
            Ok(Output::json(&rep, rep.pass && rep.long_cofibration))
        }
        Command::ExcisionCheck { x, subset, y, map } => {
            let (x, a, y, f) = read_gluing(ctx, &x, &subset, &y, &map)?;
            let rep = excision_check(&x, &a, &y, &f, ring, k)?;
            Ok(Output::json(&rep, rep.pass))
        }
        Command::MvCheck { x, subset, y, map } => {
            let (x, a, y, f) = read_gluing(ctx, &x, &subset, &y, &map)?;
            let rep = mayer_vietoris_check(&x, &a, &y, &f, ring, k)?;
            if let Some(why) = &rep.failure {
                ctx.note(why);
            }
            Ok(Output::json(&rep, rep.pass))
        }
        Command::Mpss { graph, max_page } => {
            let g = read_graph(ctx, &graph)?;
            let (pages, rep) = convergence_check(&g, ring, k, max_page, opts.cap)?;
            ctx.note(format!("E^{} is E^∞; pages agree from E^{}", rep.infinity_page, rep.stabilization_page));
            let pass = rep.verdict != "failed";
            let table = format!("{}verdict: {}\n", pages_table(&pages), rep.verdict);
            Ok(Output::report(&json!({ "pages": pages, "convergence": rep }), table, pass))
        }
        Command::Simplicial { facets, face, hasse } => {
            let s = parse_facet_list(&read(&facets)?)?;
            if !face && !hasse {
                return Err(Failure { kind: "usage".into(), detail: "pass --face or --hasse".into(), code: 2 });
            }
            let g = if face { face_graph(&s) } else { hasse_diagram(&s) };
            Ok(Output::Text(g.to_edge_list()))
        }
        Command::Demo { which } => {
            let graphs = match which {
                DemoName::Hexagons => hexagons(),
                DemoName::Triangles => triangles(),
            };
            Ok(demo_output(&homology_table(&graphs, ring, opts)?))
        }
        Command::Condensation { graph } => {
            let g = read_graph(ctx, &graph)?;
            Ok(Output::json(&condensation(&g).report(&g), true))
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let detail = e.render().to_string();
            let detail = detail.lines().next().unwrap_or_default().trim_start_matches("error: ");
            println!("{}", json!({ "error": { "kind": "usage", "detail": detail } }));
            return ExitCode::from(2);
        }
    };
    let c = cli.common;
    let result = (|| {
        let ring: CoeffRing = c.ring.parse()?;
        let method: Method = c.method.parse()?;
        let ctx = Ctx { ring, opts: HomologyOptions { max_degree: c.max_degree, method, cap: c.cap }, verbose: c.verbose };
        run(cli.command, &ctx)
    })();
    let (text, code) = match result {
        Ok(Output::Text(t)) => (t, 0),
        Ok(Output::Report { json, table, pass }) => {
            let text = if c.pretty { table } else { serde_json::to_string(&json).expect("serializable") + "\n" };
            (text, if pass { 0 } else { 1 })
        }
        Err(f) => {
            let body = json!({ "error": { "kind": f.kind, "detail": f.detail } });
            println!("{body}");
            return ExitCode::from(f.code);
        }
    };
    match emit(&text, c.output.as_deref()) {
        Ok(()) => ExitCode::from(code),
        Err(f) => {
            println!("{}", json!({ "error": { "kind": f.kind, "detail": f.detail } }));
            ExitCode::from(f.code)
        }
    }
}
