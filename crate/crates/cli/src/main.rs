use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use qcircle_core::kirby::{dualize_procedure, parse_script, ChainState};
use qcircle_core::linalg::{abelian_group_of, det, signature, IntMatrix};
use qcircle_core::obstruct::{attach_two_handle, has_infinite_order, rohlin_mu, square_order_obstruction, KnotClass, SurgeryPresentation};
use qcircle_core::plumbing::{
    boundary_homology, check_join_hypotheses, cycle_monodromy, intersection_form, join, ledger_evaluate,
    parse_construction_script, parse_graph, self_join, Construction, Descriptor, Ledger, PlumbingGraph,
};
use qcircle_core::sl2::{classify, square_trace_check, torsion_order};
use qcircle_core::strings::{dual_string, family_string, recognize_family, split_relabel};
use qcircle_core::{FamilyParams, IntString, Sign, Sl2};

#[derive(Parser)]
#[command(name = "qcircle", version, about = "Exact torus-bundle, plumbing and surgery computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Riemenschneider dual of a string like 2,3,2
    Dual {
        #[arg(allow_hyphen_values = true)]
        string: String,
    },
    /// Monodromy of a word (3,2,2 or -:2,2) or a power T^n / -T^n
    Mono(MonoArgs),
    /// Hyperbolic string family
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Plumbing graphs read from a file
    #[command(subcommand)]
    Plumb(PlumbCmd),
    /// Blow-up / blow-down rewriting of framed chains
    #[command(subcommand)]
    Kirby(KirbyCmd),
    /// Homological obstructions and two-handle attachment
    #[command(subcommand)]
    Obstruct(ObstructCmd),
    /// Certification ledger
    #[command(subcommand)]
    Ledger(LedgerCmd),
}

#[derive(Args)]
struct MonoArgs {
    #[arg(allow_hyphen_values = true)]
    word: String,
    #[arg(long)]
    classify: bool,
    #[arg(long)]
    torsion: bool,
    #[arg(long)]
    square_check: bool,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Generate the string for parameters like "k=1;x=0,0,0"
    Gen { params: String },
    /// Recognise a string up to rotation
    Check {
        #[arg(allow_hyphen_values = true)]
        string: String,
    },
}

#[derive(Subcommand)]
enum PlumbCmd {
    /// Intersection form
    Form { graph: PathBuf },
    /// First homology of the boundary
    Homology { graph: PathBuf },
    /// Torus-bundle monodromy of a cyclic plumbing
    Monodromy { graph: PathBuf },
    /// Identify two vertices of one graph
    Selfjoin {
        graph: PathBuf,
        v1: String,
        v2: String,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        /// Also write the resulting graph here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identify a vertex of one graph with a vertex of another
    Join {
        graph: PathBuf,
        v1: String,
        other: PathBuf,
        v2: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homology-level hypotheses of the join rule at a vertex
    Hypotheses { graph: PathBuf, vertex: String },
}

#[derive(Subcommand)]
enum KirbyCmd {
    /// Apply a move script to a chain such as "-3,-1,-3" or "chain -1,1,-1 sign=-"
    Run {
        #[arg(allow_hyphen_values = true)]
        chain: String,
        #[arg(long)]
        script: PathBuf,
    },
    /// Rewrite the chain of a family string into its terminal form
    Dualize { string: String },
}

#[derive(Subcommand)]
enum ObstructCmd {
    /// Square-order test on a torsion order
    Square {
        #[arg(allow_hyphen_values = true)]
        order: BigInt,
    },
    /// Attach a 2-handle along a class of infinite order
    Attach {
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true)]
        framing: i64,
    },
    /// Signature and Rohlin bit of an even unimodular form
    Mu { matrix: PathBuf },
}

#[derive(Subcommand)]
enum LedgerCmd {
    /// Evaluate descriptors: words, T^n, -T^n, graph:<file>, build:<file>
    Eval {
        #[arg(required = true, allow_hyphen_values = true)]
        descriptors: Vec<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(qcircle_core::Error),
    Io(PathBuf, std::io::Error),
}

impl From<qcircle_core::Error> for Failure {
    fn from(e: qcircle_core::Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Domain(e) => e.code(),
            Failure::Io(..) => "io",
        }
    }

    fn reason(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
        }
    }
}

type Outcome = Result<Vec<String>, Failure>;

#[derive(Default)]
struct Report(Vec<String>);

impl Report {
    fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.0.push(format!("{key}={value}"));
        self
    }

    fn line(&mut self, line: String) -> &mut Self {
        self.0.push(line);
        self
    }

    fn done(&mut self) -> Outcome {
        Ok(std::mem::take(&mut self.0))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `a,b;c,d` rows separated by `;`.
fn matrix_inline(m: &IntMatrix) -> String {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_sign(s: &str) -> Result<Sign, Failure> {
    Sign::parse_symbol(s).ok_or_else(|| Failure::Domain(qcircle_core::Error::Parse { line: 1, msg: format!("bad sign `{s}`") }))
}

fn monodromy_of(text: &str) -> Result<Sl2, Failure> {
    Ok(match text.parse::<Descriptor>()? {
        Descriptor::Word(w) => w.matrix(),
        Descriptor::Parabolic { sign, n } => Sl2::t_pow(n).scaled(sign),
        Descriptor::Graph(_) => unreachable!("text descriptors are never graphs"),
    })
}

fn mono(args: &MonoArgs) -> Outcome {
    let m = monodromy_of(&args.word)?;
    let mut r = Report::default();
    if !(args.classify || args.torsion || args.square_check) {
        r.kv("matrix", &m);
    }
    r.kv("trace", m.trace());
    if args.classify {
        let c = classify(&m);
        r.kv("kind", c.kind).kv("sign", c.sign);
    }
    if args.torsion {
        r.kv("torsion", torsion_order(&m)?);
    }
    if args.square_check {
        let (value, square) = square_trace_check(&m)?;
        r.kv("discriminant", value).kv("square", yes_no(square));
    }
    r.done()
}

fn family(cmd: &FamilyCmd) -> Outcome {
    let mut r = Report::default();
    match cmd {
        FamilyCmd::Gen { params } => {
            let p: FamilyParams = params.parse()?;
            let a = family_string(&p);
            r.kv("string", &a);
            if !p.is_special() {
                let (d, e) = split_relabel(&a)?;
                r.kv("d", d).kv("e", e);
            }
        }
        FamilyCmd::Check { string } => {
            let a: IntString = string.parse()?;
            match recognize_family(&a) {
                Some(p) => {
                    let xs: Vec<String> = p.xs().iter().map(|x| x.to_string()).collect();
                    r.line(format!("member=yes k={} x={}", p.k(), xs.join(",")));
                }
                None => {
                    r.line("member=no".to_string());
                }
            }
        }
    }
    r.done()
}

fn graph_summary(r: &mut Report, g: &PlumbingGraph, out: Option<&PathBuf>) -> Result<(), Failure> {
    r.kv("graph", g.canonical_form())
        .kv("det", det(&intersection_form(g))?)
        .kv("homology", boundary_homology(g)?);
    if let Some(path) = out {
        fs::write(path, g.to_string()).map_err(|e| Failure::Io(path.clone(), e))?;
    }
    Ok(())
}

fn plumb(cmd: &PlumbCmd) -> Outcome {
    let load = |p: &Path| -> Result<PlumbingGraph, Failure> { Ok(parse_graph(&read(p)?)?) };
    let mut r = Report::default();
    match cmd {
        PlumbCmd::Form { graph } => {
            let q = intersection_form(&load(graph)?);
            r.kv("size", q.rows()).kv("form", matrix_inline(&q)).kv("det", det(&q)?);
        }
        PlumbCmd::Homology { graph } => {
            let h = boundary_homology(&load(graph)?)?;
            r.kv("homology", &h).kv("free_rank", h.free_rank).kv("torsion", h.torsion_string());
        }
        PlumbCmd::Monodromy { graph } => {
            let cm = cycle_monodromy(&load(graph)?)?;
            let m = cm.monodromy();
            r.kv("product", &cm.product).kv("sign", cm.sign).kv("matrix", &m).kv("trace", m.trace());
        }
        PlumbCmd::Selfjoin { graph, v1, v2, sign, out } => {
            let g = self_join(&load(graph)?, v1, v2, parse_sign(sign)?)?;
            graph_summary(&mut r, &g, out.as_ref())?;
        }
        PlumbCmd::Join { graph, v1, other, v2, out } => {
            let g = join(&load(graph)?, v1, &load(other)?, v2)?;
            graph_summary(&mut r, &g, out.as_ref())?;
        }
        PlumbCmd::Hypotheses { graph, vertex } => {
            let h = check_join_hypotheses(&load(graph)?, vertex)?;
            r.kv("boundary_s1xs2", yes_no(h.boundary_is_s1xs2))
                .kv("complement_qs3", yes_no(h.complement_is_qs3))
                .kv("level", "homology");
        }
    }
    r.done()
}

fn kirby(cmd: &KirbyCmd) -> Outcome {
    let mut r = Report::default();
    match cmd {
        KirbyCmd::Run { chain, script } => {
            let start: ChainState = chain.parse()?;
            let moves = parse_script(&read(script)?)?;
            r.line(format!("start={start}"));
            let mut state = start.clone();
            for mv in &moves {
                state = state.apply(mv)?;
                r.line(format!("move={mv} state={state}"));
            }
            let certified = state.certified_monodromy() == start.certified_monodromy();
            r.line(format!("final={state}"))
                .kv("monodromy", state.certified_monodromy())
                .kv("certified", yes_no(certified));
        }
        KirbyCmd::Dualize { string } => {
            let run = dualize_procedure(&string.parse()?)?;
            r.line(format!("start={}", run.start)).kv("rotation", run.rotation);
            for mv in &run.moves {
                r.kv("move", mv);
            }
            r.line(format!("terminal={}", run.terminal))
                .kv("d", &run.d)
                .kv("e", &run.e)
                .kv("monodromy", run.terminal.certified_monodromy())
                .kv("certified", "yes");
        }
    }
    r.done()
}

fn obstruct(cmd: &ObstructCmd) -> Outcome {
    let load = |p: &Path| -> Result<IntMatrix, Failure> { Ok(read(p)?.parse()?) };
    let mut r = Report::default();
    match cmd {
        ObstructCmd::Square { order } => {
            r.kv("order", order).kv("square", square_order_obstruction(order)?);
        }
        ObstructCmd::Attach { matrix, kappa, framing } => {
            let p = SurgeryPresentation::new(load(matrix)?)?;
            let kappa: IntString = kappa.parse()?;
            let k = KnotClass::new(kappa.entries(), *framing);
            r.kv("before", p.homology()).kv("infinite_order", yes_no(has_infinite_order(&p, &k)?));
            let (bordered, h) = attach_two_handle(&p, &k)?;
            r.kv("form", matrix_inline(bordered.matrix()))
                .kv("det", det(bordered.matrix())?)
                .kv("homology", h);
        }
        ObstructCmd::Mu { matrix } => {
            let m = load(matrix)?;
            let mu = rohlin_mu(&m)?;
            r.kv("signature", signature(&m)?).kv("homology", abelian_group_of(&m)).kv("mu", mu);
        }
    }
    r.done()
}

fn ledger(cmd: &LedgerCmd) -> Outcome {
    let LedgerCmd::Eval { descriptors } = cmd;
    let mut ledger = Ledger::new();
    for text in descriptors {
        let targets: Vec<Descriptor> = if let Some(path) = text.strip_prefix("graph:") {
            let g = parse_graph(&read(Path::new(path))?)?;
            vec![Descriptor::Graph(Construction::seed(g))]
        } else if let Some(path) = text.strip_prefix("build:") {
            parse_construction_script(&read(Path::new(path))?)?
                .into_iter()
                .map(|(_, c)| Descriptor::Graph(c))
                .collect()
        } else {
            vec![text.parse()?]
        };
        for d in &targets {
            ledger = ledger_evaluate(ledger, d)?.0;
        }
    }
    Ok(ledger.entries().iter().map(|e| e.to_string()).collect())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Dual { string } => Report::default().kv("dual", dual_string(&string.parse()?)?).done(),
        Command::Mono(args) => mono(args),
        Command::Family(cmd) => family(cmd),
        Command::Plumb(cmd) => plumb(cmd),
        Command::Kirby(cmd) => kirby(cmd),
        Command::Obstruct(cmd) => obstruct(cmd),
        Command::Ledger(cmd) => ledger(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            println!("error={}", f.code());
            eprintln!("{}", f.reason());
            ExitCode::from(1)
        }
    }
}
