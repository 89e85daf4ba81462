use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orthodim::config::Limits;
use orthodim::graph::{generalized_kneser_graph, kneser_family, schrijver_family};
use orthodim::lp::parse_rational;
use orthodim::report::{self, FamilyKind, Format, InvariantKind, Report};
use orthodim::{Error, Graph, Result, SetSystem};

/// Bounds and certificates for orthogonality dimension and minrank.
///
/// Exit status: 0 when every check in the report held, 1 when a check
/// failed, 2 on errors (bad input, cap exceeded).
#[derive(Parser, Debug)]
#[command(name = "orthodim", version)]
struct Cli {
    /// seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with cap overrides; flags below take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// omit hemisphere search transcripts from reports
    #[arg(long, global = true)]
    no_transcript: bool,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Text => Format::Text,
        }
    }
}

#[derive(Args, Debug, Default)]
struct CapArgs {
    #[arg(long, global = true)]
    alpha_max_n: Option<usize>,
    #[arg(long, global = true)]
    chromatic_max_n: Option<usize>,
    #[arg(long, global = true)]
    fractional_chromatic_max_n: Option<usize>,
    #[arg(long, global = true)]
    fstar_max_n: Option<usize>,
    #[arg(long, global = true)]
    minrank_max_free: Option<usize>,
    #[arg(long, global = true)]
    hemisphere_max_d: Option<usize>,
    #[arg(long, global = true)]
    cover_retries: Option<usize>,
}

impl CapArgs {
    fn apply(&self, limits: &mut Limits) {
        let pairs = [
            (self.alpha_max_n, &mut limits.alpha_max_n),
            (self.chromatic_max_n, &mut limits.chromatic_max_n),
            (self.fractional_chromatic_max_n, &mut limits.fractional_chromatic_max_n),
            (self.fstar_max_n, &mut limits.fstar_max_n),
            (self.minrank_max_free, &mut limits.minrank_max_free),
            (self.hemisphere_max_d, &mut limits.hemisphere_max_d),
            (self.cover_retries, &mut limits.cover_retries),
        ];
        for (flag, slot) in pairs {
            if let Some(v) = flag {
                *slot = v;
            }
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Kneser,
    Schrijver,
}

impl From<KindArg> for FamilyKind {
    fn from(k: KindArg) -> FamilyKind {
        match k {
            KindArg::Kneser => FamilyKind::Kneser,
            KindArg::Schrijver => FamilyKind::Schrijver,
        }
    }
}

/// A set family: `kneser|schrijver --d D --s S`, or `--family FILE`.
#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(value_enum, required_unless_present = "family")]
    kind: Option<KindArg>,
    #[arg(long, requires = "kind")]
    d: Option<usize>,
    /// set size; repeat for several rows of a table
    #[arg(long, requires = "kind")]
    s: Vec<usize>,
    /// JSON set system `{"d": .., "sets": [[1, 2], ..]}`
    #[arg(long, conflicts_with = "kind")]
    family: Option<PathBuf>,
}

type Rows = (FamilyKind, Vec<(usize, usize)>);

impl FamilyArgs {
    fn kind_and_pairs(&self) -> Result<Option<Rows>> {
        let Some(kind) = self.kind else {
            return Ok(None);
        };
        let d = self
            .d
            .ok_or_else(|| Error::InvalidParameters("--d is required".into()))?;
        if self.s.is_empty() {
            return Err(Error::InvalidParameters("--s is required".into()));
        }
        Ok(Some((kind.into(), self.s.iter().map(|&s| (d, s)).collect())))
    }

    fn single(&self) -> Result<SetSystem> {
        if let Some(path) = &self.family {
            return read_family(path);
        }
        let (kind, pairs) = self.kind_and_pairs()?.expect("clap enforces a source");
        if pairs.len() != 1 {
            return Err(Error::InvalidParameters("this command takes a single --s".into()));
        }
        kind.build(pairs[0].0, pairs[0].1)
    }
}

/// A graph: from a file, a named family, or `K(F)` of a set family.
#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct GraphSource {
    /// JSON graph `{"n": .., "edges": [[u, v], ..]}` or an edge list
    #[arg(long, group = "source")]
    graph: Option<PathBuf>,
    /// K(F) for a JSON set system
    #[arg(long, group = "source")]
    family: Option<PathBuf>,
    /// Kneser graph K(d,s), given as `D,S`
    #[arg(long, group = "source", value_parser = parse_pair)]
    kneser: Option<(usize, usize)>,
    /// Schrijver graph S(d,s), given as `D,S`
    #[arg(long, group = "source", value_parser = parse_pair)]
    schrijver: Option<(usize, usize)>,
    #[arg(long, group = "source")]
    cycle: Option<usize>,
    #[arg(long, group = "source")]
    complete: Option<usize>,
    /// edgeless graph on N vertices
    #[arg(long, group = "source")]
    empty: Option<usize>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    source: GraphSource,
    /// use the complement of the selected graph
    #[arg(long)]
    complement: bool,
}

fn parse_pair(text: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `D,S`, got `{text}`"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn with_path(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| with_path(e, path))
}

fn read_family(path: &Path) -> Result<SetSystem> {
    Ok(serde_json::from_str(&read(path)?)?)
}

impl GraphArgs {
    fn build(&self) -> Result<Graph> {
        let s = &self.source;
        let g = if let Some(path) = &s.graph {
            Graph::parse(&read(path)?)?
        } else if let Some(path) = &s.family {
            generalized_kneser_graph(&read_family(path)?)?
        } else if let Some((d, k)) = s.kneser {
            generalized_kneser_graph(&kneser_family(d, k)?)?.with_label(format!("K({d},{k})"))
        } else if let Some((d, k)) = s.schrijver {
            generalized_kneser_graph(&schrijver_family(d, k)?)?.with_label(format!("S({d},{k})"))
        } else if let Some(n) = s.cycle {
            Graph::cycle(n)?
        } else if let Some(n) = s.complete {
            Graph::complete(n)?
        } else if let Some(n) = s.empty {
            Graph::empty(n)?.with_label(format!("E_{n}"))
        } else {
            unreachable!("clap requires one graph source")
        };
        if !self.complement {
            return Ok(g);
        }
        let label = format!("co-{}", g.label().unwrap_or("G"));
        Ok(g.complement().with_label(label))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket table for the complement of K(F): alpha, cd2, xi and minrank bounds
    Bounds {
        #[command(flatten)]
        family: FamilyArgs,
        /// prime field orders for the minrank column
        #[arg(long = "field", default_values_t = [2u64])]
        fields: Vec<u64>,
    },
    /// Exact 2-colorability defect of a set family, with a witness coloring
    Cd2 {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Chromatic number with a coloring certificate
    Chromatic {
        #[command(flatten)]
        graph: GraphArgs,
        /// also solve the fractional chromatic program
        #[arg(long)]
        fractional: bool,
    },
    /// Fractional version f* of a sub-multiplicative invariant, primal and dual
    Fractional {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "clique-cover")]
        invariant: InvariantKind,
    },
    /// Randomized cover certifying f(G) <= 6 ln(3n) f*(G)
    Cover {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "clique-cover")]
        invariant: InvariantKind,
    },
    /// Minrank over prime fields with witness matrices and factorizations
    Minrank {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long = "field", default_values_t = [2u64])]
        fields: Vec<u64>,
    },
    /// Hemisphere certificate for points on the moment curve
    Gale {
        #[arg(value_enum, default_value = "schrijver")]
        kind: KindArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// Finite Borsuk graph from an eps-net of the sphere S^(d-1)
    Borsuk {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Shannon capacity bracket from alpha(G^k) and sub-multiplicative upper bounds
    Capacity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long = "field", default_values_t = [2u64])]
        fields: Vec<u64>,
    },
    /// One-round communication bounds for the Kneser instance K(d,s)
    Comm {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
    },
    /// Desk instance with d = (2 + eps) s: fractional versus exact orthogonality dimension
    #[command(name = "theorem42", alias = "desk")]
    DeskInstance {
        #[arg(long)]
        s: usize,
        /// rational, e.g. `1/2`
        #[arg(long, value_parser = parse_eps)]
        eps: orthodim::Rational,
    },
}

fn parse_eps(text: &str) -> std::result::Result<orthodim::Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn limits(cli: &Cli) -> Result<Limits> {
    let mut limits = match &cli.config {
        Some(path) => serde_json::from_str(&read(path)?)?,
        None => Limits::default(),
    };
    cli.caps.apply(&mut limits);
    limits.validate()?;
    Ok(limits)
}

fn emit<R: Report>(report: &R, cli: &Cli) -> Result<bool> {
    let text = report::render(report, cli.format.into())?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| with_path(e, path))?,
        None => print!("{text}"),
    }
    Ok(report.all_held())
}

fn run(cli: &Cli) -> Result<bool> {
    let limits = limits(cli)?;
    let transcript = !cli.no_transcript;
    match &cli.command {
        Command::Bounds { family, fields } => match family.kind_and_pairs()? {
            Some((kind, pairs)) => emit(&report::cmd_bounds(kind, &pairs, fields, &limits, transcript)?, cli),
            None => {
                let row = report::bounds_row_for_family(&family.single()?, fields, &limits)?;
                emit(&report::BoundsTable { rows: vec![row] }, cli)
            }
        },
        Command::Cd2 { family } => emit(&report::cmd_cd2(&family.single()?), cli),
        Command::Chromatic { graph, fractional } => {
            emit(&report::cmd_chromatic(&graph.build()?, *fractional, &limits)?, cli)
        }
        Command::Fractional { graph, invariant } => {
            emit(&report::cmd_fractional(&graph.build()?, *invariant, &limits)?, cli)
        }
        Command::Cover { graph, invariant } => {
            emit(&report::cmd_cover(&graph.build()?, *invariant, cli.seed, &limits)?, cli)
        }
        Command::Minrank { graph, fields } => emit(&report::cmd_minrank(&graph.build()?, fields, &limits)?, cli),
        Command::Gale { kind, d, s } => emit(&report::cmd_gale((*kind).into(), *d, *s, &limits, transcript)?, cli),
        Command::Borsuk { d, eps } => emit(&report::cmd_borsuk(*d, *eps, cli.seed, &limits)?, cli),
        Command::Capacity { graph, k, fields } => {
            emit(&report::cmd_capacity(&graph.build()?, *k, fields, &limits)?, cli)
        }
        Command::Comm { d, s } => emit(&report::cmd_comm(*d, *s, &limits)?, cli),
        Command::DeskInstance { s, eps } => emit(&report::cmd_desk_instance(*s, eps, &limits)?, cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("orthodim: at least one check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("orthodim: {e}");
            ExitCode::from(2)
        }
    }
}
