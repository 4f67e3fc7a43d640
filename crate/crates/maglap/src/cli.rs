//! Command-line front end.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maglap_core::cheeger::{self, Candidate, ClusterCertificate};
use maglap_core::frustration::{self, DEFAULT_RESTARTS};
use maglap_core::multiway::multiway_cluster;
use maglap_core::{spectral, Error, SignatureGroup, SignedGraph, VertexSet};
use serde_json::{json, Value};

use crate::format::{self, GraphFile, MeasureChoice, ParseError};
use crate::generate::{self, PlantedParams};
use crate::{dot, report};

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_DECOMPOSE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "maglap", version, about = "Magnetic Laplacians, frustration and certified spectral clustering")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Vertex measure; defaults to the file's `v` measures, else degree.
    #[arg(long, global = true, value_enum)]
    pub measure: Option<MeasureArg>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Also write a DOT rendering coloring the parts.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
    /// Signature order used to convert mixed input.
    #[arg(long, global = true)]
    pub k: Option<u32>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureArg {
    Degree,
    Unit,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of the normalized operator.
    Spectrum {
        input: PathBuf,
        /// Include eigenvectors as `[re, im]` pairs.
        #[arg(long)]
        vectors: bool,
    },
    /// Per-component balance with witnesses or violating cycles.
    Balance { input: PathBuf },
    /// Frustration index of a vertex set (default: all vertices).
    Frustration {
        input: PathBuf,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        /// Use the U(1) heuristic even for cyclic signatures.
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Exact n-way Cheeger constant by enumeration.
    CheegerExact {
        input: PathBuf,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
    },
    /// Sweep cut on an eigenfunction.
    Sweep {
        input: PathBuf,
        /// Eigenfunction index, 0 = lowest.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Higher-order clustering into n clusters.
    Multiway {
        input: PathBuf,
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
    },
    /// Convert a mixed graph into a cyclic signed graph (needs --k).
    Convert {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random instance.
    Generate(GenerateArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    ErSigned,
    Cycle,
    MixedPlanted,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Number of vertices (er-signed, cycle).
    #[arg(long = "vertices", default_value_t = 8)]
    pub vertices: usize,
    /// Edge probability (er-signed).
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Edges carrying ξ (cycle).
    #[arg(long, default_value_t = 1)]
    pub flips: usize,
    /// U(1) signatures (er-signed).
    #[arg(long)]
    pub circle: bool,
    #[arg(long)]
    pub weighted: bool,
    /// Vertices per part (mixed-planted).
    #[arg(long, default_value_t = 5)]
    pub size: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.5)]
    pub p_out: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ground-truth sidecar (default: `<out>.truth.json`).
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure { code: EXIT_PARSE, message: format!("parse error: {e}") }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::NoConvergence(_) => EXIT_SOLVER,
            Error::DecomposeFailed { .. } => EXIT_DECOMPOSE,
            Error::InvalidGraph(_) => EXIT_PARSE,
            _ => EXIT_OTHER,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_OTHER, message: e.to_string() }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_OTHER, message: format!("{}: {e}", path.display()) }
}

struct Loaded {
    file: GraphFile,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| io_err(path, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure { code: EXIT_PARSE, message: "parse error: input is not UTF-8".into() })?;
    Ok(Loaded { file: format::parse(&text)?, digest: report::digest(&bytes) })
}

fn measure_choice(c: &Common) -> Option<MeasureChoice> {
    c.measure.map(|m| match m {
        MeasureArg::Degree => MeasureChoice::Degree,
        MeasureArg::Unit => MeasureChoice::Unit,
    })
}

fn signed(l: &Loaded, c: &Common) -> Result<SignedGraph, Failure> {
    l.file.signed(measure_choice(c), c.k).map_err(|e| match e {
        Error::InvalidArgument(m) => Failure { code: EXIT_OTHER, message: m },
        e => Failure { code: EXIT_PARSE, message: format!("parse error: {e}") },
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// What a command produced: a JSON payload for stdout/`--json`, or raw
/// text (graph files).
enum Output {
    Report { digest: Option<String>, payload: Value, labels: Option<(SignedGraph, Vec<String>, Vec<Option<u32>>)> },
    Text(String),
}

fn labels_of(n: usize, cands: &[&ClusterCertificate]) -> Vec<Option<u32>> {
    let mut labels = vec![None; n];
    for (p, c) in cands.iter().enumerate() {
        match &c.candidate {
            Candidate::Set(s) => s.iter().for_each(|u| labels[u] = Some(p as u32)),
            Candidate::Partition(kp) if cands.len() == 1 => labels = kp.labels(n),
            Candidate::Partition(kp) => kp.base().iter().for_each(|u| labels[u] = Some(p as u32)),
        }
    }
    labels
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    let report = |l: &Loaded, payload: Value, labels| Output::Report { digest: Some(l.digest.clone()), payload, labels };
    match &cli.command {
        Command::Spectrum { input, vectors } => {
            let l = load(input)?;
            let g = signed(&l, c)?;
            let sp = spectral::spectrum(&g)?;
            Ok(report(&l, report::spectrum_json(&g, &sp, *vectors), None))
        }
        Command::Balance { input } => {
            let l = load(input)?;
            let g = signed(&l, c)?;
            let br = frustration::balance_check(&g);
            let mut labels = vec![None; g.num_vertices()];
            for (i, comp) in br.components.iter().enumerate() {
                comp.vertices.iter().for_each(|&u| labels[u] = Some(i as u32));
            }
            Ok(report(&l, report::balance_json(&br), Some((g, l.file.names.clone(), labels))))
        }
        Command::Frustration { input, set, heuristic, restarts } => {
            let l = load(input)?;
            let g = signed(&l, c)?;
            let set = match set {
                Some(s) => VertexSet::new(s.iter().copied()),
                None => VertexSet::all(g.num_vertices()),
            };
            let res = match g.group() {
                SignatureGroup::Cyclic(_) if !heuristic => frustration::frustration_exact_cyclic(&g, &set)?,
                _ => frustration::frustration_heuristic_u1(&frustration::as_circle(&g)?, &set, *restarts, c.seed)?,
            };
            let mut payload = report::frustration_json(&res);
            if let (SignatureGroup::Cyclic(2), true) = (g.group(), res.exactness.is_exact()) {
                payload["edge_deletions"] = json!(frustration::line_index_of_balance(&g, &set)?);
            }
            Ok(report(&l, payload, None))
        }
        Command::CheegerExact { input, n } => {
            let l = load(input)?;
            let g = signed(&l, c)?;
            let ex = cheeger::h_exact(&g, *n)?;
            let mut labels = vec![None; g.num_vertices()];
            for (i, p) in ex.partition.parts().iter().enumerate() {
                p.iter().for_each(|u| labels[u] = Some(i as u32));
            }
            let payload = json!({
                "n": n,
                "value": ex.value,
                "parts": ex.partition.parts().iter().map(report::set_json).collect::<Vec<_>>(),
            });
            Ok(report(&l, payload, Some((g, l.file.names.clone(), labels))))
        }
        Command::Sweep { input, index } => {
            let l = load(input)?;
            let g = signed(&l, c)?;
            let sp = spectral::spectrum(&g)?;
            let f = sp.vectors.get(*index).ok_or_else(|| Failure {
                code: EXIT_OTHER,
                message: format!("eigenfunction index {index} out of range (N = {})", sp.len()),
            })?;
            let cert = cheeger::sweep_cut(&g, f)?;
            let labels = labels_of(g.num_vertices(), &[&cert]);
            let mut payload = report::certificate_json(&g, &cert);
            payload["eigenvalue"] = json!(sp.values[*index]);
            payload["index"] = json!(index);
            Ok(report(&l, payload, Some((g, l.file.names.clone(), labels))))
        }
        Command::Multiway { input, n } => {
            let l = load(input)?;
            let g = signed(&l, c)?;
            let r = multiway_cluster(&g, *n, c.seed)?;
            let cands: Vec<&ClusterCertificate> = r.certificates.iter().collect();
            let labels = labels_of(g.num_vertices(), &cands);
            Ok(report(&l, report::multiway_json(&g, &r), Some((g, l.file.names.clone(), labels))))
        }
        Command::Convert { input, out } => {
            let l = load(input)?;
            let k = c.k.ok_or_else(|| Failure { code: EXIT_OTHER, message: "convert needs --k".into() })?;
            let m = l.file.mixed().ok_or_else(|| Failure { code: EXIT_OTHER, message: "convert expects a mixed graph".into() })?;
            let g = m.to_signed(k, l.file.measure(measure_choice(c)))?;
            let text = format::serialize(&g, Some(&l.file.names), l.file.measures.is_some());
            match out {
                Some(p) => {
                    write(p, &text)?;
                    Ok(Output::Report {
                        digest: Some(l.digest),
                        payload: json!({ "k": k, "out": p.display().to_string(), "vertices": g.num_vertices(), "edges": g.num_edges() }),
                        labels: None,
                    })
                }
                None => Ok(Output::Text(text)),
            }
        }
        Command::Generate(a) => generate_cmd(a, c),
    }
}

fn generate_cmd(a: &GenerateArgs, c: &Common) -> Result<Output, Failure> {
    let (text, truth) = match a.family {
        Family::ErSigned => {
            let k = if a.circle { None } else { Some(c.k.unwrap_or(2)) };
            (format::serialize(&generate::er_signed(a.vertices, a.p, k, a.weighted, c.seed)?, None, false), None)
        }
        Family::Cycle => (format::serialize(&generate::cycle(a.vertices, a.flips, c.k.unwrap_or(2))?, None, false), None),
        Family::MixedPlanted => {
            let params = PlantedParams { k: c.k.unwrap_or(3), size: a.size, p_in: a.p_in, p_out: a.p_out, noise: a.noise };
            let (m, labels) = generate::mixed_planted(params, c.seed)?;
            (format::serialize_mixed(&m, None), Some(generate::truth_json(params.k, &labels)))
        }
    };
    let truth_path = a.truth.clone().or_else(|| {
        a.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".truth.json");
            PathBuf::from(s)
        })
    });
    if let (Some(t), Some(p)) = (&truth, &truth_path) {
        write(p, &(serde_json::to_string_pretty(t).unwrap() + "\n"))?;
    }
    match &a.out {
        Some(p) => {
            write(p, &text)?;
            let mut payload = json!({ "out": p.display().to_string() });
            if let (Some(_), Some(tp)) = (&truth, &truth_path) {
                payload["truth"] = json!(tp.display().to_string());
            }
            Ok(Output::Report { digest: None, payload, labels: None })
        }
        None if truth.is_some() && truth_path.is_none() => {
            Err(Failure { code: EXIT_OTHER, message: "mixed-planted on stdout needs --truth for the ground truth".into() })
        }
        None => Ok(Output::Text(text)),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum { .. } => "spectrum",
        Command::Balance { .. } => "balance",
        Command::Frustration { .. } => "frustration",
        Command::CheegerExact { .. } => "cheeger-exact",
        Command::Sweep { .. } => "sweep",
        Command::Multiway { .. } => "multiway",
        Command::Convert { .. } => "convert",
        Command::Generate(_) => "generate",
    }
}

/// Run a parsed command line, writing results to `stdout`. Returns the
/// process exit code; diagnostics go to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32 {
    let start = Instant::now();
    let computed = match cli.common.threads {
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| Failure { code: EXIT_OTHER, message: e.to_string() })
    .and_then(|pool| pool.install(|| execute(cli)));
    let elapsed = start.elapsed().as_secs_f64();
    let result = computed.and_then(|out| -> Result<(), Failure> {
        let c = &cli.common;
        match out {
            Output::Text(t) => stdout.write_all(t.as_bytes())?,
            Output::Report { digest, payload, labels } => {
                if let (Some(p), Some((g, names, labels))) = (&c.dot, &labels) {
                    write(p, &dot::to_dot(g, Some(names), labels))?;
                }
                let env = report::envelope(command_name(&cli.command), digest.as_deref(), c.seed, elapsed, payload);
                let text = serde_json::to_string_pretty(&env).unwrap() + "\n";
                match &c.json {
                    Some(p) => write(p, &text)?,
                    None => stdout.write_all(text.as_bytes())?,
                }
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "maglap: {}", f.message);
            f.code
        }
    }
}
