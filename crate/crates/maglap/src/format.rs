//! Line-oriented graph text format.
//!
//! ```text
//! # comment
//! v <name> [measure]
//! e <u> <v> <w>              unoriented edge, trivial signature
//! a <u> <v> <w>              arc u → v (mixed graphs)
//! s <u> <v> <w> <j>/<k>      s_uv = ξ_k^j
//! p <u> <v> <w> <theta>      s_uv = e^{iθ}
//! ```
//!
//! Vertex names get dense ids in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use maglap_core::graph::{Edge, Measure};
use maglap_core::{GroupElement, MixedGraph, SignatureGroup, SignedGraph};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 for problems with the file as a whole.
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Which measure to use when building a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureChoice {
    Degree,
    Unit,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Signed { group: SignatureGroup, edges: Vec<Edge> },
    Mixed { undirected: Vec<(usize, usize, f64)>, arcs: Vec<(usize, usize, f64)> },
}

/// A parsed graph file.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub names: Vec<String>,
    /// Explicit `v` measures, present for every vertex or for none.
    pub measures: Option<Vec<f64>>,
    pub body: Body,
}

impl GraphFile {
    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self.body, Body::Mixed { .. })
    }

    /// The measure `choice` if given, else explicit measures from the file,
    /// else weighted degree.
    pub fn measure(&self, choice: Option<MeasureChoice>) -> Measure {
        match (choice, &self.measures) {
            (Some(MeasureChoice::Unit), _) => Measure::Unit,
            (Some(MeasureChoice::Degree), _) | (None, None) => Measure::Degree,
            (None, Some(m)) => Measure::Explicit(m.clone()),
        }
    }

    pub fn mixed(&self) -> Option<MixedGraph> {
        match &self.body {
            Body::Mixed { undirected, arcs } => {
                Some(MixedGraph::new(self.num_vertices(), undirected.clone(), arcs.clone()).expect("validated while parsing"))
            }
            Body::Signed { .. } => None,
        }
    }

    /// The signed graph; mixed graphs are converted with order `k`.
    pub fn signed(&self, choice: Option<MeasureChoice>, k: Option<u32>) -> maglap_core::Result<SignedGraph> {
        let measure = self.measure(choice);
        match &self.body {
            Body::Signed { group, edges } => SignedGraph::new(self.num_vertices(), *group, edges.clone(), measure),
            Body::Mixed { .. } => {
                let k = k.ok_or_else(|| {
                    maglap_core::Error::InvalidArgument("mixed graph input needs --k to be converted to a signed graph".into())
                })?;
                self.mixed().unwrap().to_signed(k, measure)
            }
        }
    }
}

struct Names {
    ids: HashMap<String, usize>,
    list: Vec<String>,
}

impl Names {
    fn id(&mut self, name: &str) -> usize {
        if let Some(&i) = self.ids.get(name) {
            return i;
        }
        self.list.push(name.to_string());
        self.ids.insert(name.to_string(), self.list.len() - 1);
        self.list.len() - 1
    }
}

fn weight(tok: &str, line: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(w) if w > 0.0 && w.is_finite() => Ok(w),
        Ok(w) => err(line, format!("nonpositive weight {w}")),
        Err(_) => err(line, format!("malformed weight '{tok}'")),
    }
}

enum Sig {
    Trivial,
    Cyclic(u32, u32),
    Circle(f64),
}

struct RawEdge {
    u: usize,
    v: usize,
    w: f64,
    sig: Sig,
}

/// Parse the text format.
pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    let mut names = Names { ids: HashMap::new(), list: Vec::new() };
    let mut measures: HashMap<usize, f64> = HashMap::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cyclic_k: Option<(u32, usize)> = None;
    let mut circle_line: Option<usize> = None;
    let mut arc_line: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let kind = toks[0];
        match kind {
            "v" => {
                if toks.len() < 2 || toks.len() > 3 {
                    return err(line, "expected 'v <name> [measure]'");
                }
                let id = names.id(toks[1]);
                if let Some(tok) = toks.get(2) {
                    let m = match tok.parse::<f64>() {
                        Ok(m) if m > 0.0 && m.is_finite() => m,
                        Ok(m) => return err(line, format!("nonpositive measure {m}")),
                        Err(_) => return err(line, format!("malformed measure '{tok}'")),
                    };
                    if measures.insert(id, m).is_some() {
                        return err(line, format!("measure of '{}' given twice", toks[1]));
                    }
                }
            }
            "e" | "a" | "s" | "p" => {
                let want = if kind == "e" || kind == "a" { 4 } else { 5 };
                if toks.len() != want {
                    return err(line, format!("expected {want} fields on an '{kind}' line, found {}", toks.len()));
                }
                let u = names.id(toks[1]);
                let v = names.id(toks[2]);
                if u == v {
                    return err(line, format!("loop at vertex '{}'", toks[1]));
                }
                let w = weight(toks[3], line)?;
                let key = (u.min(v), u.max(v));
                if let Some(prev) = pairs.insert(key, line) {
                    return err(line, format!("duplicate edge {{{}, {}}} (first on line {prev})", toks[1], toks[2]));
                }
                let sig = match kind {
                    "e" => Sig::Trivial,
                    "a" => {
                        arc_line.get_or_insert(line);
                        arcs.push((u, v, w));
                        continue;
                    }
                    "s" => {
                        let (j, k) = parse_cyclic(toks[4], line)?;
                        match cyclic_k {
                            Some((k0, l0)) if k0 != k => {
                                return err(line, format!("signature order {k} differs from order {k0} on line {l0}"))
                            }
                            None => cyclic_k = Some((k, line)),
                            _ => {}
                        }
                        Sig::Cyclic(j, k)
                    }
                    _ => {
                        let theta = toks[4]
                            .parse::<f64>()
                            .ok()
                            .filter(|t| t.is_finite())
                            .ok_or_else(|| ParseError { line, message: format!("malformed angle '{}'", toks[4]) })?;
                        circle_line.get_or_insert(line);
                        Sig::Circle(theta)
                    }
                };
                edges.push(RawEdge { u, v, w, sig });
            }
            other => return err(line, format!("unknown record type '{other}'")),
        }
    }

    if let (Some((_, lk)), Some(lp)) = (cyclic_k, circle_line) {
        return err(lk.max(lp), format!("'s' lines (line {lk}) cannot be combined with 'p' lines (line {lp})"));
    }
    let signed_line = cyclic_k.map(|c| c.1).or(circle_line);
    if let (Some(la), Some(ls)) = (arc_line, signed_line) {
        return err(la.max(ls), "arcs cannot be combined with 's' or 'p' lines");
    }

    let n = names.list.len();
    let measures = if measures.is_empty() {
        None
    } else {
        let mut m = Vec::with_capacity(n);
        for u in 0..n {
            match measures.get(&u) {
                Some(&x) => m.push(x),
                None => return err(0, format!("vertex '{}' has no measure while others do", names.list[u])),
            }
        }
        Some(m)
    };

    let body = if arc_line.is_some() {
        let undirected = edges.iter().map(|e| (e.u, e.v, e.w)).collect();
        Body::Mixed { undirected, arcs }
    } else {
        let group = match (cyclic_k, circle_line) {
            (Some((k, _)), _) => SignatureGroup::Cyclic(k),
            (None, Some(_)) => SignatureGroup::Circle,
            (None, None) => SignatureGroup::Cyclic(1),
        };
        let edges = edges
            .iter()
            .map(|e| {
                let s = match e.sig {
                    Sig::Trivial => group.identity(),
                    Sig::Cyclic(j, k) => GroupElement::Cyclic { k, j },
                    Sig::Circle(t) => GroupElement::circle(t),
                };
                Edge::new(e.u, e.v, e.w, s)
            })
            .collect();
        Body::Signed { group, edges }
    };
    Ok(GraphFile { names: names.list, measures, body })
}

fn parse_cyclic(tok: &str, line: usize) -> Result<(u32, u32), ParseError> {
    let bad = || ParseError { line, message: format!("malformed signature token '{tok}', expected <j>/<k>") };
    let (j, k) = tok.split_once('/').ok_or_else(bad)?;
    let j: u32 = j.parse().map_err(|_| bad())?;
    let k: u32 = k.parse().map_err(|_| bad())?;
    if k == 0 {
        return err(line, "signature order must be at least 1");
    }
    if j >= k {
        return err(line, format!("exponent {j} must be smaller than the order {k}"));
    }
    Ok((j, k))
}

fn name(names: Option<&[String]>, u: usize) -> String {
    names.and_then(|n| n.get(u).cloned()).unwrap_or_else(|| u.to_string())
}

/// Text for a signed graph. `v` lines fix the vertex order; measures are
/// written when `with_measures` is set.
pub fn serialize(g: &SignedGraph, names: Option<&[String]>, with_measures: bool) -> String {
    let mut out = String::new();
    for u in 0..g.num_vertices() {
        if with_measures {
            writeln!(out, "v {} {}", name(names, u), g.measure(u)).unwrap();
        } else {
            writeln!(out, "v {}", name(names, u)).unwrap();
        }
    }
    for e in g.canonical_edges() {
        let (a, b) = (name(names, e.u), name(names, e.v));
        match (g.group(), e.signature) {
            (SignatureGroup::Cyclic(1), _) => writeln!(out, "e {a} {b} {}", e.weight),
            (_, GroupElement::Cyclic { k, j }) => writeln!(out, "s {a} {b} {} {j}/{k}", e.weight),
            (_, GroupElement::Circle(t)) => writeln!(out, "p {a} {b} {} {t}", e.weight),
        }
        .unwrap();
    }
    out
}

/// Text for a mixed graph.
pub fn serialize_mixed(m: &MixedGraph, names: Option<&[String]>) -> String {
    let mut out = String::new();
    for u in 0..m.num_vertices() {
        writeln!(out, "v {}", name(names, u)).unwrap();
    }
    for &(u, v, w) in m.undirected() {
        writeln!(out, "e {} {} {w}", name(names, u), name(names, v)).unwrap();
    }
    for &(u, v, w) in m.arcs() {
        writeln!(out, "a {} {} {w}", name(names, u), name(names, v)).unwrap();
    }
    out
}
