//! Reports: a serializable record of a run and its text rendering. The
//! text is a pure function of the record, so the JSON twin re-renders to
//! the same bytes.

use serde::{Deserialize, Serialize};
use std::fmt::Write;
use volint::padic::{FieldKind, PadicElement};

/// A p-adic expansion sum d_k pi^k + O(pi^precision). Digits are residue
/// classes given by their coefficients in the generator basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub uniformizer: String,
    /// Name of the residue field generator when digits are not in F_p.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_generator: Option<String>,
    pub terms: Vec<Term>,
    pub precision: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub power: i64,
    pub digit: Vec<u64>,
}

impl Expansion {
    pub fn new(x: &PadicElement) -> Self {
        let ctx = x.field();
        let uniformizer = match ctx.kind {
            FieldKind::Eisenstein => ctx.generator.clone(),
            _ => ctx.p.to_string(),
        };
        let residue_generator = (ctx.kind == FieldKind::Unramified).then(|| ctx.generator.clone());
        let terms = x
            .digits()
            .into_iter()
            .map(|(power, d)| {
                let digit = match residue_generator {
                    Some(_) => d,
                    None => vec![d[0]],
                };
                Term { power, digit }
            })
            .collect();
        Expansion {
            uniformizer,
            residue_generator,
            terms,
            precision: x.prec(),
        }
    }

    fn digit(&self, d: &[u64]) -> String {
        let Some(g) = &self.residue_generator else {
            return d.first().copied().unwrap_or(0).to_string();
        };
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => g.clone(),
                _ => format!("{g}^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.len() > 1 {
            format!("({})", parts.join(" + "))
        } else {
            parts.join("")
        }
    }

    fn power(&self, k: i64) -> String {
        match k {
            1 => self.uniformizer.clone(),
            _ => format!("{}^{k}", self.uniformizer),
        }
    }

    pub fn render(&self) -> String {
        let mut out: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let d = self.digit(&t.digit);
                match (t.power, d.as_str()) {
                    (0, _) => d,
                    (k, "1") => self.power(k),
                    (k, _) => format!("{d}*{}", self.power(k)),
                }
            })
            .collect();
        out.push(format!("O({})", self.power(self.precision)));
        out.join(" + ")
    }
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Item {
    Value { value: Expansion },
    Text { text: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub key: String,
    #[serde(flatten)]
    pub item: Item,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterInfo {
    pub id: usize,
    pub parent: Option<usize>,
    pub center: Expansion,
    /// Depth of the cluster in pi-units, as a rational.
    pub depth: String,
    pub roots: usize,
    pub half_edges: usize,
    pub contains_infinity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexInfo {
    pub index: usize,
    pub name: String,
    pub node: usize,
    pub sheet: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeInfo {
    pub index: usize,
    pub tail: usize,
    pub head: usize,
    pub child: usize,
    pub copy: Option<i8>,
    /// Valuations of x - center(child) on the annulus, in pi-units.
    pub interval: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleInfo {
    pub walk: Vec<(usize, i8)>,
    pub chain: Vec<String>,
    pub eta: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleInfo {
    pub node: usize,
    pub center: Expansion,
    pub radius: String,
    pub roots: usize,
}

/// The good-reduction model ytilde^2 = g(t) of a wide open with x = c + pi^k t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub node: usize,
    pub k: i64,
    pub center: Expansion,
    pub g: Vec<Expansion>,
    pub holes: Vec<HoleInfo>,
    pub outer_factor: Vec<Expansion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub clusters: Vec<ClusterInfo>,
    pub vertices: Vec<VertexInfo>,
    pub edges: Vec<EdgeInfo>,
    pub betti: usize,
    pub cycles: Vec<CycleInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub models: Option<Vec<ModelInfo>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub field: String,
    pub entries: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<Skeleton>,
}

fn sign(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

pub fn walk_text(w: &[(usize, i8)]) -> String {
    let parts: Vec<String> = w.iter().map(|&(e, s)| format!("{}e{e}", sign(s))).collect();
    if parts.is_empty() {
        "(empty)".into()
    } else {
        parts.join(" ")
    }
}

fn poly_text(cs: &[Expansion]) -> String {
    let parts: Vec<String> = cs.iter().enumerate().map(|(i, c)| format!("[t^{i}] {}", c.render())).collect();
    parts.join("; ")
}

impl Report {
    pub fn new(command: &str, field: String) -> Self {
        Report {
            command: command.into(),
            field,
            entries: Vec::new(),
            skeleton: None,
        }
    }

    pub fn value(&mut self, key: &str, x: &PadicElement) {
        self.entries.push(Entry {
            key: key.into(),
            item: Item::Value { value: Expansion::new(x) },
        });
    }

    pub fn text(&mut self, key: &str, text: impl Into<String>) {
        self.entries.push(Entry {
            key: key.into(),
            item: Item::Text { text: text.into() },
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "field: {}", self.field).unwrap();
        for e in &self.entries {
            let body = match &e.item {
                Item::Value { value } => value.render(),
                Item::Text { text } => text.clone(),
            };
            writeln!(out, "{}: {body}", e.key).unwrap();
        }
        if let Some(s) = &self.skeleton {
            out.push_str(&s.render());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

impl Skeleton {
    fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "cluster tree: {} nodes", self.clusters.len()).unwrap();
        for c in &self.clusters {
            let parent = c.parent.map_or("-".to_string(), |p| p.to_string());
            let inf = if c.contains_infinity { ", contains infinity" } else { "" };
            writeln!(
                out,
                "  node {}: parent {parent}, depth {}, roots {}, half-edges {}, center {}{inf}",
                c.id,
                c.depth,
                c.roots,
                c.half_edges,
                c.center.render()
            )
            .unwrap();
        }
        writeln!(out, "graph: {} vertices, {} edges, h = {}", self.vertices.len(), self.edges.len(), self.betti).unwrap();
        for v in &self.vertices {
            let sheet = v.sheet.map_or(String::new(), |s| format!(", sheet {}", sign(s)));
            writeln!(out, "  vertex {}: {} (node {}{sheet})", v.index, v.name, v.node).unwrap();
        }
        for e in &self.edges {
            let copy = e.copy.map_or(String::new(), |s| format!(", copy {}", sign(s)));
            writeln!(
                out,
                "  edge e{}: {} -> {}, annulus of node {} with {} < v(x - c) < {}{copy}",
                e.index, self.vertices[e.tail].name, self.vertices[e.head].name, e.child, e.interval.0, e.interval.1
            )
            .unwrap();
        }
        for (i, c) in self.cycles.iter().enumerate() {
            writeln!(out, "  cycle {i}: {}", walk_text(&c.walk)).unwrap();
            writeln!(out, "    chain: ({})", c.chain.join(", ")).unwrap();
            writeln!(out, "    eta: ({})", c.eta.join(", ")).unwrap();
        }
        if let Some(models) = &self.models {
            writeln!(out, "models:").unwrap();
            for m in models {
                writeln!(out, "  node {}: x = c + pi^{} t, c = {}", m.node, m.k, m.center.render()).unwrap();
                writeln!(out, "    g: {}", poly_text(&m.g)).unwrap();
                for h in &m.holes {
                    writeln!(
                        out,
                        "    hole of node {}: v(t - {}) >= {}, roots {}",
                        h.node,
                        h.center.render(),
                        h.radius,
                        h.roots
                    )
                    .unwrap();
                }
                writeln!(out, "    outer factor: {}", poly_text(&m.outer_factor)).unwrap();
            }
        }
        out
    }

    /// Both graphs in DOT syntax.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph cluster_tree {{").unwrap();
        for c in &self.clusters {
            writeln!(out, "  n{} [label=\"node {}\\ndepth {}\\nroots {}\"];", c.id, c.id, c.depth, c.roots).unwrap();
        }
        for c in &self.clusters {
            if let Some(p) = c.parent {
                writeln!(out, "  n{p} -> n{};", c.id).unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
        writeln!(out, "digraph skeleton {{").unwrap();
        for v in &self.vertices {
            writeln!(out, "  v{} [label=\"{}\"];", v.index, v.name).unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  v{} -> v{} [label=\"e{} ({}, {})\"];",
                e.tail, e.head, e.index, e.interval.0, e.interval.1
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }
}
