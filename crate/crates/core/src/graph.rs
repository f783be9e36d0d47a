//! Finite simple graphs and their coherent components.
//!
//! Vertex order is declaration order and edges are stored as index pairs
//! `(i, j)` with `i < j`, sorted lexicographically. Both orders are the basis
//! orders of `V` and `W` everywhere downstream.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<bool>>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GraphSpec {
    /// Builds a graph from labels and label pairs. Errors carry no line number.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let verts: Vec<(usize, String)> = vertices.iter().map(|v| (0, v.as_ref().to_string())).collect();
        let es: Vec<(usize, String, String)> =
            edges.iter().map(|(a, b)| (0, a.as_ref().to_string(), b.as_ref().to_string())).collect();
        Self::build(verts, es, false)
    }

    fn build(vertices: Vec<(usize, String)>, edges: Vec<(usize, String, String)>, with_lines: bool) -> Result<Self> {
        let mut index = HashMap::new();
        let mut labels = Vec::with_capacity(vertices.len());
        for (line, v) in vertices {
            if !valid_label(&v) {
                return Err(Error::Syntax { line, msg: format!("invalid vertex label `{v}`") });
            }
            if index.insert(v.clone(), labels.len()).is_some() {
                return Err(Error::Syntax { line, msg: format!("vertex `{v}` declared twice") });
            }
            labels.push(v);
        }
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        let mut set = BTreeSet::new();
        for (line, a, b) in edges {
            let lookup = |l: &String| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex { line: with_lines.then_some(line), label: l.clone() })
            };
            let (i, j) = (lookup(&a)?, lookup(&b)?);
            if i == j {
                return Err(Error::SelfLoop { line, label: a });
            }
            let key = (i.min(j), i.max(j));
            if !set.insert(key) {
                return Err(Error::DuplicateEdge { line, a, b });
            }
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Ok(GraphSpec { vertices: labels, edges: set.into_iter().collect(), index, adj })
    }

    pub fn complete(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (labels[i].clone(), labels[j].clone()))
            .collect();
        Self::new(&labels, &edges).expect("complete graph is valid")
    }

    /// Leaves `l1..ln` first, then the center `c`.
    pub fn star(n: usize) -> Self {
        let mut labels: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
        labels.push("c".into());
        let edges: Vec<(String, String)> = (1..=n).map(|i| (format!("l{i}"), "c".to_string())).collect();
        Self::new(&labels, &edges).expect("star graph is valid")
    }

    /// Path `v1 - v2 - ... - vn`.
    pub fn path(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> = (1..n).map(|i| (format!("v{i}"), format!("v{}", i + 1))).collect();
        Self::new(&labels, &edges).expect("path graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownVertex { line: None, label: label.into() })
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    /// Position of edge `{i, j}` in the edge basis.
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| j)
    }

    /// Graph DSL text that parses back to `self`.
    pub fn render(&self) -> String {
        let mut out = format!("vertices: {}\n", self.vertices.join(" "));
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "edge: {} {}", self.vertices[i], self.vertices[j]);
        }
        out
    }

    /// Coherence of a vertex subset, with the third vertex ranging over all of S.
    pub fn is_coherent<S: AsRef<str>>(&self, subset: &[S]) -> Result<bool> {
        let idx: Vec<usize> = subset.iter().map(|s| self.vertex_index(s.as_ref())).collect::<Result<_>>()?;
        Ok(self.is_coherent_idx(&idx))
    }

    pub fn is_coherent_idx(&self, subset: &[usize]) -> bool {
        subset.iter().all(|&a| subset.iter().all(|&b| self.neighbors(a).all(|g| g == b || self.adj[b][g])))
    }

    /// `N(a) \ {b} == N(b) \ {a}`
    pub fn are_twins(&self, a: usize, b: usize) -> bool {
        (0..self.vertex_count()).all(|g| g == a || g == b || self.adj[a][g] == self.adj[b][g])
    }

    pub fn coherent_components(&self) -> CoherentPartition {
        let n = self.vertex_count();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if class_of[v] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (v..n).filter(|&u| class_of[u] == usize::MAX && self.are_twins(v, u)).collect();
            for &u in &members {
                class_of[u] = id;
            }
            classes.push(members);
        }
        CoherentPartition { classes, class_of }
    }
}

/// Partition of the vertex set into coherent components, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherentPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl CoherentPartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn labelled(&self, g: &GraphSpec) -> Vec<Vec<String>> {
        self.classes.iter().map(|c| c.iter().map(|&v| g.label(v).to_string()).collect()).collect()
    }
}

/// Parses the line-oriented graph DSL.
///
/// ```text
/// # comment
/// vertices: a b c
/// edge: a b
/// edge: b c
/// ```
pub fn parse_graph(text: &str) -> Result<GraphSpec> {
    let mut vertices: Option<Vec<(usize, String)>> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let Some((key, rest)) = t.split_once(':') else {
            return Err(Error::Syntax { line, msg: format!("expected `key: value`, got `{t}`") });
        };
        let toks: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "vertices" => {
                if vertices.is_some() {
                    return Err(Error::Syntax { line, msg: "`vertices:` declared more than once".into() });
                }
                vertices = Some(toks.iter().map(|s| (line, s.to_string())).collect());
            }
            "edge" => {
                let [a, b] = toks[..] else {
                    return Err(Error::Syntax { line, msg: "an edge needs exactly two labels".into() });
                };
                for l in [a, b] {
                    if !valid_label(l) {
                        return Err(Error::Syntax { line, msg: format!("invalid vertex label `{l}`") });
                    }
                }
                edges.push((line, a.to_string(), b.to_string()));
            }
            other => return Err(Error::Syntax { line, msg: format!("unknown key `{other}`") }),
        }
    }
    let vertices = vertices.ok_or(Error::Syntax { line: last_line, msg: "missing `vertices:` line".into() })?;
    GraphSpec::build(vertices, edges, true)
}
