//! Analysis requests and reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::GraphAlgebra;
use crate::dynamics::{summarize, DynamicsSummary, Start, WalkConfig, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};
use crate::gallery::Example;
use crate::graph::parse_graph;
use crate::io::{parse_generators, parse_torus_matrices};
use crate::rational::fmt_q;
use crate::rigidity::{
    fixed_vectors_in_derived, general_measure_verdict, nilmanifold_verdict, verify_certificate, Budgets, Certificate,
    GeneratorSet, RigidityVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Nilmanifold,
    Torus,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nilmanifold" => Ok(Mode::Nilmanifold),
            "torus" => Ok(Mode::Torus),
            _ => Err(Error::InvalidRequest(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::InvalidRequest(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsOptions {
    pub steps: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub resolution: usize,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        DynamicsOptions { steps: 100_000, seed: 42, burn_in: 100, resolution: DEFAULT_RESOLUTION }
    }
}

impl DynamicsOptions {
    pub fn walk(&self) -> WalkConfig {
        WalkConfig { steps: self.steps, seed: self.seed, burn_in: self.burn_in, start: Start::Random }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub assume_zariski_dense: bool,
    pub budgets: Budgets,
    /// Annotate the report with random-walk evidence.
    pub dynamics: Option<DynamicsOptions>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRequest {
    pub mode: Mode,
    pub graph: Option<PathBuf>,
    pub generators: PathBuf,
    pub options: AnalysisOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub coherent_classes: Vec<Vec<String>>,
}

impl GraphSummary {
    fn of(alg: &GraphAlgebra) -> Self {
        let g = alg.graph();
        GraphSummary {
            vertices: g.vertices().to_vec(),
            edges: g.edges().iter().map(|&(i, j)| [g.label(i).to_string(), g.label(j).to_string()]).collect(),
            coherent_classes: alg.partition().labelled(g),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub source: String,
    pub mode: Mode,
    /// Dimension of the space the linear actions live on.
    pub dimension: usize,
    pub generator_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    /// Basis of the vectors in W fixed by every generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_space: Option<Vec<Vec<String>>>,
    #[serde(flatten)]
    pub verdict: RigidityVerdict,
    pub certificate_verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSummary>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::InFile { path: path.display().to_string(), inner: Box::new(e) })
}

/// Reads, validates and builds the generator set of a request.
pub fn load(req: &AnalysisRequest) -> Result<GeneratorSet> {
    let gens_text = read(&req.generators)?;
    match req.mode {
        Mode::Nilmanifold => {
            let path = req
                .graph
                .as_deref()
                .ok_or_else(|| Error::InvalidRequest("nilmanifold mode requires a graph file".into()))?;
            let graph = in_file(path, parse_graph(&read(path)?))?;
            let alg = GraphAlgebra::new(graph);
            let gens = in_file(&req.generators, parse_generators(&gens_text, &alg))?;
            in_file(&req.generators, GeneratorSet::nilmanifold(alg, gens))
        }
        Mode::Torus => {
            if req.graph.is_some() {
                return Err(Error::InvalidRequest("torus mode takes no graph file".into()));
            }
            let (n, mats) = in_file(&req.generators, parse_torus_matrices(&gens_text))?;
            in_file(&req.generators, GeneratorSet::torus(n, mats))
        }
    }
}

pub fn analyze(req: &AnalysisRequest) -> Result<Report> {
    let gs = load(req)?;
    let source = req.generators.display().to_string();
    analyze_set(&gs, source, &req.options)
}

/// Analyzes a gallery example. Nilmanifold examples generate a lattice of
/// `T x| L` and are analyzed under the density assumption.
pub fn analyze_example(ex: Example, options: &AnalysisOptions) -> Result<Report> {
    let gs = ex.build()?;
    let opts =
        AnalysisOptions { assume_zariski_dense: options.assume_zariski_dense || ex.zariski_dense(), ..options.clone() };
    analyze_set(&gs, format!("example:{}", ex.name()), &opts)
}

pub fn analyze_set(gs: &GeneratorSet, source: String, options: &AnalysisOptions) -> Result<Report> {
    options.budgets.validate()?;
    let (mode, verdict, graph, fixed_space) = match gs.algebra() {
        Some(alg) => {
            let fixed = fixed_vectors_in_derived(gs)?;
            let fixed = fixed.iter().map(|v| v.iter().map(fmt_q).collect()).collect();
            let v = nilmanifold_verdict(gs, options.assume_zariski_dense, &options.budgets)?;
            (Mode::Nilmanifold, v, Some(GraphSummary::of(alg)), Some(fixed))
        }
        None => (Mode::Torus, general_measure_verdict(gs, &options.budgets), None, None),
    };
    let certificate_verified = verdict.certificate.as_ref().map(|c| verify_certificate(c, gs));
    let dynamics = match &options.dynamics {
        Some(d) if !gs.is_empty() => Some(summarize(gs.matrices(), &d.walk(), d.resolution)?.0),
        _ => None,
    };
    Ok(Report {
        source,
        mode,
        dimension: gs.dim(),
        generator_count: gs.len(),
        graph,
        fixed_space,
        verdict,
        certificate_verified,
        dynamics,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            Mode::Nilmanifold => "nilmanifold",
            Mode::Torus => "torus",
        };
        let _ = writeln!(out, "source:      {}", self.source);
        let _ = writeln!(out, "mode:        {mode}, dimension {}, {} generators", self.dimension, self.generator_count);
        if let Some(g) = &self.graph {
            let edges: Vec<String> = g.edges.iter().map(|[a, b]| format!("{a}-{b}")).collect();
            let classes: Vec<String> = g.coherent_classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
            let _ = writeln!(out, "graph:       {} | {}", g.vertices.join(" "), edges.join(" "));
            let _ = writeln!(out, "coherent:    {}", classes.join(" "));
        }
        if let Some(f) = &self.fixed_space {
            let basis: Vec<String> = f.iter().map(|v| format!("({})", v.join(", "))).collect();
            let span = if basis.is_empty() { "{0}".to_string() } else { format!("span {}", basis.join(" ")) };
            let _ = writeln!(out, "fixed in W:  {span}");
        }
        let v = &self.verdict;
        let _ = writeln!(out, "verdict:     {}", v.status);
        let _ = writeln!(out, "criterion:   {}", v.criterion);
        match (&v.certificate, self.certificate_verified) {
            (Some(c), Some(ok)) => {
                let _ = writeln!(
                    out,
                    "certificate: {} ({})",
                    describe(c),
                    if ok { "verified" } else { "FAILED verification" }
                );
            }
            _ => {
                let _ = writeln!(out, "certificate: none");
            }
        }
        let assumptions = if v.assumptions.is_empty() { "none".to_string() } else { v.assumptions.join(", ") };
        let _ = writeln!(out, "assumptions: {assumptions}");
        let b = &v.budgets;
        let _ = writeln!(
            out,
            "budgets:     max word length {}, orbit bound {}, gap tol {}, max words {}",
            b.max_word_length, b.orbit_bound, b.gap_tol, b.max_words
        );
        let _ = writeln!(out, "tests:");
        for t in &v.tests_attempted {
            let _ = writeln!(out, "  - {t}");
        }
        if !v.statements.is_empty() {
            let _ = writeln!(out, "statements:");
            for s in &v.statements {
                let _ = writeln!(out, "  - {s}");
            }
        }
        if let Some(d) = &self.dynamics {
            let ly: Vec<String> = d.lyapunov.iter().map(|x| format!("{x:.6}")).collect();
            let _ = writeln!(out, "dynamics:    {} steps, seed {}, burn-in {}", d.steps, d.seed, d.burn_in);
            let _ = writeln!(out, "  lyapunov:  {}", ly.join(" "));
            for (i, s) in &d.near_invariance {
                let _ = writeln!(out, "  near-invariance g{i}: {s:.6}");
            }
        }
        out
    }
}

fn describe(c: &Certificate) -> String {
    let vec = |v: &[crate::rational::Q]| v.iter().map(fmt_q).collect::<Vec<_>>().join(", ");
    match c {
        Certificate::FixedVector { vector } => format!("FixedVector ({})", vec(vector)),
        Certificate::NoFixedVector { dim_w, stacked_rank } => {
            format!("NoFixedVector (stacked rank {stacked_rank} = dim W {dim_w})")
        }
        Certificate::InvariantLine { point, eigenvalues } => {
            format!("InvariantLine [{}] eigenvalues ({})", vec(point.coords()), vec(eigenvalues))
        }
        Certificate::FiniteLineOrbit { points } => format!("FiniteLineOrbit of {} lines", points.len()),
        Certificate::InvariantPDForm { form } => {
            let rows: Vec<String> = form.to_rows().iter().map(|r| format!("[{}]", vec(r))).collect();
            format!("InvariantPDForm [{}]", rows.join(", "))
        }
        Certificate::ProximalIrreducible { proximal, .. } => format!(
            "ProximalIrreducible word `{}`, gap >= {} (estimate {:.6}, {})",
            proximal.word,
            fmt_q(&proximal.gap_lower_bound),
            proximal.gap_estimate,
            serde_json::to_value(proximal.path).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
        ),
    }
}
