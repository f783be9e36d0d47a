//! Random matrix products on projective space: trajectories, empirical
//! measures, near-invariance scores and Lyapunov exponents.
//!
//! Floating point throughout. Nothing here feeds back into a verdict.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

pub type FMatrix = Vec<Vec<f64>>;

pub const DEFAULT_RESOLUTION: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Random,
    Point(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub steps: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub start: Start,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { steps: 100_000, seed: 42, burn_in: 100, start: Start::Random }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps <= self.burn_in {
            return Err(Error::InvalidRequest(format!(
                "steps ({}) must exceed burn-in ({})",
                self.steps, self.burn_in
            )));
        }
        Ok(())
    }
}

pub fn to_f64_matrices(mats: &[QMatrix]) -> Vec<FMatrix> {
    mats.iter().map(QMatrix::to_f64_rows).collect()
}

fn apply(m: &FMatrix, x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Unit representative whose first coordinate of non-negligible size is positive.
pub fn canonical(x: &[f64]) -> Vec<f64> {
    let n = norm(x);
    let mut y: Vec<f64> = x.iter().map(|v| v / n).collect();
    if let Some(v) = y.iter().find(|v| v.abs() > 1e-12) {
        if *v < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
    }
    y
}

/// Angle between two lines, in `[0, pi/2]`.
pub fn projective_distance(a: &[f64], b: &[f64]) -> f64 {
    let c: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (norm(a) * norm(b));
    c.abs().min(1.0).acos()
}

fn check_dims(mats: &[FMatrix]) -> Result<usize> {
    let d = mats.first().map(Vec::len).ok_or_else(|| Error::InvalidRequest("no matrices".into()))?;
    for (i, m) in mats.iter().enumerate() {
        if m.len() != d || m.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(format!("matrix {i} is not {d}x{d}")));
        }
    }
    Ok(d)
}

fn start_point(cfg: &WalkConfig, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    match &cfg.start {
        Start::Point(p) if p.len() != d => {
            Err(Error::DimensionMismatch(format!("start point has {} coordinates, expected {d}", p.len())))
        }
        Start::Point(p) if norm(p) == 0.0 => Err(Error::ZeroVector),
        Start::Point(p) => Ok(canonical(p)),
        Start::Random => loop {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if norm(&x) > 1e-3 {
                return Ok(canonical(&x));
            }
        },
    }
}

/// `x_0, x_1, ..., x_steps` with `x_{k+1} = g_{i_k} x_k` normalized and the
/// indices drawn uniformly from a ChaCha8 stream seeded by `cfg.seed`.
pub fn random_product_walk(mats: &[FMatrix], cfg: &WalkConfig) -> Result<Vec<Vec<f64>>> {
    let d = check_dims(mats)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = start_point(cfg, d, &mut rng)?;
    let mut out = Vec::with_capacity(cfg.steps + 1);
    out.push(x.clone());
    for _ in 0..cfg.steps {
        let i = rng.gen_range(0..mats.len());
        x = canonical(&apply(&mats[i], &x));
        out.push(x.clone());
    }
    Ok(out)
}

/// Weighted points on projective space; weights sum to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn uniform(points: Vec<Vec<f64>>) -> Self {
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        EmpiricalMeasure { points: points.iter().map(|p| canonical(p)).collect(), weights }
    }

    pub fn dirac(point: &[f64]) -> Self {
        Self::uniform(vec![point.to_vec()])
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn pushforward(&self, m: &FMatrix) -> Self {
        EmpiricalMeasure {
            points: self.points.iter().map(|p| canonical(&apply(m, p))).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Mass within angle `eps` of the line `p`.
    pub fn mass_near(&self, p: &[f64], eps: f64) -> f64 {
        self.points.iter().zip(&self.weights).filter(|(x, _)| projective_distance(x, p) <= eps).map(|(_, w)| w).sum()
    }

    /// Masses of the grid cells at the given resolution.
    pub fn binned(&self, resolution: usize) -> BTreeMap<Vec<i64>, f64> {
        let mut out = BTreeMap::new();
        for (p, w) in self.points.iter().zip(&self.weights) {
            *out.entry(grid_cell(p, resolution)).or_insert(0.0) += w;
        }
        out
    }
}

/// Uniform weights on the points after the first `burn_in`.
pub fn cesaro_empirical_measure(trajectory: &[Vec<f64>], burn_in: usize) -> Result<EmpiricalMeasure> {
    if trajectory.len() <= burn_in {
        return Err(Error::InvalidRequest(format!(
            "trajectory of length {} is not longer than burn-in {burn_in}",
            trajectory.len()
        )));
    }
    Ok(EmpiricalMeasure::uniform(trajectory[burn_in..].to_vec()))
}

/// Cell of a line in the cube-face grid: the chart is the index `k` of the
/// largest coordinate, the other coordinates divided by `x_k` lie in
/// `[-1, 1]` and are cut into `resolution` equal intervals. Doubling the
/// resolution refines every cell.
pub fn grid_cell(x: &[f64], resolution: usize) -> Vec<i64> {
    let k = (0..x.len()).fold(0, |k, i| if x[i].abs() > x[k].abs() { i } else { k });
    let r = resolution as f64;
    let mut cell = vec![k as i64];
    for (i, v) in x.iter().enumerate() {
        if i != k {
            let t = (v / x[k] + 1.0) / 2.0;
            cell.push(((t * r).floor() as i64).clamp(0, resolution as i64 - 1));
        }
    }
    cell
}

/// Total variation between a measure and its pushforward on the grid.
pub fn near_invariance_score(m: &EmpiricalMeasure, matrix: &FMatrix, resolution: usize) -> Result<f64> {
    if let Some(p) = m.points.first() {
        if matrix.len() != p.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {0}x{0}, measure lives in dimension {1}",
                matrix.len(),
                p.len()
            )));
        }
    }
    let a = m.binned(resolution);
    let b = m.pushforward(matrix).binned(resolution);
    let keys: std::collections::BTreeSet<&Vec<i64>> = a.keys().chain(b.keys()).collect();
    let tv: f64 = keys.into_iter().map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs()).sum();
    Ok(tv / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub lambda1: f64,
    /// `None` in dimension 1.
    pub lambda2: Option<f64>,
    pub steps: usize,
}

impl LyapunovEstimate {
    pub fn gap(&self) -> Option<f64> {
        self.lambda2.map(|l2| self.lambda1 - l2)
    }
}

/// Top two exponents of the random product, by Gram–Schmidt on two vectors
/// after every step.
pub fn lyapunov_gap_estimate(mats: &[FMatrix], cfg: &WalkConfig) -> Result<LyapunovEstimate> {
    let d = check_dims(mats)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut u: Vec<f64> = (0..d).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    let mut v: Vec<f64> = (0..d).map(|i| if i == 1 { 1.0 } else { 0.0 }).collect();
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..cfg.steps {
        let m = &mats[rng.gen_range(0..mats.len())];
        let a = apply(m, &u);
        let na = norm(&a);
        u = a.iter().map(|x| x / na).collect();
        s1 += na.ln();
        if d >= 2 {
            let b = apply(m, &v);
            let proj: f64 = b.iter().zip(&u).map(|(x, y)| x * y).sum();
            let b: Vec<f64> = b.iter().zip(&u).map(|(x, y)| x - proj * y).collect();
            let nb = norm(&b);
            v = b.iter().map(|x| x / nb).collect();
            s2 += nb.ln();
        }
    }
    let n = cfg.steps.max(1) as f64;
    Ok(LyapunovEstimate { lambda1: s1 / n, lambda2: (d >= 2).then_some(s2 / n), steps: cfg.steps })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSummary {
    pub lyapunov: Vec<f64>,
    pub near_invariance: BTreeMap<usize, f64>,
    pub steps: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub resolution: usize,
}

/// Walk, Cesàro measure, per-generator scores and Lyapunov exponents.
pub fn summarize(mats: &[QMatrix], cfg: &WalkConfig, resolution: usize) -> Result<(DynamicsSummary, Vec<Vec<f64>>)> {
    cfg.validate()?;
    let f = to_f64_matrices(mats);
    let traj = random_product_walk(&f, cfg)?;
    let measure = cesaro_empirical_measure(&traj, cfg.burn_in)?;
    let mut near_invariance = BTreeMap::new();
    for (i, m) in f.iter().enumerate() {
        near_invariance.insert(i, near_invariance_score(&measure, m, resolution)?);
    }
    let lyap = lyapunov_gap_estimate(&f, cfg)?;
    let mut lyapunov = vec![lyap.lambda1];
    lyapunov.extend(lyap.lambda2);
    let summary = DynamicsSummary {
        lyapunov,
        near_invariance,
        steps: cfg.steps,
        seed: cfg.seed,
        burn_in: cfg.burn_in,
        resolution,
    };
    Ok((summary, traj))
}

/// `step,x0,x1,...` with 17 significant digits.
pub fn trajectory_csv(traj: &[Vec<f64>]) -> String {
    let d = traj.first().map_or(0, Vec::len);
    let mut out = String::from("step");
    for i in 0..d {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for (k, p) in traj.iter().enumerate() {
        let _ = write!(out, "{k}");
        for v in p {
            let _ = write!(out, ",{v:.16e}");
        }
        out.push('\n');
    }
    out
}
