//! Exact and numerical statements about the spectrum of a rational matrix.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::poly::{refine_with_chain, QPoly, RootInterval};
use crate::rational::{q, to_f64, Q};

const MAX_REFINEMENTS: usize = 96;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapPath {
    /// Sturm isolation of a real-rooted characteristic polynomial.
    ExactSturm,
    /// Durand–Kerner roots with a safety margin of a tenth of the tolerance.
    Numerical,
}

/// A certified lower bound on `|lambda_1| / max_{i>1} |lambda_i|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dominance {
    pub lower_bound: Q,
    pub estimate: f64,
    pub path: GapPath,
}

struct RealSpectrum {
    sf: QPoly,
    chain: Vec<QPoly>,
    ivs: Vec<RootInterval>,
}

impl RealSpectrum {
    /// `None` unless every root of `p` is real.
    fn of(p: &QPoly) -> Option<Self> {
        if p.degree() == 0 {
            return None;
        }
        let sf = p.square_free();
        let chain = sf.sturm_chain();
        let ivs = p.real_root_intervals();
        (ivs.len() == sf.degree()).then_some(RealSpectrum { sf, chain, ivs })
    }

    fn refine(&mut self) {
        for iv in self.ivs.iter_mut() {
            if !iv.is_exact() {
                let w = iv.width() / q(2);
                *iv = refine_with_chain(&self.sf, &self.chain, iv.clone(), &w);
            }
        }
    }

    fn abs_bounds(&self) -> Vec<(Q, Q)> {
        self.ivs.iter().map(|iv| iv.abs_bounds()).collect()
    }
}

/// Certify that the spectral radius is attained by one simple real eigenvalue
/// dominating all others by a factor of at least `1 + tol`.
pub fn dominance(p: &QPoly, tol: &Q) -> Option<Dominance> {
    if p.degree() < 2 {
        return None;
    }
    match RealSpectrum::of(p) {
        Some(spec) => exact_dominance(p, spec, tol),
        None => numerical_dominance(p, tol),
    }
}

fn exact_dominance(p: &QPoly, mut spec: RealSpectrum, tol: &Q) -> Option<Dominance> {
    if spec.ivs.len() < 2 {
        return None;
    }
    let factor = Q::one() + tol;
    for _ in 0..MAX_REFINEMENTS {
        let b = spec.abs_bounds();
        let top = (0..b.len()).max_by(|&i, &j| b[i].1.cmp(&b[j].1)).unwrap();
        let other_hi = (0..b.len()).filter(|&i| i != top).map(|i| b[i].1.clone()).max().unwrap();
        let other_lo = (0..b.len()).filter(|&i| i != top).map(|i| b[i].0.clone()).max().unwrap();
        if b[top].1 < &factor * &other_lo {
            return None;
        }
        if other_hi.is_positive() && b[top].0 >= &factor * &other_hi {
            if p.multiplicity_in(&spec.ivs[top]) != 1 {
                return None;
            }
            let lower_bound = &b[top].0 / &other_hi;
            let fine = Q::new(1.into(), num_bigint::BigInt::from(1u64 << 50));
            let (sf, chain) = (&spec.sf, &spec.chain);
            for iv in spec.ivs.iter_mut() {
                *iv = refine_with_chain(sf, chain, iv.clone(), &fine);
            }
            let est_top = spec.ivs[top].midpoint_f64().abs();
            let est_other =
                (0..b.len()).filter(|&i| i != top).map(|i| spec.ivs[i].midpoint_f64().abs()).fold(0.0f64, f64::max);
            return Some(Dominance { lower_bound, estimate: est_top / est_other, path: GapPath::ExactSturm });
        }
        spec.refine();
    }
    None
}

fn numerical_dominance(p: &QPoly, tol: &Q) -> Option<Dominance> {
    let mut roots = p.complex_roots();
    roots.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let top = roots[0];
    if top.im.abs() > 1e-9 * top.re.abs().max(1.0) {
        return None;
    }
    let ratio = top.norm() / roots[1].norm();
    let tol = to_f64(tol);
    let margin = 1.0 + tol / 10.0;
    if !ratio.is_finite() || ratio < (1.0 + tol) * margin {
        return None;
    }
    let lower_bound = Q::from_float(ratio / margin)?;
    Some(Dominance { lower_bound, estimate: ratio, path: GapPath::Numerical })
}

/// Every root is real and simple, and no two roots share a modulus.
///
/// Such a matrix is diagonalizable over the reals, its powers have the same
/// eigenlines, and its largest eigenvalue is proximal.
pub fn has_distinct_real_moduli(p: &QPoly) -> bool {
    if p.degree() == 0 {
        return false;
    }
    let Some(mut spec) = RealSpectrum::of(p) else {
        return false;
    };
    if spec.sf.degree() != p.degree() {
        return false;
    }
    for _ in 0..MAX_REFINEMENTS {
        let mut b = spec.abs_bounds();
        b.sort();
        if b.windows(2).all(|w| w[0].1 < w[1].0) {
            return true;
        }
        if spec.ivs.iter().all(|iv| iv.is_exact()) {
            return false;
        }
        spec.refine();
    }
    false
}
