//! Certificates and their independent re-verification.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::ProjectivePoint;
use crate::linalg::{proportionality, vec_is_zero, QMatrix, QVec};
use crate::rational::{q_serde, vec_serde, Q};

use super::irreducible::{algebra_dimension, conjugates, word_span_rank, ProximalWitness};
use super::search::is_invariant_pd;
use super::spectral::{dominance, has_distinct_real_moduli};
use super::words::Word;
use super::{fixed_vectors_in_derived, GeneratorSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Certificate {
    /// Nonzero `Y` in W fixed by every generator; the Dirac mass at its line
    /// is invariant.
    FixedVector {
        #[serde(with = "vec_serde")]
        vector: QVec,
    },
    /// The stacked system `(P(g_i) - I) Y = 0` on W has full rank.
    NoFixedVector {
        dim_w: usize,
        stacked_rank: usize,
    },
    InvariantLine {
        point: ProjectivePoint,
        #[serde(with = "vec_serde")]
        eigenvalues: QVec,
    },
    FiniteLineOrbit {
        points: Vec<ProjectivePoint>,
    },
    InvariantPDForm {
        form: QMatrix,
    },
    ProximalIrreducible {
        proximal: ProximalWitness,
        #[serde(with = "q_serde")]
        gap_tol: Q,
        spanning_words: Vec<Word>,
        regular_word: Word,
        conjugators: Vec<Word>,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::FixedVector { .. } => "FixedVector",
            Certificate::NoFixedVector { .. } => "NoFixedVector",
            Certificate::InvariantLine { .. } => "InvariantLine",
            Certificate::FiniteLineOrbit { .. } => "FiniteLineOrbit",
            Certificate::InvariantPDForm { .. } => "InvariantPDForm",
            Certificate::ProximalIrreducible { .. } => "ProximalIrreducible",
        }
    }

    /// Witnesses an invariant probability measure on the projective space.
    pub fn witnesses_invariant_measure(&self) -> bool {
        !matches!(self, Certificate::NoFixedVector { .. } | Certificate::ProximalIrreducible { .. })
    }
}

fn words_in_range(words: &[&Word], k: usize) -> bool {
    words.iter().all(|w| w.0.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= k))
}

/// Re-check a certificate against a generator set using only linear algebra.
pub fn verify_certificate(cert: &Certificate, gs: &GeneratorSet) -> bool {
    let d = gs.dim();
    let mats = gs.matrices();
    match cert {
        Certificate::FixedVector { vector } => {
            let Some(alg) = gs.algebra() else {
                return false;
            };
            if vector.len() != alg.dim_w() || vec_is_zero(vector) {
                return false;
            }
            let mut y = vec![Q::zero(); alg.dim_v()];
            y.extend(vector.iter().cloned());
            mats.iter().all(|m| m.mul_vec(&y) == y)
        }
        Certificate::NoFixedVector { dim_w, stacked_rank } => {
            let Some(alg) = gs.algebra() else {
                return false;
            };
            *dim_w == alg.dim_w() && stacked_rank == dim_w && fixed_vectors_in_derived(gs).is_ok_and(|f| f.is_empty())
        }
        Certificate::InvariantLine { point, eigenvalues } => {
            point.dim() == d
                && eigenvalues.len() == mats.len()
                && mats.iter().zip(eigenvalues).all(|(m, lambda)| {
                    !lambda.is_zero()
                        && proportionality(point.coords(), &m.mul_vec(point.coords())).as_ref() == Some(lambda)
                })
        }
        Certificate::FiniteLineOrbit { points } => {
            if points.is_empty() || points.iter().any(|p| p.dim() != d) {
                return false;
            }
            let set: std::collections::HashSet<&ProjectivePoint> = points.iter().collect();
            set.len() == points.len()
                && mats.iter().all(|m| points.iter().all(|p| p.apply(m).is_ok_and(|img| set.contains(&img))))
        }
        Certificate::InvariantPDForm { form } => form.nrows() == d && is_invariant_pd(form, mats),
        Certificate::ProximalIrreducible { proximal, gap_tol, spanning_words, regular_word, conjugators } => {
            let alpha = gs.alphabet();
            let mut all: Vec<&Word> = vec![&proximal.word, regular_word];
            all.extend(spanning_words);
            all.extend(conjugators);
            if d < 2 || gap_tol < &Q::zero() || !words_in_range(&all, alpha.len()) {
                return false;
            }
            let Some(dom) = dominance(&proximal.word.matrix(alpha).charpoly(), gap_tol) else {
                return false;
            };
            dom.lower_bound >= Q::one() + gap_tol
                && word_span_rank(alpha, spanning_words) == d * d
                && has_distinct_real_moduli(&regular_word.matrix(alpha).charpoly())
                && algebra_dimension(&conjugates(alpha, regular_word, conjugators), d) == d * d
        }
    }
}
