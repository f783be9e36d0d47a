//! Proximal elements and (strong) irreducibility witnesses.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{span_basis, unit, QMatrix, QVec};
use crate::rational::{mat_serde, q_serde, Q};

use super::spectral::{dominance, has_distinct_real_moduli, GapPath};
use super::words::{Alphabet, Word};

/// Conjugating words tried for the strong irreducibility witness.
const CONJUGATOR_CAP: usize = 64;

/// Incremental row echelon basis; rows are reduced in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, QVec)>,
}

impl Echelon {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &mut QVec) {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
    }

    /// Adds `v` if it is independent of the current rows.
    pub fn insert(&mut self, mut v: QVec) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }

    pub fn basis(&self) -> Vec<QVec> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Smallest subspace containing `v` and invariant under `gens`.
fn spin(gens: &[QMatrix], v: QVec, d: usize) -> Vec<QVec> {
    let mut ech = Echelon::default();
    let mut queue = vec![v.clone()];
    ech.insert(v);
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.mul_vec(&x);
            if ech.insert(y.clone()) {
                if ech.len() == d {
                    return ech.basis();
                }
                queue.push(y);
            }
        }
    }
    ech.basis()
}

/// Proper invariant subspace spun from a coordinate vector, either directly
/// or as the annihilator of one spun by the transposes.
fn spun_subspace(gens: &[QMatrix], d: usize) -> Option<Vec<QVec>> {
    for i in 0..d {
        let span = spin(gens, unit(d, i), d);
        if span.len() < d {
            return Some(span);
        }
    }
    let transposed: Vec<QMatrix> = gens.iter().map(QMatrix::transpose).collect();
    for i in 0..d {
        let span = spin(&transposed, unit(d, i), d);
        if span.len() < d {
            return Some(QMatrix::from_rows(span).nullspace());
        }
    }
    None
}

/// Basis of the unital algebra generated by `gens`, each element tagged with
/// the generator indices of its word. Breadth first, so words are shortest
/// possible; words longer than `max_len` are not formed. The flag reports
/// whether the span closed up within that length.
pub fn algebra_closure(gens: &[QMatrix], d: usize, max_len: usize) -> (Vec<(Vec<usize>, QMatrix)>, bool) {
    let mut ech = Echelon::default();
    let id = QMatrix::identity(d);
    ech.insert(id.entries().to_vec());
    let mut basis = vec![(Vec::new(), id)];
    let mut layer_start = 0;
    for _ in 0..max_len {
        let layer_end = basis.len();
        if layer_start == layer_end || basis.len() == d * d {
            return (basis, true);
        }
        for k in layer_start..layer_end {
            for (gi, g) in gens.iter().enumerate() {
                let m = basis[k].1.mul(g);
                if ech.insert(m.entries().to_vec()) {
                    let mut w = basis[k].0.clone();
                    w.push(gi);
                    basis.push((w, m));
                }
            }
        }
        layer_start = layer_end;
    }
    let closed = layer_start == basis.len() || basis.len() == d * d;
    (basis, closed)
}

/// Dimension of the unital algebra generated by `gens`.
pub fn algebra_dimension(gens: &[QMatrix], d: usize) -> usize {
    algebra_closure(gens, d, d * d).0.len()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProximalWitness {
    pub word: Word,
    #[serde(with = "q_serde")]
    pub gap_lower_bound: Q,
    pub gap_estimate: f64,
    pub path: GapPath,
}

/// First word in shortlex order whose matrix is proximal with gap at least
/// `1 + tol`.
pub fn proximality_witness(alpha: &Alphabet, max_len: usize, cap: usize, tol: &Q) -> Option<ProximalWitness> {
    if alpha.dim < 2 {
        return None;
    }
    alpha.find_word(max_len, cap, |_, m| dominance(&m.charpoly(), tol)).map(|(word, d)| ProximalWitness {
        word,
        gap_lower_bound: d.lower_bound,
        gap_estimate: d.estimate,
        path: d.path,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Irreducibility {
    /// Irreducible, and `regular_word` (real simple spectrum, distinct
    /// moduli) has conjugates by `conjugators` generating the full algebra.
    /// A finite-index subgroup stabilizing a proper subspace would force that
    /// subspace to be invariant under every such conjugate.
    IrreducibleStrongly {
        spanning_words: Vec<Word>,
        regular_word: Word,
        conjugators: Vec<Word>,
    },
    /// The generated algebra is the full matrix algebra.
    Irreducible {
        spanning_words: Vec<Word>,
    },
    /// A proper nonzero invariant subspace.
    Reducible {
        #[serde(with = "mat_serde")]
        subspace: Vec<QVec>,
    },
    Inconclusive {
        reason: String,
    },
}

impl Irreducibility {
    pub fn label(&self) -> &'static str {
        match self {
            Irreducibility::IrreducibleStrongly { .. } => "IRREDUCIBLE_STRONGLY",
            Irreducibility::Irreducible { .. } => "IRREDUCIBLE",
            Irreducibility::Reducible { .. } => "REDUCIBLE",
            Irreducibility::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

fn to_word(idx: &[usize]) -> Word {
    Word(idx.iter().map(|&i| i as i32 + 1).collect())
}

/// Proper nonzero subspace invariant under every element of `basis`, found
/// as a cyclic subspace `A e_i` or as the annihilator of one for `A^T`.
fn invariant_subspace(basis: &[QMatrix], d: usize) -> Option<Vec<QVec>> {
    for i in 0..d {
        let e = unit(d, i);
        let span = span_basis(&basis.iter().map(|a| a.mul_vec(&e)).collect::<Vec<_>>());
        if span.len() < d {
            return Some(span);
        }
    }
    for i in 0..d {
        let e = unit(d, i);
        let span = span_basis(&basis.iter().map(|a| a.transpose().mul_vec(&e)).collect::<Vec<_>>());
        if span.len() < d {
            return Some(QMatrix::from_rows(span).nullspace());
        }
    }
    None
}

/// Regular word and conjugators whose conjugates generate the full algebra.
pub fn strong_witness(alpha: &Alphabet, max_len: usize, cap: usize) -> Option<(Word, Vec<Word>)> {
    let d = alpha.dim;
    let (h_word, ()) = alpha.find_word(max_len, cap, |_, m| has_distinct_real_moduli(&m.charpoly()).then_some(()))?;
    let h = h_word.matrix(alpha);
    let mut candidates = vec![(Word::default(), QMatrix::identity(d))];
    candidates.extend(alpha.enumerate(max_len, CONJUGATOR_CAP));
    let mut chosen = Vec::new();
    let mut conj = Vec::new();
    let mut dim = 0;
    for (w, m) in candidates {
        let c = m.mul(&h).mul(&m.inverse().expect("invertible"));
        conj.push(c);
        let nd = algebra_dimension(&conj, d);
        if nd > dim {
            dim = nd;
            chosen.push(w);
            if dim == d * d {
                return Some((h_word, chosen));
            }
        } else {
            conj.pop();
        }
    }
    None
}

/// Conjugates `w h w^-1` of `h` by each word.
pub fn conjugates(alpha: &Alphabet, h: &Word, conjugators: &[Word]) -> Vec<QMatrix> {
    let hm = h.matrix(alpha);
    conjugators.iter().map(|w| w.matrix(alpha).mul(&hm).mul(&w.inverse().matrix(alpha))).collect()
}

/// Classify the linear action generated by `alpha`.
pub fn irreducibility_check(alpha: &Alphabet, max_len: usize, cap: usize) -> Irreducibility {
    let d = alpha.dim;
    if d > 1 {
        if let Some(subspace) = spun_subspace(alpha.generators(), d) {
            return Irreducibility::Reducible { subspace };
        }
    }
    let (basis, closed) = algebra_closure(alpha.generators(), d, max_len);
    if basis.len() < d * d {
        if !closed {
            return Irreducibility::Inconclusive {
                reason: format!("algebra span not closed with words of length <= {max_len}"),
            };
        }
        let mats: Vec<QMatrix> = basis.into_iter().map(|(_, m)| m).collect();
        return match invariant_subspace(&mats, d) {
            Some(subspace) => Irreducibility::Reducible { subspace },
            None => Irreducibility::Inconclusive {
                reason: "proper generated algebra without a cyclic invariant subspace".into(),
            },
        };
    }
    let spanning_words: Vec<Word> = basis.iter().map(|(w, _)| to_word(w)).collect();
    match strong_witness(alpha, max_len, cap) {
        Some((regular_word, conjugators)) => {
            Irreducibility::IrreducibleStrongly { spanning_words, regular_word, conjugators }
        }
        None => Irreducibility::Irreducible { spanning_words },
    }
}

/// Rank of the span of the word matrices, flattened.
pub fn word_span_rank(alpha: &Alphabet, words: &[Word]) -> usize {
    let mut ech = Echelon::default();
    for w in words {
        ech.insert(w.matrix(alpha).entries().to_vec());
    }
    ech.len()
}
