#![allow(dead_code)]

use nilrigid::algebra::{GraphAlgebra, NilElement};
use nilrigid::automorphism::{elementary, AffineGenerator};
use nilrigid::gallery::Example;
use nilrigid::graph::GraphSpec;
use nilrigid::linalg::QMatrix;
use nilrigid::rational::{q, qr, Q};
use nilrigid::rigidity::{Certificate, GeneratorSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 12`, `1 <= q <= 6`.
pub fn small_q(r: &mut impl Rng) -> Q {
    qr(r.gen_range(-12..=12), r.gen_range(1..=6))
}

pub fn small_vec(r: &mut impl Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| small_q(r)).collect()
}

pub fn element(r: &mut impl Rng, alg: &GraphAlgebra) -> NilElement {
    NilElement::new(small_vec(r, alg.dim_v()), small_vec(r, alg.dim_w()))
}

/// Invertible rational matrix: a product of elementary matrices with small
/// rational entries and a diagonal of nonzero rationals.
pub fn invertible(r: &mut impl Rng, d: usize) -> QMatrix {
    let mut m = QMatrix::identity(d);
    for i in 0..d {
        let mut x = small_q(r);
        while x == q(0) {
            x = small_q(r);
        }
        m[(i, i)] = x;
    }
    for _ in 0..2 * d {
        if d < 2 {
            break;
        }
        let (i, j) = distinct_pair(r, d);
        let mut e = QMatrix::identity(d);
        e[(i, j)] = small_q(r);
        m = e.mul(&m);
    }
    m
}

fn distinct_pair(r: &mut impl Rng, d: usize) -> (usize, usize) {
    let i = r.gen_range(0..d);
    let mut j = r.gen_range(0..d);
    while j == i {
        j = r.gen_range(0..d);
    }
    (i, j)
}

/// Integer matrix of determinant +-1 built from signed permutations and
/// elementary matrices.
pub fn unimodular(r: &mut impl Rng, d: usize, steps: usize) -> QMatrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(r);
    let mut m = QMatrix::zeros(d, d);
    for (i, &p) in perm.iter().enumerate() {
        m[(i, p)] = q(if r.gen_bool(0.5) { 1 } else { -1 });
    }
    for _ in 0..steps {
        if d < 2 {
            break;
        }
        let (i, j) = distinct_pair(r, d);
        let mut e = QMatrix::identity(d);
        e[(i, j)] = q(r.gen_range(-2..=2));
        m = e.mul(&m);
    }
    m
}

/// Small generator sets mixing torus and Heisenberg examples.
pub fn random_sets(seed: u64, count: usize) -> Vec<GeneratorSet> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let gs = match r.gen_range(0..4) {
            0 | 1 => {
                let d = r.gen_range(1..=3);
                let k = r.gen_range(1..=3);
                let steps = r.gen_range(0..=3);
                let mats = (0..k).map(|_| unimodular(&mut r, d, steps)).collect();
                GeneratorSet::torus(d, mats).unwrap()
            }
            2 => {
                let alg = GraphAlgebra::new(GraphSpec::complete(2));
                let k = r.gen_range(1..=3);
                let gens = (0..k)
                    .map(|_| {
                        let g = unimodular(&mut r, 2, 2);
                        let theta = QMatrix::from_rows(vec![vec![q(r.gen_range(-2..=2)), q(r.gen_range(-2..=2))]]);
                        let t = NilElement::new(vec![q(r.gen_range(-1..=1)), q(0)], vec![qr(r.gen_range(-1..=1), 2)]);
                        AffineGenerator::assemble(&alg, t, theta, g).unwrap()
                    })
                    .filter(|g| g.verify_lattice_stabilized(&alg))
                    .collect();
                GeneratorSet::nilmanifold(alg, gens).unwrap()
            }
            _ => {
                // hand-picked shapes that exercise every branch of the cascade
                let shapes: Vec<Vec<&[&[i64]]>> = vec![
                    vec![&[&[0, -1], &[1, 0]]],
                    vec![&[&[2, 1], &[1, 1]]],
                    vec![&[&[1, 1], &[0, 1]], &[&[-1, 0], &[0, -1]]],
                    vec![&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]],
                    vec![&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]], &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]],
                    vec![&[&[0, 1], &[1, 0]], &[&[2, 1], &[1, 1]]],
                ];
                let s = shapes.choose(&mut r).unwrap();
                let mats: Vec<QMatrix> = s.iter().map(|m| QMatrix::from_i64(m)).collect();
                GeneratorSet::torus(mats[0].nrows(), mats).unwrap()
            }
        };
        out.push(gs);
    }
    out
}

pub fn gallery() -> Vec<Example> {
    let mut v = vec![Example::Heisenberg, Example::TorusF2];
    for n in 2..=6 {
        v.push(Example::Complete(n));
        v.push(Example::Star(n));
    }
    v
}

/// A bracket-compatible linear map for a gallery graph: random elementary
/// moves inside coherent classes and a random invertible diagonal.
pub fn compatible_linear(r: &mut impl Rng, alg: &GraphAlgebra) -> QMatrix {
    let n = alg.dim_v();
    let mut m = QMatrix::identity(n);
    for i in 0..n {
        let mut x = small_q(r);
        while x == q(0) {
            x = small_q(r);
        }
        m[(i, i)] = x;
    }
    for cls in alg.partition().classes() {
        if cls.len() < 2 {
            continue;
        }
        for _ in 0..3 {
            let a = cls[r.gen_range(0..cls.len())];
            let b = cls[r.gen_range(0..cls.len())];
            if a != b {
                let mut e = elementary(n, a, b);
                e[(a, b)] = small_q(r);
                m = e.mul(&m);
            }
        }
    }
    m
}

/// A change to a certificate that must break it.
pub fn mutate(c: &Certificate) -> Certificate {
    match c.clone() {
        Certificate::FixedVector { vector } => Certificate::FixedVector { vector: vec![q(0); vector.len()] },
        Certificate::NoFixedVector { dim_w, stacked_rank } => {
            Certificate::NoFixedVector { dim_w, stacked_rank: stacked_rank.saturating_sub(1) }
        }
        Certificate::InvariantLine { point, mut eigenvalues } => {
            eigenvalues[0] += q(1);
            Certificate::InvariantLine { point, eigenvalues }
        }
        Certificate::FiniteLineOrbit { mut points } => {
            points.pop();
            Certificate::FiniteLineOrbit { points }
        }
        Certificate::InvariantPDForm { form } => Certificate::InvariantPDForm { form: form.neg() },
        Certificate::ProximalIrreducible { proximal, gap_tol, mut spanning_words, regular_word, conjugators } => {
            spanning_words.pop();
            Certificate::ProximalIrreducible { proximal, gap_tol, spanning_words, regular_word, conjugators }
        }
    }
}
