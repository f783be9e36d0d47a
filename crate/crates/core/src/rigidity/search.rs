//! Searches that witness non-rigidity: a common eigenline, an invariant
//! positive definite form, or a finite orbit in projective space.

use std::collections::{HashSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::algebra::ProjectivePoint;
use crate::linalg::{intersect, proportionality, span_basis, unit, QMatrix, QVec};
use crate::poly::QPoly;
use crate::rational::Q;

use super::words::Alphabet;

/// Result of the common eigenline search.
#[derive(Clone, Debug, Default)]
pub struct LineSearch {
    /// A line fixed by every matrix, with the eigenvalue of each.
    pub found: Option<(ProjectivePoint, Vec<Q>)>,
    /// Some matrix has a real irrational eigenvalue, so a common line defined
    /// over a real quadratic (or higher) field was not ruled out.
    pub irrational_branch: bool,
}

fn eigenspace(m: &QMatrix, lambda: &Q) -> Vec<QVec> {
    m.sub(&QMatrix::identity(m.nrows()).scale(lambda)).nullspace()
}

/// Common eigenvector with rational eigenvalues, by intersecting eigenspaces
/// over every tuple of rational eigenvalues.
pub fn common_invariant_line(mats: &[QMatrix], dim: usize) -> LineSearch {
    let mut out = LineSearch::default();
    if dim == 0 {
        return out;
    }
    if mats.is_empty() {
        out.found = Some((ProjectivePoint::new(unit(dim, 0)).unwrap(), Vec::new()));
        return out;
    }
    let mut spectra = Vec::with_capacity(mats.len());
    for m in mats {
        let p = m.charpoly();
        let rat = p.rational_roots();
        if p.count_distinct_real_roots() > rat.len() {
            out.irrational_branch = true;
        }
        spectra.push(rat);
    }
    let whole: Vec<QVec> = (0..dim).map(|i| unit(dim, i)).collect();
    if let Some(v) = descend(mats, &spectra, 0, whole, dim) {
        let eig = mats.iter().map(|m| proportionality(&v, &m.mul_vec(&v)).unwrap()).collect();
        out.found = Some((ProjectivePoint::new(v).unwrap(), eig));
    }
    out
}

fn descend(mats: &[QMatrix], spectra: &[Vec<Q>], k: usize, space: Vec<QVec>, dim: usize) -> Option<QVec> {
    if space.is_empty() {
        return None;
    }
    if k == mats.len() {
        return space.into_iter().next();
    }
    for lambda in &spectra[k] {
        let e = eigenspace(&mats[k], lambda);
        let next = intersect(&space, &e, dim);
        if let Some(v) = descend(mats, spectra, k + 1, next, dim) {
            return Some(v);
        }
    }
    None
}

/// Breadth-first orbit of `start` under the generators and their inverses;
/// `None` once more than `bound` points have been seen.
///
/// A unipotent `u` has a finite orbit on a line only if it fixes the line
/// (`u^k v = v` forces `log(u) v = 0`), so the search stops early when a
/// unipotent generator moves a visited point.
pub fn finite_line_orbit(alpha: &Alphabet, start: &ProjectivePoint, bound: usize) -> Option<Vec<ProjectivePoint>> {
    let letters = alpha.letters();
    let unipotent: Vec<&QMatrix> = alpha.generators().iter().filter(|g| is_unipotent(g)).collect();
    let mut seen: HashSet<ProjectivePoint> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    order.push(start.clone());
    queue.push_back(start.clone());
    let others: Vec<&QMatrix> = alpha.generators().iter().filter(|g| !is_unipotent(g)).collect();
    while let Some(p) = queue.pop_front() {
        if unipotent.iter().any(|u| p.apply(u).expect("invertible") != p) {
            return None;
        }
        if others.iter().any(|g| !may_be_periodic(g, p.coords())) {
            return None;
        }
        for &l in &letters {
            let img = p.apply(alpha.letter(l)).expect("invertible");
            if seen.insert(img.clone()) {
                if seen.len() > bound {
                    return None;
                }
                order.push(img.clone());
                queue.push_back(img);
            }
        }
    }
    Some(order)
}

/// Monic minimal polynomial of `g` relative to `v`, from the Krylov sequence
/// `v, gv, g^2 v, ...`.
pub fn krylov_polynomial(g: &QMatrix, v: &[Q]) -> QPoly {
    let d = v.len();
    let mut seq: Vec<QVec> = vec![v.to_vec()];
    loop {
        let next = g.mul_vec(seq.last().unwrap());
        let a = QMatrix::from_columns(&seq, d);
        let aug = QMatrix::hstack(&a, &QMatrix::from_columns(std::slice::from_ref(&next), d));
        if let Some(sol) = aug.nullspace().into_iter().find(|s| !s[seq.len()].is_zero()) {
            let lead = sol[seq.len()].clone();
            let coeffs: Vec<Q> = sol.iter().map(|c| c / &lead).collect();
            return QPoly::new(coeffs);
        }
        seq.push(next);
    }
}

/// False when the line through `v` certainly has an infinite orbit under
/// `g`. A finite orbit of length `k` means `g^k` is scalar on the Krylov
/// space of `v`, so the relative minimal polynomial is square-free with all
/// roots of one modulus. Square-freeness is exact; the modulus comparison is
/// numerical with a wide margin, and only ever discards a search.
pub fn may_be_periodic(g: &QMatrix, v: &[Q]) -> bool {
    let c = krylov_polynomial(g, v);
    if c.degree() <= 1 {
        return true;
    }
    if c.square_free().degree() != c.degree() {
        return false;
    }
    let roots = c.complex_roots();
    let (lo, hi) = roots.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), z| (lo.min(z.norm()), hi.max(z.norm())));
    hi <= lo * (1.0 + 1e-6)
}

/// Starting lines for the orbit search: coordinate lines, then rational
/// eigenlines of each generator, without repetition and at most `cap`.
pub fn orbit_starts(mats: &[QMatrix], dim: usize, cap: usize) -> Vec<ProjectivePoint> {
    let mut out: Vec<ProjectivePoint> = Vec::new();
    let push = |v: QVec, out: &mut Vec<ProjectivePoint>| {
        if let Ok(p) = ProjectivePoint::new(v) {
            if !out.contains(&p) && out.len() < cap {
                out.push(p);
            }
        }
    };
    for i in 0..dim {
        push(unit(dim, i), &mut out);
    }
    for m in mats {
        for lambda in m.charpoly().rational_roots() {
            for v in eigenspace(m, &lambda) {
                push(v, &mut out);
            }
        }
    }
    out
}

fn is_unipotent(m: &QMatrix) -> bool {
    let n = m.nrows();
    m.sub(&QMatrix::identity(n)).pow(n).is_zero()
}

/// Unipotent and different from the identity: such an element never lies in
/// a compact group.
fn is_nontrivial_unipotent(m: &QMatrix) -> bool {
    !m.is_identity() && is_unipotent(m)
}

fn sym_index(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
}

fn sym_from(coeffs: &[Q], idx: &[(usize, usize)], d: usize) -> QMatrix {
    let mut x = QMatrix::zeros(d, d);
    for (c, &(i, j)) in coeffs.iter().zip(idx) {
        x[(i, j)] = c.clone();
        x[(j, i)] = c.clone();
    }
    x
}

fn sym_coords(x: &QMatrix, idx: &[(usize, usize)]) -> QVec {
    idx.iter().map(|&(i, j)| x[(i, j)].clone()).collect()
}

/// Basis of the space of symmetric `X` with `g^T X g = X` for every `g`.
pub fn invariant_symmetric_forms(mats: &[QMatrix], d: usize) -> Vec<QMatrix> {
    let idx = sym_index(d);
    let mut basis: Vec<QMatrix> = idx
        .iter()
        .map(|&(i, j)| {
            let mut x = QMatrix::zeros(d, d);
            x[(i, j)] = Q::one();
            x[(j, i)] = Q::one();
            x
        })
        .collect();
    for m in mats {
        if basis.is_empty() {
            break;
        }
        let mt = m.transpose();
        let cols: Vec<QVec> = basis.iter().map(|x| sym_coords(&mt.mul(x).mul(m).sub(x), &idx)).collect();
        let sols = QMatrix::from_columns(&cols, idx.len()).nullspace();
        basis = sols
            .iter()
            .map(|c| basis.iter().zip(c).fold(QMatrix::zeros(d, d), |acc, (x, ci)| acc.add(&x.scale(ci))))
            .collect();
        let coords: Vec<QVec> = basis.iter().map(|x| sym_coords(x, &idx)).collect();
        basis = span_basis(&coords).iter().map(|c| sym_from(c, &idx, d)).collect();
    }
    basis
}

/// Elements of the generated group, if it has at most `cap` of them.
pub fn finite_group_elements(alpha: &Alphabet, cap: usize) -> Option<Vec<QMatrix>> {
    let letters = alpha.letters();
    let id = QMatrix::identity(alpha.dim);
    let mut seen: HashSet<QMatrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for &l in &letters {
            let h = g.mul(alpha.letter(l));
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return None;
                }
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Some(order)
}

/// An invariant positive definite form, scaled so that `X[0][0] = 1`.
pub fn invariant_pd_form(alpha: &Alphabet, mats: &[QMatrix], d: usize) -> Option<QMatrix> {
    if d == 0 {
        return None;
    }
    for m in mats {
        if !m.det().abs().is_one() || is_nontrivial_unipotent(m) {
            return None;
        }
    }
    let basis = invariant_symmetric_forms(mats, d);
    if basis.is_empty() {
        return None;
    }
    let normalize = |x: QMatrix| {
        let s = Q::one() / &x[(0, 0)];
        x.scale(&s)
    };
    let mut candidates: Vec<QMatrix> = Vec::new();
    for x in &basis {
        candidates.push(x.clone());
        candidates.push(x.neg());
    }
    candidates.push(basis.iter().fold(QMatrix::zeros(d, d), |a, x| a.add(x)));
    if basis.len() <= 3 {
        let range: Vec<i64> = vec![1, 2, -1, -2];
        let mut combos: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..basis.len() {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    range.iter().chain(std::iter::once(&0)).map(move |&r| {
                        let mut c = c.clone();
                        c.push(r);
                        c
                    })
                })
                .collect();
        }
        for c in combos {
            let x = basis
                .iter()
                .zip(&c)
                .fold(QMatrix::zeros(d, d), |a, (x, &k)| a.add(&x.scale(&Q::from_integer(k.into()))));
            candidates.push(x);
        }
    }
    if let Some(x) = candidates.into_iter().find(|x| x.is_positive_definite()) {
        return Some(normalize(x));
    }
    // averaging the standard form over a finite group
    let elems = finite_group_elements(alpha, 512)?;
    let sum = elems.iter().fold(QMatrix::zeros(d, d), |a, h| a.add(&h.transpose().mul(h)));
    sum.is_positive_definite().then(|| normalize(sum))
}

/// True when `x` is symmetric positive definite and preserved by every matrix.
pub fn is_invariant_pd(x: &QMatrix, mats: &[QMatrix]) -> bool {
    x.is_square()
        && x == &x.transpose()
        && x.is_positive_definite()
        && mats.iter().all(|m| m.nrows() == x.nrows() && &m.transpose().mul(x).mul(m) == x)
}
