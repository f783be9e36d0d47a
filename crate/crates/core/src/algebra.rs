//! The 2-step nilpotent Lie algebra `N = V ⊕ W` of a graph and its simply
//! connected group, realized on the same coordinates.
//!
//! `V` has the vertices as basis and `W` the edges. The only nonzero brackets
//! are `[u_a, u_b] = u_ab` for edges `ab` (with `a` before `b` in vertex
//! order). The group law is `(v1, w1)(v2, w2) = (v1 + v2, w1 + w2 + ½[v1, v2])`,
//! so `exp` and `log` are the identity map.
//!
//! The lattice `N_Z` is the subgroup generated by the integer points. Since
//! `(e_a, 0)(e_b, 0)(e_a + e_b, 0)^{-1} = (0, ½ u_ab)`, it equals
//! `Z^|S| × (½Z)^|E|`, and `X = [0,1)^|S| × [0,½)^|E|` is a fundamental domain
//! for the right action of `N_Z`.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoherentPartition, GraphSpec};
use crate::linalg::{vec_add, vec_is_zero, vec_neg, vec_scale, QMatrix, QVec};
use crate::rational::{from_f64_floor, half, hash_slice, q, slice_eq, vec_serde, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NilElement {
    #[serde(with = "vec_serde")]
    pub v: QVec,
    #[serde(with = "vec_serde")]
    pub w: QVec,
}

impl NilElement {
    pub fn new(v: QVec, w: QVec) -> Self {
        NilElement { v, w }
    }

    pub fn from_i64(v: &[i64], w: &[i64]) -> Self {
        NilElement { v: v.iter().map(|&x| q(x)).collect(), w: w.iter().map(|&x| q(x)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        vec_is_zero(&self.v) && vec_is_zero(&self.w)
    }

    /// Concatenated coordinates `(v, w)`, i.e. the Lie algebra vector `log(self)`.
    pub fn to_vector(&self) -> QVec {
        self.v.iter().chain(&self.w).cloned().collect()
    }

    pub fn scale(&self, s: &Q) -> Self {
        NilElement { v: vec_scale(&self.v, s), w: vec_scale(&self.w, s) }
    }
}

/// A group element certified to lie in `N_Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticeElement(NilElement);

impl LatticeElement {
    pub fn as_element(&self) -> &NilElement {
        &self.0
    }

    pub fn into_element(self) -> NilElement {
        self.0
    }
}

/// A point of the projective space, stored with first nonzero coordinate 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectivePoint {
    #[serde(with = "vec_serde")]
    coords: QVec,
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, other: &Self) -> bool {
        slice_eq(&self.coords, &other.coords)
    }
}

impl Eq for ProjectivePoint {}

impl std::hash::Hash for ProjectivePoint {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        hash_slice(&self.coords, h);
    }
}

impl ProjectivePoint {
    pub fn new(v: QVec) -> Result<Self> {
        let i = v.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
        let s = Q::one() / &v[i];
        Ok(ProjectivePoint { coords: vec_scale(&v, &s) })
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(crate::rational::to_f64).collect()
    }

    /// Image under an invertible linear map.
    pub fn apply(&self, m: &QMatrix) -> Result<Self> {
        Self::new(m.mul_vec(&self.coords))
    }
}

#[derive(Clone, Debug)]
pub struct GraphAlgebra {
    graph: GraphSpec,
    partition: CoherentPartition,
    /// All pairs `i < j` of vertices, the basis of Λ²V.
    wedges: Vec<(usize, usize)>,
    bracket_map: QMatrix,
    kernel: Vec<QVec>,
}

impl GraphAlgebra {
    pub fn new(graph: GraphSpec) -> Self {
        let n = graph.vertex_count();
        let wedges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut bracket_map = QMatrix::zeros(graph.edge_count(), wedges.len());
        let mut kernel = Vec::new();
        for (k, &(i, j)) in wedges.iter().enumerate() {
            match graph.edge_index(i, j) {
                Some(e) => bracket_map[(e, k)] = Q::one(),
                None => {
                    let mut u = vec![Q::zero(); wedges.len()];
                    u[k] = Q::one();
                    kernel.push(u);
                }
            }
        }
        let partition = graph.coherent_components();
        GraphAlgebra { graph, partition, wedges, bracket_map, kernel }
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn partition(&self) -> &CoherentPartition {
        &self.partition
    }

    pub fn dim_v(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn dim_w(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn dim(&self) -> usize {
        self.dim_v() + self.dim_w()
    }

    pub fn wedges(&self) -> &[(usize, usize)] {
        &self.wedges
    }

    /// The bracket `Λ²V → W` as a `dimW × C(dimV, 2)` matrix.
    pub fn bracket_map(&self) -> &QMatrix {
        &self.bracket_map
    }

    /// Basis of `ker(Λ²V → W)`: the wedges of non-adjacent vertex pairs.
    pub fn bracket_kernel(&self) -> &[QVec] {
        &self.kernel
    }

    pub fn identity(&self) -> NilElement {
        NilElement::new(vec![Q::zero(); self.dim_v()], vec![Q::zero(); self.dim_w()])
    }

    pub fn basis_v(&self, i: usize) -> NilElement {
        let mut x = self.identity();
        x.v[i] = Q::one();
        x
    }

    pub fn basis_w(&self, e: usize) -> NilElement {
        let mut x = self.identity();
        x.w[e] = Q::one();
        x
    }

    pub fn from_vector(&self, y: &[Q]) -> Result<NilElement> {
        if y.len() != self.dim() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(NilElement::new(y[..self.dim_v()].to_vec(), y[self.dim_v()..].to_vec()))
    }

    pub fn check(&self, x: &NilElement) -> Result<()> {
        if x.v.len() == self.dim_v() && x.w.len() == self.dim_w() {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `[a, b]` for `a, b ∈ V`, as W coordinates.
    pub fn bracket_v(&self, a: &[Q], b: &[Q]) -> QVec {
        self.graph.edges().iter().map(|&(i, j)| &a[i] * &b[j] - &a[j] * &b[i]).collect()
    }

    /// Lie bracket on `N`; W components of the inputs do not contribute.
    pub fn bracket(&self, x: &NilElement, y: &NilElement) -> Result<NilElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(NilElement::new(vec![Q::zero(); self.dim_v()], self.bracket_v(&x.v, &y.v)))
    }

    pub fn multiply(&self, x: &NilElement, y: &NilElement) -> Result<NilElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &NilElement, y: &NilElement) -> NilElement {
        let c = self.bracket_v(&x.v, &y.v);
        let w = x.w.iter().zip(&y.w).zip(&c).map(|((a, b), c)| a + b + c * half()).collect();
        NilElement::new(vec_add(&x.v, &y.v), w)
    }

    pub fn inverse(&self, x: &NilElement) -> Result<NilElement> {
        self.check(x)?;
        Ok(NilElement::new(vec_neg(&x.v), vec_neg(&x.w)))
    }

    pub fn exp(&self, y: &NilElement) -> NilElement {
        y.clone()
    }

    pub fn log(&self, x: &NilElement) -> NilElement {
        x.clone()
    }

    /// `Y₁ ↦ [v, Y₁]` as a `dimW × dimV` matrix.
    pub fn ad_v(&self, v: &[Q]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim_w(), self.dim_v());
        for (e, &(i, j)) in self.graph.edges().iter().enumerate() {
            m[(e, j)] += &v[i];
            m[(e, i)] -= &v[j];
        }
        m
    }

    /// `Ad(n)(Y₁, Y₂) = (Y₁, Y₂ + [v, Y₁])`.
    pub fn adjoint(&self, n: &NilElement) -> Result<QMatrix> {
        self.check(n)?;
        Ok(QMatrix::from_blocks(
            &QMatrix::identity(self.dim_v()),
            &QMatrix::zeros(self.dim_v(), self.dim_w()),
            &self.ad_v(&n.v),
            &QMatrix::identity(self.dim_w()),
        ))
    }

    pub fn lattice_contains(&self, x: &NilElement) -> bool {
        self.check(x).is_ok() && x.v.iter().all(|a| a.is_integer()) && x.w.iter().all(|b| (b * q(2)).is_integer())
    }

    pub fn to_lattice(&self, x: NilElement) -> Option<LatticeElement> {
        self.lattice_contains(&x).then_some(LatticeElement(x))
    }

    /// A generating set of `N_Z`: `(e_a, 0)` and `(0, ½ u_e)`.
    pub fn lattice_generators(&self) -> Vec<NilElement> {
        let mut gens: Vec<NilElement> = (0..self.dim_v()).map(|i| self.basis_v(i)).collect();
        gens.extend((0..self.dim_w()).map(|e| self.basis_w(e).scale(&half())));
        gens
    }

    pub fn in_fundamental_domain(&self, x: &NilElement) -> bool {
        let unit = Q::one();
        let h = half();
        self.check(x).is_ok()
            && x.v.iter().all(|a| !a.is_negative() && *a < unit)
            && x.w.iter().all(|b| !b.is_negative() && *b < h)
    }

    /// `(rep, λ)` with `rep = x·λ ∈ X` and `λ ∈ N_Z`.
    pub fn reduce_mod_lattice(&self, x: &NilElement) -> Result<(NilElement, LatticeElement)> {
        self.check(x)?;
        let a: QVec = x.v.iter().map(|c| -Q::from_integer(c.floor().to_integer())).collect();
        let partial = self.mul_unchecked(x, &NilElement::new(a.clone(), vec![Q::zero(); self.dim_w()]));
        // shift w into [0, ½) by multiples of ½
        let b: QVec = partial.w.iter().map(|c| -Q::from_integer((c * q(2)).floor().to_integer()) * half()).collect();
        let lambda = NilElement::new(a, b);
        let rep = self.mul_unchecked(x, &lambda);
        debug_assert!(self.in_fundamental_domain(&rep));
        Ok((rep, LatticeElement(lambda)))
    }

    /// Projective class of `log(x y⁻¹)`.
    pub fn rho(&self, x: &NilElement, y: &NilElement) -> Result<ProjectivePoint> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Err(Error::DiagonalPoint);
        }
        let r = self.mul_unchecked(x, &self.inverse(y)?);
        ProjectivePoint::new(self.log(&r).to_vector())
    }

    /// Sample from the invariant probability on `N/N_Z`, i.e. Lebesgue on `X`,
    /// with coordinates on the dyadic grid of step `2^-32`.
    pub fn sample_haar(&self, seed: u64) -> NilElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_haar_with(&mut rng)
    }

    pub fn sample_haar_with<R: Rng>(&self, rng: &mut R) -> NilElement {
        let v = (0..self.dim_v()).map(|_| from_f64_floor(rng.gen::<f64>(), 32)).collect();
        let w = (0..self.dim_w()).map(|_| from_f64_floor(rng.gen::<f64>() * 0.5, 32)).collect();
        NilElement::new(v, w)
    }
}

/// Heisenberg coordinates with the law `z + z' + (x y' - x' y)`, from the
/// graph coordinates of `K2`: `(x, y, w) ↦ (x, y, 2w)`. Maps `N_Z` onto `Z³`.
pub fn to_heisenberg_coords(x: &NilElement) -> [Q; 3] {
    [x.v[0].clone(), x.v[1].clone(), &x.w[0] * q(2)]
}

pub fn from_heisenberg_coords(c: &[Q; 3]) -> NilElement {
    NilElement::new(vec![c[0].clone(), c[1].clone()], vec![&c[2] * half()])
}

/// Group law in the Heisenberg coordinates above.
pub fn heisenberg_mul(a: &[Q; 3], b: &[Q; 3]) -> [Q; 3] {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2] + (&a[0] * &b[1] - &b[0] * &a[1])]
}
