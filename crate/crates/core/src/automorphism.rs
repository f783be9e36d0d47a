//! `Aut(N) = T ⋊ G` and the affine group `N ⋊ Aut(N)` for graph algebras.
//!
//! An automorphism is stored as a shear `θ ∈ Hom(V, W)` and a linear part
//! `g ∈ GL(V)`; on `N = V ⊕ W` it is the block matrix `[[g, 0], [θ g, P(g)]]`,
//! i.e. first `g` (with its induced map `P(g)` on `W`), then the shear
//! `t_θ(x) = x + θ(π(x))`. An affine generator `x ↦ n·σ(x)` adds a translation
//! `n ∈ N`.

use crate::algebra::{GraphAlgebra, LatticeElement, NilElement};
use crate::error::{Error, Result};
use crate::graph::CoherentPartition;
use crate::linalg::{vec_is_zero, QMatrix, QVec};

/// `t_θ` for `θ ∈ Hom(V, W)`, a `dimW × dimV` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shear {
    theta: QMatrix,
}

impl Shear {
    pub fn new(alg: &GraphAlgebra, theta: QMatrix) -> Result<Self> {
        if theta.nrows() != alg.dim_w() || theta.ncols() != alg.dim_v() {
            return Err(Error::DimensionMismatch(format!(
                "shear must be {}x{}, got {}x{}",
                alg.dim_w(),
                alg.dim_v(),
                theta.nrows(),
                theta.ncols()
            )));
        }
        Ok(Shear { theta })
    }

    pub fn zero(alg: &GraphAlgebra) -> Self {
        Shear { theta: QMatrix::zeros(alg.dim_w(), alg.dim_v()) }
    }

    pub fn theta(&self) -> &QMatrix {
        &self.theta
    }

    /// `t_θ` as a matrix on `N`.
    pub fn matrix(&self, alg: &GraphAlgebra) -> QMatrix {
        QMatrix::from_blocks(
            &QMatrix::identity(alg.dim_v()),
            &QMatrix::zeros(alg.dim_v(), alg.dim_w()),
            &self.theta,
            &QMatrix::identity(alg.dim_w()),
        )
    }
}

/// `g ∈ GL(V)` together with the induced map `P(g)` on `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart {
    g: QMatrix,
    p_of_g: QMatrix,
}

impl LinearPart {
    pub fn new(alg: &GraphAlgebra, g: QMatrix) -> Result<Self> {
        let p_of_g = induced_derived_map(alg, &g)?;
        Ok(LinearPart { g, p_of_g })
    }

    pub fn identity(alg: &GraphAlgebra) -> Self {
        LinearPart { g: QMatrix::identity(alg.dim_v()), p_of_g: QMatrix::identity(alg.dim_w()) }
    }

    pub fn g(&self) -> &QMatrix {
        &self.g
    }

    pub fn p_of_g(&self) -> &QMatrix {
        &self.p_of_g
    }
}

/// `P(g)`, defined by `P(g) u_ab = [g u_a, g u_b]`.
///
/// `g` extends to an automorphism exactly when `[g u_a, g u_b] = 0` for every
/// non-adjacent pair, i.e. when `Λ²g` preserves the bracket kernel.
pub fn induced_derived_map(alg: &GraphAlgebra, g: &QMatrix) -> Result<QMatrix> {
    let n = alg.dim_v();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch(format!("linear part must be {n}x{n}")));
    }
    if g.det() == num_traits::Zero::zero() {
        return Err(Error::Singular);
    }
    let cols: Vec<QVec> = (0..n).map(|i| g.col(i)).collect();
    let graph = alg.graph();
    for &(i, j) in alg.wedges() {
        if !graph.adjacent(i, j) && !vec_is_zero(&alg.bracket_v(&cols[i], &cols[j])) {
            return Err(Error::NotBracketCompatible);
        }
    }
    let images: Vec<QVec> = graph.edges().iter().map(|&(i, j)| alg.bracket_v(&cols[i], &cols[j])).collect();
    Ok(QMatrix::from_columns(&images, alg.dim_w()))
}

/// Whether a full `(dimV + dimW)`-square matrix is an automorphism of `N`.
pub fn is_automorphism(alg: &GraphAlgebra, m: &QMatrix) -> bool {
    let d = alg.dim();
    if m.nrows() != d || m.ncols() != d || m.inverse().is_none() {
        return false;
    }
    let img: Vec<NilElement> = (0..d).map(|k| alg.from_vector(&m.col(k)).expect("dimension checked")).collect();
    let basis: Vec<NilElement> =
        (0..d).map(|k| alg.from_vector(&crate::linalg::unit(d, k)).expect("dimension checked")).collect();
    for a in 0..d {
        for b in a + 1..d {
            let lhs = m.mul_vec(&alg.bracket(&basis[a], &basis[b]).expect("same algebra").to_vector());
            let rhs = alg.bracket(&img[a], &img[b]).expect("same algebra").to_vector();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// An element `x ↦ n·σ(x)` of `N ⋊ Aut(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineGenerator {
    translation: NilElement,
    shear: Shear,
    linear: LinearPart,
}

impl AffineGenerator {
    pub fn assemble(alg: &GraphAlgebra, translation: NilElement, theta: QMatrix, g: QMatrix) -> Result<Self> {
        alg.check(&translation)?;
        Ok(AffineGenerator { translation, shear: Shear::new(alg, theta)?, linear: LinearPart::new(alg, g)? })
    }

    pub fn from_parts(alg: &GraphAlgebra, translation: NilElement, shear: Shear, linear: LinearPart) -> Result<Self> {
        alg.check(&translation)?;
        Ok(AffineGenerator { translation, shear, linear })
    }

    pub fn identity(alg: &GraphAlgebra) -> Self {
        AffineGenerator { translation: alg.identity(), shear: Shear::zero(alg), linear: LinearPart::identity(alg) }
    }

    pub fn linear(alg: &GraphAlgebra, g: QMatrix) -> Result<Self> {
        Self::assemble(alg, alg.identity(), QMatrix::zeros(alg.dim_w(), alg.dim_v()), g)
    }

    pub fn shear(alg: &GraphAlgebra, theta: QMatrix) -> Result<Self> {
        Self::assemble(alg, alg.identity(), theta, QMatrix::identity(alg.dim_v()))
    }

    pub fn translation(alg: &GraphAlgebra, n: NilElement) -> Result<Self> {
        Self::from_parts(alg, n, Shear::zero(alg), LinearPart::identity(alg))
    }

    pub fn translation_part(&self) -> &NilElement {
        &self.translation
    }

    pub fn shear_part(&self) -> &Shear {
        &self.shear
    }

    pub fn linear_part(&self) -> &LinearPart {
        &self.linear
    }

    /// `dσ_e = σ` as a matrix on `N`: `[[g, 0], [θ g, P(g)]]`.
    pub fn automorphism_matrix(&self) -> QMatrix {
        let g = &self.linear.g;
        QMatrix::from_blocks(
            g,
            &QMatrix::zeros(g.nrows(), self.linear.p_of_g.ncols()),
            &self.shear.theta.mul(g),
            &self.linear.p_of_g,
        )
    }

    /// `Ad(n) ∘ dσ_e`, the induced linear action on the Lie algebra.
    pub fn linear_action_on_g(&self, alg: &GraphAlgebra) -> QMatrix {
        alg.adjoint(&self.translation).expect("translation checked at construction").mul(&self.automorphism_matrix())
    }

    pub fn apply_automorphism(&self, alg: &GraphAlgebra, x: &NilElement) -> Result<NilElement> {
        alg.check(x)?;
        alg.from_vector(&self.automorphism_matrix().mul_vec(&x.to_vector()))
    }

    /// `x ↦ n·σ(x)` on `N`.
    pub fn apply(&self, alg: &GraphAlgebra, x: &NilElement) -> Result<NilElement> {
        let s = self.apply_automorphism(alg, x)?;
        alg.multiply(&self.translation, &s)
    }

    /// Action on `N/N_Z` through the fundamental domain: returns the reduced
    /// image `n·σ(x)·ω` and the cocycle `ω ∈ N_Z`.
    pub fn act_on_nilmanifold(&self, alg: &GraphAlgebra, x: &NilElement) -> Result<(NilElement, LatticeElement)> {
        let y = self.apply(alg, x)?;
        alg.reduce_mod_lattice(&y)
    }

    /// `self ∘ other`.
    pub fn compose(&self, alg: &GraphAlgebra, other: &AffineGenerator) -> Result<Self> {
        let translation = alg.multiply(&self.translation, &self.apply_automorphism(alg, &other.translation)?)?;
        let g = self.linear.g.mul(&other.linear.g);
        let p_of_g = self.linear.p_of_g.mul(&other.linear.p_of_g);
        // θ = θ_a + P(g_a) θ_b g_a⁻¹
        let ga_inv = self.linear.g.inverse().ok_or(Error::Singular)?;
        let theta = self.shear.theta.add(&self.linear.p_of_g.mul(&other.shear.theta).mul(&ga_inv));
        Ok(AffineGenerator { translation, shear: Shear { theta }, linear: LinearPart { g, p_of_g } })
    }

    pub fn invert(&self, alg: &GraphAlgebra) -> Result<Self> {
        let g_inv = self.linear.g.inverse().ok_or(Error::Singular)?;
        let p_inv = self.linear.p_of_g.inverse().ok_or(Error::Singular)?;
        // θ' = -P(g)⁻¹ θ g
        let theta = p_inv.mul(&self.shear.theta).mul(&self.linear.g).neg();
        let sigma_inv = AffineGenerator {
            translation: alg.identity(),
            shear: Shear { theta },
            linear: LinearPart { g: g_inv, p_of_g: p_inv },
        };
        let translation = sigma_inv.apply_automorphism(alg, &alg.inverse(&self.translation)?)?;
        Ok(AffineGenerator { translation, ..sigma_inv })
    }

    /// Whether the automorphism part maps `N_Z` onto itself.
    pub fn verify_lattice_stabilized(&self, alg: &GraphAlgebra) -> bool {
        let m = self.automorphism_matrix();
        let Some(m_inv) = m.inverse() else {
            return false;
        };
        alg.lattice_generators().iter().all(|x| {
            let v = x.to_vector();
            [&m, &m_inv]
                .iter()
                .all(|mm| alg.from_vector(&mm.mul_vec(&v)).map(|y| alg.lattice_contains(&y)).unwrap_or(false))
        })
    }

    /// Whether `g` is block diagonal over the coherent components with every
    /// block of determinant 1, i.e. whether the automorphism lies in `T ⋊ L`.
    pub fn block_structure_check(&self, partition: &CoherentPartition) -> bool {
        let g = &self.linear.g;
        let n = g.nrows();
        for i in 0..n {
            for j in 0..n {
                if partition.class_of(i) != partition.class_of(j) && !num_traits::Zero::is_zero(&g[(i, j)]) {
                    return false;
                }
            }
        }
        partition.classes().iter().all(|cls| {
            let mut b = QMatrix::zeros(cls.len(), cls.len());
            for (a, &i) in cls.iter().enumerate() {
                for (c, &j) in cls.iter().enumerate() {
                    b[(a, c)] = g[(i, j)].clone();
                }
            }
            num_traits::One::is_one(&b.det())
        })
    }
}

/// `E_{ij}(1)` of size `n`: identity plus a 1 in row `i`, column `j`.
pub fn elementary(n: usize, i: usize, j: usize) -> QMatrix {
    let mut m = QMatrix::identity(n);
    m[(i, j)] = num_traits::One::one();
    m
}
