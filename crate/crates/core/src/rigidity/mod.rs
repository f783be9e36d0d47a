//! Deciding property (T) relative to the space.
//!
//! The action is rigid exactly when the linear action on the projective space
//! of the Lie algebra admits no invariant probability measure. Both directions
//! are certified by sufficient conditions; anything else is `UNKNOWN`.

pub mod certificate;
pub mod irreducible;
pub mod search;
pub mod spectral;
pub mod words;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::GraphAlgebra;
use crate::automorphism::AffineGenerator;
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, QVec};
use crate::rational::{parse_q, Q};

pub use certificate::{verify_certificate, Certificate};
pub use irreducible::{irreducibility_check, proximality_witness, Irreducibility, ProximalWitness};
pub use search::{common_invariant_line, finite_line_orbit, invariant_pd_form, LineSearch};
pub use words::{Alphabet, Word};

/// Search limits. `max_words` caps every word enumeration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub max_word_length: usize,
    pub orbit_bound: usize,
    pub gap_tol: f64,
    pub max_words: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_word_length: 8, orbit_bound: 10_000, gap_tol: 0.05, max_words: 4096 }
    }
}

impl Budgets {
    /// The tolerance as the rational with the same shortest decimal form.
    pub fn gap_tol_q(&self) -> Q {
        parse_q(&format!("{}", self.gap_tol)).unwrap_or_else(|_| Q::from_float(self.gap_tol).unwrap_or_default())
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_word_length == 0 || self.orbit_bound == 0 || self.max_words == 0 {
            return Err(Error::OutOfRange("budgets must be positive".into()));
        }
        if !(self.gap_tol.is_finite() && self.gap_tol > 0.0) {
            return Err(Error::OutOfRange(format!("gap tolerance {} must be positive", self.gap_tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Rigid,
    NotRigid,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Rigid => "RIGID",
            Status::NotRigid => "NOT_RIGID",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityVerdict {
    #[serde(rename = "verdict")]
    pub status: Status,
    pub criterion: String,
    pub certificate: Option<Certificate>,
    pub assumptions: Vec<String>,
    pub budgets: Budgets,
    pub tests_attempted: Vec<String>,
    /// The equivalent formulations implied by the status.
    pub statements: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Space {
    Nilmanifold(Box<GraphAlgebra>),
    Torus,
    Projective,
}

/// Generators together with their linear actions.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    space: Space,
    dim: usize,
    affine: Vec<AffineGenerator>,
    matrices: Vec<QMatrix>,
    alphabet: Alphabet,
}

fn check_square(dim: usize, mats: &[QMatrix]) -> Result<()> {
    for (i, m) in mats.iter().enumerate() {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "generator {i} is {}x{}, expected {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(())
}

impl GeneratorSet {
    /// Affine generators of the nilmanifold; each must stabilize the lattice.
    pub fn nilmanifold(alg: GraphAlgebra, gens: Vec<AffineGenerator>) -> Result<Self> {
        for (index, g) in gens.iter().enumerate() {
            if !g.verify_lattice_stabilized(&alg) {
                return Err(Error::LatticeNotStabilized { index });
            }
        }
        let matrices: Vec<QMatrix> = gens.iter().map(|g| g.linear_action_on_g(&alg)).collect();
        let dim = alg.dim();
        let alphabet = Alphabet::new(&matrices, dim);
        Ok(GeneratorSet { space: Space::Nilmanifold(Box::new(alg)), dim, affine: gens, matrices, alphabet })
    }

    /// Integer matrices of determinant +-1 acting on the `n`-torus.
    pub fn torus(n: usize, mats: Vec<QMatrix>) -> Result<Self> {
        check_square(n, &mats)?;
        for (index, m) in mats.iter().enumerate() {
            let det = m.det();
            if !m.is_integral() || !(det == Q::from_integer(1.into()) || det == Q::from_integer((-1).into())) {
                return Err(Error::NonUnimodular { index });
            }
        }
        Ok(Self::linear(Space::Torus, n, mats))
    }

    /// Arbitrary invertible rational matrices acting on `P(R^n)`.
    pub fn projective(n: usize, mats: Vec<QMatrix>) -> Result<Self> {
        check_square(n, &mats)?;
        if mats.iter().any(|m| m.inverse().is_none()) {
            return Err(Error::Singular);
        }
        Ok(Self::linear(Space::Projective, n, mats))
    }

    fn linear(space: Space, n: usize, mats: Vec<QMatrix>) -> Self {
        let alphabet = Alphabet::new(&mats, n);
        GeneratorSet { space, dim: n, affine: Vec::new(), matrices: mats, alphabet }
    }

    pub fn mode(&self) -> &'static str {
        match self.space {
            Space::Nilmanifold(_) => "nilmanifold",
            Space::Torus => "torus",
            Space::Projective => "projective",
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn algebra(&self) -> Option<&GraphAlgebra> {
        match &self.space {
            Space::Nilmanifold(a) => Some(a),
            _ => None,
        }
    }

    /// Dimension of the space the matrices act on.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    pub fn affine(&self) -> &[AffineGenerator] {
        &self.affine
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `C M C^-1` for every matrix, as a projective generator set.
    pub fn conjugated(&self, c: &QMatrix) -> Result<GeneratorSet> {
        check_square(self.dim, std::slice::from_ref(c))?;
        let ci = c.inverse().ok_or(Error::Singular)?;
        let mats = self.matrices.iter().map(|m| m.conjugate_by(c, &ci)).collect();
        Self::projective(self.dim, mats)
    }
}

/// Basis of the vectors in W fixed by every `P(g_i)`.
pub fn fixed_vectors_in_derived(gs: &GeneratorSet) -> Result<Vec<QVec>> {
    let alg = gs.algebra().ok_or(Error::ModeMismatch("torus or projective"))?;
    let m = alg.dim_w();
    if m == 0 {
        return Ok(Vec::new());
    }
    if gs.affine.is_empty() {
        return Ok((0..m).map(|i| crate::linalg::unit(m, i)).collect());
    }
    let blocks: Vec<QMatrix> = gs.affine.iter().map(|g| g.linear_part().p_of_g().sub(&QMatrix::identity(m))).collect();
    Ok(QMatrix::vstack(&blocks).nullspace())
}

fn statements(gs: &GeneratorSet, status: Status) -> Vec<String> {
    let has = match status {
        Status::Rigid => "has",
        Status::NotRigid => "does not have",
        Status::Unknown => return Vec::new(),
    };
    let measure = match status {
        Status::Rigid => "there is no Gamma-invariant probability measure on",
        _ => "there is a Gamma-invariant probability measure on",
    };
    match gs.space {
        Space::Nilmanifold(_) => vec![
            format!("the action on N/N_Z {has} property (T) relative to the space"),
            format!("the pair (g* x| Gamma, g*) {has} relative property (T)"),
            format!("{measure} P(g)"),
        ],
        Space::Torus => vec![
            format!("the action on T^n {has} property (T) relative to the space"),
            format!("the pair (Z^n x| Gamma, Z^n) {has} relative property (T)"),
            format!("{measure} P(R^n)"),
        ],
        Space::Projective => vec![format!("{measure} P(R^n)")],
    }
}

fn verdict(
    gs: &GeneratorSet,
    status: Status,
    criterion: &str,
    certificate: Option<Certificate>,
    assumptions: Vec<String>,
    budgets: &Budgets,
    tests_attempted: Vec<String>,
) -> RigidityVerdict {
    RigidityVerdict {
        status,
        criterion: criterion.to_string(),
        certificate,
        assumptions,
        budgets: budgets.clone(),
        tests_attempted,
        statements: statements(gs, status),
    }
}

/// Verdict for a nilmanifold from the fixed vectors of `P(Gamma)` on W.
///
/// A nonzero fixed vector always gives `NOT_RIGID`. With no fixed vector the
/// verdict is `RIGID` only under the asserted Zariski density of `Gamma` in
/// `T x| L`; otherwise the general cascade runs.
pub fn nilmanifold_verdict(
    gs: &GeneratorSet,
    assume_zariski_dense: bool,
    budgets: &Budgets,
) -> Result<RigidityVerdict> {
    let alg = gs.algebra().ok_or(Error::ModeMismatch("torus or projective"))?;
    for (index, g) in gs.affine.iter().enumerate() {
        if !g.block_structure_check(alg.partition()) {
            return Err(Error::BlockStructureViolation { index });
        }
    }
    let fixed = fixed_vectors_in_derived(gs)?;
    if let Some(y) = fixed.into_iter().next() {
        return Ok(verdict(
            gs,
            Status::NotRigid,
            "derived-fixed-vector",
            Some(Certificate::FixedVector { vector: y }),
            Vec::new(),
            budgets,
            vec!["derived fixed vector: found".into()],
        ));
    }
    if assume_zariski_dense {
        let m = alg.dim_w();
        return Ok(verdict(
            gs,
            Status::Rigid,
            "no-derived-fixed-vector",
            Some(Certificate::NoFixedVector { dim_w: m, stacked_rank: m }),
            vec!["zariski-dense".into()],
            budgets,
            vec!["derived fixed vector: none".into()],
        ));
    }
    Ok(general_measure_verdict(gs, budgets))
}

/// Decision cascade on the projective space of the linear actions.
///
/// Tests run in a fixed order and the first one that fires decides:
/// derived fixed vector (nilmanifold only), common eigenline, invariant
/// positive definite form, finite line orbit, and finally a proximal word
/// together with strong irreducibility.
pub fn general_measure_verdict(gs: &GeneratorSet, budgets: &Budgets) -> RigidityVerdict {
    let d = gs.dim();
    let mats = gs.matrices();
    let alpha = gs.alphabet();
    let mut log = Vec::new();
    let done = |status, criterion: &str, cert: Certificate, log: Vec<String>| {
        verdict(gs, status, criterion, Some(cert), Vec::new(), budgets, log)
    };

    if gs.algebra().is_some() {
        let fixed = fixed_vectors_in_derived(gs).unwrap_or_default();
        if let Some(y) = fixed.into_iter().next() {
            log.push("derived fixed vector: found".into());
            return done(Status::NotRigid, "derived-fixed-vector", Certificate::FixedVector { vector: y }, log);
        }
        log.push("derived fixed vector: none".into());
    }

    let line = common_invariant_line(mats, d);
    if let Some((point, eigenvalues)) = line.found {
        log.push("common invariant line: found".into());
        return done(Status::NotRigid, "common-invariant-line", Certificate::InvariantLine { point, eigenvalues }, log);
    }
    log.push(if line.irrational_branch {
        "common invariant line: none with rational eigenvalues; irrational eigenvalue branch inconclusive".into()
    } else {
        "common invariant line: none".into()
    });

    if let Some(form) = invariant_pd_form(alpha, mats, d) {
        log.push("invariant positive definite form: found".into());
        return done(Status::NotRigid, "invariant-pd-form", Certificate::InvariantPDForm { form }, log);
    }
    log.push("invariant positive definite form: none".into());

    let starts = search::orbit_starts(mats, d, 4 * d.max(4));
    for s in &starts {
        if let Some(points) = finite_line_orbit(alpha, s, budgets.orbit_bound) {
            log.push(format!("finite line orbit (bound {}): found, size {}", budgets.orbit_bound, points.len()));
            return done(Status::NotRigid, "finite-line-orbit", Certificate::FiniteLineOrbit { points }, log);
        }
    }
    log.push(format!("finite line orbit from {} starts (bound {}): none", starts.len(), budgets.orbit_bound));

    let irr = irreducibility_check(alpha, budgets.max_word_length, budgets.max_words);
    log.push(format!("irreducibility (words <= {}): {}", budgets.max_word_length, irr.label()));
    let Irreducibility::IrreducibleStrongly { spanning_words, regular_word, conjugators } = irr else {
        log.push("proximal word: skipped, strong irreducibility not established".into());
        return verdict(gs, Status::Unknown, "none", None, Vec::new(), budgets, log);
    };
    let tol = budgets.gap_tol_q();
    match proximality_witness(alpha, budgets.max_word_length, budgets.max_words, &tol) {
        Some(proximal) => {
            log.push(format!("proximal word (length <= {}): found `{}`", budgets.max_word_length, proximal.word));
            let cert =
                Certificate::ProximalIrreducible { proximal, gap_tol: tol, spanning_words, regular_word, conjugators };
            done(Status::Rigid, "proximal-strongly-irreducible", cert, log)
        }
        None => {
            log.push(format!(
                "proximal word (length <= {}, gap >= 1 + {}): none",
                budgets.max_word_length, budgets.gap_tol
            ));
            verdict(gs, Status::Unknown, "none", None, Vec::new(), budgets, log)
        }
    }
}

/// Verdict for integer matrices of determinant +-1 acting on the `n`-torus.
pub fn torus_verdict(n: usize, mats: Vec<QMatrix>, budgets: &Budgets) -> Result<RigidityVerdict> {
    let gs = GeneratorSet::torus(n, mats)?;
    Ok(general_measure_verdict(&gs, budgets))
}
