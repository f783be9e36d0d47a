//! Built-in examples with their standard integral generators.

use crate::algebra::GraphAlgebra;
use crate::automorphism::{elementary, AffineGenerator};
use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::linalg::QMatrix;
use crate::rigidity::GeneratorSet;

pub const MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Heisenberg,
    Complete(usize),
    Star(usize),
    TorusF2,
}

impl Example {
    /// Parses `heisenberg`, `complete:n`, `star:n` or `torus-f2`.
    pub fn parse(name: &str) -> Result<Self> {
        let sized = |arg: &str, min: usize| -> Result<usize> {
            let n: usize = arg.parse().map_err(|_| Error::UnknownExample(name.to_string()))?;
            if n < min || n > MAX_N {
                return Err(Error::OutOfRange(format!("{name}: n must lie in {min}..={MAX_N}")));
            }
            Ok(n)
        };
        match name.split_once(':') {
            None if name == "heisenberg" => Ok(Example::Heisenberg),
            None if name == "torus-f2" => Ok(Example::TorusF2),
            Some(("complete", n)) => Ok(Example::Complete(sized(n, 2)?)),
            Some(("star", n)) => Ok(Example::Star(sized(n, 2)?)),
            _ => Err(Error::UnknownExample(name.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Example::Heisenberg => "heisenberg".into(),
            Example::Complete(n) => format!("complete:{n}"),
            Example::Star(n) => format!("star:{n}"),
            Example::TorusF2 => "torus-f2".into(),
        }
    }

    /// The graph, for nilmanifold examples.
    pub fn graph(&self) -> Option<GraphSpec> {
        match self {
            Example::Heisenberg => Some(GraphSpec::complete(2)),
            Example::Complete(n) => Some(GraphSpec::complete(*n)),
            Example::Star(n) => Some(GraphSpec::star(*n)),
            Example::TorusF2 => None,
        }
    }

    /// Whether Zariski density in `T x| L` is asserted for the generators.
    /// They generate a lattice of `T x| L`, which is Zariski dense by Borel's
    /// density theorem.
    pub fn zariski_dense(&self) -> bool {
        self.graph().is_some()
    }

    pub fn build(&self) -> Result<GeneratorSet> {
        match self.graph() {
            Some(g) => {
                let alg = GraphAlgebra::new(g);
                let gens = standard_generators(&alg)?;
                GeneratorSet::nilmanifold(alg, gens)
            }
            None => GeneratorSet::torus(2, torus_f2_matrices()),
        }
    }
}

pub fn torus_f2_matrices() -> Vec<QMatrix> {
    vec![QMatrix::from_i64(&[&[1, 2], &[0, 1]]), QMatrix::from_i64(&[&[1, 0], &[2, 1]])]
}

/// `E_{i,i+1}(1)` and `E_{i+1,i}(1)` for consecutive members of each coherent
/// class of size at least 2, then the unit shears `theta = e_{edge, vertex}`.
pub fn standard_generators(alg: &GraphAlgebra) -> Result<Vec<AffineGenerator>> {
    let n = alg.dim_v();
    let mut out = Vec::new();
    for cls in alg.partition().classes() {
        for pair in cls.windows(2) {
            out.push(AffineGenerator::linear(alg, elementary(n, pair[0], pair[1]))?);
            out.push(AffineGenerator::linear(alg, elementary(n, pair[1], pair[0]))?);
        }
    }
    for e in 0..alg.dim_w() {
        for v in 0..n {
            let mut theta = QMatrix::zeros(alg.dim_w(), n);
            theta[(e, v)] = num_traits::One::one();
            out.push(AffineGenerator::shear(alg, theta)?);
        }
    }
    Ok(out)
}
