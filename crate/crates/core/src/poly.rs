//! Univariate polynomials over the rationals, with Sturm-sequence root
//! isolation and an exact rational-root finder.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, q, to_f64, Q};

/// Coefficients in ascending degree order; trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})x^{}", fmt_q(c), i))
            .collect();
        write!(f, "QPoly[{}]", if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.clone(), Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lc = d.leading();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free(&self) -> QPoly {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Standard Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain.retain(|p| !p.is_zero());
        chain
    }

    /// Cauchy bound: every root has modulus strictly below the returned value.
    pub fn root_bound(&self) -> Q {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Q::zero);
        m + Q::one()
    }

    /// Roots that are rational numbers, without multiplicity, in increasing order.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let sf = self.square_free();
        let prim = primitive_integer_coeffs(&sf);
        let lead = prim.last().cloned().unwrap().abs();
        let lead_q = Q::from_integer(lead.clone());
        let sturm = sf.sturm_chain();
        let mut out = Vec::new();
        for iv in isolate_with_chain(&sf, &sturm) {
            if iv.is_exact() {
                out.push(iv.lo.clone());
                continue;
            }
            // a rational root p/q has q | lead, hence lies on the grid (1/lead)Z
            let spacing = Q::one() / &lead_q;
            let iv = refine_with_chain(&sf, &sturm, iv, &spacing);
            if iv.is_exact() {
                out.push(iv.lo.clone());
                continue;
            }
            let k_lo = (&iv.lo * &lead_q).ceil().to_integer();
            let k_hi = (&iv.hi * &lead_q).floor().to_integer();
            let mut k = k_lo;
            while k <= k_hi {
                let cand = Q::new(k.clone(), lead.clone());
                if cand > iv.lo && sf.eval(&cand).is_zero() {
                    out.push(cand);
                }
                k += 1;
            }
        }
        out.sort();
        out
    }

    /// Isolating intervals for the distinct real roots, increasing.
    pub fn real_root_intervals(&self) -> Vec<RootInterval> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let sf = self.square_free();
        let chain = sf.sturm_chain();
        isolate_with_chain(&sf, &chain)
    }

    pub fn count_distinct_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let sf = self.square_free();
        let chain = sf.sturm_chain();
        let b = sf.root_bound();
        variations(&chain, &-b.clone()) - variations(&chain, &b)
    }

    /// Multiplicity of the root isolated by `iv` (an isolating interval of
    /// the square-free part).
    pub fn multiplicity_in(&self, iv: &RootInterval) -> usize {
        // roots of gcd(g, g') are the roots of g of multiplicity >= 2, so the
        // interval stays isolating for every polynomial in the chain
        let mut g = self.clone();
        let mut m = 0;
        while g.degree() > 0 {
            let has = if iv.is_exact() {
                g.eval(&iv.lo).is_zero()
            } else {
                let chain = g.square_free().sturm_chain();
                variations(&chain, &iv.lo) > variations(&chain, &iv.hi)
            };
            if !has {
                break;
            }
            m += 1;
            g = g.gcd(&g.derivative());
        }
        m
    }

    /// Numerical roots (Durand–Kerner), for diagnostics and the numerical
    /// certification path only.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lc = to_f64(&self.leading());
        let c: Vec<f64> = self.coeffs.iter().map(|x| to_f64(x) / lc).collect();
        let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
        let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (radius / 2.0).max(1.0)).collect();
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..n {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        den *= z[i] - z[j];
                    }
                }
                if den.norm() == 0.0 {
                    den = Complex64::new(1e-12, 0.0);
                }
                let step = eval(z[i]) / den;
                z[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 * radius {
                break;
            }
        }
        z
    }
}

/// A real root inside `(lo, hi]`, or exactly `lo` when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    /// Bounds on `|root|`.
    pub fn abs_bounds(&self) -> (Q, Q) {
        if self.lo.is_negative() && self.hi.is_positive() {
            (Q::zero(), self.lo.abs().max(self.hi.abs()))
        } else {
            let (a, b) = (self.lo.abs(), self.hi.abs());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

fn variations(chain: &[QPoly], x: &Q) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in chain {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn isolate_with_chain(sf: &QPoly, chain: &[QPoly]) -> Vec<RootInterval> {
    let b = sf.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = variations(chain, &lo) - variations(chain, &hi);
        match n {
            0 => {}
            1 => {
                if sf.eval(&hi).is_zero() {
                    out.push(RootInterval { lo: hi.clone(), hi });
                } else {
                    out.push(RootInterval { lo, hi });
                }
            }
            _ => {
                let mid = (&lo + &hi) / q(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Bisect until the width is at most `width` (or the root is hit exactly).
pub fn refine_with_chain(sf: &QPoly, chain: &[QPoly], mut iv: RootInterval, width: &Q) -> RootInterval {
    while !iv.is_exact() && iv.width() > *width {
        let mid = (&iv.lo + &iv.hi) / q(2);
        if sf.eval(&mid).is_zero() {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if variations(chain, &iv.lo) - variations(chain, &mid) == 1 {
            iv.hi = mid;
        } else {
            iv.lo = mid;
        }
    }
    iv
}

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive_integer_coeffs(p: &QPoly) -> Vec<BigInt> {
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}
