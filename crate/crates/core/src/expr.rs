//! Polynomial representatives of analytic map germs.
//!
//! A germ component is stored as a sparse sum of terms `c · x^α` with exact
//! Gaussian rational coefficients and exponent vectors `α ∈ Z₊^n`. Terms are
//! kept in canonical lexicographic order, combined, and zero-pruned, so two
//! equal polynomials always have identical representations.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::coeff::GaussianRational;
use crate::{rat, Rat};

/// A lattice point in `Z₊^n`: a monomial exponent / support point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn new(entries: Vec<u64>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// `c · e_i` in ambient dimension `n`.
    pub fn axis(n: usize, i: usize, c: u64) -> Self {
        let mut v = vec![0; n];
        v[i] = c;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// True when every nonzero entry sits at an index contained in `axes`.
    pub fn supported_on(&self, axes: &[usize]) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, &e)| e == 0 || axes.contains(&i))
    }

    /// Keep only the coordinates listed in `axes`, in their given order.
    pub fn project(&self, axes: &[usize]) -> ExponentVector {
        ExponentVector(axes.iter().map(|&i| self.0[i]).collect())
    }

    /// Componentwise `self ≤ other`.
    pub fn dominated_by(&self, other: &ExponentVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn to_rationals(&self) -> Vec<Rat> {
        self.0.iter().map(|&e| rat(e as i64)).collect()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Errors raised while constructing polynomial values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("polynomial is zero after combining terms")]
    ZeroPolynomial,
    #[error("polynomial has a nonzero constant term; germs must vanish at the origin")]
    ConstantTerm,
    #[error("exponent vector of length {found} in dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map has {p} components but only {n} variables")]
    TooManyComponents { p: usize, n: usize },
}

/// A polynomial representative of a germ component: combined, zero-pruned,
/// constant-free, terms in lexicographic exponent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExpr {
    dim: usize,
    terms: Vec<(ExponentVector, GaussianRational)>,
}

impl PolyExpr {
    /// Build from raw terms, combining equal exponents and dropping zeros.
    pub fn new(
        dim: usize,
        raw: Vec<(ExponentVector, GaussianRational)>,
    ) -> Result<Self, ExprError> {
        let mut sorted = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            if e.dim() != dim {
                return Err(ExprError::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            sorted.push((e, c));
        }
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(ExponentVector, GaussianRational)> = Vec::new();
        for (e, c) in sorted {
            match terms.last_mut() {
                Some((last_e, last_c)) if *last_e == e => {
                    *last_c = &*last_c + &c;
                }
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        if terms.iter().any(|(e, _)| e.is_origin()) {
            return Err(ExprError::ConstantTerm);
        }
        if terms.is_empty() {
            return Err(ExprError::ZeroPolynomial);
        }
        Ok(Self { dim, terms })
    }

    /// Single monomial `c · x^α`.
    pub fn monomial(dim: usize, exponent: ExponentVector, coeff: GaussianRational) -> Self {
        Self::new(dim, vec![(exponent, coeff)]).expect("nonzero non-constant monomial")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(ExponentVector, GaussianRational)] {
        &self.terms
    }

    /// The support: exponents of the (nonzero) terms.
    pub fn support(&self) -> BTreeSet<ExponentVector> {
        self.terms.iter().map(|(e, _)| e.clone()).collect()
    }

    /// Restriction to the coordinate subspace indexed by `axes`, as a
    /// polynomial in `|axes|` variables. `None` when the restriction is
    /// identically zero.
    pub fn restrict(&self, axes: &[usize]) -> Option<PolyExpr> {
        let kept: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e.supported_on(axes))
            .map(|(e, c)| (e.project(axes), c.clone()))
            .collect();
        if kept.is_empty() {
            None
        } else {
            Some(PolyExpr {
                dim: axes.len(),
                terms: kept,
            })
        }
    }

    /// The operator `x_j · ∂/∂x_j`, which preserves supports: each term
    /// `c · x^α` maps to `α_j c · x^α`. `None` when the result is zero.
    pub fn x_del_x(&self, j: usize) -> Option<PolyExpr> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e.0[j] > 0)
            .map(|(e, c)| (e.clone(), c.scale(&rat(e.0[j] as i64))))
            .collect();
        if terms.is_empty() {
            None
        } else {
            Some(PolyExpr {
                dim: self.dim,
                terms,
            })
        }
    }

    /// Multiply every coefficient by a rational scalar; `None` for scalar 0.
    pub fn scale(&self, s: &Rat) -> Option<PolyExpr> {
        use num_traits::Zero;
        if s.is_zero() {
            return None;
        }
        Some(PolyExpr {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(s)))
                .collect(),
        })
    }

    /// Exact sum; `None` when the terms cancel completely.
    pub fn add(&self, other: &PolyExpr) -> Option<PolyExpr> {
        assert_eq!(self.dim, other.dim, "dimension mismatch in addition");
        let mut raw: Vec<(ExponentVector, GaussianRational)> = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        Self::combine(self.dim, raw)
    }

    /// Exact difference; `None` when the two polynomials are equal.
    pub fn sub(&self, other: &PolyExpr) -> Option<PolyExpr> {
        assert_eq!(self.dim, other.dim, "dimension mismatch in subtraction");
        let mut raw: Vec<(ExponentVector, GaussianRational)> = self.terms.clone();
        raw.extend(other.terms.iter().map(|(e, c)| (e.clone(), -c)));
        Self::combine(self.dim, raw)
    }

    fn combine(dim: usize, mut raw: Vec<(ExponentVector, GaussianRational)>) -> Option<PolyExpr> {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(ExponentVector, GaussianRational)> = Vec::new();
        for (e, c) in raw {
            match terms.last_mut() {
                Some((last_e, last_c)) if *last_e == e => *last_c = &*last_c + &c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        if terms.is_empty() {
            None
        } else {
            Some(PolyExpr { dim, terms })
        }
    }

    /// Largest single exponent entry appearing in the support.
    pub fn max_exponent(&self) -> u64 {
        self.terms
            .iter()
            .flat_map(|(e, _)| e.0.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// An analytic map germ `(C^n, 0) -> (C^p, 0)` given by polynomial
/// representatives of its components; `1 ≤ p ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyticMapGerm {
    n: usize,
    components: Vec<PolyExpr>,
}

impl AnalyticMapGerm {
    pub fn new(n: usize, components: Vec<PolyExpr>) -> Result<Self, ExprError> {
        let p = components.len();
        if p == 0 || p > n {
            return Err(ExprError::TooManyComponents { p, n });
        }
        for c in &components {
            if c.dim() != n {
                return Err(ExprError::DimensionMismatch {
                    expected: n,
                    found: c.dim(),
                });
            }
        }
        Ok(Self { n, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[PolyExpr] {
        &self.components
    }

    pub fn max_exponent(&self) -> u64 {
        self.components
            .iter()
            .map(|c| c.max_exponent())
            .max()
            .unwrap_or(0)
    }
}
