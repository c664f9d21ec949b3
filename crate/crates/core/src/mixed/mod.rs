//! Mixed covolumes and mixed Newton numbers.
//!
//! The covolume of a scaled Minkowski sum `λ_1 Γ_1 + ... + λ_p Γ_p` of
//! convenient Newton polyhedra in dimension `d` is a homogeneous degree-`d`
//! polynomial in `λ`. Its coefficients, divided by the multinomials
//! `d!/(k_1!···k_p!)`, are the mixed covolumes. They are recovered here by
//! exact interpolation: evaluate the covolume at enough positive integer
//! weight tuples, solve the linear system, and verify the reconstruction on
//! held-out tuples (a mandatory self-check — any mismatch aborts).
//!
//! The mixed Newton number assembles them over coordinate subspaces:
//!
//! `ν(Γ_1..Γ_p) = Σ_{j=p..n} (-1)^{n-j} Σ_{|I|=j} j! a_j(I)  +  (-1)^{n-p+1}`
//!
//! with `a_j(I)` the sum of the `j`-dimensional mixed covolumes of the
//! restrictions to `R^I` over compositions with every part positive. For
//! non-convenient input the polyhedra are first extended by axis monomials
//! `N·e_j`; the value is accepted once doubling `N` stops changing it.

mod interpolate;
mod report;
mod sums;

pub use report::NewtonNumberReport;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::AnalyticMapGerm;
use crate::polytope::{newton_polyhedron, NewtonPolyhedron, PolytopeError};
use crate::volume::{covolume, VolumeError};
use crate::{rat, rat_string, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("component {component} is not convenient")]
    NonConvenient { component: usize },
    #[error("{p} components exceed the ambient dimension {n}")]
    TooManyComponents { p: usize, n: usize },
    #[error("polyhedra must share one ambient dimension")]
    DimensionMismatch,
    #[error("interpolation system is singular; covolume data is inconsistent")]
    SingularInterpolation,
    #[error(
        "covolume is not the interpolated polynomial at weights {lambda:?}: \
         expected {expected}, got {actual}"
    )]
    PolynomialityViolation {
        lambda: Vec<u64>,
        expected: String,
        actual: String,
    },
    #[error("no stabilization after {} extension steps; trace: {}", trace.len(), format_trace(trace))]
    NoStabilization { trace: Vec<(u64, Rat)> },
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn format_trace(trace: &[(u64, Rat)]) -> String {
    trace
        .iter()
        .map(|(n, v)| format!("N={n}: {}", rat_string(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Mixed covolumes of a tuple of convenient polyhedra in dimension `d`,
/// indexed by compositions `(k_1..k_p)` with `k_i >= 0`, `Σ k_i = d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedCovolumeTable {
    dim: usize,
    p: usize,
    entries: BTreeMap<Vec<u64>, Rat>,
}

impl MixedCovolumeTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, composition: &[u64]) -> Option<&Rat> {
        self.entries.get(composition)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u64>, &Rat)> {
        self.entries.iter()
    }

    /// Sum of entries over compositions with every part at least one.
    pub fn all_parts_positive_sum(&self) -> Rat {
        self.entries
            .iter()
            .filter(|(k, _)| k.iter().all(|&x| x >= 1))
            .map(|(_, v)| v.clone())
            .sum()
    }
}

/// Enumerate compositions of `total` into `parts` non-negative parts,
/// lexicographically.
pub(crate) fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; parts];
    fn rec(total: u64, at: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if at + 1 == current.len() {
            current[at] = total;
            out.push(current.clone());
            return;
        }
        for v in 0..=total {
            current[at] = v;
            rec(total - v, at + 1, current, out);
        }
    }
    rec(total, 0, &mut current, &mut out);
    out
}

/// Compute the table of mixed covolumes of convenient polyhedra by exact
/// interpolation of the covolume of their scaled Minkowski sums, with the
/// held-out polynomiality check built in.
pub fn mixed_covolumes(polys: &[&NewtonPolyhedron]) -> Result<MixedCovolumeTable, EngineError> {
    validate_tuple(polys)?;
    let family = sums::SumFamily::new(polys);
    mixed_covolumes_of_family(&family)
}

fn mixed_covolumes_of_family(family: &sums::SumFamily) -> Result<MixedCovolumeTable, EngineError> {
    let d = family.dim();
    let p = family.p();

    if p == 1 {
        // Single polyhedron: the only composition is (d) and the covolume
        // polynomial is covol(Γ)·λ^d. Verify scaling on held-out weights.
        let base = family.covolume_at(&[1])?;
        for lambda in 2..=11u64 {
            let expected = &base * pow_rat(lambda, d);
            let actual = family.covolume_at(&[lambda])?;
            if expected != actual {
                return Err(EngineError::PolynomialityViolation {
                    lambda: vec![lambda],
                    expected: rat_string(&expected),
                    actual: rat_string(&actual),
                });
            }
        }
        let mut entries = BTreeMap::new();
        entries.insert(vec![d as u64], base);
        return Ok(MixedCovolumeTable { dim: d, p, entries });
    }

    let comps = compositions(d as u64, p);
    let coeffs = interpolate::solve(family, &comps)?;

    // Held-out check: ten fresh tuples with last weight 2 (the grid fixes
    // it to 1, so freshness is automatic).
    for lambda in held_out_tuples(d, p) {
        let expected = evaluate_polynomial(&comps, &coeffs, &lambda);
        let actual = family.covolume_at(&lambda)?;
        if expected != actual {
            return Err(EngineError::PolynomialityViolation {
                lambda,
                expected: rat_string(&expected),
                actual: rat_string(&actual),
            });
        }
    }

    // Divide out the multinomials d!/(k_1!...k_p!).
    let d_fact = factorial(d as u64);
    let mut entries = BTreeMap::new();
    for (k, c) in comps.iter().zip(coeffs) {
        let mut k_fact = Rat::one();
        for &ki in k {
            k_fact *= factorial(ki);
        }
        entries.insert(k.clone(), c * &k_fact / &d_fact);
    }
    Ok(MixedCovolumeTable { dim: d, p, entries })
}

fn held_out_tuples(d: usize, p: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(10);
    let width = (d + 1) as u64;
    for t in 0..10u64 {
        let mut lambda = Vec::with_capacity(p);
        for slot in 0..p - 1 {
            lambda.push(1 + (t + slot as u64 * 3) % width.max(2));
        }
        lambda.push(2);
        out.push(lambda);
    }
    out.sort();
    out.dedup();
    let mut t = 0u64;
    while out.len() < 10 {
        // Pad with strictly increasing first coordinates, still off-grid.
        let mut lambda = vec![1; p];
        lambda[0] = width + 1 + t;
        lambda[p - 1] = 2;
        if !out.contains(&lambda) {
            out.push(lambda);
        }
        t += 1;
    }
    out
}

fn evaluate_polynomial(comps: &[Vec<u64>], coeffs: &[Rat], lambda: &[u64]) -> Rat {
    let mut total = Rat::zero();
    for (k, c) in comps.iter().zip(coeffs) {
        let mut term = c.clone();
        for (&ki, &li) in k.iter().zip(lambda) {
            term *= pow_rat(li, ki as usize);
        }
        total += term;
    }
    total
}

pub(crate) fn pow_rat(base: u64, exp: usize) -> Rat {
    let mut out = Rat::one();
    for _ in 0..exp {
        out *= rat(base as i64);
    }
    out
}

pub(crate) fn factorial(n: u64) -> Rat {
    let mut out = Rat::one();
    for k in 2..=n {
        out *= rat(k as i64);
    }
    out
}

fn validate_tuple(polys: &[&NewtonPolyhedron]) -> Result<(), EngineError> {
    assert!(!polys.is_empty(), "at least one polyhedron required");
    let d = polys[0].dim();
    for p in polys {
        if p.dim() != d {
            return Err(EngineError::DimensionMismatch);
        }
    }
    for (i, p) in polys.iter().enumerate() {
        if !p.is_convenient() {
            return Err(EngineError::NonConvenient { component: i + 1 });
        }
    }
    Ok(())
}

/// All `j`-element subsets of `0..n`, in lexicographic order.
pub(crate) fn subsets(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..j).collect();
    if j == 0 || j > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // Advance the combination.
        let mut i = j;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - j {
                break;
            }
        }
        if current[i] == i + n - j {
            return out;
        }
        current[i] += 1;
        for k in (i + 1)..j {
            current[k] = current[k - 1] + 1;
        }
    }
}

/// The mixed Newton number of a tuple of convenient polyhedra.
pub fn newton_number(polys: &[&NewtonPolyhedron]) -> Result<NewtonNumberReport, EngineError> {
    validate_tuple(polys)?;
    let n = polys[0].dim();
    let p = polys.len();
    if p > n {
        return Err(EngineError::TooManyComponents { p, n });
    }

    let mut per_subset: Vec<(Vec<usize>, Rat)> = Vec::new();
    let mut tables: Vec<(Vec<usize>, MixedCovolumeTable)> = Vec::new();
    for j in p..=n {
        let sign = if (n - j).is_multiple_of(2) {
            rat(1)
        } else {
            rat(-1)
        };
        let j_fact = factorial(j as u64);
        for subset in subsets(n, j) {
            let restricted: Vec<NewtonPolyhedron> = polys
                .iter()
                .map(|g| {
                    g.restrict(&subset)
                        .expect("restriction of a convenient polyhedron is nonempty")
                })
                .collect();
            let refs: Vec<&NewtonPolyhedron> = restricted.iter().collect();
            let table = mixed_covolumes(&refs)?;
            let a_j = table.all_parts_positive_sum();
            let contribution = &sign * &j_fact * a_j;
            let one_based: Vec<usize> = subset.iter().map(|i| i + 1).collect();
            per_subset.push((one_based.clone(), contribution));
            tables.push((one_based, table));
        }
    }

    let constant_term: i64 = if (n - p + 1).is_multiple_of(2) { 1 } else { -1 };
    let nu: Rat = per_subset.iter().map(|(_, c)| c.clone()).sum::<Rat>() + rat(constant_term);

    Ok(NewtonNumberReport::assemble(
        n,
        p,
        nu,
        per_subset,
        vec![true; p],
        None,
        Vec::new(),
        constant_term,
        tables,
    ))
}

/// Direct evaluation of the alternating covolume sum for a single convenient
/// polyhedron (the classical Newton number):
/// `Σ_{i=0..n} (-1)^{n-i} i! Σ_{|I|=i} covol_i(Γ ∩ R^I)`, with the empty
/// subset contributing 1. Must agree with [`newton_number`] at `p = 1`.
pub fn kouchnirenko_number(poly: &NewtonPolyhedron) -> Result<Rat, EngineError> {
    Ok(kouchnirenko_report(poly)?.nu)
}

/// [`kouchnirenko_number`] with the per-subset breakdown kept, bypassing the
/// interpolation machinery entirely (each term is a direct covolume).
pub fn kouchnirenko_report(poly: &NewtonPolyhedron) -> Result<NewtonNumberReport, EngineError> {
    if !poly.is_convenient() {
        return Err(EngineError::NonConvenient { component: 1 });
    }
    let n = poly.dim();
    let constant_term: i64 = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut per_subset: Vec<(Vec<usize>, Rat)> = Vec::new();
    for i in 1..=n {
        let sign = if (n - i).is_multiple_of(2) {
            rat(1)
        } else {
            rat(-1)
        };
        let i_fact = factorial(i as u64);
        for subset in subsets(n, i) {
            let restricted = poly
                .restrict(&subset)
                .expect("restriction of a convenient polyhedron is nonempty");
            let contribution = &sign * &i_fact * covolume(&restricted)?;
            per_subset.push((subset.iter().map(|k| k + 1).collect(), contribution));
        }
    }
    let nu: Rat = per_subset.iter().map(|(_, c)| c.clone()).sum::<Rat>() + rat(constant_term);
    Ok(NewtonNumberReport::assemble(
        n,
        1,
        nu,
        per_subset,
        vec![true],
        None,
        Vec::new(),
        constant_term,
        Vec::new(),
    ))
}

/// Add the axis point `N·e_j` to every component missing axis `j`; already
/// convenient components are returned unchanged.
pub fn extend_to_convenient(polys: &[NewtonPolyhedron], n_exp: u64) -> Vec<NewtonPolyhedron> {
    assert!(n_exp >= 1, "extension exponent must be positive");
    polys
        .iter()
        .map(|g| {
            let n = g.dim();
            let missing: Vec<usize> = (0..n)
                .filter(|&i| !g.generators().iter().any(|v| v.supported_on(&[i])))
                .collect();
            if missing.is_empty() {
                return g.clone();
            }
            let gens = g.generators().iter().cloned().chain(
                missing
                    .into_iter()
                    .map(|i| crate::expr::ExponentVector::axis(n, i, n_exp)),
            );
            NewtonPolyhedron::reduced(gens, n).expect("extension keeps generators nonempty")
        })
        .collect()
}

/// Doubling policy for the non-convenient evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilizationPolicy {
    /// First extension exponent tried.
    pub initial: u64,
    /// Number of doublings allowed beyond the initial exponent.
    pub max_doublings: u32,
}

impl StabilizationPolicy {
    /// Default: start at `n·(1 + max exponent in any support)`, cap at
    /// eight doublings.
    pub fn for_supports(n: usize, max_exponent: u64) -> Self {
        Self {
            initial: (n as u64) * (1 + max_exponent),
            max_doublings: 8,
        }
    }
}

/// Mixed Newton number of possibly non-convenient polyhedra: evaluate on
/// axis-extended polyhedra for `N, 2N, 4N, ...` and accept the first value
/// that survives a doubling unchanged. Non-stabilization is an explicit
/// error carrying the full trace.
pub fn newton_number_nonconvenient(
    polys: &[&NewtonPolyhedron],
    policy: StabilizationPolicy,
) -> Result<NewtonNumberReport, EngineError> {
    assert!(!polys.is_empty(), "at least one polyhedron required");
    let n = polys[0].dim();
    let p = polys.len();
    if p > n {
        return Err(EngineError::TooManyComponents { p, n });
    }
    for g in polys {
        if g.dim() != n {
            return Err(EngineError::DimensionMismatch);
        }
    }

    let convenient_flags: Vec<bool> = polys.iter().map(|g| g.is_convenient()).collect();
    if convenient_flags.iter().all(|&c| c) {
        let report = newton_number(polys)?;
        let trace = vec![(policy.initial, report.nu.clone())];
        return Ok(report.with_stabilization(convenient_flags, None, trace));
    }

    let owned: Vec<NewtonPolyhedron> = polys.iter().map(|g| (*g).clone()).collect();
    let mut trace: Vec<(u64, Rat)> = Vec::new();
    let mut previous: Option<(u64, NewtonNumberReport)> = None;
    let mut n_exp = policy.initial.max(1);
    for _ in 0..=policy.max_doublings {
        let extended = extend_to_convenient(&owned, n_exp);
        let refs: Vec<&NewtonPolyhedron> = extended.iter().collect();
        let report = newton_number(&refs)?;
        trace.push((n_exp, report.nu.clone()));
        if let Some((prev_exp, prev_report)) = previous {
            if prev_report.nu == report.nu {
                return Ok(prev_report.with_stabilization(convenient_flags, Some(prev_exp), trace));
            }
        }
        previous = Some((n_exp, report));
        n_exp = n_exp.saturating_mul(2);
    }
    Err(EngineError::NoStabilization { trace })
}

/// Full pipeline: Newton polyhedra from the supports, convenient or
/// non-convenient dispatch, and the Milnor-number reading of the result.
///
/// The reported `mu` is set only when ν is a non-negative integer; otherwise
/// the result is flagged as suspect, since the formulas assume a
/// non-degenerate isolated complete intersection and this library does not
/// verify non-degeneracy.
pub fn milnor_number(
    germ: &AnalyticMapGerm,
    policy: Option<StabilizationPolicy>,
) -> Result<NewtonNumberReport, EngineError> {
    let n = germ.n();
    let p = germ.p();
    if p > n {
        return Err(EngineError::TooManyComponents { p, n });
    }
    let polys: Vec<NewtonPolyhedron> = germ
        .components()
        .iter()
        .map(|c| newton_polyhedron(c.support(), n))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&NewtonPolyhedron> = polys.iter().collect();

    let all_convenient = polys.iter().all(|g| g.is_convenient());
    let mut report = if all_convenient {
        newton_number(&refs)?
    } else {
        let policy =
            policy.unwrap_or_else(|| StabilizationPolicy::for_supports(n, germ.max_exponent()));
        newton_number_nonconvenient(&refs, policy)?
    };
    if report.mu.is_none() {
        report.warnings.push(format!(
            "nu = {} is not a non-negative integer; the input is likely degenerate or not an \
             isolated complete intersection",
            rat_string(&report.nu)
        ));
    }
    Ok(report)
}
