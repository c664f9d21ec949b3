//! Exact recovery of the covolume polynomial coefficients.
//!
//! The polynomial is homogeneous of degree `d` in `p` weights, so it is
//! determined by its dehomogenization (last weight fixed to 1), a polynomial
//! of total degree at most `d` in `p - 1` variables. Grid nodes over
//! `{1..d+1}^{p-1}` contain a nonsingular square subsystem; rows are chosen
//! greedily by rank so the expensive covolume evaluations happen only for
//! rows that are actually used.

// Pivot updates need disjoint row indexing; iterator forms obscure them.
#![allow(clippy::needless_range_loop)]
use num_traits::Zero;

use crate::Rat;

use super::sums::SumFamily;
use super::{pow_rat, EngineError};

/// Solve for the coefficients of `covol(Σ λ_i Γ_i)` in the monomial basis
/// given by `comps` (compositions of `d` into `p` parts).
pub(crate) fn solve(family: &SumFamily, comps: &[Vec<u64>]) -> Result<Vec<Rat>, EngineError> {
    let d = family.dim();
    let p = family.p();
    let unknowns = comps.len();
    let width = (d + 1) as u64;

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(unknowns);
    let mut rhs: Vec<Rat> = Vec::with_capacity(unknowns);
    let mut echelon: Vec<Vec<Rat>> = Vec::with_capacity(unknowns);

    let mut node = vec![1u64; p - 1];
    'grid: loop {
        let mut lambda = node.clone();
        lambda.push(1);
        let row: Vec<Rat> = comps
            .iter()
            .map(|k| {
                let mut m = Rat::from_integer(1.into());
                for (&ki, &li) in k.iter().zip(&lambda) {
                    m *= pow_rat(li, ki as usize);
                }
                m
            })
            .collect();
        if adds_rank(&mut echelon, &row) {
            rhs.push(family.covolume_at(&lambda)?);
            rows.push(row);
            if rows.len() == unknowns {
                break 'grid;
            }
        }
        // Odometer over {1..d+1}^{p-1}.
        let mut slot = 0;
        loop {
            if slot == node.len() {
                break 'grid;
            }
            if node[slot] < width {
                node[slot] += 1;
                node[..slot].iter_mut().for_each(|x| *x = 1);
                break;
            }
            slot += 1;
        }
    }

    if rows.len() < unknowns {
        return Err(EngineError::SingularInterpolation);
    }
    gaussian_solve(rows, rhs).ok_or(EngineError::SingularInterpolation)
}

/// Reduce `row` against the running echelon; on a nonzero remainder, store
/// it and report that the row increases the rank.
fn adds_rank(echelon: &mut Vec<Vec<Rat>>, row: &[Rat]) -> bool {
    let mut r = row.to_vec();
    for prev in echelon.iter() {
        let lead = prev.iter().position(|x| !x.is_zero()).unwrap();
        if !r[lead].is_zero() {
            let f = &r[lead] / &prev[lead];
            for (slot, p) in r.iter_mut().zip(prev) {
                let delta = &f * p;
                *slot -= delta;
            }
        }
    }
    if r.iter().any(|x| !x.is_zero()) {
        echelon.push(r);
        true
    } else {
        false
    }
}

/// Exact solve of a square system; `None` when singular.
fn gaussian_solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, pivot);
        b.swap(c, pivot);
        let pv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pv;
        }
        b[c] /= &pv;
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let delta = &f * &a[c][j];
                    a[i][j] -= delta;
                }
                let delta = &f * &b[c];
                b[i] -= delta;
            }
        }
    }
    Some(b)
}
