//! Exact linear feasibility via phase-1 simplex over rationals.
//!
//! Two questions are answered here, both needed by the polyhedral layer:
//! is a point in `conv(P) + R₊^n` (vertex reduction of Newton polyhedra),
//! and is a point in `conv(P)` (face reconstruction checks). Bland's rule
//! guarantees termination; rational arithmetic keeps everything exact.

// Pivot updates need disjoint row indexing; iterator forms obscure them.
#![allow(clippy::needless_range_loop)]
use num_traits::{One, Zero};

use crate::Rat;

/// Decide `target ∈ conv(points) + R₊^n`.
///
/// Feasibility of `Σ λ_i p_i + s = target, Σ λ_i = 1, λ ≥ 0, s ≥ 0`.
pub(crate) fn in_upset_hull(target: &[Rat], points: &[Vec<Rat>]) -> bool {
    feasible(target, points, true)
}

/// Decide `target ∈ conv(points)`.
pub(crate) fn in_convex_hull(target: &[Rat], points: &[Vec<Rat>]) -> bool {
    feasible(target, points, false)
}

fn feasible(target: &[Rat], points: &[Vec<Rat>], with_slacks: bool) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = target.len();
    let m = points.len();
    // Quick exits that skip most simplex runs during vertex reduction.
    if points.iter().any(|p| p.as_slice() == target) {
        return true;
    }
    if with_slacks && points.iter().any(|p| dominates(target, p)) {
        return true;
    }

    // Rows: n coordinate equations plus the convexity row Σ λ = 1.
    // Columns: λ_1..λ_m, then (optionally) slacks s_1..s_n.
    let rows = n + 1;
    let cols = m + if with_slacks { n } else { 0 };
    let mut a = vec![vec![Rat::zero(); cols]; rows];
    let mut b = vec![Rat::zero(); rows];
    for i in 0..n {
        for (j, p) in points.iter().enumerate() {
            a[i][j] = p[i].clone();
        }
        if with_slacks {
            a[i][m + i] = Rat::one();
        }
        b[i] = target[i].clone();
    }
    for j in 0..m {
        a[rows - 1][j] = Rat::one();
    }
    b[rows - 1] = Rat::one();

    phase_one(a, b)
}

fn dominates(target: &[Rat], p: &[Rat]) -> bool {
    p.iter().zip(target).all(|(pi, ti)| pi <= ti)
}

/// Phase-1 simplex: minimize the sum of artificial variables for
/// `A x = b, x ≥ 0`. Returns true iff the optimum is zero.
fn phase_one(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> bool {
    let rows = a.len();
    let cols = a[0].len();

    for i in 0..rows {
        if b[i] < Rat::zero() {
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
            b[i] = -b[i].clone();
        }
    }

    // Append one artificial column per row; they form the starting basis.
    let total = cols + rows;
    for (i, row) in a.iter_mut().enumerate() {
        for k in 0..rows {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
    }
    let mut basis: Vec<usize> = (cols..total).collect();

    // Objective row: cost 1 on artificials, reduced: z_j - c_j.
    let mut obj = vec![Rat::zero(); total];
    let mut obj_val = Rat::zero();
    for i in 0..rows {
        for j in 0..total {
            obj[j] += &a[i][j];
        }
        obj_val += &b[i];
    }
    for j in cols..total {
        obj[j] -= Rat::one();
    }

    loop {
        // Bland: first column with positive reduced cost enters.
        let entering = (0..total).find(|&j| obj[j] > Rat::zero() && !basis.contains(&j));
        let entering = match entering {
            Some(j) => j,
            None => return obj_val.is_zero(),
        };

        // Ratio test; Bland tie-break by smallest basis variable index.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..rows {
            if a[i][entering] > Rat::zero() {
                let ratio = &b[i] / &a[i][entering];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (pivot_row, _) = match leave {
            Some(x) => x,
            // Unbounded phase-1 cannot happen (objective bounded below by 0),
            // but treat defensively as optimal-nonzero.
            None => return obj_val.is_zero(),
        };

        // Pivot.
        let pv = a[pivot_row][entering].clone();
        for v in a[pivot_row].iter_mut() {
            *v /= &pv;
        }
        b[pivot_row] /= &pv;
        for i in 0..rows {
            if i != pivot_row && !a[i][entering].is_zero() {
                let f = a[i][entering].clone();
                for j in 0..total {
                    let delta = &f * &a[pivot_row][j];
                    a[i][j] -= delta;
                }
                let delta = &f * &b[pivot_row];
                b[i] -= delta;
            }
        }
        if !obj[entering].is_zero() {
            let f = obj[entering].clone();
            for j in 0..total {
                let delta = &f * &a[pivot_row][j];
                obj[j] -= delta;
            }
            let delta = &f * &b[pivot_row];
            obj_val -= delta;
        }
        basis[pivot_row] = entering;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn pts(raw: &[&[i64]]) -> Vec<Vec<Rat>> {
        raw.iter()
            .map(|p| p.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    fn pt(raw: &[i64]) -> Vec<Rat> {
        raw.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn upset_membership() {
        let gens = pts(&[&[2, 0], &[0, 3]]);
        // (5,5) is dominated by (2,0)
        assert!(in_upset_hull(&pt(&[5, 5]), &gens));
        // (1,1) lies strictly below the segment x/2 + y/3 = 1
        assert!(!in_upset_hull(&pt(&[1, 1]), &gens));
        // (1,2) is on the segment: 1/2 + 2/3 > 1, so inside
        assert!(in_upset_hull(&pt(&[1, 2]), &gens));
        // a generator itself
        assert!(in_upset_hull(&pt(&[2, 0]), &gens));
    }

    #[test]
    fn convex_membership() {
        let square = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2]]);
        assert!(in_convex_hull(&pt(&[1, 1]), &square));
        assert!(in_convex_hull(&pt(&[2, 1]), &square));
        assert!(!in_convex_hull(&pt(&[3, 1]), &square));
        assert!(!in_upset_hull(&pt(&[-1, 0]), &square));
    }

    #[test]
    fn convex_membership_3d() {
        let simplex = pts(&[&[0, 0, 0], &[6, 0, 0], &[0, 6, 0], &[0, 0, 6]]);
        assert!(in_convex_hull(&pt(&[1, 1, 1]), &simplex));
        assert!(in_convex_hull(&pt(&[2, 2, 2]), &simplex));
        assert!(!in_convex_hull(&pt(&[3, 3, 3]), &simplex));
    }
}
