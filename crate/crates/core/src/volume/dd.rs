//! Double-description kernel: extreme rays of a pointed rational cone.
//!
//! Facets of a polytope `conv(P)` are recovered as extreme rays of the
//! polar-type cone `{ y = (y0, a) : y0 + <a, p> >= 0 for all p in P }`.
//! The double-description method needs no general-position assumptions,
//! which is what makes the hull exact on the highly degenerate point sets
//! produced by Newton polyhedra (many collinear/coplanar lattice points).
//! Adjacency is decided combinatorially from zero sets, as usual for a
//! pointed cone.

// Pivot updates need disjoint row indexing; iterator forms obscure them.
#![allow(clippy::needless_range_loop)]
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rat;

/// Scale a rational vector to a primitive integer vector (entries coprime),
/// preserving direction. Zero vectors are left untouched.
pub(crate) fn primitive(v: &mut [Rat]) {
    let mut denom_lcm = BigInt::one();
    for x in v.iter() {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let mut numer_gcd = BigInt::zero();
    let mut ints: Vec<BigInt> = Vec::with_capacity(v.len());
    for x in v.iter() {
        let n = x.numer() * (&denom_lcm / x.denom());
        numer_gcd = numer_gcd.gcd(&n);
        ints.push(n);
    }
    if numer_gcd.is_zero() {
        return;
    }
    for (slot, n) in v.iter_mut().zip(ints) {
        *slot = Rat::from_integer(n / &numer_gcd);
    }
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank of a rational matrix (rows of equal length), by Gaussian elimination.
pub(crate) fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let pivot = (r..m.len()).find(|&i| !m[i][c].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => continue,
        };
        m.swap(r, pivot);
        for i in (r + 1)..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Affine rank (dimension of the affine hull) of a point set.
pub(crate) fn affine_rank(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Exact determinant of a square rational matrix.
pub(crate) fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut result = Rat::one();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !m[i][c].is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => return Rat::zero(),
        };
        if pivot != c {
            m.swap(c, pivot);
            result = -result;
        }
        result *= &m[c][c];
        for i in (c + 1)..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    result
}

/// Exact inverse of a square rational matrix. `None` when singular.
fn invert(mut m: Vec<Vec<Rat>>) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, pivot);
        inv.swap(c, pivot);
        let pv = m[c][c].clone();
        for j in 0..n {
            m[c][j] /= &pv;
            inv[c][j] /= &pv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let d1 = &f * &m[c][j];
                    m[i][j] -= d1;
                    let d2 = &f * &inv[c][j];
                    inv[i][j] -= d2;
                }
            }
        }
    }
    Some(inv)
}

/// Word-packed zero-set bitmap over constraint indices.
#[derive(Clone, PartialEq, Eq)]
struct ZeroSet {
    words: Vec<u64>,
}

impl ZeroSet {
    fn new(bits: usize) -> Self {
        Self {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn is_superset_of(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<Rat>,
    zero: ZeroSet,
}

/// Extreme rays of the pointed cone `{ y : <c, y> >= 0 for all c in
/// constraints }`. The constraint rows must span the ambient space
/// (pointedness); the caller guarantees this after the affine-rank check.
pub(crate) fn extreme_rays(constraints: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let dim = constraints[0].len();
    let m = constraints.len();
    debug_assert!(m >= dim);

    // Find `dim` linearly independent constraints for the initial simplicial
    // cone, tracking original indices.
    let mut basis_idx: Vec<usize> = Vec::with_capacity(dim);
    let mut elim: Vec<Vec<Rat>> = Vec::with_capacity(dim);
    for (i, c) in constraints.iter().enumerate() {
        let mut row = c.clone();
        for prev in &elim {
            let lead = prev.iter().position(|x| !x.is_zero()).unwrap();
            if !row[lead].is_zero() {
                let f = &row[lead] / &prev[lead];
                for j in 0..dim {
                    let delta = &f * &prev[j];
                    row[j] -= delta;
                }
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            elim.push(row);
            basis_idx.push(i);
            if basis_idx.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis_idx.len(), dim, "constraint matrix does not span");

    let b: Vec<Vec<Rat>> = basis_idx.iter().map(|&i| constraints[i].clone()).collect();
    let b_inv = invert(b).expect("independent rows invert");

    // Initial rays: columns of B^{-1}.
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let mut v: Vec<Rat> = (0..dim).map(|i| b_inv[i][j].clone()).collect();
            primitive(&mut v);
            let mut zero = ZeroSet::new(m);
            for &ci in &basis_idx {
                if dot(&constraints[ci], &v).is_zero() {
                    zero.set(ci);
                }
            }
            Ray { v, zero }
        })
        .collect();

    for ci in 0..m {
        if basis_idx.contains(&ci) {
            continue;
        }
        let c = &constraints[ci];
        let signs: Vec<Rat> = rays.iter().map(|r| dot(c, &r.v)).collect();
        let any_neg = signs.iter().any(|s| s < &Rat::zero());
        if !any_neg {
            for (r, s) in rays.iter_mut().zip(&signs) {
                if s.is_zero() {
                    r.zero.set(ci);
                }
            }
            continue;
        }

        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| signs[i] > Rat::zero())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| signs[i] < Rat::zero())
            .collect();

        let mut new_rays: Vec<Ray> = Vec::new();
        for &ip in &pos {
            for &in_ in &neg {
                let common = rays[ip].zero.intersect(&rays[in_].zero);
                let adjacent = !rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != ip && k != in_ && r.zero.is_superset_of(&common));
                if !adjacent {
                    continue;
                }
                // Positive combination vanishing on the new constraint.
                let sp = &signs[ip];
                let sn = &signs[in_];
                let mut v: Vec<Rat> = (0..dim)
                    .map(|j| sp * &rays[in_].v[j] - sn * &rays[ip].v[j])
                    .collect();
                primitive(&mut v);
                if new_rays.iter().any(|r| r.v == v) {
                    continue;
                }
                let mut zero = common.clone();
                zero.set(ci);
                new_rays.push(Ray { v, zero });
            }
        }

        let mut kept: Vec<Ray> = Vec::with_capacity(pos.len() + new_rays.len());
        for (i, ray) in rays.into_iter().enumerate() {
            if signs[i] > Rat::zero() {
                kept.push(ray);
            } else if signs[i].is_zero() {
                let mut ray = ray;
                ray.zero.set(ci);
                kept.push(ray);
            }
        }
        kept.extend(new_rays);
        rays = kept;
    }

    rays.into_iter().map(|r| r.v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn v(raw: &[i64]) -> Vec<Rat> {
        raw.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn primitive_normalization() {
        let mut x = vec![crate::ratio(1, 2), crate::ratio(-3, 4), rat(0)];
        primitive(&mut x);
        assert_eq!(x, v(&[2, -3, 0]));
    }

    #[test]
    fn rank_and_det() {
        assert_eq!(rank(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]), 2);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(det(vec![v(&[2, 0]), v(&[0, 3])]), rat(6));
        assert_eq!(det(vec![v(&[1, 2]), v(&[2, 4])]), rat(0));
    }

    #[test]
    fn octant_rays() {
        // Cone x >= 0, y >= 0, z >= 0 in R^3: extreme rays are the axes.
        let cons = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let mut rays = extreme_rays(&cons);
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
    }

    #[test]
    fn redundant_constraint_ignored() {
        // x >= 0, y >= 0, x + y >= 0 (redundant).
        let cons = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let mut rays = extreme_rays(&cons);
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn square_polar() {
        // Polar cone of the homogenized unit square: constraints
        // (1, p) for p in {0,1}^2. Extreme rays correspond to the four
        // facet inequalities x >= 0, y >= 0, 1 - x >= 0, 1 - y >= 0.
        let cons = vec![v(&[1, 0, 0]), v(&[1, 1, 0]), v(&[1, 0, 1]), v(&[1, 1, 1])];
        let mut rays = extreme_rays(&cons);
        rays.sort();
        assert_eq!(
            rays,
            vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, -1, 0]), v(&[1, 0, -1])]
        );
    }
}
