//! Weighted Minkowski sums evaluated at many weight tuples.
//!
//! The normal fan of `λ_1 Γ_1 + ... + λ_p Γ_p` is the common refinement of
//! the summands' fans for every strictly positive `λ`, so the vertex tuples
//! `(v_1, ..., v_p)` contributing vertices of the sum do not depend on `λ`:
//! any tuple selected by a generic positive direction sums to a vertex at
//! every positive weight. The tuples are therefore computed once, at unit
//! weights, and reused for every interpolation node; per-node generator sets
//! only need the cheap domination filter before the covolume call.

use std::collections::BTreeSet;

use crate::expr::ExponentVector;
use crate::polytope::NewtonPolyhedron;
use crate::volume::covolume;
use crate::Rat;

use super::EngineError;

pub(crate) struct SumFamily {
    dim: usize,
    verts: Vec<Vec<Vec<u64>>>,
    tuples: Vec<Vec<usize>>,
}

impl SumFamily {
    pub fn new(polys: &[&NewtonPolyhedron]) -> Self {
        let dim = polys[0].dim();
        let verts: Vec<Vec<Vec<u64>>> = polys
            .iter()
            .map(|g| g.vertex_coords().cloned().collect())
            .collect();

        // All vertex tuples with their unit-weight sums.
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for poly_verts in &verts {
            let mut next = Vec::with_capacity(tuples.len() * poly_verts.len());
            for t in &tuples {
                for vi in 0..poly_verts.len() {
                    let mut t2 = t.clone();
                    t2.push(vi);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let sums: Vec<Vec<u64>> = tuples
            .iter()
            .map(|t| Self::sum_coords(&verts, t, &vec![1; verts.len()], dim))
            .collect();

        // Keep the tuples whose unit sum is undominated. Every vertex of any
        // positive-weight sum comes from a tuple that is a vertex (hence
        // undominated) at unit weights, so nothing needed is lost.
        let undominated = undominated_set(&sums);
        let tuples = tuples
            .into_iter()
            .zip(sums)
            .filter(|(_, s)| undominated.contains(s))
            .map(|(t, _)| t)
            .collect();

        Self { dim, verts, tuples }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> usize {
        self.verts.len()
    }

    fn sum_coords(
        verts: &[Vec<Vec<u64>>],
        tuple: &[usize],
        lambda: &[u64],
        dim: usize,
    ) -> Vec<u64> {
        let mut out = vec![0u64; dim];
        for ((poly_verts, &vi), &w) in verts.iter().zip(tuple).zip(lambda) {
            for (slot, &x) in out.iter_mut().zip(&poly_verts[vi]) {
                *slot += w * x;
            }
        }
        out
    }

    /// The scaled sum at the given weights, as an internal polyhedron.
    pub fn polyhedron_at(&self, lambda: &[u64]) -> NewtonPolyhedron {
        debug_assert_eq!(lambda.len(), self.p());
        let gens: BTreeSet<Vec<u64>> = self
            .tuples
            .iter()
            .map(|t| Self::sum_coords(&self.verts, t, lambda, self.dim))
            .collect();
        NewtonPolyhedron::from_presumed_vertices(
            gens.into_iter().map(ExponentVector::new).collect(),
            self.dim,
        )
    }

    pub fn covolume_at(&self, lambda: &[u64]) -> Result<Rat, EngineError> {
        Ok(covolume(&self.polyhedron_at(lambda))?)
    }
}

/// The subset of points not strictly dominated by another point
/// (`w ≤ z` componentwise with `w ≠ z`).
fn undominated_set(points: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut distinct: Vec<Vec<u64>> = points.to_vec();
    distinct.sort();
    distinct.dedup();
    // Sorting by total keeps candidate dominators in the prefix.
    distinct.sort_by_key(|p| p.iter().sum::<u64>());
    let mut kept: BTreeSet<Vec<u64>> = BTreeSet::new();
    'outer: for (i, z) in distinct.iter().enumerate() {
        for w in &distinct[..i] {
            if w.iter().zip(z).all(|(a, b)| a <= b) {
                continue 'outer;
            }
        }
        kept.insert(z.clone());
    }
    kept
}
