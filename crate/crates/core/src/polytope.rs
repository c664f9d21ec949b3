//! Newton polyhedra: `conv(S) + R₊^n` for a finite set `S ⊂ Z₊^n`.
//!
//! The V-representation (generator points, with the recession cone fixed to
//! the positive orthant) is primary. Vertices are the generators that do not
//! lie in the upset hull of the others, decided by exact linear feasibility.
//! Facet inequalities are derived on demand from the exact hull of a bounded
//! truncation and cached; a polyhedron is immutable after construction, so
//! instances can be shared freely across threads.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::Zero;
use serde_json::json;
use thiserror::Error;

use crate::expr::{ExponentVector, PolyExpr};
use crate::volume::{convex_hull, Hull};
use crate::{lp, rat, rat_string, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("a Newton polyhedron needs at least one generator")]
    EmptyGenerators,
    #[error("generator of length {found} in dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("face direction must be componentwise non-negative")]
    NegativeDirection,
    #[error("face direction must be nonzero")]
    ZeroDirection,
    #[error("weighted Minkowski sums need positive integer weights")]
    NonPositiveWeight,
    #[error("expected {expected} summands, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("face decomposition requires a compact face")]
    NonCompactFace,
    #[error("restriction produced no generators")]
    EmptyRestriction,
}

/// The unbounded polyhedron `conv(generators) + R₊^n`.
#[derive(Debug)]
pub struct NewtonPolyhedron {
    dim: usize,
    generators: Vec<ExponentVector>,
    vertices: Vec<ExponentVector>,
    facets: OnceLock<Vec<PolyFacet>>,
}

/// A facet inequality `<normal, x> >= offset` with `normal >= 0` primitive
/// integer; the coordinate half-spaces `x_i >= 0` are implicit throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFacet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

/// A face `Δ(q, Γ)` of a Newton polyhedron: the minimizing set of `<q, ·>`.
///
/// Faces remember the direction that produced them, but equality is by
/// generator set — many directions select the same face.
#[derive(Debug, Clone)]
pub struct Face {
    /// Ambient dimension of the parent polyhedron.
    pub ambient_dim: usize,
    /// The selecting direction `q >= 0`.
    pub direction: Vec<Rat>,
    /// The minimum value `d(q, Γ)`.
    pub value: Rat,
    /// Parent generators realizing the minimum, sorted.
    pub generators: Vec<ExponentVector>,
    /// True iff the face is bounded (its recession cone is trivial),
    /// equivalently iff `q` is strictly positive.
    pub compact: bool,
}

impl PartialEq for Face {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.generators == other.generators
    }
}

impl Eq for Face {}

impl Clone for NewtonPolyhedron {
    fn clone(&self) -> Self {
        let facets = OnceLock::new();
        if let Some(f) = self.facets.get() {
            let _ = facets.set(f.clone());
        }
        Self {
            dim: self.dim,
            generators: self.generators.clone(),
            vertices: self.vertices.clone(),
            facets,
        }
    }
}

impl PartialEq for NewtonPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for NewtonPolyhedron {}

/// Build a Newton polyhedron from generator points, reducing to vertices and
/// caching the facet inequalities.
pub fn newton_polyhedron(
    generators: impl IntoIterator<Item = ExponentVector>,
    n: usize,
) -> Result<NewtonPolyhedron, PolytopeError> {
    let poly = NewtonPolyhedron::reduced(generators, n)?;
    poly.facets();
    Ok(poly)
}

impl NewtonPolyhedron {
    /// Reduce generators to vertices; facet cache left lazy.
    pub(crate) fn reduced(
        generators: impl IntoIterator<Item = ExponentVector>,
        n: usize,
    ) -> Result<Self, PolytopeError> {
        let mut gens: Vec<ExponentVector> = generators.into_iter().collect();
        if gens.is_empty() {
            return Err(PolytopeError::EmptyGenerators);
        }
        for g in &gens {
            if g.dim() != n {
                return Err(PolytopeError::DimensionMismatch {
                    expected: n,
                    found: g.dim(),
                });
            }
        }
        gens.sort();
        gens.dedup();

        let survivors = domination_filter(&gens);
        let rational: Vec<Vec<Rat>> = survivors.iter().map(|g| g.to_rationals()).collect();
        let mut vertices: Vec<ExponentVector> = Vec::with_capacity(survivors.len());
        for (i, g) in survivors.iter().enumerate() {
            let others: Vec<Vec<Rat>> = rational
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            if others.is_empty() || !lp::in_upset_hull(&rational[i], &others) {
                vertices.push(g.clone());
            }
        }

        Ok(Self {
            dim: n,
            generators: gens,
            vertices,
            facets: OnceLock::new(),
        })
    }

    /// Internal fast-path constructor: the caller asserts the points are
    /// already mutually non-redundant candidates (e.g. Minkowski cell sums),
    /// so only the cheap domination filter is applied. The cached vertex set
    /// may then be a slight superset of the true one, which every consumer
    /// of this type tolerates.
    pub(crate) fn from_presumed_vertices(points: Vec<ExponentVector>, n: usize) -> Self {
        debug_assert!(!points.is_empty());
        let mut gens = points;
        gens.sort();
        gens.dedup();
        let vertices = domination_filter(&gens);
        Self {
            dim: n,
            generators: gens,
            vertices,
            facets: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub(crate) fn vertex_coords(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.vertices.iter().map(|v| &v.0)
    }

    /// Facet inequalities, derived from the hull of the truncation
    /// `conv(V) ∩ [0, M]^n` with `M` one past the largest vertex coordinate:
    /// box facets show up with a negative normal entry and are dropped,
    /// everything else is a genuine facet of the unbounded polyhedron.
    pub fn facets(&self) -> &[PolyFacet] {
        self.facets.get_or_init(|| {
            let m = 1 + self
                .vertices
                .iter()
                .flat_map(|v| v.0.iter().copied())
                .max()
                .unwrap_or(0);
            let mut candidates: BTreeSet<Vec<u64>> = BTreeSet::new();
            for v in self.vertex_coords() {
                for mask in 0u32..(1 << self.dim) {
                    let raised: Vec<u64> = (0..self.dim)
                        .map(|i| if mask & (1 << i) != 0 { m } else { v[i] })
                        .collect();
                    candidates.insert(raised);
                }
            }
            let points: Vec<Vec<Rat>> = candidates
                .iter()
                .map(|v| v.iter().map(|&x| rat(x as i64)).collect())
                .collect();
            match convex_hull(&points, self.dim) {
                Ok(Hull::Full(hull)) => hull
                    .facets
                    .into_iter()
                    .filter(|f| f.normal.iter().all(|x| *x >= Rat::zero()))
                    .map(|f| PolyFacet {
                        normal: f.normal,
                        offset: f.offset,
                    })
                    .collect(),
                // Lattice degeneracy is impossible here: the raised candidate
                // set always spans once m exceeds every vertex coordinate.
                _ => unreachable!("truncation of a Newton polyhedron is full-dimensional"),
            }
        })
    }

    /// Does the polyhedron meet every coordinate axis away from the origin?
    /// (With the convention that a generator at the origin — the whole
    /// positive orthant — counts as meeting every axis.)
    pub fn is_convenient(&self) -> bool {
        (0..self.dim).all(|i| self.generators.iter().any(|g| g.supported_on(&[i])))
    }

    /// Per-axis intercepts: the least coordinate among generators supported
    /// on that axis alone, `None` where the axis is missed.
    pub fn axis_intercepts(&self) -> Vec<Option<u64>> {
        (0..self.dim)
            .map(|i| {
                self.generators
                    .iter()
                    .filter(|g| g.supported_on(&[i]))
                    .map(|g| g.0[i])
                    .min()
            })
            .collect()
    }

    /// Restriction to the coordinate subspace indexed by `axes` (sorted,
    /// nonempty): generated by the projections of the generators supported
    /// there. `None` when no generator qualifies.
    pub fn restrict(&self, axes: &[usize]) -> Option<NewtonPolyhedron> {
        let projected: Vec<ExponentVector> = self
            .generators
            .iter()
            .filter(|g| g.supported_on(axes))
            .map(|g| g.project(axes))
            .collect();
        if projected.is_empty() {
            return None;
        }
        Some(
            Self::reduced(projected, axes.len()).expect("projection yields nonempty generator set"),
        )
    }

    /// The face `Δ(q, Γ)` with its value `d(q, Γ)`.
    pub fn face_of_direction(&self, q: &[Rat]) -> Result<Face, PolytopeError> {
        if q.len() != self.dim {
            return Err(PolytopeError::DimensionMismatch {
                expected: self.dim,
                found: q.len(),
            });
        }
        if q.iter().any(|x| *x < Rat::zero()) {
            return Err(PolytopeError::NegativeDirection);
        }
        if q.iter().all(|x| x.is_zero()) {
            return Err(PolytopeError::ZeroDirection);
        }
        let value = self
            .vertices
            .iter()
            .map(|v| weight(q, v))
            .min()
            .expect("nonempty vertex set");
        let generators: Vec<ExponentVector> = self
            .generators
            .iter()
            .filter(|g| weight(q, g) == value)
            .cloned()
            .collect();
        let compact = q.iter().all(|x| *x > Rat::zero());
        Ok(Face {
            ambient_dim: self.dim,
            direction: q.to_vec(),
            value,
            generators,
            compact,
        })
    }

    /// Debug dump as JSON: vertices and facet inequalities.
    pub fn to_debug_json(&self) -> serde_json::Value {
        json!({
            "vertices": self.vertices.iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
            "facets": self.facets().iter().map(|f| json!({
                "normal": f.normal.iter().map(rat_string).collect::<Vec<_>>(),
                "offset": rat_string(&f.offset),
            })).collect::<Vec<_>>(),
        })
    }
}

fn weight(q: &[Rat], e: &ExponentVector) -> Rat {
    q.iter()
        .zip(&e.0)
        .map(|(qi, &ei)| qi * rat(ei as i64))
        .sum()
}

/// Drop every point that lies in `other + R₊^n` for some other point.
fn domination_filter(points: &[ExponentVector]) -> Vec<ExponentVector> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| *q != **p && q.dominated_by(p)))
        .cloned()
        .collect()
}

/// The scaled Minkowski sum `w_1 Γ_1 + ... + w_p Γ_p`, generated by all
/// weighted sums of vertex tuples and reduced by hull reduction.
pub fn minkowski_weighted_sum(
    polys: &[&NewtonPolyhedron],
    weights: &[u64],
) -> Result<NewtonPolyhedron, PolytopeError> {
    if polys.is_empty() || polys.len() != weights.len() {
        return Err(PolytopeError::ArityMismatch {
            expected: polys.len().max(1),
            found: weights.len(),
        });
    }
    let n = polys[0].dim();
    for p in polys {
        if p.dim() != n {
            return Err(PolytopeError::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
    }
    if weights.contains(&0) {
        return Err(PolytopeError::NonPositiveWeight);
    }

    let mut sums: Vec<ExponentVector> = vec![ExponentVector::zeros(n)];
    for (poly, &w) in polys.iter().zip(weights) {
        let mut next = Vec::with_capacity(sums.len() * poly.vertices().len());
        for base in &sums {
            for v in poly.vertices() {
                let coords: Vec<u64> = base.0.iter().zip(&v.0).map(|(&b, &x)| b + w * x).collect();
                next.push(ExponentVector::new(coords));
            }
        }
        next.sort();
        next.dedup();
        sums = next;
    }

    let poly = NewtonPolyhedron::reduced(sums, n)?;
    poly.facets();
    Ok(poly)
}

/// Decompose a compact face `σ` of a Minkowski sum into the unique compact
/// faces `σ_i` of the summands with `σ = σ_1 + ... + σ_p`, by evaluating the
/// defining direction on each summand.
pub fn decompose_face(
    sigma: &Face,
    parts: &[&NewtonPolyhedron],
) -> Result<Vec<Face>, PolytopeError> {
    if !sigma.compact {
        return Err(PolytopeError::NonCompactFace);
    }
    let faces: Vec<Face> = parts
        .iter()
        .map(|p| p.face_of_direction(&sigma.direction))
        .collect::<Result<_, _>>()?;
    debug_assert!(
        verify_face_sum(sigma, &faces),
        "face decomposition must reassemble the face"
    );
    Ok(faces)
}

/// Check `σ = σ_1 + ... + σ_p` as polytopes: mutual hull containment of the
/// face generators and the tuple sums of the component face generators.
pub fn verify_face_sum(sigma: &Face, parts: &[Face]) -> bool {
    let mut sums: Vec<Vec<Rat>> = vec![vec![Rat::zero(); sigma.ambient_dim]];
    for part in parts {
        let mut next = Vec::with_capacity(sums.len() * part.generators.len());
        for base in &sums {
            for g in &part.generators {
                next.push(
                    base.iter()
                        .zip(&g.0)
                        .map(|(b, &x)| b + rat(x as i64))
                        .collect(),
                );
            }
        }
        next.sort();
        next.dedup();
        sums = next;
    }
    let sigma_points: Vec<Vec<Rat>> = sigma.generators.iter().map(|g| g.to_rationals()).collect();
    sigma_points.iter().all(|p| lp::in_convex_hull(p, &sums))
        && sums.iter().all(|s| lp::in_convex_hull(s, &sigma_points))
}

/// The sub-polynomial of `h` supported on the face `Δ`; `None` when the face
/// misses the support entirely.
pub fn face_function(h: &PolyExpr, face: &Face) -> Option<PolyExpr> {
    assert_eq!(
        h.dim(),
        face.ambient_dim,
        "face function requires matching ambient dimension"
    );
    let kept: Vec<_> = h
        .terms()
        .iter()
        .filter(|(e, _)| weight(&face.direction, e) == face.value)
        .cloned()
        .collect();
    if kept.is_empty() {
        None
    } else {
        Some(PolyExpr::new(h.dim(), kept).expect("face terms are a nonzero constant-free subset"))
    }
}
