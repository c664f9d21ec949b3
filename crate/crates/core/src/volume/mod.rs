//! Exact convex hulls, volumes, and covolumes of Newton polyhedra.
//!
//! Hulls are computed by the double-description method over exact rationals
//! (the `dd` submodule); volumes by a pulling triangulation and determinant
//! sums.
//! The covolume of a convenient Newton polyhedron `G` in dimension `d` is
//! realized as `M^d - vol(G ∩ [0,M]^d)` where `M` is the largest axis
//! intercept: every point of the positive orthant with some coordinate at or
//! beyond its axis intercept already lies in `G`, so the complement is
//! contained in the box.

pub(crate) mod dd;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::polytope::NewtonPolyhedron;
use crate::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VolumeError {
    #[error("convex hull of an empty point set")]
    EmptyPointSet,
    #[error("point of length {found} in dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("covolume of a non-convenient polyhedron is infinite")]
    NonConvenient,
    #[error("truncation box {given} is smaller than the largest axis intercept {required}")]
    BoxTooSmall { given: u64, required: u64 },
}

/// A bounded polytope carried as its vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<Rat>>,
}

impl RationalPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>) -> Self {
        Self { dim, vertices }
    }
}

/// A facet of a full-dimensional hull: `<normal, x> >= offset` with the
/// normal pointing inward, scaled to a primitive integer vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    /// Indices of the input points lying on the facet hyperplane.
    pub on: Vec<usize>,
}

/// Full-dimensional hull data: extreme points, facets, and a simplicial
/// decomposition (all as indices into the input point list).
#[derive(Debug, Clone)]
pub struct HullData {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<HullFacet>,
    pub simplices: Vec<Vec<usize>>,
}

/// Outcome of a hull computation.
#[derive(Debug, Clone)]
pub enum Hull {
    Full(HullData),
    /// The points span an affine subspace of the stated dimension only.
    Degenerate {
        affine_rank: usize,
    },
}

/// Exact convex hull of a finite rational point set in dimension `d`.
pub fn convex_hull(points: &[Vec<Rat>], d: usize) -> Result<Hull, VolumeError> {
    if points.is_empty() {
        return Err(VolumeError::EmptyPointSet);
    }
    for p in points {
        if p.len() != d {
            return Err(VolumeError::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
    }

    // Deduplicate, remembering the first occurrence of each point.
    let mut uniq: Vec<(Vec<Rat>, usize)> = Vec::new();
    {
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
        for i in order {
            if seen.insert(points[i].clone()) {
                uniq.push((points[i].clone(), i));
            }
        }
    }

    let uniq_points: Vec<Vec<Rat>> = uniq.iter().map(|(p, _)| p.clone()).collect();
    let rank = dd::affine_rank(&uniq_points);
    if rank < d {
        return Ok(Hull::Degenerate { affine_rank: rank });
    }

    // Facets as extreme rays of { (y0, a) : y0 + <a, p> >= 0 }.
    let constraints: Vec<Vec<Rat>> = uniq_points
        .iter()
        .map(|p| {
            let mut c = Vec::with_capacity(d + 1);
            c.push(Rat::one());
            c.extend(p.iter().cloned());
            c
        })
        .collect();
    let rays = dd::extreme_rays(&constraints);

    let mut facets: Vec<HullFacet> = Vec::new();
    for ray in rays {
        let normal: Vec<Rat> = ray[1..].to_vec();
        if normal.iter().all(|x| x.is_zero()) {
            continue; // the trivial valid inequality 1 >= 0
        }
        let offset = -ray[0].clone();
        let on: Vec<usize> = (0..points.len())
            .filter(|&i| dd::dot(&normal, &points[i]) == offset)
            .collect();
        facets.push(HullFacet { normal, offset, on });
    }
    facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));

    // A point is extreme iff its active facet normals span the space.
    let mut vertices: Vec<usize> = Vec::new();
    for (p, orig) in &uniq {
        let active: Vec<Vec<Rat>> = facets
            .iter()
            .filter(|f| dd::dot(&f.normal, p) == f.offset)
            .map(|f| f.normal.clone())
            .collect();
        if active.len() >= d && dd::rank(&active) == d {
            vertices.push(*orig);
        }
    }
    vertices.sort_unstable();

    let simplices = triangulate(points, &vertices, &facets, d);

    Ok(Hull::Full(HullData {
        dim: d,
        vertices,
        facets,
        simplices,
    }))
}

/// Pulling triangulation: cone the lowest-index vertex over recursive
/// triangulations of the facets that do not contain it.
fn triangulate(
    points: &[Vec<Rat>],
    vertices: &[usize],
    facets: &[HullFacet],
    d: usize,
) -> Vec<Vec<usize>> {
    let apex = vertices[0];
    let vertex_set: BTreeSet<usize> = vertices.iter().copied().collect();
    let mut simplices = Vec::new();
    for facet in facets {
        if facet.on.contains(&apex) {
            continue;
        }
        let fverts: Vec<usize> = facet
            .on
            .iter()
            .copied()
            .filter(|i| vertex_set.contains(i))
            .collect();
        for mut s in facet_triangulation(points, &fverts, &facet.normal, d) {
            s.insert(0, apex);
            simplices.push(s);
        }
    }
    simplices
}

/// Triangulate one facet (a `(d-1)`-polytope) by projecting out a coordinate
/// in which its normal is nonzero and recursing.
fn facet_triangulation(
    points: &[Vec<Rat>],
    fverts: &[usize],
    normal: &[Rat],
    d: usize,
) -> Vec<Vec<usize>> {
    if fverts.len() == d {
        return vec![fverts.to_vec()];
    }
    let drop = normal
        .iter()
        .position(|x| !x.is_zero())
        .expect("facet normal is nonzero");
    let projected: Vec<Vec<Rat>> = fverts
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect();
    match convex_hull(&projected, d - 1) {
        Ok(Hull::Full(sub)) => sub
            .simplices
            .into_iter()
            .map(|s| s.into_iter().map(|i| fverts[i]).collect())
            .collect(),
        _ => unreachable!("a facet of a full-dimensional hull is (d-1)-dimensional"),
    }
}

/// Volume of the simplex spanned by the given points (first one as origin).
fn simplex_volume(points: &[Vec<Rat>], simplex: &[usize], d: usize) -> Rat {
    let base = &points[simplex[0]];
    let rows: Vec<Vec<Rat>> = simplex[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut v = dd::det(rows);
    if v < Rat::zero() {
        v = -v;
    }
    let mut fact = Rat::one();
    for k in 2..=d {
        fact *= rat(k as i64);
    }
    v / fact
}

/// Exact Euclidean volume of `conv(vertices)`; 0 when lower-dimensional.
pub fn polytope_volume(p: &RationalPolytope) -> Result<Rat, VolumeError> {
    match convex_hull(&p.vertices, p.dim)? {
        Hull::Degenerate { .. } => Ok(Rat::zero()),
        Hull::Full(hull) => Ok(hull
            .simplices
            .iter()
            .map(|s| simplex_volume(&p.vertices, s, p.dim))
            .sum()),
    }
}

/// Covolume `vol(R₊^d \ G)` of a convenient Newton polyhedron, using the
/// smallest valid truncation box.
pub fn covolume(g: &NewtonPolyhedron) -> Result<Rat, VolumeError> {
    let m = required_box(g)?;
    covolume_with_box(g, m)
}

/// Covolume computed with an explicit truncation box `[0, M]^d`; any
/// `M` at least as large as every axis intercept gives the same value,
/// which is what the box-invariance checks exercise.
pub fn covolume_with_box(g: &NewtonPolyhedron, box_size: u64) -> Result<Rat, VolumeError> {
    let required = required_box(g)?;
    if box_size < required {
        return Err(VolumeError::BoxTooSmall {
            given: box_size,
            required,
        });
    }
    let d = g.dim();
    let m = box_size;

    // The truncation conv(G) ∩ [0,M]^d is generated by the cached vertices
    // with every subset of coordinates raised to M. Clamping handles
    // generator points beyond an intercept (possible for unreduced internal
    // polyhedra); a clamped point still lies in the polyhedron because every
    // true vertex is bounded by the intercepts.
    let mut candidates: BTreeSet<Vec<u64>> = BTreeSet::new();
    for v in g.vertex_coords() {
        for mask in 0u32..(1 << d) {
            let raised: Vec<u64> = (0..d)
                .map(|i| if mask & (1 << i) != 0 { m } else { v[i].min(m) })
                .collect();
            candidates.insert(raised);
        }
    }
    let points: Vec<Vec<Rat>> = candidates
        .iter()
        .map(|v| v.iter().map(|&x| rat(x as i64)).collect())
        .collect();

    let truncation_volume = match convex_hull(&points, d)? {
        Hull::Degenerate { .. } => Rat::zero(),
        Hull::Full(hull) => hull
            .simplices
            .iter()
            .map(|s| simplex_volume(&points, s, d))
            .sum(),
    };

    let mut box_volume = Rat::one();
    for _ in 0..d {
        box_volume *= rat(m as i64);
    }
    Ok(box_volume - truncation_volume)
}

fn required_box(g: &NewtonPolyhedron) -> Result<u64, VolumeError> {
    let intercepts = g.axis_intercepts();
    let mut max = 0u64;
    for i in intercepts {
        match i {
            Some(a) => max = max.max(a),
            None => return Err(VolumeError::NonConvenient),
        }
    }
    Ok(max)
}
