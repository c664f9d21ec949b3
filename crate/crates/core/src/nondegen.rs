//! Construction and export of non-degeneracy data.
//!
//! Deciding non-degeneracy means deciding emptiness of varieties in the
//! torus, which belongs to a computer algebra system. What this module does
//! is construct the exact inputs such a system needs: the face systems
//! attached to weight directions, the compact-face decompositions of the
//! Minkowski sum of the component polyhedra, and the degeneracy matrix whose
//! rank drops cut out the singular locus.

use serde_json::{json, Value};
use thiserror::Error;

use crate::expr::{AnalyticMapGerm, PolyExpr};
use crate::polytope::{
    decompose_face, face_function, minkowski_weighted_sum, newton_polyhedron, Face,
    NewtonPolyhedron, PolytopeError,
};
use crate::volume::dd;
use crate::{rat_string, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NondegenError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// The face system of a germ at a weight direction: per component, the face
/// of its Newton polyhedron and the polynomial part supported there.
#[derive(Debug, Clone)]
pub struct FaceSystem {
    pub direction: Vec<Rat>,
    pub values: Vec<Rat>,
    pub faces: Vec<Face>,
    /// `None` marks a zero face function (face disjoint from the support).
    pub polynomials: Vec<Option<PolyExpr>>,
}

/// Build the face system of `f` at direction `q ≥ 0, q ≠ 0`.
pub fn face_system(f: &AnalyticMapGerm, q: &[Rat]) -> Result<FaceSystem, NondegenError> {
    let n = f.n();
    let mut faces = Vec::with_capacity(f.p());
    let mut values = Vec::with_capacity(f.p());
    let mut polynomials = Vec::with_capacity(f.p());
    for component in f.components() {
        let poly = newton_polyhedron(component.support(), n)?;
        let face = poly.face_of_direction(q)?;
        values.push(face.value.clone());
        polynomials.push(face_function(component, &face));
        faces.push(face);
    }
    Ok(FaceSystem {
        direction: q.to_vec(),
        values,
        faces,
        polynomials,
    })
}

/// The `p × (n + p)` matrix with rows
/// `(x_1 ∂f^i/∂x_1, ..., x_n ∂f^i/∂x_n, 0, ..., f^i, ..., 0)`;
/// zero entries are `None`. Multiplying by `x_j ∂/∂x_j` preserves supports,
/// so every entry's support is contained in the support of its row germ.
#[derive(Debug, Clone)]
pub struct DegeneracyMatrix {
    pub p: usize,
    pub n: usize,
    entries: Vec<Vec<Option<PolyExpr>>>,
}

impl DegeneracyMatrix {
    pub fn entry(&self, row: usize, col: usize) -> Option<&PolyExpr> {
        self.entries[row][col].as_ref()
    }

    pub fn rows(&self) -> &[Vec<Option<PolyExpr>>] {
        &self.entries
    }
}

pub fn degeneracy_matrix(f: &AnalyticMapGerm) -> DegeneracyMatrix {
    let n = f.n();
    let p = f.p();
    let entries = f
        .components()
        .iter()
        .enumerate()
        .map(|(i, component)| {
            let mut row: Vec<Option<PolyExpr>> = (0..n).map(|j| component.x_del_x(j)).collect();
            for k in 0..p {
                row.push(if k == i {
                    Some(component.clone())
                } else {
                    None
                });
            }
            row
        })
        .collect();
    DegeneracyMatrix { p, n, entries }
}

/// One exported compact face of the Minkowski sum, with its decomposition
/// into component faces and their face polynomials.
#[derive(Debug, Clone)]
pub struct ExportedFace {
    pub direction: Vec<Rat>,
    pub values: Vec<Rat>,
    pub dim: usize,
    pub faces: Vec<Face>,
    pub systems: Vec<Option<PolyExpr>>,
}

#[derive(Debug, Clone)]
pub struct FaceSystemBundle {
    pub n: usize,
    pub p: usize,
    pub faces: Vec<ExportedFace>,
}

/// Enumerate the compact faces of `Γ(f^1) + ... + Γ(f^p)` reachable from
/// sums of up to `n` facet directions of the bounded truncation (plus the
/// coordinate directions), decompose each one, and bundle the face systems
/// for external certification. Faces of every dimension are exported, with
/// the dimension recorded so consumers can select the range they need.
pub fn export_face_systems(f: &AnalyticMapGerm) -> Result<FaceSystemBundle, NondegenError> {
    let n = f.n();
    let p = f.p();
    let polys: Vec<NewtonPolyhedron> = f
        .components()
        .iter()
        .map(|c| newton_polyhedron(c.support(), n))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&NewtonPolyhedron> = polys.iter().collect();
    let sum = minkowski_weighted_sum(&refs, &vec![1; p])?;

    // Direction pool: facet normals of the truncation plus the coordinate
    // directions, so faces contained in coordinate hyperplanes are reachable.
    let mut pool: Vec<Vec<Rat>> = sum.facets().iter().map(|f| f.normal.clone()).collect();
    for i in 0..n {
        let mut e = vec![Rat::from_integer(0.into()); n];
        e[i] = Rat::from_integer(1.into());
        if !pool.contains(&e) {
            pool.push(e);
        }
    }

    let mut seen: Vec<Face> = Vec::new();
    let mut exported: Vec<ExportedFace> = Vec::new();
    for subset in non_empty_subsets_up_to(pool.len(), n) {
        let mut q = vec![Rat::from_integer(0.into()); n];
        for &i in &subset {
            for (slot, x) in q.iter_mut().zip(&pool[i]) {
                *slot += x;
            }
        }
        if q.iter().any(|x| !(*x > Rat::from_integer(0.into()))) {
            continue;
        }
        let sigma = sum.face_of_direction(&q)?;
        if seen.contains(&sigma) {
            continue;
        }
        seen.push(sigma.clone());

        let parts = decompose_face(&sigma, &refs)?;
        let values: Vec<Rat> = parts.iter().map(|part| part.value.clone()).collect();
        let systems: Vec<Option<PolyExpr>> = parts
            .iter()
            .zip(f.components())
            .map(|(part, component)| face_function(component, part))
            .collect();
        let points: Vec<Vec<Rat>> = sigma.generators.iter().map(|g| g.to_rationals()).collect();
        let dim = dd::affine_rank(&points);
        exported.push(ExportedFace {
            direction: q,
            values,
            dim,
            faces: parts,
            systems,
        });
    }

    // Canonical order: by dimension, then by the face generator sets.
    exported.sort_by(|a, b| {
        (
            a.dim,
            a.faces
                .iter()
                .map(|f| f.generators.clone())
                .collect::<Vec<_>>(),
        )
            .cmp(&(
                b.dim,
                b.faces
                    .iter()
                    .map(|f| f.generators.clone())
                    .collect::<Vec<_>>(),
            ))
    });
    Ok(FaceSystemBundle {
        n,
        p,
        faces: exported,
    })
}

impl FaceSystemBundle {
    /// JSON bundle: `{faces: [{q, d: [d1..dp], dim, systems: [...]}]}` with
    /// rationals as exact strings and polynomials as coefficient/exponent
    /// term lists.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "p": self.p,
            "faces": self.faces.iter().map(|face| json!({
                "q": face.direction.iter().map(rat_string).collect::<Vec<_>>(),
                "d": face.values.iter().map(rat_string).collect::<Vec<_>>(),
                "dim": face.dim,
                "systems": face.systems.iter().map(poly_terms_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn poly_terms_json(poly: &Option<PolyExpr>) -> Value {
    match poly {
        None => json!([]),
        Some(p) => json!(p
            .terms()
            .iter()
            .map(|(e, c)| json!([c.canonical_string(), e.0.clone()]))
            .collect::<Vec<_>>()),
    }
}

/// All nonempty subsets of `0..len` of size at most `cap`.
fn non_empty_subsets_up_to(len: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=cap.min(len) {
        out.extend(super::mixed::subsets(len, size));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_map;
    use crate::polytope::verify_face_sum;
    use crate::rat;

    #[test]
    fn cusp_face_systems() {
        let f = parse_map("x^2 + y^3", None).unwrap();
        let sys = face_system(&f, &[rat(3), rat(2)]).unwrap();
        assert_eq!(sys.values, vec![rat(6)]);
        let poly = sys.polynomials[0].as_ref().unwrap();
        assert_eq!(poly.terms().len(), 2);

        let tight = face_system(&f, &[rat(1), rat(1)]).unwrap();
        assert_eq!(tight.polynomials[0].as_ref().unwrap().terms().len(), 1);
    }

    #[test]
    fn pair_face_system() {
        let f = parse_map("x^2 + y^3; x + y", None).unwrap();
        let sys = face_system(&f, &[rat(1), rat(1)]).unwrap();
        assert_eq!(sys.values, vec![rat(2), rat(1)]);
        // First component picks x^2, second keeps x + y (tie).
        assert_eq!(sys.polynomials[0].as_ref().unwrap().terms().len(), 1);
        assert_eq!(sys.polynomials[1].as_ref().unwrap().terms().len(), 2);
    }

    #[test]
    fn degeneracy_matrix_shapes() {
        // f = (x^2 + y^3): row (2x^2, 3y^3, x^2 + y^3).
        let f = parse_map("x^2 + y^3", None).unwrap();
        let m = degeneracy_matrix(&f);
        assert_eq!(m.p, 1);
        assert_eq!(m.n, 2);
        let row = &m.rows()[0];
        assert_eq!(row.len(), 3);
        let dx = row[0].as_ref().unwrap();
        assert_eq!(dx.terms()[0].1, crate::GaussianRational::from_integer(2));
        let diag = row[2].as_ref().unwrap();
        assert_eq!(diag, &f.components()[0]);

        // f = (x*y): row (xy, xy, xy).
        let g = parse_map("x*y", None).unwrap();
        let mg = degeneracy_matrix(&g);
        let row = &mg.rows()[0];
        for entry in row.iter().take(2) {
            assert_eq!(entry.as_ref().unwrap(), &g.components()[0]);
        }

        // f = (x, y): sparsity pattern with zeros off the diagonal block.
        let h = parse_map("x; y", None).unwrap();
        let mh = degeneracy_matrix(&h);
        assert!(mh.entry(0, 1).is_none());
        assert!(mh.entry(0, 2).is_some());
        assert!(mh.entry(0, 3).is_none());
        assert!(mh.entry(1, 0).is_none());
        assert!(mh.entry(1, 3).is_some());
        // Support containment.
        for (i, comp) in h.components().iter().enumerate() {
            for entry in mh.rows()[i].iter().flatten() {
                assert!(entry.support().is_subset(&comp.support()));
            }
        }
    }

    #[test]
    fn cusp_export_lists_all_compact_faces() {
        let f = parse_map("x^2 + y^3", None).unwrap();
        let bundle = export_face_systems(&f).unwrap();
        // Two vertices and the connecting edge.
        assert_eq!(bundle.faces.len(), 3);
        let dims: Vec<usize> = bundle.faces.iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![0, 0, 1]);
        let edge = &bundle.faces[2];
        assert_eq!(edge.systems[0].as_ref().unwrap().terms().len(), 2);
    }

    #[test]
    fn export_reconstructs_faces() {
        let f = parse_map("x^2 + y^3; x + y", None).unwrap();
        let polys: Vec<NewtonPolyhedron> = f
            .components()
            .iter()
            .map(|c| newton_polyhedron(c.support(), 2).unwrap())
            .collect();
        let refs: Vec<&NewtonPolyhedron> = polys.iter().collect();
        let sum = minkowski_weighted_sum(&refs, &[1, 1]).unwrap();
        let bundle = export_face_systems(&f).unwrap();
        assert!(!bundle.faces.is_empty());
        for face in &bundle.faces {
            let sigma = sum.face_of_direction(&face.direction).unwrap();
            assert!(verify_face_sum(&sigma, &face.faces));
        }
    }

    #[test]
    fn export_json_shape() {
        let f = parse_map("x^2 + y^3", None).unwrap();
        let bundle = export_face_systems(&f).unwrap();
        let doc = bundle.to_json();
        let faces = doc["faces"].as_array().unwrap();
        assert_eq!(faces.len(), 3);
        assert!(faces[0]["q"].is_array());
        assert!(faces[0]["d"].is_array());
        assert!(faces[0]["systems"].is_array());
    }

    #[test]
    fn gaussian_coefficients_survive_export() {
        let f = parse_map("(0+1i)*x^2 + (1/2-3i)*y^3", None).unwrap();
        let bundle = export_face_systems(&f).unwrap();
        let edge = bundle
            .faces
            .iter()
            .find(|face| face.dim == 1)
            .expect("the polygon has one bounded edge");
        let poly = edge.systems[0].as_ref().unwrap();
        let coeffs: Vec<String> = poly
            .terms()
            .iter()
            .map(|(_, c)| c.canonical_string())
            .collect();
        assert_eq!(coeffs, vec!["1/2-3i", "0+1i"]);
        let doc = bundle.to_json();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.contains("1/2-3i"), "{text}");
    }

    /// In the plane, the exported compact faces of a Newton polygon must be
    /// exactly its vertices and bounded edges, cross-checked by walking the
    /// staircase chain directly.
    #[test]
    fn plane_enumeration_matches_edge_walk() {
        for text in [
            "x^2 + y^3",
            "x^3 + x*y + y^3",
            "x^5 + x^3*y + x*y^2 + y^4",
            "x^2 + x*y^5 + y^6",
        ] {
            let f = parse_map(text, None).unwrap();
            let g = newton_polyhedron(f.components()[0].support(), 2).unwrap();

            // Direct edge walk: chain vertices sorted by x, consecutive
            // pairs are the bounded edges.
            let mut chain: Vec<&crate::ExponentVector> = g.vertices().iter().collect();
            chain.sort_by_key(|v| v.0[0]);
            let mut expected: Vec<Vec<Vec<u64>>> =
                chain.iter().map(|v| vec![v.0.clone()]).collect();
            for pair in chain.windows(2) {
                expected.push(vec![pair[0].0.clone(), pair[1].0.clone()]);
            }
            expected.sort();

            let bundle = export_face_systems(&f).unwrap();
            let mut exported: Vec<Vec<Vec<u64>>> = bundle
                .faces
                .iter()
                .map(|face| {
                    let sigma = face.faces[0].generators.clone();
                    let mut verts: Vec<Vec<u64>> = sigma
                        .iter()
                        .filter(|v| g.vertices().contains(v))
                        .map(|v| v.0.clone())
                        .collect();
                    verts.sort();
                    verts
                })
                .collect();
            exported.sort();
            assert_eq!(exported, expected, "{text}");
        }
    }
}
