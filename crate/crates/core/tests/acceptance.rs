//! Acceptance suite: every criterion runs at its stated tolerance (exact
//! equality unless noted) and prints one pass/fail line. Oracles are
//! independent of the engine: staircase shoelace areas, closed-form local
//! multiplicities, and hand formulas.

mod common;

use std::time::{Duration, Instant};

use common::{
    plane_newton_number_oracle, polyhedron_2d, polyhedron_from, random_convenient_support,
    random_convenient_support_2d, space_newton_number_oracle, staircase_covolume, Rng,
};
use newton_milnor::nondegen::export_face_systems;
use newton_milnor::parser::parse_map;
use newton_milnor::{
    covolume, covolume_with_box, kouchnirenko_number, milnor_number, minkowski_weighted_sum,
    mixed_covolumes, newton_number, newton_polyhedron, rat, rat_string, verify_face_sum,
    ExponentVector, NewtonPolyhedron, PolyExpr, Rat,
};

fn pass(criterion: u32, name: &str, details: &str) {
    println!("ACCEPTANCE {criterion} ({name}): PASS ({details})");
}

fn germ_polyhedra(text: &str) -> Vec<NewtonPolyhedron> {
    let germ = parse_map(text, None).unwrap();
    germ.components()
        .iter()
        .map(|c| newton_polyhedron(c.support(), germ.n()).unwrap())
        .collect()
}

#[test]
fn criterion_01_hypersurface_cusp() {
    let start = Instant::now();
    let germ = parse_map("x^2 + y^3", None).unwrap();
    let report = milnor_number(&germ, None).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(report.mu, Some(2), "cusp must have mu = 2");
    assert_eq!(report.nu, rat(2));
    assert!(
        elapsed < Duration::from_secs(1),
        "cusp took {elapsed:?}, bound 1 s"
    );
    pass(1, "hypersurface cusp", &format!("mu = 2 in {elapsed:?}"));
}

#[test]
fn criterion_02_brieskorn_pham_grid() {
    let mut worst = Duration::ZERO;
    for a in 2u64..=6 {
        for b in 2u64..=6 {
            let start = Instant::now();
            let germ = parse_map(&format!("x^{a} + y^{b}"), None).unwrap();
            let report = milnor_number(&germ, None).unwrap();
            let elapsed = start.elapsed();
            worst = worst.max(elapsed);
            let expected = (a - 1) * (b - 1);
            assert_eq!(report.mu, Some(expected), "x^{a} + y^{b}");
            assert_eq!(report.nu, plane_newton_number_oracle(a, b), "oracle sum");
            assert!(elapsed < Duration::from_secs(5), "x^{a}+y^{b}: {elapsed:?}");
        }
    }
    for a in 2u64..=4 {
        for b in 2u64..=4 {
            for c in 2u64..=4 {
                let start = Instant::now();
                let germ = parse_map(&format!("x^{a} + y^{b} + z^{c}"), None).unwrap();
                let report = milnor_number(&germ, None).unwrap();
                let elapsed = start.elapsed();
                worst = worst.max(elapsed);
                let expected = (a - 1) * (b - 1) * (c - 1);
                assert_eq!(report.mu, Some(expected), "x^{a} + y^{b} + z^{c}");
                assert_eq!(report.nu, space_newton_number_oracle(a, b, c), "oracle sum");
                assert!(
                    elapsed < Duration::from_secs(5),
                    "x^{a}+y^{b}+z^{c}: {elapsed:?}"
                );
            }
        }
    }
    pass(
        2,
        "Brieskorn-Pham grid",
        &format!("25 plane + 27 space germs, slowest {worst:?}"),
    );
}

#[test]
fn criterion_03_smooth_germs() {
    for text in ["x + y", "x + y + z"] {
        let germ = parse_map(text, None).unwrap();
        let report = milnor_number(&germ, None).unwrap();
        assert_eq!(report.mu, Some(0), "{text} is smooth");
    }
    pass(3, "smooth germs", "x+y and x+y+z both give mu = 0");
}

#[test]
fn criterion_04_monomial_pairs_nonconvenient() {
    let mut worst = Duration::ZERO;
    for a in 1u64..=4 {
        for b in 1u64..=4 {
            let start = Instant::now();
            let germ = parse_map(&format!("x^{a}; y^{b}"), None).unwrap();
            let report = milnor_number(&germ, None).unwrap();
            let elapsed = start.elapsed();
            worst = worst.max(elapsed);
            // Local multiplicity of the monomial ideal (x^a, y^b) is ab.
            let expected = a * b - 1;
            assert_eq!(report.mu, Some(expected), "(x^{a}; y^{b})");
            assert!(report.extension_used.is_some());
            let trace = &report.stabilization_trace;
            assert!(trace.len() >= 2, "stabilization trace recorded");
            let first = &trace[0].1;
            assert!(
                trace.iter().all(|(_, v)| v == first),
                "(x^{a}; y^{b}): nu constant across all tested extensions, trace {trace:?}"
            );
            assert!(
                elapsed < Duration::from_secs(5),
                "(x^{a}; y^{b}): {elapsed:?}"
            );
        }
    }
    pass(
        4,
        "0-dimensional ICIS, non-convenient path",
        &format!("16 pairs, mu = ab-1, constant traces, slowest {worst:?}"),
    );
}

#[test]
fn criterion_05_mixed_order_reduction() {
    let germ = parse_map("x; y^2 + z^3", None).unwrap();
    let report = milnor_number(&germ, None).unwrap();
    assert_eq!(
        report.mu,
        Some(2),
        "(x; y^2 + z^3) reduces to the plane cusp"
    );
    pass(5, "mixed-order reduction", "(x; y^2+z^3) gives mu = 2");
}

#[test]
fn criterion_06_covolume_oracle_equivalence() {
    let mut rng = Rng::new(0x5eed_c001 ^ 0x9e37);
    for case in 0..100 {
        let support = random_convenient_support_2d(&mut rng, 12, 6);
        assert!(support.len() <= 8);
        let g = polyhedron_2d(&support);
        let engine = covolume(&g).unwrap();
        let oracle = staircase_covolume(&support);
        assert_eq!(engine, oracle, "case {case}: support {support:?}");
    }
    pass(
        6,
        "covolume oracle equivalence",
        "100 random supports, engine == staircase shoelace exactly",
    );
}

#[test]
fn criterion_07_polynomiality_held_out() {
    let mut rng = Rng::new(771);
    let mut checked = 0u32;
    for case in 0..20 {
        let n = 2 + (case % 2) as usize; // alternate n = 2, 3
        let p = 2 + (case % 2) as usize; // pairs in the plane, triples in space
        let polys: Vec<NewtonPolyhedron> = (0..p)
            .map(|_| {
                let support = random_convenient_support(&mut rng, n, 6, 3);
                polyhedron_from(&support, n)
            })
            .collect();
        let refs: Vec<&NewtonPolyhedron> = polys.iter().collect();
        let table = mixed_covolumes(&refs).unwrap();

        // Reconstruct the covolume polynomial from the table and evaluate at
        // ten fresh weight tuples against the public Minkowski sum route.
        let d_fact = factorial(n as u64);
        for t in 0..10u64 {
            let lambda: Vec<u64> = (0..p).map(|s| 3 + ((t + s as u64) % 4)).collect();
            let mut predicted = Rat::from_integer(0.into());
            for (k, v) in table.entries() {
                let mut k_fact = Rat::from_integer(1.into());
                for &ki in k {
                    k_fact *= factorial(ki);
                }
                let mut term = &d_fact / k_fact * v;
                for (&ki, &li) in k.iter().zip(&lambda) {
                    for _ in 0..ki {
                        term *= rat(li as i64);
                    }
                }
                predicted += term;
            }
            let sum = minkowski_weighted_sum(&refs, &lambda).unwrap();
            let actual = covolume(&sum).unwrap();
            assert_eq!(predicted, actual, "case {case}, lambda {lambda:?}");
            checked += 1;
        }
    }
    pass(
        7,
        "polynomiality held-out",
        &format!("20 tuples x 10 fresh weights = {checked} exact matches"),
    );
}

fn factorial(n: u64) -> Rat {
    let mut out = Rat::from_integer(1.into());
    for k in 2..=n {
        out *= rat(k as i64);
    }
    out
}

#[test]
fn criterion_08_kouchnirenko_agreement() {
    let mut rng = Rng::new(88);
    for n in [2usize, 3] {
        for case in 0..50 {
            let support = random_convenient_support(&mut rng, n, 8, 4);
            let g = polyhedron_from(&support, n);
            let via_mixed = newton_number(&[&g]).unwrap().nu;
            let direct = kouchnirenko_number(&g).unwrap();
            assert_eq!(via_mixed, direct, "n = {n}, case {case}: {support:?}");
        }
    }
    pass(
        8,
        "Kouchnirenko agreement",
        "newton_number(p=1) == kouchnirenko_number on 50 supports each for n = 2, 3",
    );
}

#[test]
fn criterion_09_invariance_suite() {
    let mut rng = Rng::new(99);

    // Component-permutation invariance of nu.
    for _ in 0..5 {
        let s1 = random_convenient_support(&mut rng, 2, 8, 4);
        let s2 = random_convenient_support(&mut rng, 2, 8, 4);
        let g1 = polyhedron_from(&s1, 2);
        let g2 = polyhedron_from(&s2, 2);
        assert_eq!(
            newton_number(&[&g1, &g2]).unwrap().nu,
            newton_number(&[&g2, &g1]).unwrap().nu
        );
    }

    // Truncation-box invariance: M vs M + 1.
    for _ in 0..10 {
        let support = random_convenient_support(&mut rng, 3, 6, 4);
        let g = polyhedron_from(&support, 3);
        let m = support.iter().flatten().copied().max().unwrap();
        assert_eq!(
            covolume_with_box(&g, m).unwrap(),
            covolume_with_box(&g, m + 1).unwrap()
        );
    }

    // Euler relation on every exported face of 20 random hypersurface germs.
    let mut euler_faces = 0u32;
    for _ in 0..20 {
        let support = random_convenient_support(&mut rng, 2, 7, 4);
        let terms: Vec<(ExponentVector, newton_milnor::GaussianRational)> = support
            .iter()
            .map(|p| {
                let coeff = newton_milnor::GaussianRational::from_integer(1 + rng.below(5) as i64);
                (ExponentVector::new(p.clone()), coeff)
            })
            .collect();
        let poly = PolyExpr::new(2, terms).unwrap();
        let germ = newton_milnor::AnalyticMapGerm::new(2, vec![poly.clone()]).unwrap();
        let bundle = export_face_systems(&germ).unwrap();
        for face in &bundle.faces {
            let system = match &face.systems[0] {
                Some(s) => s,
                None => continue,
            };
            // sum_i q_i x_i d/dx_i (h_face) == d * h_face, exactly.
            let mut lhs: Option<PolyExpr> = None;
            for (i, qi) in face.direction.iter().enumerate() {
                if let Some(term) = system.x_del_x(i).and_then(|t| t.scale(qi)) {
                    lhs = Some(match lhs {
                        None => term,
                        Some(acc) => acc.add(&term).unwrap(),
                    });
                }
            }
            let rhs = system.scale(&face.values[0]).unwrap();
            let lhs = lhs.expect("weighted derivative of a face system is nonzero");
            assert!(lhs.sub(&rhs).is_none(), "Euler relation failed");
            euler_faces += 1;
        }
    }

    // Face-sum reconstruction on all exported faces of 10 random pairs.
    let mut reconstructed = 0u32;
    for _ in 0..10 {
        let s1 = random_convenient_support(&mut rng, 2, 6, 3);
        let s2 = random_convenient_support(&mut rng, 2, 6, 3);
        let text = format!("{}; {}", support_text(&s1), support_text(&s2));
        let germ = parse_map(&text, None).unwrap();
        let polys = germ_polyhedra(&text);
        let refs: Vec<&NewtonPolyhedron> = polys.iter().collect();
        let sum = minkowski_weighted_sum(&refs, &[1, 1]).unwrap();
        let bundle = export_face_systems(&germ).unwrap();
        assert!(!bundle.faces.is_empty());
        for face in &bundle.faces {
            let sigma = sum.face_of_direction(&face.direction).unwrap();
            assert!(
                verify_face_sum(&sigma, &face.faces),
                "face {:?} failed reconstruction",
                face.direction.iter().map(rat_string).collect::<Vec<_>>()
            );
            reconstructed += 1;
        }
    }

    pass(
        9,
        "invariance suite",
        &format!(
            "permutation + box invariance, {euler_faces} Euler checks, {reconstructed} face reconstructions"
        ),
    );
}

fn support_text(points: &[Vec<u64>]) -> String {
    points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(i, &e)| format!("x{}^{e}", i + 1))
                .collect::<Vec<_>>()
                .join("*")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[test]
fn criterion_10_runtime_bound() {
    let mut rng = Rng::new(1010);
    let mut worst = Duration::ZERO;
    for trial in 0..3 {
        // The full envelope: n = 4, p = 3, 20 support points per component.
        let mut texts = Vec::new();
        for _ in 0..3 {
            let mut support = random_convenient_support(&mut rng, 4, 10, 0);
            while support.len() < 20 {
                let p: Vec<u64> = (0..4).map(|_| rng.below(11)).collect();
                if p.iter().any(|&x| x > 0) {
                    support.push(p);
                }
            }
            texts.push(support_text(&support));
        }
        let germ = parse_map(&texts.join("; "), None).unwrap();
        assert!(germ.components().iter().all(|c| c.terms().len() <= 20));

        let start = Instant::now();
        let report = milnor_number(&germ, None).unwrap();
        let elapsed = start.elapsed();
        worst = worst.max(elapsed);
        assert!(
            elapsed < Duration::from_secs(10),
            "trial {trial} took {elapsed:?} (bound 10 s); nu = {}",
            rat_string(&report.nu)
        );
    }
    pass(
        10,
        "full pipeline runtime bound",
        &format!("3 germs at n=4, p=3, 20 points each; slowest {worst:?}"),
    );
}
