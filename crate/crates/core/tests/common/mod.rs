//! Shared test support: a deterministic PRNG, random convenient supports,
//! and independent oracles written against the definitions rather than the
//! engine (staircase shoelace in the plane, closed forms elsewhere).
#![allow(dead_code)] // each test target uses its own subset

use newton_milnor::{rat, ratio, ExponentVector, NewtonPolyhedron, Rat};

/// SplitMix64: tiny, deterministic, seedable.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }
}

/// A random convenient support in the plane: two axis points plus up to
/// `extra` interior points, exponents bounded by `max_exp`.
pub fn random_convenient_support_2d(rng: &mut Rng, max_exp: u64, extra: usize) -> Vec<(u64, u64)> {
    let mut points = vec![(rng.range(1, max_exp), 0), (0, rng.range(1, max_exp))];
    for _ in 0..rng.below(extra as u64 + 1) {
        points.push((rng.range(1, max_exp), rng.range(1, max_exp)));
    }
    points
}

/// A random convenient support in dimension `n`.
pub fn random_convenient_support(
    rng: &mut Rng,
    n: usize,
    max_exp: u64,
    extra: usize,
) -> Vec<Vec<u64>> {
    let mut points: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = rng.range(1, max_exp);
            v
        })
        .collect();
    for _ in 0..rng.below(extra as u64 + 1) {
        points.push((0..n).map(|_| rng.below(max_exp + 1)).collect());
    }
    // Avoid accidental origin rows from the interior sampling.
    points.retain(|p| p.iter().any(|&x| x > 0));
    points
}

pub fn polyhedron_from(points: &[Vec<u64>], n: usize) -> NewtonPolyhedron {
    newton_milnor::newton_polyhedron(points.iter().map(|p| ExponentVector::new(p.clone())), n)
        .expect("nonempty support")
}

pub fn polyhedron_2d(points: &[(u64, u64)]) -> NewtonPolyhedron {
    let raw: Vec<Vec<u64>> = points.iter().map(|&(a, b)| vec![a, b]).collect();
    polyhedron_from(&raw, 2)
}

/// Independent plane covolume oracle: pareto-minimal points, lower-left
/// convex chain by cross products, then the shoelace formula on the
/// complement polygon. No shared code with the hull engine.
pub fn staircase_covolume(points: &[(u64, u64)]) -> Rat {
    let pts: Vec<(i64, i64)> = points.iter().map(|&(a, b)| (a as i64, b as i64)).collect();

    // Pareto-minimal subset.
    let mut minimal: Vec<(i64, i64)> = pts
        .iter()
        .copied()
        .filter(|&(x, y)| {
            !pts.iter()
                .any(|&(qx, qy)| (qx, qy) != (x, y) && qx <= x && qy <= y)
        })
        .collect();
    minimal.sort();
    minimal.dedup();
    assert!(
        minimal.first().map(|&(x, _)| x) == Some(0) && minimal.last().map(|&(_, y)| y) == Some(0),
        "oracle requires a convenient support"
    );

    // Lower-left convex chain: drop middle points on or above the segment
    // between their neighbors.
    let mut chain: Vec<(i64, i64)> = Vec::new();
    for p in minimal {
        while chain.len() >= 2 {
            let p1 = chain[chain.len() - 2];
            let p2 = chain[chain.len() - 1];
            let cross = (p.0 - p1.0) * (p2.1 - p1.1) - (p.1 - p1.1) * (p2.0 - p1.0);
            if cross >= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }

    // Shoelace over (0,0) followed by the chain.
    let mut polygon = vec![(0i64, 0i64)];
    polygon.extend(chain);
    let mut twice_area = 0i64;
    for i in 0..polygon.len() {
        let (x1, y1) = polygon[i];
        let (x2, y2) = polygon[(i + 1) % polygon.len()];
        twice_area += x1 * y2 - x2 * y1;
    }
    ratio(twice_area.abs(), 2)
}

/// The alternating factorial covolume sum for `x^a + y^b`, written directly
/// from the staircase oracle (not the engine).
pub fn plane_newton_number_oracle(a: u64, b: u64) -> Rat {
    let area = staircase_covolume(&[(a, 0), (0, b)]);
    rat(2) * area - rat((a + b) as i64) + rat(1)
}

/// Same for `x^a + y^b + z^c`: corner-simplex volumes in closed form.
pub fn space_newton_number_oracle(a: u64, b: u64, c: u64) -> Rat {
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let vol3 = ratio(a * b * c, 6);
    let vol2 = ratio(a * b, 2) + ratio(b * c, 2) + ratio(a * c, 2);
    let vol1 = rat(a + b + c);
    rat(6) * vol3 - rat(2) * vol2 + vol1 - rat(1)
}
