#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use silt::algebra::{Arrow, ArrowName, DgQuiver, Element, Path, Quiver, Scalar, VertexId};
use silt::fixtures;
use silt::potential::{classical_to_higher, Potential, QuiverWithPotential};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with small numerator and denominator.
pub fn coefficient(rng: &mut ChaCha8Rng) -> Scalar {
    let n: i64 = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
    let d: i64 = *[1, 1, 1, 2, 3].choose(rng).unwrap();
    Scalar::new(n.into(), d.into())
}

/// Quiver with `vertices` vertices and `arrows` arrows named `a0, a1, ...`,
/// degrees drawn from `0..=max_degree`.
pub fn random_quiver(rng: &mut ChaCha8Rng, vertices: u32, arrows: usize, max_degree: i64) -> Quiver {
    let mut q = Quiver::new(vertices);
    for k in 0..arrows {
        let s = rng.gen_range(1..=vertices);
        let t = rng.gen_range(1..=vertices);
        let d = rng.gen_range(0..=max_degree);
        q.add_arrow(Arrow::new(format!("a{k}").as_str(), s, t, d)).unwrap();
    }
    q
}

/// A walk of at most `max_len` arrows, written right to left.
pub fn random_path(rng: &mut ChaCha8Rng, quiver: &Quiver, start: VertexId, max_len: usize) -> Path {
    let len = rng.gen_range(0..=max_len);
    let mut names: Vec<ArrowName> = Vec::new();
    let mut at = start;
    for _ in 0..len {
        let out: Vec<&Arrow> = quiver.arrows_from(at).collect();
        let Some(a) = out.choose(rng) else { break };
        names.push(a.name.clone());
        at = a.target;
    }
    if names.is_empty() {
        return Path::stationary(start);
    }
    names.reverse();
    Path::from_names(quiver, names).unwrap()
}

pub fn random_vertex(rng: &mut ChaCha8Rng, quiver: &Quiver) -> VertexId {
    VertexId(rng.gen_range(1..=quiver.vertex_count()))
}

pub fn random_element(rng: &mut ChaCha8Rng, quiver: &Quiver, terms: usize, max_len: usize) -> Element {
    let mut x = Element::zero();
    for _ in 0..terms {
        let v = random_vertex(rng, quiver);
        let p = random_path(rng, quiver, v, max_len);
        x.add_term(p, coefficient(rng));
    }
    x
}

/// A closed walk of length `1..=max_len` in `quiver`, if one is found.
pub fn random_cycle(rng: &mut ChaCha8Rng, quiver: &Quiver, max_len: usize) -> Option<Path> {
    for _ in 0..50 {
        let v = random_vertex(rng, quiver);
        let p = random_path(rng, quiver, v, max_len);
        if !p.is_stationary() && p.target() == v {
            return Some(p);
        }
    }
    None
}

/// Classical quiver with potential: at most 4 vertices and 6 arrows, at most
/// 5 cycles of length at most 4, loops allowed.
pub fn random_classical_qp(rng: &mut ChaCha8Rng) -> QuiverWithPotential {
    let vertices = rng.gen_range(1..=4);
    let arrows = rng.gen_range(0..=6);
    let q = random_quiver(rng, vertices, arrows, 0);
    let mut w = Potential::zero();
    for _ in 0..rng.gen_range(0..=5) {
        if let Some(c) = random_cycle(rng, &q, 4) {
            w.add_cycle(&q, &c, coefficient(rng)).unwrap();
        }
    }
    QuiverWithPotential::classical(q, w).unwrap()
}

/// Vertices without a degree-0 loop, where mutation is defined.
pub fn admissible_vertices(quiver: &Quiver) -> Vec<VertexId> {
    quiver
        .vertices()
        .filter(|&v| !quiver.arrows().any(|a| a.is_loop() && a.source == v && a.degree == 0))
        .collect()
}

/// Vertices without any loop, where classical mutation is defined.
pub fn loop_free_vertices(quiver: &Quiver) -> Vec<VertexId> {
    quiver
        .vertices()
        .filter(|&v| !quiver.arrows().any(|a| a.is_loop() && a.source == v))
        .collect()
}

/// Hand-built dg quivers.
pub fn dg_corpus() -> Vec<(&'static str, DgQuiver)> {
    vec![("a3_rad2", fixtures::a3_rad2()), ("example_42", fixtures::example_42())]
}

/// Quivers with potential used by the agreement and derivative checks, in
/// dimensions 3, 4 and 5. The loop fixtures have a loop of positive degree at vertex 2.
pub fn qp_corpus() -> Vec<(String, QuiverWithPotential)> {
    let mut out = vec![
        (
            "linear_a3 (d=3)".to_string(),
            classical_to_higher(&fixtures::linear_a3()).unwrap(),
        ),
        (
            "triangle (d=3)".to_string(),
            classical_to_higher(&fixtures::triangle()).unwrap(),
        ),
    ];
    for d in [4, 5] {
        for w in [true, false] {
            let tag = if w { "" } else { ", W=0" };
            out.push((format!("cycle (d={d}{tag})"), fixtures::higher_cycle(d, w)));
            out.push((format!("loop (d={d}{tag})"), fixtures::higher_loop(d, w)));
        }
    }
    out
}
