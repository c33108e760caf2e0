#![allow(dead_code)]

use isoradial_kw::cohomology::{character_to_cocycle, tree_cotree_basis, Character, Cocycle};
use isoradial_kw::{
    gen_genus2_bouquet, gen_torus_lattice, star_construction, AbstractGraph, AnglePi, CombinatorialMap,
    HypothesisMode, IsoradialMap, LatticeKind,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Lattice tori and the bouquet, all with |E| ≤ 12.
pub fn small_corpus() -> Vec<(String, IsoradialMap)> {
    let mut out = Vec::new();
    for (kind, sizes) in [
        (LatticeKind::Square, &[(1, 1), (2, 1), (2, 2), (3, 2)][..]),
        (LatticeKind::Triangular, &[(1, 1), (2, 1), (2, 2)][..]),
        (LatticeKind::Hexagonal, &[(1, 1), (2, 1), (2, 2)][..]),
    ] {
        for &(n, m) in sizes {
            out.push((format!("{kind:?} {n}x{m}"), gen_torus_lattice(kind, n, m).unwrap()));
        }
    }
    out.push(("bouquet".into(), gen_genus2_bouquet()));
    out
}

/// Graphs with loops and multiple edges, embedded by the star construction.
pub fn loopy_corpus() -> Vec<(String, IsoradialMap)> {
    let q = AnglePi::new(1, 4);
    let graphs: Vec<(&str, AbstractGraph, AnglePi)> = vec![
        ("single loop", AbstractGraph::from_edges(1, &[(0, 0)]), q),
        ("two loops", AbstractGraph::from_edges(1, &[(0, 0), (0, 0)]), q),
        ("digon", AbstractGraph::from_edges(2, &[(0, 1), (0, 1)]), AnglePi::new(1, 3)),
        ("triple edge", AbstractGraph::from_edges(2, &[(0, 1), (1, 0), (0, 1)]), AnglePi::new(1, 5)),
        ("triangle with loop", AbstractGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (1, 1)]), q),
        ("k4", AbstractGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), AnglePi::new(1, 3)),
        ("quad odd", AbstractGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1), (0, 1)]), q),
    ];
    graphs
        .into_iter()
        .map(|(name, g, t)| (name.to_string(), star_construction(&g, t).unwrap()))
        .collect()
}

pub fn satisfies(map: &IsoradialMap, mode: HypothesisMode) -> bool {
    map.check_hypotheses(mode).passed
}

pub fn random_character(map: &CombinatorialMap, rng: &mut ChaCha8Rng) -> Cocycle {
    let basis = tree_cotree_basis(map).unwrap();
    let vals = (0..basis.rank())
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    character_to_cocycle(map, &Character::on_basis(&basis, vals)).unwrap()
}

pub fn random_gauge(vertices: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..vertices)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-30)
}
