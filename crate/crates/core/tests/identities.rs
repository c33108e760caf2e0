mod common;

use common::*;
use isoradial_kw::cohomology::h1_mod2_reps;
use isoradial_kw::identities::{delta_identity_check, duality_check, free_energy_table, nonproportionality_probe};
use isoradial_kw::{gen_genus2_bouquet, gen_torus_lattice, LatticeKind};

#[test]
fn duality_on_corpus() {
    let mut r = rng(21);
    let mut maps: Vec<_> = small_corpus().into_iter().map(|(_, m)| m).collect();
    maps.push(gen_torus_lattice(LatticeKind::Square, 3, 3).unwrap());
    for map in maps {
        let quad = map.quad_graph();
        for _ in 0..10 {
            let psi = random_character(&quad.map, &mut r);
            let rep = duality_check(&map, &psi).unwrap();
            assert!(rep.residual <= 1e-9, "{rep:?}");
        }
    }
}

#[test]
fn laplacian_identity_on_tori() {
    for kind in [LatticeKind::Square, LatticeKind::Triangular, LatticeKind::Hexagonal] {
        for n in 1..=4 {
            for m in 1..=n {
                let map = gen_torus_lattice(kind, n, m).unwrap();
                for phi in h1_mod2_reps(&map).unwrap().into_iter().skip(1) {
                    let rep = delta_identity_check(&map, &phi).unwrap();
                    assert!(rep.residual <= 1e-9, "{kind:?} {n}x{m}: {rep:?}");
                }
            }
        }
    }
}

#[test]
fn genus_two_not_proportional() {
    let b = gen_genus2_bouquet();
    let mut r = rng(22);
    let chars: Vec<_> = (0..50).map(|_| random_character(&b, &mut r)).collect();
    let p = nonproportionality_probe(&b, &chars).unwrap();
    assert!(p.skipped.is_empty());
    assert!(p.spread > 1.01, "{}", p.spread);
}

#[test]
fn free_energy_gap_shrinks() {
    let rows = free_energy_table(LatticeKind::Square, 6).unwrap();
    assert!(rows.iter().all(|r| r.delta_residual <= 1e-9));
    assert!(rows[1..].windows(2).all(|w| w[1].difference <= w[0].difference));
}
