//! Two-sided numeric checks of the determinant identities.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::builders::{gen_torus_lattice, LatticeKind};
use crate::cohomology::{spin_structures, tree_cotree_basis, Character, Cocycle};
use crate::cohomology::{character_to_cocycle, realize_on_primal_and_dual};
use crate::error::{Error, Result};
use crate::kacward::{partition_function_kw, tau, vdw_convert};
use crate::laplacian::{det_laplacian, laplacian_matrix};
use crate::ribbon::{HypothesisMode, HypothesisReport, IsoradialMap, QuadGraph};
use crate::weights::{critical_coupling, WeightSystem};

const RESIDUAL_FLOOR: f64 = 1e-30;

/// Both sides of an identity and their relative disagreement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    /// `|lhs − rhs| / max(|lhs|, |rhs|, 1e-30)`.
    pub residual: f64,
    /// `|lhs − rhs|`.
    pub absolute: f64,
    pub hypotheses: Option<HypothesisReport>,
    pub inputs: Value,
}

impl VerificationReport {
    fn new(lhs: Complex64, rhs: Complex64, hypotheses: Option<HypothesisReport>, inputs: Value) -> Self {
        let absolute = (lhs - rhs).norm();
        VerificationReport {
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            residual: absolute / lhs.norm().max(rhs.norm()).max(RESIDUAL_FLOOR),
            absolute,
            hypotheses,
            inputs,
        }
    }
}

fn require_genus_le_one(map: &IsoradialMap) -> Result<()> {
    match map.surface_genus() {
        g if g > 1 => Err(Error::GenusTooHigh(g)),
        _ => Ok(()),
    }
}

/// Cocycle on the quad graph with the given holonomies on its tree-cotree basis.
pub fn quad_character(quad: &QuadGraph, values: Vec<Complex64>) -> Result<Cocycle> {
    let basis = tree_cotree_basis(&quad.map)?;
    character_to_cocycle(&quad.map, &Character::on_basis(&basis, values))
}

/// `2^{|V*|} Π(1 + cos θ*) τ(G*, ν*) = 2^{|V|} Π(1 + cos θ) τ(G, ν)` for one surface class.
///
/// `psi` is a cocycle on `map.quad_graph()`; it is pushed to both graphs.
pub fn duality_check(map: &IsoradialMap, psi: &Cocycle) -> Result<VerificationReport> {
    map.require(HypothesisMode::AllOdd)?;
    let quad = map.quad_graph();
    let (phi, phi_star) = realize_on_primal_and_dual(map, &quad, psi)?;
    let dual = map.dual();
    let side = |g: &IsoradialMap, c: &Cocycle| -> Result<Complex64> {
        let t = tau(g, &WeightSystem::<f64>::critical_nu(g), c)?;
        let pre = g
            .edge_thetas()
            .iter()
            .fold(2f64.powi(g.vertex_count() as i32), |a, th| a * (1.0 + th.to_radians().cos()));
        Ok(t * pre)
    };
    let lhs = side(&dual, &phi_star)?;
    let rhs = side(map, &phi)?;
    Ok(VerificationReport::new(
        lhs,
        rhs,
        Some(map.check_hypotheses(HypothesisMode::AllOdd)),
        json!({"identity": "duality", "vertices": map.vertex_count(), "dual_vertices": dual.vertex_count()}),
    ))
}

/// `τ^φ(G, ν) = (−1)^N 2^{−χ(G)} Π cos θ/(1 + cos θ) det Δ^φ(G, c)` on genus ≤ 1.
pub fn delta_identity_check(map: &IsoradialMap, phi: &Cocycle) -> Result<VerificationReport> {
    require_genus_le_one(map)?;
    map.require(HypothesisMode::PrimalOdd)?;
    let lhs = tau(map, &WeightSystem::<f64>::critical_nu(map), phi)?;
    let det = det_laplacian(map, &WeightSystem::<f64>::critical_c(map), phi)?;
    let n = map.count_three_mod_four();
    let chi = map.vertex_count() as i32 - map.edge_count() as i32;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = map.edge_thetas().iter().fold(sign * 2f64.powi(-chi), |a, th| {
        let c = th.to_radians().cos();
        a * c / (1.0 + c)
    });
    Ok(VerificationReport::new(
        lhs,
        det * pre,
        Some(map.check_hypotheses(HypothesisMode::PrimalOdd)),
        json!({"identity": "laplacian", "three_mod_four": n, "det_laplacian": [det.re, det.im]}),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    /// `τ^φ(G, ν) / det Δ^φ(G, c)` per kept character.
    pub ratios: Vec<[f64; 2]>,
    /// `max |ratio| / min |ratio|`.
    pub spread: f64,
    /// Indices of characters whose `det Δ` was too small to divide by.
    pub skipped: Vec<usize>,
}

/// Ratios `τ/det Δ` over several characters on a surface of genus ≥ 2.
pub fn nonproportionality_probe(map: &IsoradialMap, characters: &[Cocycle]) -> Result<ProbeResult> {
    let g = map.surface_genus();
    if g < 2 {
        return Err(Error::GenusTooLow(g));
    }
    let nu = WeightSystem::<f64>::critical_nu(map);
    let c = WeightSystem::<f64>::critical_c(map);
    let mut ratios = Vec::new();
    let mut skipped = Vec::new();
    for (i, phi) in characters.iter().enumerate() {
        let lap = laplacian_matrix(map, &c, phi)?;
        let det = lap.determinant();
        if det.norm() <= 1e-9 * lap.row_norm_product().max(1.0) {
            skipped.push(i);
            continue;
        }
        let r = tau(map, &nu, phi)? / det;
        ratios.push([r.re, r.im]);
    }
    if ratios.is_empty() {
        return Err(Error::DivisionNearZero);
    }
    let mags: Vec<f64> = ratios.iter().map(|r| r[0].hypot(r[1])).collect();
    let max = mags.iter().cloned().fold(f64::MIN, f64::max);
    let min = mags.iter().cloned().fold(f64::MAX, f64::min);
    Ok(ProbeResult {
        ratios,
        spread: max / min.max(RESIDUAL_FLOOR),
        skipped,
    })
}

/// `sinh(2J(θ)) sinh(2J(π/2 − θ))` against 1.
pub fn kw_coupling_check(theta: f64) -> Result<VerificationReport> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::ThetaOutOfRange {
            edge: 0,
            angle: format!("{theta} rad"),
        });
    }
    let j = critical_coupling(theta);
    let j_star = critical_coupling(std::f64::consts::FRAC_PI_2 - theta);
    let lhs = (2.0 * j).sinh() * (2.0 * j_star).sinh();
    Ok(VerificationReport::new(
        Complex64::new(lhs, 0.0),
        Complex64::new(1.0, 0.0),
        None,
        json!({"identity": "kramers_wannier", "theta": theta, "J": j, "J_dual": j_star}),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeEnergyRow {
    pub n: usize,
    pub z_kw: f64,
    /// `−(1/n²) log Z^J(G_n)`.
    pub f_n: f64,
    /// `−|V| log 2 / 2 − (1/2n²) log det Δ^λ(G_n, c)` for the first non-trivial `λ`.
    pub laplacian_side: f64,
    /// The same for every non-trivial spin structure, in label order.
    pub laplacian_sides: Vec<f64>,
    pub difference: f64,
    /// Largest Laplacian-identity residual over the non-trivial spin structures.
    pub delta_residual: f64,
}

/// Largest lattice size accepted by [`free_energy_table`].
pub const FREE_ENERGY_MAX_N: usize = 12;

pub fn free_energy_row(kind: LatticeKind, n: usize) -> Result<FreeEnergyRow> {
    let map = gen_torus_lattice(kind, n, n)?;
    let couplings: Vec<f64> = map.edge_thetas().iter().map(|t| critical_coupling(t.to_radians())).collect();
    let (prefactor, nu) = vdw_convert(&map, &couplings)?;
    let z_kw = partition_function_kw(&map, &nu)?;
    let n2 = (n * n) as f64;
    let f_n = -(prefactor.ln() + z_kw.ln()) / n2;
    let c = WeightSystem::<f64>::critical_c(&map);
    let per_cell = kind.vertices_per_cell() as f64;
    let mut sides = Vec::new();
    let mut delta_residual = 0f64;
    for s in spin_structures(&map)?.into_iter().filter(|s| !s.trivial_class) {
        let det = det_laplacian(&map, &c, &s.lambda)?;
        sides.push(-per_cell * 2f64.ln() / 2.0 - det.re.ln() / (2.0 * n2));
        delta_residual = delta_residual.max(delta_identity_check(&map, &s.lambda)?.residual);
    }
    let laplacian_side = *sides.first().ok_or(Error::UnsolvableSigns)?;
    Ok(FreeEnergyRow {
        n,
        z_kw,
        f_n,
        laplacian_side,
        laplacian_sides: sides,
        difference: (f_n - laplacian_side).abs(),
        delta_residual,
    })
}

/// Finite-size free energies of the `n×n` tori for `n = 1..=n_max`.
pub fn free_energy_table(kind: LatticeKind, n_max: usize) -> Result<Vec<FreeEnergyRow>> {
    if n_max > FREE_ENERGY_MAX_N {
        return Err(Error::SizeOverflow(format!("n_max {n_max} exceeds {FREE_ENERGY_MAX_N}")));
    }
    (1..=n_max).map(|n| free_energy_row(kind, n)).collect()
}
