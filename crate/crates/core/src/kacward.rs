//! Twisted Kac-Ward matrices and the Arf-weighted partition function.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::angle::AnglePi;
use crate::cohomology::{spin_structures, Cocycle};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::ribbon::{Dart, IsoradialMap};
use crate::scalar::{Cx, Real};
use crate::weights::WeightSystem;

/// `I − T^φ`, indexed by darts.
pub type KwMatrix<T> = ComplexMatrix<T>;

/// Largest edge count accepted by [`tau_sqrt`].
pub const TAU_SQRT_MAX_EDGES: usize = 160;

/// Non-backtracking successors `e'` of each dart `e` with the exact angle
/// `π/2 − β(e', ē)/2`, so that `i·exp(−iβ/2) = exp(i·angle)`.
fn transitions(map: &IsoradialMap) -> Vec<Vec<(Dart, AnglePi)>> {
    (0..map.dart_count())
        .map(|e| {
            let back = map.reversal(e);
            map.vertex_darts(map.terminus(e))
                .iter()
                .filter(|&&f| f != back)
                .map(|&f| {
                    let beta = map.corner_beta(e, f).expect("consecutive non-backtracking darts");
                    (f, AnglePi::HALF_PI - beta.half())
                })
                .collect()
        })
        .collect()
}

fn check_inputs<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>, phi: &Cocycle) -> Result<()> {
    weights.check_len(map)?;
    if phi.dart_count() != map.dart_count() {
        return Err(Error::Dimension(format!("cocycle on {} darts, map has {}", phi.dart_count(), map.dart_count())));
    }
    Ok(())
}

fn assemble<T: Real>(
    map: &IsoradialMap,
    steps: &[Vec<(Dart, AnglePi)>],
    corner: &[Vec<Cx<T>>],
    weights: &WeightSystem<T>,
    phi: &[Cx<T>],
) -> KwMatrix<T> {
    let mut m = ComplexMatrix::identity(map.dart_count());
    for (e, succ) in steps.iter().enumerate() {
        let a = phi[e] * weights.edge(map.edge_of(e));
        for (&(f, _), &c) in succ.iter().zip(&corner[e]) {
            m[(e, f)] -= a * c;
        }
    }
    m
}

fn corner_factors<T: Real>(steps: &[Vec<(Dart, AnglePi)>]) -> Vec<Vec<Cx<T>>> {
    steps.iter().map(|s| s.iter().map(|&(_, a)| a.cis::<T>()).collect()).collect()
}

/// `I − T^φ` with `T_{e,e'} = φ(e)·i·exp(−iβ(e′,ē)/2)·x_e` for `t(e) = o(e′)`, `e′ ≠ ē`.
pub fn kw_matrix<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>, phi: &Cocycle) -> Result<KwMatrix<T>> {
    check_inputs(map, weights, phi)?;
    let steps = transitions(map);
    Ok(assemble(map, &steps, &corner_factors(&steps), weights, &phi.values_as::<T>()))
}

/// `τ^φ(G, x) = det(I − T^φ)`.
pub fn tau<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>, phi: &Cocycle) -> Result<Cx<T>> {
    Ok(kw_matrix(map, weights, phi)?.determinant())
}

/// `2^{−χ(G)} Π cos²θ/(1 + cos θ)` with `χ(G) = |V| − |E|`.
fn m_prefactor<T: Real>(map: &IsoradialMap) -> T {
    let chi = map.vertex_count() as i32 - map.edge_count() as i32;
    map.edge_thetas().iter().fold(T::of(2.0).powi(-chi), |acc, t| {
        let c = T::of(t.to_radians()).cos();
        acc * c * c / (T::one() + c)
    })
}

/// `τ^φ(G, ν)` at critical weights through `M = I + Jφμ − R(μ + 1)`.
pub fn tau_via_m<T: Real>(map: &IsoradialMap, phi: &Cocycle) -> Result<Cx<T>> {
    if phi.dart_count() != map.dart_count() {
        return Err(Error::Dimension(format!("cocycle on {} darts, map has {}", phi.dart_count(), map.dart_count())));
    }
    let mu = WeightSystem::<T>::critical_mu(map);
    let ph = phi.values_as::<T>();
    let n = map.dart_count();
    let mut m = ComplexMatrix::identity(n);
    for e in 0..n {
        let mu_e = mu.edge(map.edge_of(e));
        m[(e, map.reversal(e))] += ph[e] * mu_e;
        m[(e, map.rotate(e))] -= Cx::<T>::one() + mu_e;
    }
    Ok(m.determinant() * m_prefactor::<T>(map))
}

/// The polynomial `t ↦ τ(t·x)` from `2|E| + 1` samples on the unit circle.
fn tau_coefficients<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>, phi: &Cocycle) -> Result<Vec<Cx<T>>> {
    check_inputs(map, weights, phi)?;
    let steps = transitions(map);
    let corner = corner_factors::<T>(&steps);
    let ph = phi.values_as::<T>();
    let n = 2 * map.edge_count() + 1;
    let root = |k: usize| {
        let a = T::of(2.0) * T::PI() * T::of(k as f64) / T::of(n as f64);
        Cx::new(a.cos(), a.sin())
    };
    let samples: Vec<Cx<T>> = (0..n)
        .into_par_iter()
        .map(|k| assemble(map, &steps, &corner, &weights.scaled(root(k)), &ph).determinant())
        .collect();
    let scale = T::one() / T::of(n as f64);
    Ok((0..n)
        .map(|j| {
            samples
                .iter()
                .enumerate()
                .fold(Cx::zero(), |acc, (k, &s)| acc + s * root((j * k) % n).conj())
                * scale
        })
        .collect())
}

/// `√τ^λ(G, x)` with the sign of the polynomial square root whose constant
/// term is `+1`.
pub fn tau_sqrt<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>, lambda: &Cocycle) -> Result<T> {
    if !weights.is_real() {
        return Err(Error::ComplexWeights);
    }
    let edges = map.edge_count();
    if edges > TAU_SQRT_MAX_EDGES {
        return Err(Error::TooLarge(format!("{edges} edges; tau_sqrt handles at most {TAU_SQRT_MAX_EDGES}")));
    }
    let a = tau_coefficients(map, weights, lambda)?;
    // formal square root with q_0 = 1 through degree |E|
    let two = T::of(2.0);
    let mut q: Vec<Cx<T>> = vec![Cx::one()];
    for k in 1..=edges {
        let cross = (1..k).fold(Cx::zero(), |acc, j| acc + q[j] * q[k - j]);
        q.push((a[k] - cross) / two);
    }
    let scale = a.iter().fold(T::zero(), |s, z| s + z.norm()).max(T::one());
    let mut residual = T::zero();
    for (k, &ak) in a.iter().enumerate() {
        let lo = k.saturating_sub(edges);
        let sq: Cx<T> = (lo..=k.min(edges)).fold(Cx::zero(), |acc, j| acc + q[j] * q[k - j]);
        residual = residual.max((sq - ak).norm() / scale);
    }
    let tol = T::of(1e-6).max(T::epsilon() * T::of(1e3));
    if !(residual <= tol) {
        return Err(Error::NotASquare {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let p1: Cx<T> = q.iter().fold(Cx::zero(), |s, &z| s + z);
    let tau1: Cx<T> = a.iter().fold(Cx::zero(), |s, &z| s + z);
    let magnitude = tau1.re.max(T::zero()).sqrt();
    Ok(if p1.re < T::zero() { -magnitude } else { magnitude })
}

/// One spin structure's contribution to the partition function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KwTerm {
    pub label: usize,
    pub arf: u8,
    pub gauss_sum: i64,
    pub tau: [f64; 2],
    pub sqrt_tau: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KwPartition {
    pub z: f64,
    pub genus: u32,
    pub terms: Vec<KwTerm>,
}

/// `Z(G, x) = 2^{−g} Σ_λ (−1)^{Arf(λ)} √τ^λ(G, x)`, with per-structure terms.
pub fn partition_function_kw_terms<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>) -> Result<KwPartition> {
    if !weights.is_real() {
        return Err(Error::ComplexWeights);
    }
    let g = map.surface_genus();
    let mut terms = Vec::new();
    let mut z = T::zero();
    for s in spin_structures(map)? {
        let t = tau(map, weights, &s.lambda)?;
        let r = tau_sqrt(map, weights, &s.lambda)?;
        z += if s.arf.arf == 0 { r } else { -r };
        terms.push(KwTerm {
            label: s.label,
            arf: s.arf.arf,
            gauss_sum: s.arf.gauss_sum,
            tau: [t.re.to_f64().unwrap_or(f64::NAN), t.im.to_f64().unwrap_or(f64::NAN)],
            sqrt_tau: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    let z = z / T::of(2.0).powi(g as i32);
    Ok(KwPartition {
        z: z.to_f64().unwrap_or(f64::NAN),
        genus: g,
        terms,
    })
}

pub fn partition_function_kw<T: Real>(map: &IsoradialMap, weights: &WeightSystem<T>) -> Result<T> {
    if !weights.is_real() {
        return Err(Error::ComplexWeights);
    }
    let g = map.surface_genus();
    let mut z = T::zero();
    for s in spin_structures(map)? {
        let r = tau_sqrt(map, weights, &s.lambda)?;
        z += if s.arf.arf == 0 { r } else { -r };
    }
    Ok(z / T::of(2.0).powi(g as i32))
}

/// `Z^J = prefactor · Z(G, tanh J)` with prefactor `Π cosh J_e · 2^{|V|}`.
pub fn vdw_convert<T: Real>(map: &IsoradialMap, couplings: &[T]) -> Result<(T, WeightSystem<T>)> {
    if couplings.len() != map.edge_count() {
        return Err(Error::Dimension(format!("{} couplings for {} edges", couplings.len(), map.edge_count())));
    }
    let prefactor = couplings
        .iter()
        .fold(T::of(2.0).powi(map.vertex_count() as i32), |acc, j| acc * j.cosh());
    let nu: Vec<T> = couplings.iter().map(|j| j.tanh()).collect();
    Ok((prefactor, WeightSystem::from_real(&nu)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{gen_genus2_bouquet, gen_torus_lattice, LatticeKind};
    use crate::cohomology::{character_to_cocycle_exact, tree_cotree_basis};
    use approx::assert_relative_eq;

    fn torus11() -> IsoradialMap {
        gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap()
    }

    fn sign_char(m: &IsoradialMap, signs: &[bool]) -> Cocycle {
        let b = tree_cotree_basis(m).unwrap();
        let ph: Vec<AnglePi> = signs.iter().map(|&s| if s { AnglePi::PI } else { AnglePi::ZERO }).collect();
        character_to_cocycle_exact(m, &b, &ph).unwrap()
    }

    #[test]
    fn unit_torus_matrix_shape() {
        let m = torus11();
        let k = kw_matrix(&m, &WeightSystem::<f64>::critical_nu(&m), &Cocycle::trivial(4)).unwrap();
        assert_eq!(k.order(), 4);
        // four unit diagonals plus three successors per dart, one of which is the dart itself
        let off: usize = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| i != j && k[(i, j)].norm() > 0.0).count();
        assert_eq!(off, 8);
        assert_eq!(transitions(&m).iter().map(|s| s.len()).sum::<usize>(), 12);
    }

    #[test]
    fn zero_weights_identity() {
        let m = gen_genus2_bouquet();
        let k = kw_matrix(&m, &WeightSystem::<f64>::zeros(4), &Cocycle::trivial(8)).unwrap();
        assert_eq!(k, ComplexMatrix::identity(8));
    }

    #[test]
    fn unit_torus_values() {
        let m = torus11();
        let nu = WeightSystem::<f64>::critical_nu(&m);
        let t = tau(&m, &nu, &Cocycle::trivial(4)).unwrap();
        assert!(t.norm() < 1e-12, "{t}");
        let expected = 16.0 * (3.0 - 2.0 * 2f64.sqrt());
        let t = tau(&m, &nu, &sign_char(&m, &[true, true])).unwrap();
        assert_relative_eq!(t.re, expected, max_relative = 1e-12);
        assert!(t.im.abs() < 1e-12);
        let t = tau(&m, &nu, &sign_char(&m, &[true, false])).unwrap();
        assert_relative_eq!(t.re, expected / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn via_m_matches() {
        for m in [torus11(), gen_torus_lattice(LatticeKind::Square, 2, 2).unwrap(), gen_genus2_bouquet()] {
            let nu = WeightSystem::<f64>::critical_nu(&m);
            let k = tree_cotree_basis(&m).unwrap().rank();
            for a in 0..1usize << k {
                let signs: Vec<bool> = (0..k).map(|i| a >> i & 1 == 1).collect();
                let phi = sign_char(&m, &signs);
                let x = tau(&m, &nu, &phi).unwrap();
                let y = tau_via_m::<f64>(&m, &phi).unwrap();
                assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn sqrt_values() {
        let m = torus11();
        let nu = WeightSystem::<f64>::critical_nu(&m);
        let s2 = 2f64.sqrt();
        assert_relative_eq!(tau_sqrt(&m, &nu, &sign_char(&m, &[true, true])).unwrap(), 4.0 * (s2 - 1.0), max_relative = 1e-10);
        assert_relative_eq!(tau_sqrt(&m, &nu, &sign_char(&m, &[true, false])).unwrap(), 4.0 - 2.0 * s2, max_relative = 1e-10);
        assert_eq!(tau_sqrt(&m, &WeightSystem::<f64>::zeros(2), &Cocycle::trivial(4)).unwrap(), 1.0);
    }

    #[test]
    fn not_a_square() {
        let m = torus11();
        let b = tree_cotree_basis(&m).unwrap();
        let phi = character_to_cocycle_exact(&m, &b, &[AnglePi::new(1, 3), AnglePi::ZERO]).unwrap();
        let nu = WeightSystem::<f64>::critical_nu(&m);
        assert!(matches!(tau_sqrt(&m, &nu, &phi), Err(Error::NotASquare { .. })));
        let cw = WeightSystem::<f64>::critical_mu(&m);
        assert_eq!(tau_sqrt(&m, &cw, &phi), Err(Error::ComplexWeights));
    }

    #[test]
    fn unit_torus_partition() {
        let m = torus11();
        let z = partition_function_kw(&m, &WeightSystem::<f64>::critical_nu(&m)).unwrap();
        assert_relative_eq!(z, 2.0, max_relative = 1e-10);
        let z32 = partition_function_kw(&m, &WeightSystem::<f32>::critical_nu(&m)).unwrap();
        assert!((z32 - 2.0).abs() < 1e-4);
    }

    #[test]
    fn bouquet_partition() {
        let m = gen_genus2_bouquet();
        let z = partition_function_kw(&m, &WeightSystem::<f64>::critical_nu(&m)).unwrap();
        let nu = (3.0 * std::f64::consts::PI / 16.0).tan();
        assert_relative_eq!(z, (1.0 + nu).powi(4), max_relative = 1e-10);
    }

    #[test]
    fn vdw_square_coupling() {
        let m = torus11();
        let jc = (1.0 + 2f64.sqrt()).sqrt().ln();
        let (pre, nu) = vdw_convert(&m, &[jc, jc]).unwrap();
        assert_relative_eq!(nu.edge(0).re, 2f64.sqrt() - 1.0, max_relative = 1e-14);
        assert_relative_eq!(pre, jc.cosh().powi(2) * 2.0, max_relative = 1e-14);
        let (pre, nu) = vdw_convert(&m, &[0.0, 0.0]).unwrap();
        assert_eq!(pre, 2.0);
        assert!(nu.values().iter().all(|z| z.norm() == 0.0));
    }
}
