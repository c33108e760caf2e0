//! Brute-force ground truths.
//!
//! Nothing here calls the Kac-Ward, Laplacian or cohomology code; graph
//! structure comes straight from the map's darts.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ribbon::{CombinatorialMap, Dart, IsoradialMap};
use crate::scalar::{Cx, Real};

/// Largest exponent accepted by the exhaustive enumerations.
pub const ORACLE_MAX_BITS: usize = 24;

/// Subset of the unoriented edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphMask {
    bits: Vec<u64>,
    len: usize,
}

impl SubgraphMask {
    pub fn empty(edges: usize) -> Self {
        SubgraphMask {
            bits: vec![0; edges.div_ceil(64)],
            len: edges,
        }
    }

    pub fn full(edges: usize) -> Self {
        let mut m = Self::empty(edges);
        for e in 0..edges {
            m.insert(e);
        }
        m
    }

    pub fn from_index(edges: usize, index: u64) -> Self {
        let mut m = Self::empty(edges);
        for e in 0..edges.min(64) {
            if index >> e & 1 == 1 {
                m.insert(e);
            }
        }
        m
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.bits[e / 64] |= 1 << (e % 64);
    }

    pub fn toggle_all(&mut self, other: &SubgraphMask) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&e| self.contains(e))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.parent[a] = b;
        true
    }
}

/// Endpoints of each edge, read from its smallest dart.
fn endpoints(map: &CombinatorialMap) -> Vec<(usize, usize)> {
    (0..map.edge_count())
        .map(|e| {
            let d = map.edge_dart(e);
            (map.origin(d), map.terminus(d))
        })
        .collect()
}

/// Even-subgraph basis: one fundamental cycle per edge outside a spanning forest.
fn cycle_basis(vertex_count: usize, ends: &[(usize, usize)]) -> Vec<SubgraphMask> {
    let mut uf = UnionFind::new(vertex_count);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    let mut extra = Vec::new();
    for (e, &(u, v)) in ends.iter().enumerate() {
        if uf.union(u, v) {
            adj[u].push((v, e));
            adj[v].push((u, e));
        } else {
            extra.push(e);
        }
    }
    // depth-first parents in the forest
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; vertex_count];
    let mut depth = vec![usize::MAX; vertex_count];
    for r in 0..vertex_count {
        if depth[r] != usize::MAX {
            continue;
        }
        depth[r] = 0;
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for &(y, e) in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }
    }
    extra
        .into_iter()
        .map(|e| {
            let mut m = SubgraphMask::empty(ends.len());
            m.insert(e);
            let (mut a, mut b) = ends[e];
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (p, pe) = parent[a].expect("non-root vertex has a parent");
                m.insert(pe);
                a = p;
            }
            m
        })
        .collect()
}

/// `Σ_{even γ} Π_{e∈γ} x_e` by Gray-code walk over the cycle space.
pub fn even_subgraph_z<T: Real>(map: &CombinatorialMap, weights: &[Cx<T>]) -> Result<Cx<T>> {
    if weights.len() != map.edge_count() {
        return Err(Error::Dimension(format!("{} weights for {} edges", weights.len(), map.edge_count())));
    }
    let basis = cycle_basis(map.vertex_count(), &endpoints(map));
    if basis.len() > ORACLE_MAX_BITS {
        return Err(Error::TooLarge(format!("cycle space of dimension {}", basis.len())));
    }
    let mut current = SubgraphMask::empty(map.edge_count());
    let mut total = Cx::<T>::one();
    for i in 1u64..1 << basis.len() {
        current.toggle_all(&basis[i.trailing_zeros() as usize]);
        total += current.edges().fold(Cx::one(), |p, e| p * weights[e]);
    }
    Ok(total)
}

/// `Σ_σ exp(Σ_e J_e σ_u σ_v)` over a bare edge list.
pub fn spin_config_z_edges<T: Real>(vertex_count: usize, edges: &[(usize, usize)], couplings: &[T]) -> Result<T> {
    if vertex_count > ORACLE_MAX_BITS {
        return Err(Error::TooLarge(format!("{vertex_count} vertices")));
    }
    if couplings.len() != edges.len() {
        return Err(Error::Dimension(format!("{} couplings for {} edges", couplings.len(), edges.len())));
    }
    let total = chunked_sum(vertex_count, |s| {
        let energy: T = edges.iter().zip(couplings).fold(T::zero(), |acc, (&(u, v), &j)| {
            if (s >> u & 1) == (s >> v & 1) {
                acc + j
            } else {
                acc - j
            }
        });
        (energy.exp().to_f64().unwrap_or(f64::NAN), 0.0)
    })
    .0;
    Ok(T::of(total))
}

/// Ising partition function by summing over all spin configurations.
pub fn spin_config_z<T: Real>(map: &CombinatorialMap, couplings: &[T]) -> Result<T> {
    spin_config_z_edges(map.vertex_count(), &endpoints(map), couplings)
}

/// Boundary curves of a thickening of `mask`: orbits of `e ↦ R_F⁻¹(ē)`.
pub fn boundary_components(map: &CombinatorialMap, mask: &SubgraphMask) -> Vec<Vec<Dart>> {
    let inside = |d: Dart| mask.contains(map.edge_of(d));
    let rot_inv_f = |d: Dart| {
        let mut x = map.rotate_inv(d);
        while !inside(x) {
            x = map.rotate_inv(x);
        }
        x
    };
    let mut seen = vec![false; map.dart_count()];
    let mut out = Vec::new();
    for start in 0..map.dart_count() {
        if seen[start] || !inside(start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            orbit.push(d);
            d = rot_inv_f(map.reversal(d));
        }
        out.push(orbit);
    }
    out
}

/// Per-component (vertex count, edge count) of the spanning subgraph `mask`.
fn components(vertex_count: usize, ends: &[(usize, usize)], mask: &SubgraphMask) -> Vec<(usize, usize)> {
    let mut uf = UnionFind::new(vertex_count);
    for e in mask.edges() {
        uf.union(ends[e].0, ends[e].1);
    }
    let mut stats = vec![(0usize, 0usize); vertex_count];
    for v in 0..vertex_count {
        let r = uf.find(v);
        stats[r].0 += 1;
    }
    for e in mask.edges() {
        let r = uf.find(ends[e].0);
        stats[r].1 += 1;
    }
    stats.into_iter().filter(|s| s.0 > 0).collect()
}

/// `Σ_{i < 2^bits} f(i)`, summed in fixed chunks so the result does not
/// depend on thread scheduling.
fn chunked_sum(bits: usize, f: impl Fn(u64) -> (f64, f64) + Sync) -> (f64, f64) {
    const CHUNK: u64 = 1 << 12;
    let n = 1u64 << bits;
    let chunks: Vec<(f64, f64)> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(n)).fold((0.0, 0.0), |(a, b), i| {
                let (x, y) = f(i);
                (a + x, b + y)
            })
        })
        .collect();
    chunks.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y))
}

fn enumerate_masks<T: Real>(edges: usize, term: impl Fn(&SubgraphMask) -> Cx<T> + Sync) -> Cx<T> {
    let (re, im) = chunked_sum(edges, |i| {
        let z = term(&SubgraphMask::from_index(edges, i));
        (z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
    });
    Cx::new(T::of(re), T::of(im))
}

/// `τ^φ(G, ν)` from the expansion over subgraphs with no tree component.
pub fn tau_combinatorial<T: Real>(map: &IsoradialMap, phi: &[Cx<T>]) -> Result<Cx<T>> {
    let m = map.edge_count();
    if m > ORACLE_MAX_BITS {
        return Err(Error::TooLarge(format!("{m} edges")));
    }
    if phi.len() != map.dart_count() {
        return Err(Error::Dimension(format!("{} phases for {} darts", phi.len(), map.dart_count())));
    }
    let bad: Vec<usize> = (0..map.vertex_count())
        .filter(|&v| !map.primal_cone_angle(v).is_odd_multiple_of_two_pi())
        .collect();
    if !bad.is_empty() {
        return Err(Error::HypothesisViolation(format!("vertices {bad:?} are not odd multiples of 2π")));
    }
    let ends = endpoints(map);
    let thetas: Vec<T> = map.edge_thetas().iter().map(|t| T::of(t.to_radians())).collect();
    let mu: Vec<Cx<T>> = thetas.iter().map(|t| Cx::new(T::zero(), t.tan())).collect();
    let vcount = map.vertex_count();
    let sum = enumerate_masks(m, |mask| {
        if components(vcount, &ends, mask).iter().any(|&(v, e)| e + 1 == v) {
            return Cx::zero();
        }
        let mut term = mask.edges().fold(Cx::<T>::one(), |p, e| p * mu[e]);
        for orbit in boundary_components(map, mask) {
            let hol = orbit.iter().fold(Cx::<T>::one(), |p, &d| p * phi[d]);
            term *= Cx::<T>::one() - hol;
        }
        term
    });
    // C = (−1)^|V| 2^{−χ(G)} Π_v exp(iϑ_v/4) Π_e cos θ/(1 + cos θ)
    let chi = vcount as i32 - m as i32;
    let sign = if vcount.is_multiple_of(2) { T::one() } else { -T::one() };
    let mut c = Cx::new(sign * T::of(2.0).powi(-chi), T::zero());
    for v in 0..vcount {
        c *= map.primal_cone_angle(v).div_int(4).cis::<T>();
    }
    for t in &thetas {
        c *= t.cos() / (T::one() + t.cos());
    }
    Ok(c * sum)
}

/// Phase product around the unique cycle of each unicyclic component, or
/// `None` if some component is not unicyclic.
fn unicyclic_holonomies<T: Real>(map: &CombinatorialMap, mask: &SubgraphMask, phi: &[Cx<T>]) -> Option<Vec<Cx<T>>> {
    let nv = map.vertex_count();
    let mut degree = vec![0usize; nv];
    let mut alive = mask.clone();
    let mut edge_count = 0;
    for e in mask.edges() {
        let d = map.edge_dart(e);
        degree[map.origin(d)] += 1;
        degree[map.terminus(d)] += 1;
        edge_count += 1;
    }
    if edge_count != nv || degree.contains(&0) {
        return None;
    }
    // strip pendant edges until only cycles remain
    let mut stack: Vec<usize> = (0..nv).filter(|&v| degree[v] == 1).collect();
    let mut removed = vec![false; map.edge_count()];
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let d = map
            .vertex_darts(v)
            .iter()
            .copied()
            .find(|&d| alive.contains(map.edge_of(d)) && !removed[map.edge_of(d)])?;
        removed[map.edge_of(d)] = true;
        degree[v] -= 1;
        let w = map.terminus(d);
        degree[w] -= 1;
        if degree[w] == 1 {
            stack.push(w);
        }
    }
    alive = SubgraphMask::empty(map.edge_count());
    for e in mask.edges() {
        if !removed[e] {
            alive.insert(e);
        }
    }
    if degree.iter().any(|&k| k != 0 && k != 2) {
        return None;
    }
    let mut used = vec![false; map.edge_count()];
    let mut out = Vec::new();
    for e0 in alive.edges() {
        if used[e0] {
            continue;
        }
        let start = map.edge_dart(e0);
        let mut d = start;
        let mut hol = Cx::<T>::one();
        loop {
            used[map.edge_of(d)] = true;
            hol *= phi[d];
            let w = map.terminus(d);
            let next = map
                .vertex_darts(w)
                .iter()
                .copied()
                .find(|&x| alive.contains(map.edge_of(x)) && !used[map.edge_of(x)]);
            match next {
                Some(x) => d = x,
                None => break,
            }
        }
        out.push(hol);
    }
    // a component with |V| = |E| whose core has two cycles would leave
    // another component a tree; the vertex-degree check above excludes that
    Some(out)
}

/// `det Δ^φ(G, x)` from the expansion over spanning unicyclic subgraphs.
pub fn forman_det<T: Real>(map: &CombinatorialMap, weights: &[Cx<T>], phi: &[Cx<T>]) -> Result<Cx<T>> {
    let m = map.edge_count();
    if m > ORACLE_MAX_BITS {
        return Err(Error::TooLarge(format!("{m} edges")));
    }
    if weights.len() != m || phi.len() != map.dart_count() {
        return Err(Error::Dimension("weights per edge and phases per dart required".into()));
    }
    let ends = endpoints(map);
    let nv = map.vertex_count();
    Ok(enumerate_masks(m, |mask| {
        if mask.count() != nv || components(nv, &ends, mask).iter().any(|&(v, e)| v != e) {
            return Cx::zero();
        }
        let Some(hols) = unicyclic_holonomies(map, mask, phi) else {
            return Cx::zero();
        };
        let two = Cx::new(T::of(2.0), T::zero());
        let cyc = hols.iter().fold(Cx::<T>::one(), |p, &z| p * (two - z - Cx::<T>::one() / z));
        mask.edges().fold(cyc, |p, e| p * weights[e])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AnglePi;
    use crate::builders::{gen_genus2_bouquet, gen_torus_lattice, star_construction, AbstractGraph, LatticeKind};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn nu(map: &IsoradialMap) -> Vec<Complex64> {
        map.edge_thetas().iter().map(|t| Complex64::new((t.to_radians() / 2.0).tan(), 0.0)).collect()
    }

    #[test]
    fn even_subgraphs() {
        let m = gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap();
        assert_relative_eq!(even_subgraph_z(&m, &nu(&m)).unwrap().re, 2.0, max_relative = 1e-14);
        let b = gen_genus2_bouquet();
        let x = (3.0 * std::f64::consts::PI / 16.0).tan();
        assert_relative_eq!(even_subgraph_z(&b, &nu(&b)).unwrap().re, (1.0 + x).powi(4), max_relative = 1e-14);
        let m = gen_torus_lattice(LatticeKind::Square, 2, 2).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); m.edge_count()];
        assert_eq!(even_subgraph_z(&m, &ones).unwrap().re, 32.0);
    }

    #[test]
    fn even_subgraph_count_brute() {
        let m = gen_torus_lattice(LatticeKind::Triangular, 2, 2).unwrap();
        let ends = endpoints(&m);
        let mut count = 0;
        for i in 0u64..1 << m.edge_count() {
            let mut deg = vec![0; m.vertex_count()];
            for (e, &(u, v)) in ends.iter().enumerate() {
                if i >> e & 1 == 1 {
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            if deg.iter().all(|d| d % 2 == 0) {
                count += 1;
            }
        }
        let ones = vec![Complex64::new(1.0, 0.0); m.edge_count()];
        assert_eq!(even_subgraph_z(&m, &ones).unwrap().re, count as f64);
    }

    #[test]
    fn spin_sums() {
        assert_eq!(spin_config_z_edges::<f64>(1, &[], &[]).unwrap(), 2.0);
        let m = gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap();
        assert_relative_eq!(spin_config_z(&m, &[0.3, 0.4]).unwrap(), 2.0 * 0.7f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(spin_config_z_edges(2, &[(0, 1)], &[0.5]).unwrap(), 4.0 * 0.5f64.cosh(), max_relative = 1e-14);
    }

    #[test]
    fn boundary_orbits() {
        let m = gen_torus_lattice(LatticeKind::Square, 2, 2).unwrap();
        let full = boundary_components(&m, &SubgraphMask::full(m.edge_count()));
        let mut faces: Vec<Vec<Dart>> = m.faces().to_vec();
        let mut got = full.clone();
        for v in faces.iter_mut().chain(got.iter_mut()) {
            v.sort();
        }
        faces.sort();
        got.sort();
        assert_eq!(got, faces);
        let t = gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap();
        let mut h = SubgraphMask::empty(2);
        h.insert(0);
        // the annulus around one loop has two boundary curves
        assert_eq!(boundary_components(&t, &h), vec![vec![0], vec![1]]);
    }

    #[test]
    fn trivial_character_vanishes() {
        for m in [gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap(), gen_genus2_bouquet()] {
            let one = vec![Complex64::new(1.0, 0.0); m.dart_count()];
            assert_eq!(tau_combinatorial(&m, &one).unwrap(), Complex64::new(0.0, 0.0));
            let c = vec![Complex64::new(1.0, 0.0); m.edge_count()];
            assert_eq!(forman_det(&m, &c, &one).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn forman_small() {
        let g = AbstractGraph::from_edges(1, &[(0, 0)]);
        let m = star_construction(&g, AnglePi::new(1, 4)).unwrap();
        let z = Complex64::from_polar(1.0, 0.9);
        let d = forman_det(&m, &[Complex64::new(0.7, 0.0)], &[z, z.conj()]).unwrap();
        assert_relative_eq!(d.re, 0.7 * (2.0 - 2.0 * 0.9f64.cos()), max_relative = 1e-14);
        let t = gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap();
        let (z1, z2) = (Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, 2.0));
        let d = forman_det(&t, &[Complex64::new(1.0, 0.0); 2], &[z1, z1.conj(), z2, z2.conj()]).unwrap();
        assert_relative_eq!(d.re, 4.0 - 2.0 * z1.re - 2.0 * z2.re, max_relative = 1e-14);
    }

    #[test]
    fn too_large() {
        let m = gen_torus_lattice(LatticeKind::Square, 4, 4).unwrap();
        let one = vec![Complex64::new(1.0, 0.0); m.dart_count()];
        assert!(matches!(tau_combinatorial(&m, &one), Err(Error::TooLarge(_))));
        let big = gen_torus_lattice(LatticeKind::Square, 5, 5).unwrap();
        assert!(matches!(spin_config_z(&big, &vec![0.1; big.edge_count()]), Err(Error::TooLarge(_))));
    }
}
