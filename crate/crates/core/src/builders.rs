//! Generators for the standard example maps.
//!
//! Frozen dart numbering (acceptance tests refer to darts by index). In every
//! generator, edge `k` owns darts `2k` (forward) and `2k + 1` (reverse).
//!
//! * Square `n×m` torus: vertex `(i, j)` is `v = j·n + i`. Edge `2v` runs east
//!   to `(i+1, j)`, edge `2v+1` runs north to `(i, j+1)`. The rotation at `v` is
//!   east `4v`, north `4v+2`, west `4·(v−x)+1`, south `4·(v−y)+3`. On the 1×1
//!   torus: `h = 0`, `h̄ = 1`, `v = 2`, `v̄ = 3`, and `R = (0 2 1 3)`. `θ = π/4`.
//! * Triangular `n×m` torus: vertex numbering as above. Edges `3v + k` run from
//!   `v` along `a` (k = 0, to `(i+1, j)`), `b` (k = 1, to `(i, j+1)`) and `b − a`
//!   (k = 2, to `(i−1, j+1)`). The rotation at `v` is the three forward darts of
//!   `v` followed by the reverse darts of edge 0 at `v − a`, edge 1 at `v − b`
//!   and edge 2 at `v − b + a`. `θ = π/6`.
//! * Hexagonal `n×m` torus: cell `c = j·n + i` holds vertices `A(c)` and `B(c)`.
//!   Edges `3c + k` run from `A(c)` to `B(c)` (k = 0), `B(c − x)` (k = 1) and
//!   `B(c − y)` (k = 2). The rotation at `A(c)` is edge 0, 1, 2 forward; at
//!   `B(c)` it is the reverse darts of edge 1 of `c + x`, edge 2 of `c + y`,
//!   edge 0 of `c`. `θ = π/3`.
//! * Genus-2 bouquet: loops `a, b, c, d` are edges 0..4, rotation
//!   `a b ā b̄ c d c̄ d̄`, i.e. darts `0 2 1 3 4 6 5 7`. `θ = 3π/8`.

use serde::{Deserialize, Serialize};

use crate::angle::AnglePi;
use crate::error::{Error, Result};
use crate::ribbon::{build_isoradial_map, Dart, IsoradialMap};

/// Largest dart count the lattice generators will produce.
pub const DART_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Square,
    Triangular,
    Hexagonal,
}

impl LatticeKind {
    pub fn theta(self) -> AnglePi {
        match self {
            LatticeKind::Square => AnglePi::new(1, 4),
            LatticeKind::Triangular => AnglePi::new(1, 6),
            LatticeKind::Hexagonal => AnglePi::new(1, 3),
        }
    }

    /// Edges per fundamental domain.
    pub fn edges_per_cell(self) -> usize {
        match self {
            LatticeKind::Square => 2,
            LatticeKind::Triangular | LatticeKind::Hexagonal => 3,
        }
    }

    /// Vertices per fundamental domain.
    pub fn vertices_per_cell(self) -> usize {
        match self {
            LatticeKind::Hexagonal => 2,
            _ => 1,
        }
    }
}

/// Dart-count check shared by the generators.
fn dart_budget(kind: LatticeKind, n: usize, m: usize) -> Result<usize> {
    if n == 0 || m == 0 {
        return Err(Error::Dimension(format!("lattice size {n}x{m}")));
    }
    n.checked_mul(m)
        .and_then(|c| c.checked_mul(2 * kind.edges_per_cell()))
        .filter(|&d| d <= DART_LIMIT)
        .ok_or_else(|| Error::SizeOverflow(format!("{kind:?} {n}x{m} exceeds {DART_LIMIT} darts")))
}

/// `n×m` fundamental domains of the given lattice glued into a torus.
pub fn gen_torus_lattice(kind: LatticeKind, n: usize, m: usize) -> Result<IsoradialMap> {
    let darts = dart_budget(kind, n, m)?;
    let cell = |i: isize, j: isize| -> usize {
        let i = i.rem_euclid(n as isize) as usize;
        let j = j.rem_euclid(m as isize) as usize;
        j * n + i
    };
    let fwd = |e: usize| 2 * e;
    let rev = |e: usize| 2 * e + 1;
    let reversal: Vec<Dart> = (0..darts).map(|d| d ^ 1).collect();
    let mut rotation = vec![0; darts];
    let mut set_cycle = |cycle: &[Dart]| {
        for (k, &d) in cycle.iter().enumerate() {
            rotation[d] = cycle[(k + 1) % cycle.len()];
        }
    };
    for j in 0..m as isize {
        for i in 0..n as isize {
            let c = cell(i, j);
            match kind {
                LatticeKind::Square => set_cycle(&[
                    fwd(2 * c),
                    fwd(2 * c + 1),
                    rev(2 * cell(i - 1, j)),
                    rev(2 * cell(i, j - 1) + 1),
                ]),
                LatticeKind::Triangular => set_cycle(&[
                    fwd(3 * c),
                    fwd(3 * c + 1),
                    fwd(3 * c + 2),
                    rev(3 * cell(i - 1, j)),
                    rev(3 * cell(i, j - 1) + 1),
                    rev(3 * cell(i + 1, j - 1) + 2),
                ]),
                LatticeKind::Hexagonal => {
                    set_cycle(&[fwd(3 * c), fwd(3 * c + 1), fwd(3 * c + 2)]);
                    set_cycle(&[
                        rev(3 * cell(i + 1, j) + 1),
                        rev(3 * cell(i, j + 1) + 2),
                        rev(3 * c),
                    ]);
                }
            }
        }
    }
    build_isoradial_map(darts, reversal, rotation, vec![kind.theta(); darts / 2])
}

/// One vertex with four loops in the octagon order `a b ā b̄ c d c̄ d̄`.
pub fn gen_genus2_bouquet() -> IsoradialMap {
    let g = AbstractGraph::with_rotation(1, vec![(0, 0); 4], vec![vec![0, 2, 1, 3, 4, 6, 5, 7]])
        .expect("bouquet rotation is well formed");
    star_construction(&g, AnglePi::new(3, 8)).expect("bouquet is a valid map")
}

/// A multigraph with a cyclic order of half-edges at each vertex.
///
/// Edge `k = (u, v)` has half-edge `2k` at `u` and `2k + 1` at `v`; for a loop
/// both sit at `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<Dart>>,
}

impl AbstractGraph {
    /// Cyclic orders follow the order in which half-edges appear in `edges`.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Self {
        let mut rotation = vec![Vec::new(); vertex_count];
        for (k, &(u, v)) in edges.iter().enumerate() {
            rotation[u].push(2 * k);
            rotation[v].push(2 * k + 1);
        }
        AbstractGraph {
            vertex_count,
            edges: edges.to_vec(),
            rotation,
        }
    }

    /// Explicit counterclockwise half-edge order at each vertex.
    pub fn with_rotation(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        rotation: Vec<Vec<Dart>>,
    ) -> Result<Self> {
        if rotation.len() != vertex_count {
            return Err(Error::Dimension(format!(
                "{} rotation lists for {} vertices",
                rotation.len(),
                vertex_count
            )));
        }
        let mut seen = vec![false; 2 * edges.len()];
        for (v, order) in rotation.iter().enumerate() {
            for &d in order {
                let (a, b) = *edges.get(d / 2).ok_or(Error::NotAPermutation("rotation"))?;
                let end = if d % 2 == 0 { a } else { b };
                if end != v || seen[d] {
                    return Err(Error::NotAPermutation("rotation"));
                }
                seen[d] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::NotAPermutation("rotation"));
        }
        Ok(AbstractGraph {
            vertex_count,
            edges,
            rotation,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Embeds `graph` with every half-rhombus angle equal to `theta`.
///
/// The cone angle at `v` is `2θ·deg(v)`. Fails only when the graph is
/// disconnected, has an isolated vertex, or `theta` is out of range.
pub fn star_construction(graph: &AbstractGraph, theta: AnglePi) -> Result<IsoradialMap> {
    if let Some(v) = graph.rotation.iter().position(|o| o.is_empty()) {
        return Err(Error::NonOrientableOrInconsistent(format!("isolated vertex {v}")));
    }
    let darts = 2 * graph.edges.len();
    let reversal = (0..darts).map(|d| d ^ 1).collect();
    let mut rotation = vec![0; darts];
    for order in &graph.rotation {
        for (k, &d) in order.iter().enumerate() {
            rotation[d] = order[(k + 1) % order.len()];
        }
    }
    build_isoradial_map(darts, reversal, rotation, vec![theta; graph.edges.len()])
}
