//! Combinatorial maps carrying exact half-rhombus angles.
//!
//! A map is a set of darts with a reversal involution `J` and a rotation `R`
//! (the counterclockwise next dart around the common origin). Vertices are
//! the orbits of `R`, faces are the orbits of `e ↦ R⁻¹(J(e))`, and edges are
//! the orbits of `J`. Vertices, faces and edges are numbered in order of their
//! smallest dart.
//!
//! An [`IsoradialMap`] adds one angle `θ_e ∈ (0, π/2)` per edge. The flat
//! surface with cone singularities is never realized geometrically; all
//! cone angles, corner angles and turning angles are derived from `θ`.

mod dual;
mod iso;

use std::ops::Deref;

use serde::Serialize;

use crate::angle::{AnglePi, Fraction};
use crate::error::{Error, Result};

pub use dual::QuadGraph;
pub use iso::{canonical_form, is_isomorphic, CanonicalForm};

/// A dart (oriented edge), identified by its index.
pub type Dart = usize;

/// Darts, reversal and rotation, with the derived cell structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialMap {
    reversal: Vec<Dart>,
    rotation: Vec<Dart>,
    rotation_inv: Vec<Dart>,
    vertex_of: Vec<usize>,
    vertices: Vec<Vec<Dart>>,
    face_of: Vec<usize>,
    faces: Vec<Vec<Dart>>,
    edge_of: Vec<usize>,
    edges: Vec<Dart>,
}

fn check_permutation(p: &[usize], what: &'static str) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; p.len()];
    for (i, &x) in p.iter().enumerate() {
        if x >= p.len() || inv[x] != usize::MAX {
            return Err(Error::NotAPermutation(what));
        }
        inv[x] = i;
    }
    Ok(inv)
}

/// Orbits of `step`, each listed from its smallest element, ordered by that element.
fn orbits(n: usize, step: impl Fn(usize) -> usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = Vec::new();
        let mut d = start;
        while label[d] == usize::MAX {
            label[d] = id;
            orbit.push(d);
            d = step(d);
        }
        out.push(orbit);
    }
    (label, out)
}

impl CombinatorialMap {
    /// Validates `reversal` and `rotation` and derives vertices, faces and edges.
    pub fn new(reversal: Vec<Dart>, rotation: Vec<Dart>) -> Result<Self> {
        let n = reversal.len();
        if rotation.len() != n {
            return Err(Error::Dimension(format!(
                "reversal has {} entries, rotation {}",
                n,
                rotation.len()
            )));
        }
        check_permutation(&reversal, "reversal")?;
        for (d, &r) in reversal.iter().enumerate() {
            if r == d || reversal[r] != d {
                return Err(Error::NotAnInvolution(d));
            }
        }
        let rotation_inv = check_permutation(&rotation, "rotation")?;
        let (vertex_of, vertices) = orbits(n, |d| rotation[d]);
        let (face_of, faces) = orbits(n, |d| rotation_inv[reversal[d]]);
        let mut edge_of = vec![0; n];
        let mut edges = Vec::with_capacity(n / 2);
        for d in 0..n {
            if d < reversal[d] {
                edge_of[d] = edges.len();
                edge_of[reversal[d]] = edges.len();
                edges.push(d);
            }
        }
        Ok(CombinatorialMap {
            reversal,
            rotation,
            rotation_inv,
            vertex_of,
            vertices,
            face_of,
            faces,
            edge_of,
            edges,
        })
    }

    pub fn dart_count(&self) -> usize {
        self.reversal.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn reversal(&self, d: Dart) -> Dart {
        self.reversal[d]
    }

    pub fn rotate(&self, d: Dart) -> Dart {
        self.rotation[d]
    }

    pub fn rotate_inv(&self, d: Dart) -> Dart {
        self.rotation_inv[d]
    }

    /// Next dart along the boundary of the face of `d`: `R⁻¹(J(d))`.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rotation_inv[self.reversal[d]]
    }

    pub fn reversal_array(&self) -> &[Dart] {
        &self.reversal
    }

    pub fn rotation_array(&self) -> &[Dart] {
        &self.rotation
    }

    pub fn origin(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }

    pub fn terminus(&self, d: Dart) -> usize {
        self.vertex_of[self.reversal[d]]
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn edge_of(&self, d: Dart) -> usize {
        self.edge_of[d]
    }

    /// Smallest dart of edge `e`; its reversal is the other one.
    pub fn edge_dart(&self, e: usize) -> Dart {
        self.edges[e]
    }

    /// `true` when `d` is the smallest dart of its edge.
    pub fn is_positive(&self, d: Dart) -> bool {
        d < self.reversal[d]
    }

    /// Darts leaving vertex `v`, in counterclockwise order.
    pub fn vertex_darts(&self, v: usize) -> &[Dart] {
        &self.vertices[v]
    }

    /// Boundary darts of face `f`, in traversal order.
    pub fn face_darts(&self, f: usize) -> &[Dart] {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn vertices(&self) -> &[Vec<Dart>] {
        &self.vertices
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Genus of the closed surface, when `χ` is even and at most 2.
    pub fn genus(&self) -> Option<u32> {
        let chi = self.euler_characteristic();
        (chi <= 2 && chi % 2 == 0).then(|| ((2 - chi) / 2) as u32)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.dart_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for nb in [self.reversal[d], self.rotation[d]] {
                if !seen[nb] {
                    seen[nb] = true;
                    count += 1;
                    stack.push(nb);
                }
            }
        }
        count == n
    }

    /// Checks that `walk` is nonempty, consecutive and closed.
    pub fn check_closed_walk(&self, walk: &[Dart]) -> Result<()> {
        let Some((&first, _)) = walk.split_first() else {
            return Err(Error::OpenWalk);
        };
        for w in walk.windows(2) {
            if self.terminus(w[0]) != self.origin(w[1]) {
                return Err(Error::OpenWalk);
            }
        }
        if self.terminus(*walk.last().unwrap()) != self.origin(first) {
            return Err(Error::OpenWalk);
        }
        Ok(())
    }
}

/// A combinatorial map with one half-rhombus angle per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoradialMap {
    map: CombinatorialMap,
    theta: Vec<AnglePi>,
}

impl Deref for IsoradialMap {
    type Target = CombinatorialMap;
    fn deref(&self) -> &CombinatorialMap {
        &self.map
    }
}

/// Validates dart data and angles into an [`IsoradialMap`].
///
/// `theta` is indexed by edge, edges ordered by their smallest dart.
pub fn build_isoradial_map(
    dart_count: usize,
    reversal: Vec<Dart>,
    rotation: Vec<Dart>,
    theta: Vec<AnglePi>,
) -> Result<IsoradialMap> {
    if !dart_count.is_multiple_of(2) || reversal.len() != dart_count || rotation.len() != dart_count {
        return Err(Error::Dimension(format!(
            "dart_count {} with reversal {} and rotation {} entries",
            dart_count,
            reversal.len(),
            rotation.len()
        )));
    }
    let map = CombinatorialMap::new(reversal, rotation)?;
    IsoradialMap::from_parts(map, theta)
}

impl IsoradialMap {
    pub fn from_parts(map: CombinatorialMap, theta: Vec<AnglePi>) -> Result<Self> {
        if theta.len() != map.edge_count() {
            return Err(Error::Dimension(format!(
                "{} angles for {} edges",
                theta.len(),
                map.edge_count()
            )));
        }
        for (e, &t) in theta.iter().enumerate() {
            if t <= AnglePi::ZERO || t >= AnglePi::HALF_PI {
                return Err(Error::ThetaOutOfRange {
                    edge: e,
                    angle: t.to_string(),
                });
            }
        }
        if !map.is_connected() {
            return Err(Error::NonOrientableOrInconsistent("disconnected darts".into()));
        }
        if map.genus().is_none() {
            return Err(Error::NonOrientableOrInconsistent(format!(
                "Euler characteristic {} gives no integer genus",
                map.euler_characteristic()
            )));
        }
        Ok(IsoradialMap { map, theta })
    }

    pub fn combinatorial(&self) -> &CombinatorialMap {
        &self.map
    }

    /// Genus of the surface (validated at construction).
    pub fn surface_genus(&self) -> u32 {
        self.map.genus().expect("validated at construction")
    }

    /// Half-rhombus angle of the edge carrying dart `d`.
    pub fn theta(&self, d: Dart) -> AnglePi {
        self.theta[self.map.edge_of(d)]
    }

    pub fn edge_thetas(&self) -> &[AnglePi] {
        &self.theta
    }

    /// `ϑ_v = Σ 2θ_e` over darts leaving `v`.
    pub fn primal_cone_angle(&self, v: usize) -> AnglePi {
        self.vertex_darts(v).iter().map(|&d| self.theta(d) * 2).sum()
    }

    /// `ϑ_f = Σ (π − 2θ_e)` over the boundary darts of `f`.
    pub fn dual_cone_angle(&self, f: usize) -> AnglePi {
        self.face_darts(f)
            .iter()
            .map(|&d| AnglePi::PI - self.theta(d) * 2)
            .sum()
    }

    pub fn topology(&self) -> Topology {
        Topology {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            faces: self.face_count(),
            euler_characteristic: self.euler_characteristic(),
            genus: self.surface_genus(),
            primal_cone_angles: (0..self.vertex_count())
                .map(|v| self.primal_cone_angle(v))
                .collect(),
            dual_cone_angles: (0..self.face_count())
                .map(|f| self.dual_cone_angle(f))
                .collect(),
        }
    }

    /// Exact per-cell verdict on whether `ϑ/2π` is an odd integer.
    pub fn check_hypotheses(&self, mode: HypothesisMode) -> HypothesisReport {
        let verdict = |a: AnglePi| CellVerdict {
            turns: {
                let t = a.turns();
                Fraction {
                    num: *t.numer(),
                    den: *t.denom(),
                }
            },
            odd: a.is_odd_multiple_of_two_pi(),
        };
        let vertices: Vec<CellVerdict> = (0..self.vertex_count())
            .map(|v| verdict(self.primal_cone_angle(v)))
            .collect();
        let faces: Vec<CellVerdict> = (0..self.face_count())
            .map(|f| verdict(self.dual_cone_angle(f)))
            .collect();
        let violating_vertices: Vec<usize> = (0..vertices.len()).filter(|&v| !vertices[v].odd).collect();
        let violating_faces: Vec<usize> = match mode {
            HypothesisMode::AllOdd => (0..faces.len()).filter(|&f| !faces[f].odd).collect(),
            HypothesisMode::PrimalOdd => Vec::new(),
        };
        HypothesisReport {
            mode,
            passed: violating_vertices.is_empty() && violating_faces.is_empty(),
            vertices,
            faces,
            violating_vertices,
            violating_faces,
        }
    }

    /// Fails with [`Error::HypothesisViolation`] unless `mode` holds.
    pub fn require(&self, mode: HypothesisMode) -> Result<()> {
        let report = self.check_hypotheses(mode);
        if report.passed {
            Ok(())
        } else {
            Err(Error::HypothesisViolation(report.summary()))
        }
    }

    /// `true` when every primal and dual cone angle is a multiple of 2π.
    pub fn has_trivial_local_holonomy(&self) -> bool {
        (0..self.vertex_count()).all(|v| self.primal_cone_angle(v).is_multiple_of_two_pi())
            && (0..self.face_count()).all(|f| self.dual_cone_angle(f).is_multiple_of_two_pi())
    }

    /// Number of vertices with `ϑ_v/2π ≡ 3 (mod 4)`.
    pub fn count_three_mod_four(&self) -> usize {
        (0..self.vertex_count())
            .filter(|&v| matches!(self.primal_cone_angle(v).whole_turns(), Some(k) if k.rem_euclid(4) == 3))
            .count()
    }

    /// Counterclockwise angle `β(e_next, ē)` at the corner between `e` and `e_next`.
    pub fn corner_beta(&self, e: Dart, e_next: Dart) -> Result<AnglePi> {
        if self.terminus(e) != self.origin(e_next) {
            return Err(Error::NotConsecutive(e, e_next));
        }
        let back = self.reversal(e);
        if e_next == back {
            return Err(Error::BacktrackTransition(e));
        }
        let mut beta = AnglePi::ZERO;
        let mut d = e_next;
        while d != back {
            let next = self.rotate(d);
            beta += self.theta(d) + self.theta(next);
            d = next;
        }
        Ok(beta)
    }

    /// Total turning `α(γ) = Σ (π − β(e′, ē))` over the corners of a closed walk.
    pub fn turning_alpha(&self, walk: &[Dart]) -> Result<AnglePi> {
        self.check_closed_walk(walk)?;
        let k = walk.len();
        (0..k)
            .map(|i| Ok(AnglePi::PI - self.corner_beta(walk[i], walk[(i + 1) % k])?))
            .sum()
    }

    /// The dual map: darts shared, rotation `R⁻¹J`, angles `π/2 − θ`.
    pub fn dual(&self) -> IsoradialMap {
        dual::dual(self)
    }

    pub fn quad_graph(&self) -> QuadGraph {
        dual::quad_graph(self)
    }
}

/// Cell counts and exact cone angles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub genus: u32,
    pub primal_cone_angles: Vec<AnglePi>,
    pub dual_cone_angles: Vec<AnglePi>,
}

impl Topology {
    /// `Σ (2π − ϑ)` over vertices and faces.
    pub fn curvature_total(&self) -> AnglePi {
        self.primal_cone_angles
            .iter()
            .chain(&self.dual_cone_angles)
            .map(|&a| AnglePi::TWO_PI - a)
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisMode {
    /// Every primal and dual cone angle is an odd multiple of 2π.
    AllOdd,
    /// Every primal cone angle is an odd multiple of 2π.
    PrimalOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellVerdict {
    /// `ϑ / 2π`.
    pub turns: Fraction,
    pub odd: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub mode: HypothesisMode,
    pub passed: bool,
    pub vertices: Vec<CellVerdict>,
    pub faces: Vec<CellVerdict>,
    pub violating_vertices: Vec<usize>,
    pub violating_faces: Vec<usize>,
}

impl HypothesisReport {
    pub fn summary(&self) -> String {
        format!(
            "{:?}: vertices {:?} and faces {:?} are not odd multiples of 2π",
            self.mode, self.violating_vertices, self.violating_faces
        )
    }
}
