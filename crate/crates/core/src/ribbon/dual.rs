use super::{CombinatorialMap, Dart, IsoradialMap};
use crate::angle::AnglePi;

pub(super) fn dual(map: &IsoradialMap) -> IsoradialMap {
    let n = map.dart_count();
    let reversal = map.reversal_array().to_vec();
    let rotation: Vec<Dart> = (0..n).map(|d| map.face_next(d)).collect();
    let comb = CombinatorialMap::new(reversal, rotation).expect("dual of a valid map is valid");
    let theta = map.edge_thetas().iter().map(|&t| AnglePi::HALF_PI - t).collect();
    IsoradialMap::from_parts(comb, theta).expect("dual angles stay in (0, π/2)")
}

/// The quad graph on `V ∪ V*` whose faces are the rhombi of the edges.
///
/// Each corner of the map (a dart `d`, sitting at `origin(d)` inside the face
/// of `d`) becomes one quad edge with darts `2d` (vertex → face) and `2d + 1`
/// (face → vertex).
#[derive(Clone, Debug)]
pub struct QuadGraph {
    pub map: CombinatorialMap,
    /// For each primal dart `e`, a two-dart quad path from `origin(e)` to
    /// `terminus(e)` through the face on the left of `e`.
    pub primal_paths: Vec<[Dart; 2]>,
    /// For each dual dart `e*` (same index as the primal dart it crosses), a
    /// two-dart quad path from the left face of `e` to its right face through
    /// `origin(e)`.
    pub dual_paths: Vec<[Dart; 2]>,
}

impl QuadGraph {
    pub fn to_face_dart(d: Dart) -> Dart {
        2 * d
    }

    pub fn to_vertex_dart(d: Dart) -> Dart {
        2 * d + 1
    }
}

pub(super) fn quad_graph(map: &IsoradialMap) -> QuadGraph {
    let n = map.dart_count();
    let mut reversal = vec![0; 2 * n];
    let mut rotation = vec![0; 2 * n];
    for d in 0..n {
        let (a, b) = (QuadGraph::to_face_dart(d), QuadGraph::to_vertex_dart(d));
        reversal[a] = b;
        reversal[b] = a;
        rotation[a] = QuadGraph::to_face_dart(map.rotate(d));
        rotation[b] = QuadGraph::to_vertex_dart(map.face_next(d));
    }
    let quad = CombinatorialMap::new(reversal, rotation).expect("quad graph is a valid map");
    let primal_paths = (0..n)
        .map(|e| [QuadGraph::to_face_dart(e), QuadGraph::to_vertex_dart(map.face_next(e))])
        .collect();
    let dual_paths = (0..n)
        .map(|e| [QuadGraph::to_vertex_dart(e), QuadGraph::to_face_dart(map.rotate_inv(e))])
        .collect();
    QuadGraph {
        map: quad,
        primal_paths,
        dual_paths,
    }
}

#[cfg(test)]
mod tests {
    use crate::builders::{gen_genus2_bouquet, gen_torus_lattice, LatticeKind};
    use crate::ribbon::is_isomorphic;

    #[test]
    fn unit_torus_quad() {
        let m = gen_torus_lattice(LatticeKind::Square, 1, 1).unwrap();
        let q = m.quad_graph();
        assert_eq!(q.map.vertex_count(), 2);
        assert_eq!(q.map.edge_count(), 4);
        assert_eq!(q.map.face_count(), 2);
        assert!(q.map.faces().iter().all(|f| f.len() == 4));
        assert_eq!(q.map.euler_characteristic(), 0);
    }

    #[test]
    fn quad_counts_and_paths() {
        for m in [
            gen_torus_lattice(LatticeKind::Square, 3, 2).unwrap(),
            gen_torus_lattice(LatticeKind::Triangular, 2, 2).unwrap(),
            gen_genus2_bouquet(),
        ] {
            let q = m.quad_graph();
            assert_eq!(q.map.vertex_count(), m.vertex_count() + m.face_count());
            assert_eq!(q.map.edge_count(), 2 * m.edge_count());
            assert_eq!(q.map.face_count(), m.edge_count());
            assert_eq!(q.map.genus(), Some(m.surface_genus()));
            let dual = m.dual();
            for e in 0..m.dart_count() {
                let [x, y] = q.primal_paths[e];
                assert_eq!(q.map.terminus(x), q.map.origin(y));
                assert_eq!(q.map.origin(x), q.map.origin(q.primal_paths[m.rotate(e)][0]));
                let [x, y] = q.dual_paths[e];
                assert_eq!(q.map.terminus(x), q.map.origin(y));
                // consecutive dual darts around a dual vertex start at the same quad vertex
                assert_eq!(q.map.origin(x), q.map.origin(q.dual_paths[dual.rotate(e)][0]));
                assert_eq!(q.map.terminus(y), q.map.origin(q.dual_paths[dual.reversal(e)][0]));
            }
        }
    }

    #[test]
    fn dual_involution_and_genus() {
        for m in [
            gen_torus_lattice(LatticeKind::Square, 2, 3).unwrap(),
            gen_torus_lattice(LatticeKind::Hexagonal, 2, 2).unwrap(),
            gen_genus2_bouquet(),
        ] {
            let d = m.dual();
            assert_eq!(d.surface_genus(), m.surface_genus());
            assert_eq!(d.vertex_count(), m.face_count());
            assert_eq!(d.face_count(), m.vertex_count());
            assert!(is_isomorphic(&d.dual(), &m));
        }
    }

    #[test]
    fn square_self_dual() {
        for n in 1..=4 {
            let m = gen_torus_lattice(LatticeKind::Square, n, n).unwrap();
            assert!(is_isomorphic(&m.dual(), &m), "n = {n}");
        }
    }

    #[test]
    fn triangular_dual_is_hexagonal() {
        for (n, k) in [(1, 1), (2, 2), (3, 2)] {
            let tri = gen_torus_lattice(LatticeKind::Triangular, n, k).unwrap();
            let hex = gen_torus_lattice(LatticeKind::Hexagonal, n, k).unwrap();
            assert!(is_isomorphic(&tri.dual(), &hex), "{n}x{k}");
        }
    }
}
