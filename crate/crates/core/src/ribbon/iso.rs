//! Orientation-preserving map isomorphism by canonical relabeling.

use super::{Dart, IsoradialMap};
use crate::angle::AnglePi;

/// Relabeled reversal, rotation and per-dart angle arrays.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub reversal: Vec<Dart>,
    pub rotation: Vec<Dart>,
    pub theta: Vec<AnglePi>,
}

fn relabel_from(map: &IsoradialMap, start: Dart) -> CanonicalForm {
    let n = map.dart_count();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[start] = 0;
    order.push(start);
    let mut head = 0;
    while head < order.len() {
        let d = order[head];
        head += 1;
        for nb in [map.reversal(d), map.rotate(d)] {
            if label[nb] == usize::MAX {
                label[nb] = order.len();
                order.push(nb);
            }
        }
    }
    CanonicalForm {
        reversal: order.iter().map(|&d| label[map.reversal(d)]).collect(),
        rotation: order.iter().map(|&d| label[map.rotate(d)]).collect(),
        theta: order.iter().map(|&d| map.theta(d)).collect(),
    }
}

/// Lexicographically smallest relabeling over all breadth-first starts.
pub fn canonical_form(map: &IsoradialMap) -> CanonicalForm {
    (0..map.dart_count())
        .map(|s| relabel_from(map, s))
        .min()
        .unwrap_or(CanonicalForm {
            reversal: vec![],
            rotation: vec![],
            theta: vec![],
        })
}

pub fn is_isomorphic(a: &IsoradialMap, b: &IsoradialMap) -> bool {
    a.dart_count() == b.dart_count()
        && a.vertex_count() == b.vertex_count()
        && a.face_count() == b.face_count()
        && canonical_form(a) == canonical_form(b)
}
