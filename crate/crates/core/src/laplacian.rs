//! Twisted discrete Laplacians on weighted maps.

use crate::cohomology::Cocycle;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::ribbon::CombinatorialMap;
use crate::scalar::{Cx, Real};
use crate::weights::WeightSystem;

/// `Δ^φ`, indexed by vertices.
pub type LapMatrix<T> = ComplexMatrix<T>;

/// `(Δ^φ f)(v) = Σ_{e = (v, w)} x_e (f(v) − φ(e) f(w))`.
///
/// No isoradiality is needed, only edge weights and a dart labeling.
pub fn laplacian_matrix<T: Real>(map: &CombinatorialMap, weights: &WeightSystem<T>, phi: &Cocycle) -> Result<LapMatrix<T>> {
    if phi.dart_count() != map.dart_count() {
        return Err(Error::Dimension(format!(
            "{} phases for a map with {} darts",
            phi.dart_count(),
            map.dart_count()
        )));
    }
    connection_laplacian(map, weights, &phi.values_as::<T>())
}

/// Same matrix for any unit labeling with `φ(ē) = conj φ(e)`; face products are not checked.
pub fn connection_laplacian<T: Real>(map: &CombinatorialMap, weights: &WeightSystem<T>, phi: &[Cx<T>]) -> Result<LapMatrix<T>> {
    if weights.len() != map.edge_count() || phi.len() != map.dart_count() {
        return Err(Error::Dimension(format!(
            "{} weights and {} phases for a map with {} edges",
            weights.len(),
            phi.len(),
            map.edge_count()
        )));
    }
    let mut m = ComplexMatrix::zeros(map.vertex_count());
    for d in 0..map.dart_count() {
        let x = weights.edge(map.edge_of(d));
        let (v, w) = (map.origin(d), map.terminus(d));
        m[(v, v)] += x;
        m[(v, w)] -= x * phi[d];
    }
    Ok(m)
}

pub fn det_laplacian<T: Real>(map: &CombinatorialMap, weights: &WeightSystem<T>, phi: &Cocycle) -> Result<Cx<T>> {
    Ok(laplacian_matrix(map, weights, phi)?.determinant())
}
