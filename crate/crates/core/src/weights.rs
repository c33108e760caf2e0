//! Edge weights.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ribbon::{Dart, IsoradialMap};
use crate::scalar::{Cx, Real};

/// One complex weight per unoriented edge, so `x_e = x_ē`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem<T: Real> {
    values: Vec<Cx<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    /// `ν_e = tan(θ_e/2)`, the Ising weights.
    Nu,
    /// `c_e = tan θ_e`, the Laplacian conductances.
    C,
    /// `μ_e = i tan θ_e`.
    Mu,
}

/// Coupling `J(θ) = ½ log((1 + sin θ)/cos θ)` of the critical model.
pub fn critical_coupling(theta: f64) -> f64 {
    0.5 * ((1.0 + theta.sin()) / theta.cos()).ln()
}

impl<T: Real> WeightSystem<T> {
    pub fn new(values: Vec<Cx<T>>) -> Self {
        WeightSystem { values }
    }

    pub fn from_real(values: &[T]) -> Self {
        WeightSystem {
            values: values.iter().map(|&x| Cx::new(x, T::zero())).collect(),
        }
    }

    pub fn zeros(edges: usize) -> Self {
        Self::from_real(&vec![T::zero(); edges])
    }

    pub fn critical(map: &IsoradialMap, kind: CriticalKind) -> Self {
        let values = map
            .edge_thetas()
            .iter()
            .map(|t| {
                let th = T::of(t.to_radians());
                match kind {
                    CriticalKind::Nu => Cx::new((th / T::of(2.0)).tan(), T::zero()),
                    CriticalKind::C => Cx::new(th.tan(), T::zero()),
                    CriticalKind::Mu => Cx::new(T::zero(), th.tan()),
                }
            })
            .collect();
        WeightSystem { values }
    }

    pub fn critical_nu(map: &IsoradialMap) -> Self {
        Self::critical(map, CriticalKind::Nu)
    }

    pub fn critical_c(map: &IsoradialMap) -> Self {
        Self::critical(map, CriticalKind::C)
    }

    pub fn critical_mu(map: &IsoradialMap) -> Self {
        Self::critical(map, CriticalKind::Mu)
    }

    /// Positive real couplings, one per edge.
    pub fn coupling_j(values: &[T]) -> Result<Self> {
        if values.iter().any(|&j| !(j >= T::zero())) {
            return Err(Error::Dimension("couplings must be nonnegative reals".into()));
        }
        Ok(Self::from_real(values))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn edge(&self, e: usize) -> Cx<T> {
        self.values[e]
    }

    pub fn dart(&self, map: &IsoradialMap, d: Dart) -> Cx<T> {
        self.values[map.edge_of(d)]
    }

    pub fn values(&self) -> &[Cx<T>] {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == T::zero())
    }

    /// Every weight multiplied by `t`.
    pub fn scaled(&self, t: Cx<T>) -> Self {
        WeightSystem {
            values: self.values.iter().map(|&x| x * t).collect(),
        }
    }

    pub(crate) fn check_len(&self, map: &IsoradialMap) -> Result<()> {
        if self.values.len() != map.edge_count() {
            return Err(Error::Dimension(format!(
                "{} weights for {} edges",
                self.values.len(),
                map.edge_count()
            )));
        }
        Ok(())
    }
}
