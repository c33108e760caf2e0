//! Dense complex matrices and LU determinants.

use num_traits::{One, Zero};

use crate::scalar::{Cx, Real};

/// Row-major dense complex square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    n: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Cx::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Number of entries with nonzero modulus.
    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|z| !z.is_zero()).count()
    }

    /// Product of the Euclidean row norms (Hadamard's bound on `|det|`).
    pub fn row_norm_product(&self) -> T {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt())
            .fold(T::one(), |a, b| a * b)
    }

    /// Determinant by LU with partial pivoting; a pivot below
    /// [`Real::pivot_floor`] gives exactly 0.
    pub fn determinant(&self) -> Cx<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Cx::<T>::one();
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag.is_nan() || pmag < T::pivot_floor() {
                return Cx::zero();
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            let inv = Cx::<T>::one() / pivot;
            for i in k + 1..n {
                let f = a[i * n + k] * inv;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        det
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.n + j]
    }
}
