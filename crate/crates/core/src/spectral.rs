//! Dense symmetric eigenvalues by cyclic Jacobi rotations.

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

use crate::gf2::BitMatrix;
use crate::scalar::Scalar;

/// Sweep budget for [`spectrum`].
pub const MAX_SWEEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix rows have unequal lengths or the matrix is not square")]
    NotSquare,
    #[error("no convergence after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Dense square matrix, row-major. Symmetry is checked by [`spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, SpectralError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SpectralError::NotSquare);
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j].clone()
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v.clone();
        self.data[j * self.n + i] = v;
    }

    /// Sets `(i, j)` only.
    pub fn set_entry(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(T::zero(), |acc, j| acc + self.get(i, j) * x[j].clone())
            })
            .collect()
    }
}

impl<T: Scalar + Float> SymMatrix<T> {
    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, &x| acc + x * x)
            .sqrt()
    }
}

/// Eigen-decomposition with eigenvalues sorted by absolute value, descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport<T> {
    pub eigenvalues: Vec<T>,
    /// Unit eigenvectors, aligned with `eigenvalues`.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<T>>,
    /// `|λ_0|`.
    pub mu1: T,
    /// `|λ_1|`, absent for 1×1 input.
    pub mu2: Option<T>,
    /// `‖A v − λ v‖` per eigenpair.
    pub residuals: Vec<T>,
    pub sweeps: usize,
}

impl<T: Scalar + Float> SpectrumReport<T> {
    /// Largest absolute eigenvalue after removing one copy each of `λ_max` and
    /// `−λ_max` (the nontrivial eigenvalue of a connected bipartite graph).
    pub fn nontrivial_mu_bipartite(&self) -> T {
        let top = self.eigenvalues.first().copied().unwrap_or_else(T::zero);
        let tol = self.tolerance() * T::from(1e3).expect("constant");
        let mut rest: Vec<T> = self.eigenvalues.clone();
        for target in [top, -top] {
            if let Some(pos) = rest.iter().position(|&x| (x - target).abs() <= tol) {
                rest.remove(pos);
            }
        }
        rest.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    fn tolerance(&self) -> T {
        let scale = self.mu1.max(T::one());
        tolerance::<T>() * scale
    }
}

fn tolerance<T: Float>() -> T {
    let fixed = T::from(1e-12).expect("constant");
    let eps = T::epsilon() * T::from(10.0).expect("constant");
    fixed.max(eps)
}

/// Full spectrum of a symmetric matrix.
pub fn spectrum<T: Scalar + Float>(a: &SymMatrix<T>) -> Result<SpectrumReport<T>, SpectralError> {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let sym_tol = T::from(1e-12).expect("constant") * norm.max(T::one());
    for i in 0..n {
        for j in i + 1..n {
            if (a.get(i, j) - a.get(j, i)).abs() > sym_tol {
                return Err(SpectralError::NotSymmetric { row: i, col: j });
            }
        }
    }
    let mut m: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let threshold = tolerance::<T>() * norm;
    let off_norm = |m: &Vec<Vec<T>>| {
        let mut s = T::zero();
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    s = s + x * x;
                }
            }
        }
        s.sqrt()
    };
    let two = T::one() + T::one();
    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SpectralError::NoConvergence {
                sweeps,
                off: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == T::zero() {
                    continue;
                }
                let tau = (m[q][q] - m[p][p]) / (two * apq);
                let sign = if tau >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (tau.abs() + (tau * tau + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for row in m.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (m[p][k], m[q][k]);
                    m[p][k] = c * pk - s * qk;
                    m[q][k] = s * pk + c * qk;
                }
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].abs().partial_cmp(&m[i][i].abs()).expect("finite eigenvalues"));
    // within groups of equal magnitude, positive values first
    let group_tol = threshold.max(T::epsilon()) * T::from(1e3).expect("constant");
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (m[order[start]][order[start]].abs() - m[order[end]][order[end]].abs()).abs() <= group_tol {
            end += 1;
        }
        order[start..end].sort_by(|&i, &j| m[j][j].partial_cmp(&m[i][i]).expect("finite eigenvalues"));
        start = end;
    }

    let eigenvalues: Vec<T> = order.iter().map(|&i| m[i][i]).collect();
    let eigenvectors: Vec<Vec<T>> = order
        .iter()
        .map(|&col| (0..n).map(|r| v[r][col]).collect())
        .collect();
    let residuals = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&lambda, vec)| {
            a.mul_vec(vec)
                .iter()
                .zip(vec)
                .fold(T::zero(), |acc, (&av, &x)| {
                    let r = av - lambda * x;
                    acc + r * r
                })
                .sqrt()
        })
        .collect();
    Ok(SpectrumReport {
        mu1: eigenvalues.first().map(|x| x.abs()).unwrap_or_else(T::zero),
        mu2: eigenvalues.get(1).map(|x| x.abs()),
        eigenvalues,
        eigenvectors,
        residuals,
        sweeps,
    })
}

/// `H·Hᵀ` over the integers.
pub fn hht(h: &BitMatrix) -> SymMatrix<f64> {
    let rows: Vec<Vec<usize>> = (0..h.rows()).map(|r| h.row_support(r)).collect();
    let mut out = SymMatrix::zeros(h.rows());
    for i in 0..h.rows() {
        for j in i..h.rows() {
            let common = rows[i].iter().filter(|&&c| h.get(j, c)).count();
            out.set(i, j, common as f64);
        }
    }
    out
}

/// Spectrum of `H·Hᵀ`.
pub fn hht_spectrum(h: &BitMatrix) -> Result<SpectrumReport<f64>, SpectralError> {
    spectrum(&hht(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tanner::{BaseGraph, BipartiteGraph};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn complete_graph() {
        let r = spectrum(&BaseGraph::complete(4).adjacency_matrix()).unwrap();
        assert!(close(r.eigenvalues[0], 3.0));
        assert!(r.eigenvalues[1..].iter().all(|&x| close(x, -1.0)));
        assert!(close(r.mu2.unwrap(), 1.0));
    }

    #[test]
    fn six_cycle() {
        let r = spectrum(&BaseGraph::cycle(6).adjacency_matrix()).unwrap();
        let expect = [2.0, -2.0, 1.0, 1.0, -1.0, -1.0];
        for (x, y) in r.eigenvalues.iter().zip(expect) {
            assert!(close(*x, y), "{:?}", r.eigenvalues);
        }
        assert!(close(r.mu2.unwrap(), 2.0));
        assert!(close(r.nontrivial_mu_bipartite(), 1.0));
    }

    #[test]
    fn complete_bipartite_top() {
        let r = spectrum(&BipartiteGraph::complete(3, 4).adjacency_matrix()).unwrap();
        assert!(close(r.mu1, 12f64.sqrt()));
        assert!(close(r.nontrivial_mu_bipartite(), 0.0));
    }

    #[test]
    fn residuals_small_and_trace() {
        let a = BaseGraph::petersen().adjacency_matrix();
        let r = spectrum(&a).unwrap();
        let norm = a.frobenius_norm();
        assert!(r.residuals.iter().all(|&x| x <= 1e-9 * norm));
        assert!(close(r.eigenvalues.iter().sum::<f64>(), a.trace()));
    }

    #[test]
    fn hht_examples() {
        let inc = crate::tanner::build_case_c(
            &BaseGraph::complete(4),
            std::sync::Arc::new(crate::subcodes::SubcodeSpec::builtin("spc3").unwrap()),
        )
        .unwrap()
        .to_parity_matrix();
        let r = hht_spectrum(&inc).unwrap();
        let expect = [6.0, 2.0, 2.0, 2.0];
        for (x, y) in r.eigenvalues.iter().zip(expect) {
            assert!(close(*x, y));
        }
        let z = hht_spectrum(&BitMatrix::zeros(3, 3).unwrap()).unwrap();
        assert!(z.eigenvalues.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn not_symmetric() {
        let a = SymMatrix::from_rows(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(spectrum(&a), Err(SpectralError::NotSymmetric { .. })));
    }

    #[test]
    fn single_precision() {
        let mut a: SymMatrix<f32> = SymMatrix::zeros(3);
        a.set(0, 1, 1.0);
        a.set(1, 2, 1.0);
        let r = spectrum(&a).unwrap();
        assert!((r.mu1 - 2f32.sqrt()).abs() < 1e-5);
    }
}
