use std::ops::{Add, Mul};

use super::{StateVector, ALGEBRA_TOL, C64};

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "operator must be square");
        Operator {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Operator { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(state: &StateVector) -> Self {
        let a = state.amps();
        let dim = a.len();
        let entries = (0..dim * dim)
            .map(|ij| a[ij / dim] * a[ij % dim].conj())
            .collect();
        Operator { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn scale(&self, factor: f64) -> Self {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Operator) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..n {
            for j in 0..n {
                let s = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        entries[(i * m + k) * dim + j * m + l] = s * other.get(k, l);
                    }
                }
            }
        }
        Operator { dim, entries }
    }

    pub fn apply(&self, state: &StateVector) -> Vec<C64> {
        assert_eq!(self.dim, state.dim(), "dimension mismatch");
        let a = state.amps();
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * a[j]).sum())
            .collect()
    }

    /// `⟨ψ|self|ψ⟩`, complex in general.
    pub fn expectation(&self, state: &StateVector) -> C64 {
        let applied = self.apply(state);
        state
            .amps()
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol)
        })
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    ///
    /// The `n×n` complex matrix `A + iB` is embedded as the real symmetric
    /// `2n×2n` block matrix `[[A, -B], [B, A]]`, whose spectrum is that of
    /// the original with every eigenvalue doubled. Cyclic Jacobi rotations
    /// diagonalize the embedding.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let size = 2 * n;
        let mut m = vec![0.0; size * size];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                m[i * size + j] = z.re;
                m[(i + n) * size + j + n] = z.re;
                m[(i + n) * size + j] = z.im;
                m[i * size + j + n] = -z.im;
            }
        }
        jacobi_eigenvalues(&mut m, size);
        let mut eig: Vec<f64> = (0..size).map(|i| m[i * size + i]).collect();
        eig.sort_by(f64::total_cmp);
        // Each eigenvalue appears twice; keep one of every pair.
        eig.into_iter().step_by(2).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().norm() <= ALGEBRA_TOL
    }
}

fn jacobi_eigenvalues(m: &mut [f64], n: usize) {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off < 1e-30 {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Operator {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let entries = (0..n * n)
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
            })
            .collect();
        Operator { dim: n, entries }
    }
}
