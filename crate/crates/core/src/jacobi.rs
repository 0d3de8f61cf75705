//! Dense real-symmetric eigensolver (cyclic Jacobi with threshold test).

use crate::error::{domain, Error, Result};

/// Square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(domain("matrix must be square"));
        }
        Ok(Matrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let row = &o.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    fn row_pair_mut(&mut self, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(p < q);
        let n = self.n;
        let (head, tail) = self.data.split_at_mut(q * n);
        (&mut head[p * n..(p + 1) * n], &mut tail[..n])
    }
}

/// Eigenpairs with eigenvalues ascending; column γ of `vectors` belongs to
/// `values[γ]`, with its largest-magnitude component made positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

pub trait SymmetricEigensolver {
    fn solve(&self, a: &Matrix) -> Result<SymEigen>;
}

#[derive(Debug, Clone, Copy)]
pub struct Jacobi {
    /// Stop when the off-diagonal Frobenius norm is ≤ `rel_tol`·‖A‖_F.
    pub rel_tol: f64,
    pub max_sweeps: usize,
}

impl Default for Jacobi {
    fn default() -> Self {
        Jacobi {
            rel_tol: 1e-12,
            max_sweeps: 30,
        }
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.n;
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += a.get(p, q).powi(2);
        }
    }
    (2.0 * s).sqrt()
}

impl SymmetricEigensolver for Jacobi {
    fn solve(&self, input: &Matrix) -> Result<SymEigen> {
        let n = input.n;
        if n == 0 {
            return Err(domain("empty matrix"));
        }
        let norm = input.frobenius();
        if !norm.is_finite() {
            return Err(domain("matrix has non-finite entries"));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if (input.get(p, q) - input.get(q, p)).abs() > 1e-12 * norm {
                    return Err(domain(format!("matrix not symmetric at ({p}, {q})")));
                }
            }
        }
        let mut a = input.clone();
        // rows of `vt` are the eigenvectors
        let mut vt = Matrix::identity(n);
        let target = self.rel_tol * norm;
        let mut sweeps = 0;
        loop {
            let off = off_diagonal_norm(&a);
            if off <= target {
                break;
            }
            if sweeps == self.max_sweeps {
                return Err(Error::Convergence {
                    sweeps,
                    off_norm: off,
                });
            }
            sweeps += 1;
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut vt, p, q);
                }
            }
        }
        Ok(finish(a, vt, sweeps))
    }
}

/// One Jacobi rotation annihilating a[p][q] (p < q).
fn rotate(a: &mut Matrix, vt: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let (app, aqq) = (a.get(p, p), a.get(q, q));
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.n;
    {
        let (rp, rq) = a.row_pair_mut(p, q);
        for k in 0..n {
            let (x, y) = (rp[k], rq[k]);
            rp[k] = c * x - s * y;
            rq[k] = s * x + c * y;
        }
    }
    for k in 0..n {
        let (x, y) = (a.get(p, k), a.get(q, k));
        a.set(k, p, x);
        a.set(k, q, y);
    }
    a.set(p, p, app - t * apq);
    a.set(q, q, aqq + t * apq);
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    let (vp, vq) = vt.row_pair_mut(p, q);
    for k in 0..n {
        let (x, y) = (vp[k], vq[k]);
        vp[k] = c * x - s * y;
        vq[k] = s * x + c * y;
    }
}

fn finish(a: Matrix, vt: Matrix, sweeps: usize) -> SymEigen {
    let n = a.n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)).then(i.cmp(&j)));
    let mut vectors = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let row = &vt.data[src * n..(src + 1) * n];
        let mut lead = 0;
        for k in 1..n {
            if row[k].abs() > row[lead].abs() {
                lead = k;
            }
        }
        let sign = if row[lead] < 0.0 { -1.0 } else { 1.0 };
        for (k, v) in row.iter().enumerate() {
            vectors.set(k, col, sign * v);
        }
    }
    SymEigen {
        values: order.iter().map(|&i| a.get(i, i)).collect(),
        vectors,
        sweeps,
    }
}

/// ‖U·diag(λ)·Uᵀ − A‖_F / ‖A‖_F.
pub fn reconstruction_error(a: &Matrix, e: &SymEigen) -> f64 {
    let n = a.dim();
    let scaled = Matrix::from_fn(n, |i, j| e.vectors.get(i, j) * e.values[j]);
    let r = scaled.mul(&e.vectors.transpose());
    let diff = Matrix::from_fn(n, |i, j| r.get(i, j) - a.get(i, j));
    diff.frobenius() / a.frobenius()
}

/// max |UᵀU − I|.
pub fn orthogonality_error(u: &Matrix) -> f64 {
    let g = u.transpose().mul(u);
    let n = u.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.get(i, j) - d).abs());
        }
    }
    worst
}
