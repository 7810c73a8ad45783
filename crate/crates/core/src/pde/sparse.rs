//! Sparse storage and solvers for the grid operators.
//!
//! CSR with ILU(0)-preconditioned BiCGSTAB for one-off steady solves, and a
//! banded LU without pivoting for repeated solves with one matrix (time
//! stepping). The grid operators are M-matrices, so the unpivoted
//! factorization is stable and its triangular solves keep positive data
//! positive.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Builds from per-row entry lists; duplicate columns are summed and
    /// columns sorted.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col = Vec::new();
        let mut val = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, v) in r {
                if last == Some(c) {
                    *val.last_mut().unwrap() += v;
                } else {
                    col.push(c);
                    val.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col.len());
        }
        Self { n, row_ptr, col, val }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.val[p] * x[self.col[p]];
            }
            y[i] = s;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = &self.col[self.row_ptr[i]..self.row_ptr[i + 1]];
        match r.binary_search(&j) {
            Ok(p) => self.val[self.row_ptr[i] + p],
            Err(_) => 0.0,
        }
    }

    /// Returns `alpha * I + beta * self`.
    pub fn shifted(&self, alpha: f64, beta: f64) -> Self {
        let rows = (0..self.n)
            .map(|i| {
                let mut r: Vec<(usize, f64)> = (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|p| (self.col[p], beta * self.val[p]))
                    .collect();
                r.push((i, alpha));
                r
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Largest |i - j| below and above the diagonal.
    pub fn bandwidths(&self) -> (usize, usize) {
        let (mut kl, mut ku) = (0, 0);
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col[p];
                if j < i {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
        (kl, ku)
    }
}

/// Incomplete LU with the sparsity pattern of the matrix itself.
pub struct Ilu0 {
    lu: Csr,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &Csr) -> Result<Self> {
        let mut lu = a.clone();
        let n = a.n;
        let mut diag = vec![usize::MAX; n];
        for (i, d) in diag.iter_mut().enumerate() {
            for p in lu.row_ptr[i]..lu.row_ptr[i + 1] {
                if lu.col[p] == i {
                    *d = p;
                }
            }
            if *d == usize::MAX {
                return Err(Error::Solver { iterations: 0, residual: f64::NAN });
            }
        }
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (lu.row_ptr[i], lu.row_ptr[i + 1]);
            for p in start..end {
                pos[lu.col[p]] = p;
            }
            for p in start..end {
                let k = lu.col[p];
                if k >= i {
                    break;
                }
                let pivot = lu.val[diag[k]];
                if pivot == 0.0 {
                    return Err(Error::Solver { iterations: 0, residual: f64::NAN });
                }
                let l = lu.val[p] / pivot;
                lu.val[p] = l;
                for q in diag[k] + 1..lu.row_ptr[k + 1] {
                    let j = lu.col[q];
                    if pos[j] != usize::MAX && pos[j] >= start && pos[j] < end {
                        lu.val[pos[j]] -= l * lu.val[q];
                    }
                }
            }
            for p in start..end {
                pos[lu.col[p]] = usize::MAX;
            }
            if lu.val[diag[i]] == 0.0 {
                return Err(Error::Solver { iterations: 0, residual: f64::NAN });
            }
        }
        Ok(Self { lu, diag })
    }

    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let lu = &self.lu;
        for i in 0..lu.n {
            let mut s = r[i];
            for p in lu.row_ptr[i]..self.diag[i] {
                s -= lu.val[p] * z[lu.col[p]];
            }
            z[i] = s;
        }
        for i in (0..lu.n).rev() {
            let mut s = z[i];
            for p in self.diag[i] + 1..lu.row_ptr[i + 1] {
                s -= lu.val[p] * z[lu.col[p]];
            }
            z[i] = s / lu.val[self.diag[i]];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Right-preconditioned BiCGSTAB. Converges when ‖b − Ax‖ / ‖b‖ < `tol`.
pub fn bicgstab(a: &Csr, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.n;
    let m = Ilu0::new(a)?;
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, SolveStats { iterations: 0, residual: 0.0 }));
    }
    let mut r = b.to_vec();
    let r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut phat = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut shat = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut resid = 1.0;
    for it in 1..=max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new == 0.0 || omega == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        m.apply(&p, &mut phat);
        a.matvec(&phat, &mut v);
        alpha = rho / dot(&r0, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / bnorm < tol {
            for i in 0..n {
                x[i] += alpha * phat[i];
            }
            resid = true_residual(a, &x, b) / bnorm;
            if resid < tol {
                return Ok((x, SolveStats { iterations: it, residual: resid }));
            }
            r.copy_from_slice(b);
            a.matvec(&x, &mut t);
            for i in 0..n {
                r[i] -= t[i];
            }
            continue;
        }
        m.apply(&s, &mut shat);
        a.matvec(&shat, &mut t);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        resid = norm(&r) / bnorm;
        if resid < tol {
            let true_res = true_residual(a, &x, b) / bnorm;
            if true_res < tol {
                return Ok((x, SolveStats { iterations: it, residual: true_res }));
            }
            resid = true_res;
        }
    }
    Err(Error::Solver { iterations: max_iter, residual: resid })
}

fn true_residual(a: &Csr, x: &[f64], b: &[f64]) -> f64 {
    let mut ax = vec![0.0; a.n];
    a.matvec(x, &mut ax);
    ax.iter().zip(b).map(|(p, q)| (q - p) * (q - p)).sum::<f64>().sqrt()
}

/// LU factors of a banded matrix, computed without pivoting.
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedLu {
    pub fn factor(a: &Csr) -> Result<Self> {
        let n = a.n;
        let (kl, ku) = a.bandwidths();
        let w = kl + ku + 1;
        let mut data = vec![0.0; n * w];
        for i in 0..n {
            for p in a.row_ptr[i]..a.row_ptr[i + 1] {
                let j = a.col[p];
                data[i * w + j + kl - i] = a.val[p];
            }
        }
        let at = |i: usize, j: usize| i * w + j + kl - i;
        for k in 0..n {
            let pivot = data[at(k, k)];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::Solver { iterations: k, residual: f64::NAN });
            }
            let jmax = (k + ku).min(n - 1);
            for i in k + 1..=(k + kl).min(n - 1) {
                let idx = at(i, k);
                if data[idx] == 0.0 {
                    continue;
                }
                let l = data[idx] / pivot;
                data[idx] = l;
                let (src, dst) = (at(k, k + 1), at(i, k + 1));
                for off in 0..jmax - k {
                    data[dst + off] -= l * data[src + off];
                }
            }
        }
        Ok(Self { n, kl, ku, data })
    }

    fn w(&self) -> usize {
        self.kl + self.ku + 1
    }

    /// Solves A x = b in place.
    pub fn solve(&self, x: &mut [f64]) {
        let (n, kl, ku, w) = (self.n, self.kl, self.ku, self.w());
        for i in 0..n {
            let j0 = i.saturating_sub(kl);
            let mut s = x[i];
            for j in j0..i {
                s -= self.data[i * w + j + kl - i] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + ku).min(n - 1) {
                s -= self.data[i * w + j + kl - i] * x[j];
            }
            x[i] = s / self.data[i * w + kl];
        }
    }

    /// Solves Aᵀ x = b in place (Uᵀ then Lᵀ).
    pub fn solve_transpose(&self, x: &mut [f64]) {
        let (n, kl, ku, w) = (self.n, self.kl, self.ku, self.w());
        for i in 0..n {
            x[i] /= self.data[i * w + kl];
            let xi = x[i];
            for j in i + 1..=(i + ku).min(n - 1) {
                x[j] -= self.data[i * w + j + kl - i] * xi;
            }
        }
        for i in (0..n).rev() {
            let xi = x[i];
            for j in i.saturating_sub(kl)..i {
                x[j] -= self.data[i * w + j + kl - i] * xi;
            }
        }
    }
}
