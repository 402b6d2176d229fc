//! Shared test helpers. The SAV-BDF2 reference below does not use the crate's
//! spectral code: operators are dense matrices built from a naive DFT and each
//! step solves the coupled `(u, z)` system by Gaussian elimination.

#![allow(dead_code)]

use std::f64::consts::PI;

pub type Mat = Vec<Vec<f64>>;

/// Dense matrix of the Fourier multiplier `sym(k, l)` on an `n x n` periodic
/// grid, acting on row-major vectors. Wavenumbers run over `-n/2+1 ..= n/2`.
pub fn multiplier_matrix(n: usize, sym: impl Fn(i64, i64) -> f64) -> Mat {
    let nn = n * n;
    let wn = |i: usize| if i <= n / 2 { i as i64 } else { i as i64 - n as i64 };
    let mut m = vec![vec![0.0; nn]; nn];
    for (r, row) in m.iter_mut().enumerate() {
        let (i, j) = (r / n, r % n);
        for (c, entry) in row.iter_mut().enumerate() {
            let (p, q) = (c / n, c % n);
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let (k, l) = (wn(a), wn(b));
                    let phase = 2.0 * PI * (k as f64 * (i as f64 - p as f64) + l as f64 * (j as f64 - q as f64)) / n as f64;
                    acc += sym(k, l) * phase.cos();
                }
            }
            *entry = acc / nn as f64;
        }
    }
    m
}

pub fn matvec(m: &Mat, v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Gaussian elimination with partial pivoting.
pub fn solve(mut a: Mat, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Allen-Cahn (`g = -1`) or Cahn-Hilliard (`g = Lap`) with `L = -eps^2 Lap`,
/// `E1 = int (u^2 - 1)^2 / 4`, cube evaluated pointwise.
pub struct Reference {
    pub n: usize,
    pub h: f64,
    pub c0: f64,
    pub l: Mat,
    pub g: Mat,
}

impl Reference {
    pub fn new(n: usize, length: f64, eps: f64, c0: f64, conserved: bool) -> Self {
        let w = 2.0 * PI / length;
        let lap = move |k: i64, l: i64| -w * w * (k * k + l * l) as f64;
        let l = multiplier_matrix(n, move |k, l| -eps * eps * lap(k, l));
        let g = if conserved { multiplier_matrix(n, lap) } else { multiplier_matrix(n, |_, _| -1.0) };
        Reference { n, h: length / n as f64, c0, l, g }
    }

    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.h * self.h * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }

    /// `W(u) = (u^3 - u)/sqrt(E1(u) + C0)`.
    fn w(&self, u: &[f64]) -> Vec<f64> {
        let e1 = self.h * self.h * u.iter().map(|v| 0.25 * (v * v - 1.0).powi(2)).sum::<f64>();
        let z = (e1 + self.c0).sqrt();
        u.iter().map(|v| (v * v * v - v) / z).collect()
    }

    pub fn z0(&self, u: &[f64]) -> f64 {
        (self.h * self.h * u.iter().map(|v| 0.25 * (v * v - 1.0).powi(2)).sum::<f64>() + self.c0).sqrt()
    }

    /// Solves `c_new u+ - r = tau G (L u+ + z+ W)` together with
    /// `c_new z+ - s = (W, c_new u+ - r)/2`.
    fn coupled(&self, tau: f64, c_new: f64, r: &[f64], s: f64, w: &[f64]) -> (Vec<f64>, f64) {
        let nn = self.n * self.n;
        let gl: Mat = (0..nn)
            .map(|i| (0..nn).map(|j| (0..nn).map(|k| self.g[i][k] * self.l[k][j]).sum()).collect())
            .collect();
        let gw = matvec(&self.g, w);
        let mut a = vec![vec![0.0; nn + 1]; nn + 1];
        let mut b = vec![0.0; nn + 1];
        for i in 0..nn {
            for j in 0..nn {
                a[i][j] = -tau * gl[i][j];
            }
            a[i][i] += c_new;
            a[i][nn] = -tau * gw[i];
            b[i] = r[i];
        }
        let h2 = self.h * self.h;
        for j in 0..nn {
            a[nn][j] = -0.5 * h2 * w[j] * c_new;
        }
        a[nn][nn] = c_new;
        b[nn] = s - 0.5 * self.inner(w, r);
        let x = solve(a, b);
        (x[..nn].to_vec(), x[nn])
    }

    /// First-order SAV step from `(u, z)` with `W` frozen at `u`.
    pub fn euler(&self, tau: f64, u: &[f64], z: f64) -> (Vec<f64>, f64) {
        let w = self.w(u);
        self.coupled(tau, 1.0, u, z, &w)
    }

    /// SAV-BDF2 step with `u_bar = 2 u - u_prev`.
    pub fn bdf2(&self, tau: f64, u_prev: &[f64], u: &[f64], z_prev: f64, z: f64) -> (Vec<f64>, f64) {
        let bar: Vec<f64> = u.iter().zip(u_prev).map(|(a, b)| 2.0 * a - b).collect();
        let w = self.w(&bar);
        // (3 u+ - 4 u + u-)/2 = tau G mu  becomes  1.5 u+ - r = tau G mu
        let r: Vec<f64> = u.iter().zip(u_prev).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let s = 2.0 * z - 0.5 * z_prev;
        self.coupled(tau, 1.5, &r, s, &w)
    }
}
