//! Banded nonsymmetric matrix with partial-pivot LU.
//!
//! Rows are stored with `kl` extra super-diagonals so that row interchanges
//! during factorisation stay inside the storage, the same layout trick as
//! LAPACK `gbtrf`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn in_storage(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku + self.kl
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i < self.n && j < self.n && self.in_storage(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Adds `v` to entry `(i, j)`. Panics if the entry is outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    /// Column range of the band in row `i`.
    pub fn row_span(&self, i: usize) -> core::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row_span(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Row-major dense copy, mainly for tests and diagnostics.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in self.row_span(i) {
                d[i * self.n + j] = self.get(i, j);
            }
        }
        d
    }

    /// Factorises in place and solves `A x = b`.
    pub fn solve(mut self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::Size {
                what: "right-hand side",
                expected: self.n,
                got: b.len(),
            });
        }
        let piv = self.factorize()?;
        let mut x = b.to_vec();
        self.substitute(&piv, &mut x);
        Ok(x)
    }

    fn factorize(&mut self) -> Result<Vec<usize>> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = libm::fabs(self.data[self.slot(k, k)]);
            for i in k + 1..=last_row {
                let v = libm::fabs(self.data[self.slot(i, k)]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 0.0) || !best.is_finite() {
                return Err(Error::Singular { column: k });
            }
            piv[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for i in k + 1..=last_row {
                let s = self.slot(i, k);
                let l = self.data[s] / pivot;
                self.data[s] = l;
                if l != 0.0 {
                    for j in k + 1..=last_col {
                        let u = self.data[self.slot(k, j)];
                        let t = self.slot(i, j);
                        self.data[t] -= l * u;
                    }
                }
            }
        }
        Ok(piv)
    }

    fn substitute(&self, piv: &[usize], x: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            x.swap(k, piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                x[i] -= self.data[self.slot(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.data[self.slot(k, j)] * x[j];
            }
            x[k] = s / self.data[self.slot(k, k)];
        }
    }
}
