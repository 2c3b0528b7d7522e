use super::field::Field;
use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "QMCOH_BUDGET_MB";

pub fn default_budget_mb() -> usize {
    512
}

/// Matrix memory cap in MB, from `QMCOH_BUDGET_MB` when set.
pub fn budget_mb() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or_else(default_budget_mb)
}

/// Fails when `entries` field elements would exceed the budget.
pub fn check_budget<F: Field>(entries: u128, budget_mb: usize) -> Result<()> {
    let bytes = entries * std::mem::size_of::<F>() as u128;
    let need_mb = bytes.div_ceil(1 << 20);
    if need_mb > budget_mb as u128 {
        return Err(Error::BudgetExceeded { need_mb: need_mb as u64, budget_mb: budget_mb as u64 });
    }
    Ok(())
}

/// Dense row-major matrix. Subspaces are passed around as matrices whose
/// columns are a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<F>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid(format!("expected a {rows}x{cols} matrix")));
        }
        Ok(Mat { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    /// Columns `e_i` for the listed coordinates.
    pub fn coordinate_span(dim: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let coords: Vec<usize> = coords.into_iter().collect();
        let mut m = Self::zeros(dim, coords.len());
        for (j, &i) in coords.iter().enumerate() {
            m.set(i, j, F::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: &F) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k].add(x);
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *d = d.add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Mat { rows: self.rows, cols, data }
    }

    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vcat");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(i, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut data = Vec::new();
        let mut n = 0;
        for r in rows {
            data.extend_from_slice(self.row(r));
            n += 1;
        }
        Mat { rows: n, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let (rows, cols) = (m.rows, m.cols);
        let mut rank = 0;
        let mut pivot_row = vec![F::zero(); cols];
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pr) = (rank..rows).find(|&r| !m.get(r, c).is_zero()) else { continue };
            if pr != rank {
                for j in c..cols {
                    m.data.swap(pr * cols + j, rank * cols + j);
                }
            }
            let inv = m.get(rank, c).inv();
            for j in c..cols {
                let x = m.get(rank, j).mul(&inv);
                pivot_row[j] = x.clone();
                m.set(rank, j, x);
            }
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                let dst = &mut m.data[r * cols..(r + 1) * cols];
                for j in c..cols {
                    if !pivot_row[j].is_zero() {
                        dst[j] = dst[j].sub(&f.mul(&pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The columns of `self` at the pivot positions: a basis of the column space.
    pub fn col_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Columns form a basis of `{x : self x = 0}`.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, F::one());
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, r.get(i, fc).neg());
            }
        }
        k
    }

    /// Rows form a basis of `{y : y self = 0}`.
    pub fn left_annihilator(&self) -> Self {
        self.transpose().kernel().transpose()
    }

    /// The unique `X` with `self X = b` when `self` has independent columns,
    /// or `None` if some column of `b` is outside the column space.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        let n = self.cols;
        let (r, pivots) = self.hcat(b).rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            // A dependent column of `self`, or a pivot landed in `b`.
            if pivots.iter().any(|&p| p >= n) {
                return None;
            }
            panic!("solve needs independent columns");
        }
        let mut x = Self::zeros(n, b.cols);
        for i in 0..n {
            for j in 0..b.cols {
                x.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(x)
    }
}
