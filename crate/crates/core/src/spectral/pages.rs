use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::complex::FilteredComplex;
use super::field::Field;
use super::matrix::{check_budget, Mat};
use crate::check::CheckReport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Space {
    Z,
    B,
}

/// `E_r^{p,q}` as `Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + B_{r-1}^{p,q})`, with
/// coset representatives completing a basis of the denominator.
#[derive(Clone, Debug)]
pub struct PageCell<F: Field> {
    pub r: usize,
    pub p: usize,
    pub n: usize,
    pub reps: Mat<F>,
    pub denominator: Mat<F>,
}

impl<F: Field> PageCell<F> {
    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn q(&self) -> i64 {
        self.n as i64 - self.p as i64
    }
}

/// Pages of the spectral sequence of a filtered complex. Cells are reported
/// for total degree `n <= top - 2`, so that `Z_r` in degree `n + 1` still
/// sees `d` into a built degree.
pub struct SpectralSequence<F: Field> {
    fc: Arc<FilteredComplex<F>>,
    memo: Mutex<HashMap<(Space, i64, i64, usize), Arc<Mat<F>>>>,
}

impl<F: Field> SpectralSequence<F> {
    pub fn new(fc: Arc<FilteredComplex<F>>, budget_mb: usize) -> Result<Self> {
        if fc.top() < 2 {
            return Err(Error::DegreeWindow(format!("complex has top degree {}, need at least 2", fc.top())));
        }
        // Working matrices are at most a differential plus a few square blocks.
        let work: u128 = (0..fc.top())
            .map(|n| {
                let (a, b) = (fc.dim(n) as u128, fc.dim(n + 1) as u128);
                a * b + 4 * b * b
            })
            .max()
            .unwrap_or(0);
        check_budget::<F>(work, budget_mb)?;
        Ok(SpectralSequence { fc, memo: Mutex::new(HashMap::new()) })
    }

    pub fn complex(&self) -> &FilteredComplex<F> {
        &self.fc
    }

    /// Largest reported total degree.
    pub fn window(&self) -> usize {
        self.fc.top() - 2
    }

    fn check_window(&self, n: usize, limit: usize) -> Result<()> {
        if n > limit {
            return Err(Error::DegreeWindow(format!("total degree {n} exceeds {limit} for a complex of top degree {}", self.fc.top())));
        }
        Ok(())
    }

    fn memo(&self, key: (Space, i64, i64, usize), f: impl FnOnce() -> Mat<F>) -> Arc<Mat<F>> {
        if let Some(m) = self.memo.lock().unwrap().get(&key) {
            return m.clone();
        }
        let m = Arc::new(f());
        self.memo.lock().unwrap().insert(key, m.clone());
        m
    }

    /// `Z_r^p K^n = {x ∈ F^p K^n : dx ∈ F^{p+r} K^{n+1}}`, for `n < top`.
    fn z(&self, r: i64, p: i64, n: usize) -> Arc<Mat<F>> {
        let fc = &self.fc;
        let p = p.max(0);
        let r = r.clamp(0, fc.u(n + 1) as i64 + 1 - p.min(fc.u(n + 1) as i64 + 1));
        self.memo((Space::Z, r, p, n), || {
            let (src, dim) = (fc.offset(n, p), fc.dim(n));
            let dst = fc.offset(n + 1, p + r);
            let d = fc.complex().d(n);
            let block = d.select_rows(0..dst).select_cols(&(src..dim).collect::<Vec<_>>());
            embed(dim, src, &block.kernel())
        })
    }

    /// `B_r^p K^n = F^p K^n ∩ d(F^{p-r} K^{n-1})`.
    fn b(&self, r: i64, p: i64, n: usize) -> Arc<Mat<F>> {
        let fc = &self.fc;
        let p = p.max(0);
        let r = r.min(p);
        self.memo((Space::B, r, p, n), || {
            if n == 0 {
                return Mat::zeros(fc.dim(0), 0);
            }
            let d = fc.complex().d(n - 1);
            let src = fc.offset(n - 1, p - r);
            let image = d.select_cols(&(src..d.cols()).collect::<Vec<_>>()).col_basis();
            let low = image.select_rows(0..fc.offset(n, p));
            image.mul(&low.kernel())
        })
    }

    /// `E_r^{p, n-p}`, computed for `n <= top - 1`.
    pub fn cell(&self, r: usize, p: usize, n: usize) -> Result<PageCell<F>> {
        self.check_window(n, self.fc.top() - 1)?;
        let (ri, pi) = (r as i64, p as i64);
        let num = self.z(ri, pi, n);
        let den = self.z(ri - 1, pi + 1, n).hcat(&self.b(ri - 1, pi, n)).col_basis();
        let (_, pivots) = den.hcat(&num).rref();
        if pivots.iter().filter(|&&c| c < den.cols()).count() != den.cols()
            || num.hcat(&den).rank() != num.cols()
        {
            return Err(Error::Invalid(format!("denominator of E_{r}^{{{p},{}}} is not inside Z_r", n as i64 - pi)));
        }
        let fresh: Vec<usize> = pivots.iter().filter(|&&c| c >= den.cols()).map(|c| c - den.cols()).collect();
        Ok(PageCell { r, p, n, reps: num.select_cols(&fresh), denominator: den })
    }

    /// Matrix of `d_r: E_r^{p,q} -> E_r^{p+r,q-r+1}` in the representative bases.
    pub fn differential(&self, source: &PageCell<F>) -> Result<Mat<F>> {
        let (r, p, n) = (source.r, source.p, source.n);
        self.check_window(n, self.window())?;
        let target = self.cell(r, p + r, n + 1)?;
        let image = self.fc.complex().d(n).mul(&source.reps);
        let basis = target.reps.hcat(&target.denominator);
        let coords = basis.solve(&image).ok_or_else(|| {
            Error::Invalid(format!("d of a representative of E_{r}^{{{p},{}}} leaves Z_r", source.q()))
        })?;
        Ok(coords.select_rows(0..target.dim()))
    }

    /// `E_inf^{p, n-p} = (F^p ∩ ker d) / ((F^{p+1} ∩ ker d) + (F^p ∩ im d))`.
    pub fn e_infinity_dim(&self, p: usize, n: usize) -> Result<usize> {
        let r = (self.fc.u(n + 1) + self.fc.u(n) + 2) as i64;
        Ok(self.cell(r as usize, p, n)?.dim())
    }

    /// `max(u(n+1) - p + 1, p + 1)`, from which on `E_r^{p,q}` no longer
    /// changes. With `u(n+1)` the last nonzero level, `d_r` out of the cell
    /// can still hit `F^{u(n+1)}` at `r = u(n+1) - p`, so that `r` is too early.
    pub fn stable_r(&self, p: usize, n: usize) -> usize {
        (self.fc.u(n + 1) as i64 - p as i64 + 1).max(p as i64 + 1) as usize
    }

    /// Cells `(p, n)` with `n <= window` and `0 <= p <= u(n)`.
    pub fn window_cells(&self) -> Vec<(usize, usize)> {
        (0..=self.window()).flat_map(|n| (0..=self.fc.u(n)).map(move |p| (p, n))).collect()
    }

    /// Dimension and `d_r` rank for every cell of page `r` in the window.
    pub fn page(&self, r: usize) -> Result<Page> {
        let cells = self
            .window_cells()
            .par_iter()
            .map(|&(p, n)| {
                let c = self.cell(r, p, n)?;
                let rank = self.differential(&c)?.rank();
                Ok(CellSummary { p, q: c.q(), dim: c.dim(), d_rank: rank })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Page { r, cells })
    }

    pub fn page_dim(page: &Page, p: usize, q: i64) -> usize {
        page.cells.iter().find(|c| c.p == p && c.q == q).map_or(0, |c| c.dim)
    }

    fn rank_at(page: &Page, p: i64, q: i64) -> usize {
        if p < 0 {
            return 0;
        }
        page.cells.iter().find(|c| c.p as i64 == p && c.q == q).map_or(0, |c| c.d_rank)
    }

    /// `dim E_{r+1}^{p,q} = dim ker d_r^{p,q} - rank d_r^{p-r,q+r-1}` at every
    /// cell of the window for `r <= r_max`, and `d_r d_r = 0` where both maps
    /// stay in the window.
    pub fn check_page_homology(&self, r_max: usize) -> Result<CheckReport> {
        let mut report = CheckReport::new();
        let pages = (0..=r_max + 1).map(|r| self.page(r)).collect::<Result<Vec<_>>>()?;
        let mut i = 0;
        for r in 0..=r_max {
            let (page, next) = (&pages[r], &pages[r + 1]);
            for c in &page.cells {
                let incoming = Self::rank_at(page, c.p as i64 - r as i64, c.q + r as i64 - 1);
                let expected = c.dim - c.d_rank - incoming;
                let got = Self::page_dim(next, c.p, c.q);
                report.record(i, got == expected, || {
                    format!("E_{}^{{{},{}}} has dim {got}, homology of E_{r} gives {expected}", r + 1, c.p, c.q)
                });
                i += 1;
            }
        }
        for r in 0..=r_max {
            for (p, n) in self.window_cells() {
                if n + 1 > self.window() {
                    continue;
                }
                let c = self.cell(r, p, n)?;
                let t = self.cell(r, p + r, n + 1)?;
                let twice = self.differential(&t)?.mul(&self.differential(&c)?);
                report.record(i, twice.is_zero(), || format!("d_{r} d_{r} != 0 at ({p},{})", c.q()));
                i += 1;
            }
        }
        Ok(report)
    }

    /// `E_r = E_{r+1} = E_inf` dimensionwise from the predicted `r` on.
    pub fn check_stationarity(&self) -> Result<CheckReport> {
        let mut report = CheckReport::new();
        for (i, (p, n)) in self.window_cells().into_iter().enumerate() {
            let r0 = self.stable_r(p, n);
            let dims = [self.cell(r0, p, n)?.dim(), self.cell(r0 + 1, p, n)?.dim(), self.e_infinity_dim(p, n)?];
            report.record(i, dims[0] == dims[1] && dims[1] == dims[2], || {
                format!("cell ({p},{}): E_{r0}, E_{}, E_inf dims {dims:?}", n as i64 - p as i64, r0 + 1)
            });
        }
        Ok(report)
    }

    /// `sum_p dim E_inf^{p,n-p}` against `dim H^n` from ranks of `d`.
    pub fn e_infinity_check(&self, n: usize) -> Result<Convergence> {
        self.check_window(n, self.window())?;
        let sum = (0..=self.fc.u(n)).map(|p| self.e_infinity_dim(p, n)).sum::<Result<usize>>()?;
        let h = self.fc.complex().cohomology_dim(n);
        Ok(Convergence { n, e_inf_sum: sum, h_dim: h, ok: sum == h })
    }

    /// When `E_2^{p,1} = 0` for every `p` in the window: `E_3^{n,0} = E_2^{n,0}`
    /// and `E_2^{n-2,3} -> E_2^{n,2} -> E_3^{n,2} -> 0` is exact, read as
    /// `dim E_3^{n,2} = dim E_2^{n,2} - rank d_2^{n-2,3}`. Otherwise skipped.
    pub fn empty_row_check(&self) -> Result<CheckReport> {
        let (e2, e3) = (self.page(2)?, self.page(3)?);
        let mut report = CheckReport::new();
        if let Some(c) = e2.cells.iter().find(|c| c.q == 1 && c.dim > 0) {
            report.skipped = Some(format!("hypothesis not met: E_2^{{{},1}} has dim {}", c.p, c.dim));
            return Ok(report);
        }
        let mut i = 0;
        for n in 0..=self.window() {
            let (a, b) = (Self::page_dim(&e3, n, 0), Self::page_dim(&e2, n, 0));
            report.record(i, a == b, || format!("E_3^{{{n},0}} has dim {a}, E_2^{{{n},0}} has dim {b}"));
            i += 1;
            if n + 2 <= self.window() {
                let incoming = Self::rank_at(&e2, n as i64 - 2, 3);
                let (a, b) = (Self::page_dim(&e3, n, 2), Self::page_dim(&e2, n, 2));
                report.record(i, a + incoming == b, || {
                    format!("E_3^{{{n},2}} has dim {a}, cokernel of d_2^{{{},3}} has dim {}", n as i64 - 2, b - incoming.min(b))
                });
                i += 1;
            }
        }
        Ok(report)
    }

    /// Pages `0..=stable` with the convergence table.
    pub fn report(&self) -> Result<PageReport> {
        let stable = self.window_cells().iter().map(|&(p, n)| self.stable_r(p, n)).max().unwrap_or(1);
        let pages = (0..=stable).map(|r| self.page(r)).collect::<Result<Vec<_>>>()?;
        let e_infinity = self
            .window_cells()
            .into_iter()
            .map(|(p, n)| Ok(CellSummary { p, q: n as i64 - p as i64, dim: self.e_infinity_dim(p, n)?, d_rank: 0 }))
            .collect::<Result<Vec<_>>>()?;
        let convergence = (0..=self.window()).map(|n| self.e_infinity_check(n)).collect::<Result<Vec<_>>>()?;
        Ok(PageReport {
            field: F::name(),
            dims: self.fc.complex().dims().to_vec(),
            window: self.window(),
            regularity: (0..=self.fc.top()).map(|n| self.fc.u(n)).collect(),
            stable_r: stable,
            converged: convergence.iter().all(|c| c.ok),
            pages,
            e_infinity,
            convergence,
        })
    }
}

/// Places the rows of `m` at `offset..` in vectors of length `dim`.
fn embed<F: Field>(dim: usize, offset: usize, m: &Mat<F>) -> Mat<F> {
    Mat::zeros(offset, m.cols()).vcat(m).vcat(&Mat::zeros(dim - offset - m.rows(), m.cols()))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CellSummary {
    pub p: usize,
    pub q: i64,
    pub dim: usize,
    pub d_rank: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub cells: Vec<CellSummary>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Convergence {
    pub n: usize,
    pub e_inf_sum: usize,
    pub h_dim: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PageReport {
    pub field: String,
    pub dims: Vec<usize>,
    pub window: usize,
    pub regularity: Vec<usize>,
    pub stable_r: usize,
    pub converged: bool,
    pub pages: Vec<Page>,
    pub e_infinity: Vec<CellSummary>,
    pub convergence: Vec<Convergence>,
}

impl PageReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering: one grid per page, `q` decreasing downwards and
    /// `p` increasing rightwards, `.` where no cell is reported.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let grid = |out: &mut String, title: String, cells: &[CellSummary]| {
            out.push_str(&title);
            out.push('\n');
            let (Some(pmax), Some(qmin), Some(qmax)) = (
                cells.iter().map(|c| c.p).max(),
                cells.iter().map(|c| c.q).min(),
                cells.iter().map(|c| c.q).max(),
            ) else {
                return;
            };
            for q in (qmin..=qmax).rev() {
                out.push_str(&format!("{q:>4} |"));
                for p in 0..=pmax {
                    match cells.iter().find(|c| c.p == p && c.q == q) {
                        Some(c) => out.push_str(&format!("{:>4}", c.dim)),
                        None => out.push_str("   ."),
                    }
                }
                out.push('\n');
            }
            out.push_str("     +");
            out.push_str(&"----".repeat(pmax + 1));
            out.push_str("\n      ");
            for p in 0..=pmax {
                out.push_str(&format!("{p:>4}"));
            }
            out.push('\n');
        };
        for page in &self.pages {
            grid(&mut out, format!("E_{}", page.r), &page.cells);
        }
        grid(&mut out, "E_inf".to_string(), &self.e_infinity);
        for c in &self.convergence {
            let verdict = if c.ok { "ok" } else { "MISMATCH" };
            out.push_str(&format!("H^{}: sum E_inf = {}, dim H = {} {verdict}\n", c.n, c.e_inf_sum, c.h_dim));
        }
        out
    }
}
