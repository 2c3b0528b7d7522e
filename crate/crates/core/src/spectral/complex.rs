use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::field::Field;
use super::matrix::Mat;
use crate::error::{Error, Result};

/// Cochain complex `K^0 -> K^1 -> ... -> K^top` with `d[n]: K^n -> K^{n+1}`
/// stored as a `dim K^{n+1} x dim K^n` matrix.
#[derive(Clone, Debug)]
pub struct FiniteComplex<F: Field> {
    dims: Vec<usize>,
    d: Vec<Mat<F>>,
}

impl<F: Field> FiniteComplex<F> {
    /// Checks shapes and `d[n+1] d[n] = 0`.
    pub fn new(dims: Vec<usize>, d: Vec<Mat<F>>) -> Result<Self> {
        if dims.is_empty() || d.len() + 1 != dims.len() {
            return Err(Error::Invalid(format!("{} degrees need {} differentials", dims.len(), dims.len().saturating_sub(1))));
        }
        for (n, m) in d.iter().enumerate() {
            if m.rows() != dims[n + 1] || m.cols() != dims[n] {
                return Err(Error::Invalid(format!(
                    "d_{n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[n + 1],
                    dims[n]
                )));
            }
        }
        for n in 0..d.len().saturating_sub(1) {
            if !d[n + 1].mul(&d[n]).is_zero() {
                return Err(Error::NotACocycle(format!("d_{} d_{n} != 0", n + 1)));
            }
        }
        Ok(FiniteComplex { dims, d })
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_n`; a zero map into or out of a missing degree.
    pub fn d(&self, n: usize) -> &Mat<F> {
        &self.d[n]
    }

    /// Incoming differential `d_{n-1}`, zero for `n = 0`.
    pub fn d_into(&self, n: usize) -> Mat<F> {
        if n == 0 {
            Mat::zeros(self.dim(0), 0)
        } else {
            self.d[n - 1].clone()
        }
    }

    /// `dim H^n = dim ker d_n - rank d_{n-1}`, for `n < top`.
    pub fn cohomology_dim(&self, n: usize) -> usize {
        let ker = self.dim(n) - self.d[n].rank();
        let im = if n == 0 { 0 } else { self.d[n - 1].rank() };
        ker - im
    }
}

/// A complex with a decreasing filtration `K^n = F^0 K^n ⊇ F^1 K^n ⊇ ...`,
/// stored in an adapted basis: `F^p K^n` is spanned by the basis vectors of
/// index at least `offset(n, p)`.
#[derive(Clone, Debug)]
pub struct FilteredComplex<F: Field> {
    complex: FiniteComplex<F>,
    /// `offsets[n][p]` for `p = 0..=u(n)+1`; the last entry is `dim K^n`.
    offsets: Vec<Vec<usize>>,
}

impl<F: Field> FilteredComplex<F> {
    /// Takes the levels `F^p K^n` as spanning matrices, `levels[n][p]`, and
    /// verifies `F^0 = K`, `F^{p+1} ⊆ F^p` and `d F^p ⊆ F^p`. Levels past the
    /// given ones are zero.
    pub fn new(complex: FiniteComplex<F>, levels: Vec<Vec<Mat<F>>>) -> Result<Self> {
        if levels.len() != complex.dims.len() {
            return Err(Error::Invalid(format!("filtration has {} degrees, complex has {}", levels.len(), complex.dims.len())));
        }
        let mut bases = Vec::with_capacity(levels.len());
        let mut offsets = Vec::with_capacity(levels.len());
        for (n, ls) in levels.into_iter().enumerate() {
            let dim = complex.dim(n);
            let ls: Vec<Mat<F>> = ls.into_iter().map(|m| m.col_basis()).collect();
            for (p, m) in ls.iter().enumerate() {
                if m.rows() != dim {
                    return Err(Error::Invalid(format!("F^{p} K^{n} has vectors of length {}, expected {dim}", m.rows())));
                }
                if p == 0 && m.cols() != dim {
                    return Err(Error::Invalid(format!("F^0 K^{n} is not all of K^{n}")));
                }
                if p > 0 && ls[p - 1].hcat(m).rank() != ls[p - 1].cols() {
                    return Err(Error::Invalid(format!("F^{p} K^{n} is not contained in F^{} K^{n}", p - 1)));
                }
            }
            // Extend a basis of the deepest level outward, newest vectors first.
            let mut basis = Mat::zeros(dim, 0);
            let mut sizes = Vec::new();
            for m in ls.iter().rev() {
                let grown = basis.hcat(m).col_basis();
                let fresh: Vec<usize> = (basis.cols()..grown.cols()).collect();
                basis = grown.select_cols(&fresh).hcat(&basis);
                sizes.push(basis.cols());
            }
            sizes.reverse();
            let mut off: Vec<usize> = sizes.iter().map(|s| dim - s).collect();
            if off.is_empty() {
                off.push(0);
                basis = Mat::identity(dim);
            }
            while off.len() > 1 && off[off.len() - 1] == dim && off[off.len() - 2] == dim {
                off.pop();
            }
            if off.last() != Some(&dim) {
                off.push(dim);
            }
            bases.push(basis);
            offsets.push(off);
        }
        let d = (0..complex.top())
            .map(|n| {
                let image = complex.d(n).mul(&bases[n]);
                bases[n + 1].solve(&image).expect("adapted basis spans the whole space")
            })
            .collect();
        Self::adapted(FiniteComplex { dims: complex.dims, d }, offsets)
    }

    /// Verifies compatibility of a complex already in adapted coordinates.
    fn adapted(complex: FiniteComplex<F>, offsets: Vec<Vec<usize>>) -> Result<Self> {
        let f = FilteredComplex { complex, offsets };
        for n in 0..f.complex.top() {
            let d = f.complex.d(n);
            for p in 0..=f.u(n) {
                let (src, dst) = (f.offset(n, p as i64), f.offset(n + 1, p as i64));
                for i in 0..dst {
                    for j in src..d.cols() {
                        if !d.get(i, j).is_zero() {
                            return Err(Error::Invalid(format!("d F^{p} K^{n} is not inside F^{p} K^{}", n + 1)));
                        }
                    }
                }
            }
        }
        Ok(f)
    }

    /// `F^0 = K`, `F^1 = 0`.
    pub fn trivial(complex: FiniteComplex<F>) -> Result<Self> {
        let offsets = complex.dims.iter().map(|&d| vec![0, d]).collect();
        Self::adapted(complex, offsets)
    }

    /// Coordinate filtration: basis vector `i` of `K^n` has level `level[n][i]`,
    /// and `F^p` is spanned by the vectors of level at least `p`. The basis is
    /// reordered by level, which is a permutation and keeps it cheap.
    pub fn from_levels(complex: FiniteComplex<F>, level: &[Vec<usize>]) -> Result<Self> {
        if level.len() != complex.dims.len() || level.iter().zip(&complex.dims).any(|(l, &d)| l.len() != d) {
            return Err(Error::Invalid("one level per basis vector is required".into()));
        }
        let order: Vec<Vec<usize>> = level
            .iter()
            .map(|ls| {
                let mut idx: Vec<usize> = (0..ls.len()).collect();
                idx.sort_by_key(|&i| ls[i]);
                idx
            })
            .collect();
        let d = (0..complex.top())
            .map(|n| complex.d(n).select_rows(order[n + 1].iter().copied()).select_cols(&order[n]))
            .collect();
        let offsets = level
            .iter()
            .map(|ls| {
                let top = ls.iter().copied().max().unwrap_or(0);
                let mut off: Vec<usize> = (0..=top + 1).map(|p| ls.iter().filter(|&&l| l < p).count()).collect();
                off[0] = 0;
                off
            })
            .collect();
        Self::adapted(FiniteComplex { dims: complex.dims, d }, offsets)
    }

    pub fn complex(&self) -> &FiniteComplex<F> {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.complex.top()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.complex.dim(n)
    }

    /// First basis index of `F^p K^n`; `F^p = K` for `p <= 0` and `0` past `u(n)`.
    pub fn offset(&self, n: usize, p: i64) -> usize {
        if p <= 0 {
            return 0;
        }
        let off = &self.offsets[n];
        off.get(p as usize).copied().unwrap_or(self.complex.dim(n))
    }

    /// `dim F^p K^n`
    pub fn level_dim(&self, n: usize, p: i64) -> usize {
        self.dim(n) - self.offset(n, p)
    }

    /// Regularity bound: `F^p K^n = 0` for `p > u(n)`.
    pub fn u(&self, n: usize) -> usize {
        let dim = self.dim(n);
        (0..self.offsets[n].len()).rev().find(|&p| self.offsets[n][p] < dim).unwrap_or(0)
    }

    /// Basis of `F^p K^n` as coordinate vectors.
    pub fn level(&self, n: usize, p: i64) -> Mat<F> {
        Mat::coordinate_span(self.dim(n), self.offset(n, p)..self.dim(n))
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    field: String,
    dims: Vec<usize>,
    /// `differentials[n]` is `d_n` as rows.
    differentials: Vec<Vec<Vec<Value>>>,
    /// `filtration[n][p]` lists the spanning vectors of `F^p K^n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filtration: Option<Vec<Vec<Vec<Vec<Value>>>>>,
}

fn entry<F: Field>(v: &Value) -> Result<F> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(F::from_i64)
            .ok_or_else(|| Error::Parse(format!("entry {n} is not an integer; write rationals as strings"))),
        Value::String(s) => F::parse(s),
        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
    }
}

fn matrix<F: Field>(rows: usize, cols: usize, v: &[Vec<Value>]) -> Result<Mat<F>> {
    let entries = v.iter().map(|r| r.iter().map(entry).collect::<Result<Vec<F>>>()).collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows, cols, entries)
}

/// Field named in a complex file, checked before dispatching on the type.
pub fn complex_file_field(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("complex file: {e}")))?;
    v.get("field")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Parse("complex file: missing \"field\"".into()))
}

/// Reads `{field, dims, differentials, filtration?}`. Missing filtration
/// means the trivial one.
pub fn parse_complex<F: Field>(text: &str) -> Result<FilteredComplex<F>> {
    let f: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("complex file: {e}")))?;
    if f.field != F::name() {
        return Err(Error::Invalid(format!("complex is over {}, expected {}", f.field, F::name())));
    }
    if f.differentials.len() + 1 != f.dims.len() {
        return Err(Error::Invalid("need one differential per consecutive pair of degrees".into()));
    }
    let d = f
        .differentials
        .iter()
        .enumerate()
        .map(|(n, rows)| matrix(f.dims[n + 1], f.dims[n], rows))
        .collect::<Result<Vec<_>>>()?;
    let complex = FiniteComplex::new(f.dims.clone(), d)?;
    match &f.filtration {
        None => FilteredComplex::trivial(complex),
        Some(levels) => {
            if levels.len() != f.dims.len() {
                return Err(Error::Invalid("filtration needs one list of levels per degree".into()));
            }
            let levels = levels
                .iter()
                .enumerate()
                .map(|(n, ls)| {
                    ls.iter()
                        .map(|vectors| Ok(matrix::<F>(vectors.len(), f.dims[n], vectors)?.transpose()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            FilteredComplex::new(complex, levels)
        }
    }
}

/// Writes the complex in its adapted basis, so `parse_complex` of the result
/// gives back the same filtered complex.
pub fn dump_complex<F: Field>(fc: &FilteredComplex<F>) -> String {
    let rows = |m: &Mat<F>| -> Vec<Vec<Value>> {
        m.to_rows().iter().map(|r| r.iter().map(|x| Value::String(x.format())).collect()).collect()
    };
    let c = &fc.complex;
    let file = ComplexFile {
        field: F::name(),
        dims: c.dims.clone(),
        differentials: c.d.iter().map(rows).collect(),
        filtration: Some(
            (0..c.dims.len())
                .map(|n| (0..=fc.u(n)).map(|p| rows(&fc.level(n, p as i64).transpose())).collect())
                .collect(),
        ),
    };
    serde_json::to_string(&file).expect("serializable")
}
