use super::complex::{FilteredComplex, FiniteComplex};
use super::field::Field;
use super::matrix::{check_budget, Mat};
use crate::error::{Error, Result};
use crate::extension::ExtensionData;
use crate::group::{FiniteGroup, Group};

/// `G`-orbits on `Gamma^{q+1}` under left diagonal multiplication: the basis
/// of `U^q`, the `G`-invariant functions `Gamma^{q+1} -> F`.
struct Orbits {
    /// Orbit of each tuple, tuples encoded in base `|Gamma|` with the first
    /// coordinate most significant.
    of: Vec<usize>,
    reps: Vec<Vec<usize>>,
}

fn encode(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

fn decode(mut code: usize, len: usize, base: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    t
}

fn left_mul(gamma: &FiniteGroup, x: usize, t: &[usize]) -> Vec<usize> {
    t.iter().map(|y| gamma.mul(&x, y)).collect()
}

fn orbits(gamma: &FiniteGroup, normal: &[usize], len: usize) -> Orbits {
    let base = gamma.order();
    let total = base.pow(len as u32);
    let mut of = vec![usize::MAX; total];
    let mut reps = Vec::new();
    for code in 0..total {
        if of[code] != usize::MAX {
            continue;
        }
        let t = decode(code, len, base);
        for &g in normal {
            of[encode(&left_mul(gamma, g, &t), base)] = reps.len();
        }
        reps.push(t);
    }
    Orbits { of, reps }
}

/// The double complex `K^{p,q} = C^p(Pi, U^q)` of a finite extension with
/// trivial coefficients in `F`, its total complex with
/// `d = d_Pi + (-1)^p d_U`, and the vertical and horizontal filtrations.
pub struct HsComplex<F: Field> {
    pub vertical: FilteredComplex<F>,
    pub horizontal: FilteredComplex<F>,
    /// `(p, q, dim K^{p,q})` for every built block.
    pub blocks: Vec<(usize, usize, usize)>,
    /// Separate `d_Pi` and unsigned `d_U` on the total complex, kept to
    /// check that they commute.
    pub d_pi: Vec<Mat<F>>,
    pub d_u: Vec<Mat<F>>,
}

impl<F: Field> HsComplex<F> {
    /// `d_Pi d_U = d_U d_Pi` wherever both composites are built.
    pub fn check_commutation(&self) -> Result<()> {
        for n in 0..self.d_pi.len().saturating_sub(1) {
            let a = self.d_pi[n + 1].mul(&self.d_u[n]);
            let b = self.d_u[n + 1].mul(&self.d_pi[n]);
            if a != b {
                return Err(Error::Invalid(format!("d_Pi d_U != d_U d_Pi out of total degree {n}")));
            }
        }
        Ok(())
    }
}

/// Builds the total complex through total degree `window + 2`, so that every
/// page cell with `p + q <= window` is computable.
pub fn hs_double_complex<F: Field>(
    ext: &ExtensionData<FiniteGroup, FiniteGroup, FiniteGroup>,
    window: usize,
    budget_mb: usize,
) -> Result<HsComplex<F>> {
    let (gamma, pi) = (ext.gamma(), ext.pi());
    let normal: Vec<usize> = ext.g().elements().map(|g| ext.include(&g)).collect();
    let (ng, np) = (gamma.order(), pi.order());
    if ng % normal.len() != 0 || ng / normal.len() != np {
        return Err(Error::Invalid("|Gamma| != |G| |Pi|".into()));
    }
    let top = window + 2;
    let unit = gamma.order() / normal.len();
    let dim_u = |q: usize| ng.pow(q as u32) * unit;
    let block_dim = |p: usize, q: usize| np.pow(p as u32) * dim_u(q);
    let tot = |n: usize| (0..=n).map(|p| block_dim(p, n - p)).sum::<usize>();
    let entries: u128 = (0..top).map(|n| tot(n) as u128 * tot(n + 1) as u128).sum::<u128>() * 2;
    check_budget::<F>(entries + (ng as u128).pow(top as u32 + 1), budget_mb)?;

    let orbs: Vec<Orbits> = (0..=top).map(|q| orbits(gamma, &normal, q + 1)).collect();
    // d_U: U^q -> U^{q+1}, (du)(x_0..x_{q+1}) = sum_i (-1)^i u(x_0..^x_i..x_{q+1})
    let du: Vec<Vec<Vec<(usize, F)>>> = (0..top)
        .map(|q| {
            orbs[q + 1]
                .reps
                .iter()
                .map(|t| {
                    (0..t.len())
                        .map(|i| {
                            let mut face = t.clone();
                            face.remove(i);
                            (orbs[q].of[encode(&face, ng)], F::from_i64(if i % 2 == 0 { 1 } else { -1 }))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // Pi acts on U^q through the section: a . e_O = e_{s(a) O}.
    let act: Vec<Vec<Vec<usize>>> = (0..=top)
        .map(|q| {
            pi.elements()
                .map(|a| {
                    let s = ext.section(&a);
                    orbs[q].reps.iter().map(|t| orbs[q].of[encode(&left_mul(gamma, s, t), ng)]).collect()
                })
                .collect()
        })
        .collect();

    let offset = |n: usize, p: usize| (0..p).map(|i| block_dim(i, n - i)).sum::<usize>();
    let index = |n: usize, p: usize, alphas: &[usize], o: usize| offset(n, p) + encode(alphas, np) * dim_u(n - p) + o;
    let dims: Vec<usize> = (0..=top).map(tot).collect();
    let mut d_pi = Vec::with_capacity(top);
    let mut d_u = Vec::with_capacity(top);
    for n in 0..top {
        let mut mp = Mat::<F>::zeros(dims[n + 1], dims[n]);
        let mut mu = Mat::<F>::zeros(dims[n + 1], dims[n]);
        for p in 0..=n {
            let q = n - p;
            let nu = dim_u(q);
            // (d f)(a_1..a_{p+1}) = a_1 f(a_2..) + sum_i (-1)^i f(..a_i a_{i+1}..) + (-1)^{p+1} f(a_1..a_p)
            for code in 0..np.pow(p as u32 + 1) {
                let a = decode(code, p + 1, np);
                for o in 0..nu {
                    let row_o = |o2: usize| index(n + 1, p + 1, &a, o2);
                    mp.add_at(row_o(act[q][a[0]][o]), index(n, p, &a[1..], o), &F::one());
                    for i in 1..=p {
                        let mut merged = a[..i - 1].to_vec();
                        merged.push(pi.mul(&a[i - 1], &a[i]));
                        merged.extend_from_slice(&a[i + 1..]);
                        let sign = F::from_i64(if i % 2 == 0 { 1 } else { -1 });
                        mp.add_at(row_o(o), index(n, p, &merged, o), &sign);
                    }
                    let sign = F::from_i64(if (p + 1) % 2 == 0 { 1 } else { -1 });
                    mp.add_at(row_o(o), index(n, p, &a[..p], o), &sign);
                }
            }
            for code in 0..np.pow(p as u32) {
                let a = decode(code, p, np);
                for (o2, faces) in du[q].iter().enumerate() {
                    for (o, s) in faces {
                        mu.add_at(index(n + 1, p, &a, o2), index(n, p, &a, *o), s);
                    }
                }
            }
        }
        d_pi.push(mp);
        d_u.push(mu);
    }
    let d: Vec<Mat<F>> = (0..top)
        .map(|n| {
            let mut m = d_pi[n].clone();
            for p in 0..=n {
                let sign = if p % 2 == 0 { F::one() } else { F::one().neg() };
                let (lo, hi) = (offset(n, p), offset(n, p) + block_dim(p, n - p));
                for i in 0..dims[n + 1] {
                    for j in lo..hi {
                        let x = d_u[n].get(i, j);
                        if !x.is_zero() {
                            m.add_at(i, j, &sign.mul(x));
                        }
                    }
                }
            }
            m
        })
        .collect();
    let complex = FiniteComplex::new(dims.clone(), d)?;
    let level = |vertical: bool| -> Vec<Vec<usize>> {
        (0..=top)
            .map(|n| {
                (0..=n)
                    .flat_map(|p| std::iter::repeat_n(if vertical { p } else { n - p }, block_dim(p, n - p)))
                    .collect()
            })
            .collect()
    };
    let horizontal = FilteredComplex::from_levels(complex.clone(), &level(false))?;
    let vertical = FilteredComplex::from_levels(complex, &level(true))?;
    let blocks = (0..=top).flat_map(|n| (0..=n).map(move |p| (p, n - p, block_dim(p, n - p)))).collect();
    Ok(HsComplex { vertical, horizontal, blocks, d_pi, d_u })
}

/// `dim H^n(group; F)` for `n <= max_n`, trivial coefficients, from the
/// inhomogeneous bar complex.
pub fn bar_cohomology_dims<F: Field>(group: &FiniteGroup, max_n: usize, budget_mb: usize) -> Result<Vec<usize>> {
    let k = group.order();
    let entries: u128 = (0..=max_n).map(|n| (k as u128).pow(2 * n as u32 + 1)).sum();
    check_budget::<F>(entries, budget_mb)?;
    // (df)(g_1..g_{n+1}) = f(g_2..) + sum_i (-1)^i f(..g_i g_{i+1}..) + (-1)^{n+1} f(g_1..g_n)
    let d = |n: usize| -> Mat<F> {
        let mut m = Mat::zeros(k.pow(n as u32 + 1), k.pow(n as u32));
        for code in 0..k.pow(n as u32 + 1) {
            let g = decode(code, n + 1, k);
            m.add_at(code, encode(&g[1..], k), &F::one());
            for i in 1..=n {
                let mut merged = g[..i - 1].to_vec();
                merged.push(group.mul(&g[i - 1], &g[i]));
                merged.extend_from_slice(&g[i + 1..]);
                m.add_at(code, encode(&merged, k), &F::from_i64(if i % 2 == 0 { 1 } else { -1 }));
            }
            m.add_at(code, encode(&g[..n], k), &F::from_i64(if (n + 1) % 2 == 0 { 1 } else { -1 }));
        }
        m
    };
    let ranks: Vec<usize> = (0..=max_n).map(|n| d(n).rank()).collect();
    Ok((0..=max_n)
        .map(|n| k.pow(n as u32) - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] })
        .collect())
}
