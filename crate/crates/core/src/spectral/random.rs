use rand::seq::SliceRandom;
use rand::Rng as _;

use super::complex::{FilteredComplex, FiniteComplex};
use super::field::Field;
use super::matrix::Mat;
use crate::error::Result;
use crate::sampling::{self, Rng};

#[derive(Clone, Debug)]
pub struct RandomComplexOptions {
    /// Top degree; pages are reported up to `top - 2`.
    pub top: usize,
    pub max_dim: usize,
    pub max_level: usize,
    /// When set, no basis vector sits in this `q = n - p` row, so every page
    /// vanishes there.
    pub empty_row: Option<i64>,
    /// Keep every level at most the degree, so that `E^{p,q} = 0` for `q < 0`.
    pub first_quadrant: bool,
}

impl Default for RandomComplexOptions {
    fn default() -> Self {
        RandomComplexOptions { top: 5, max_dim: 6, max_level: 3, empty_row: None, first_quadrant: false }
    }
}

/// A seeded random filtered complex. It is a direct sum of pieces `x -> y`
/// with `level(y) >= level(x)` plus loose cycles, which up to isomorphism is
/// every finite filtered complex over a field, presented in a random basis
/// so that the filtration is not coordinate-aligned.
pub fn random_filtered_complex<F: Field>(seed: u64, opts: &RandomComplexOptions) -> Result<FilteredComplex<F>> {
    let mut rng = sampling::rng(seed);
    let top = opts.top;
    let allowed = |n: usize| -> Vec<usize> {
        (0..=opts.max_level)
            .filter(|&p| opts.empty_row != Some(n as i64 - p as i64) && (!opts.first_quadrant || p <= n))
            .collect()
    };
    // A degree with no allowed level stays empty.
    let dims: Vec<usize> =
        (0..=top).map(|n| if allowed(n).is_empty() { 0 } else { rng.gen_range(1..=opts.max_dim) }).collect();
    let mut level: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for (n, &dim) in dims.iter().enumerate() {
        let choices = allowed(n);
        level.push((0..dim).map(|_| *choices.choose(&mut rng).expect("a level is allowed")).collect());
    }
    // Pair sources in degree n with unused targets in degree n+1 of level >= source level.
    let mut used_as_target = vec![Vec::new(); top + 1];
    let mut d: Vec<Mat<F>> = Vec::with_capacity(top);
    for n in 0..top {
        let mut m = Mat::zeros(dims[n + 1], dims[n]);
        let mut taken = vec![false; dims[n + 1]];
        for j in 0..dims[n] {
            if used_as_target[n].contains(&j) || !rng.gen_bool(0.6) {
                continue;
            }
            let candidates: Vec<usize> = (0..dims[n + 1]).filter(|&i| !taken[i] && level[n + 1][i] >= level[n][j]).collect();
            if let Some(&i) = candidates.choose(&mut rng) {
                taken[i] = true;
                m.set(i, j, nonzero::<F>(&mut rng));
            }
        }
        used_as_target[n + 1] = (0..dims[n + 1]).filter(|&i| taken[i]).collect();
        d.push(m);
    }
    let complex = FiniteComplex::new(dims.clone(), d)?;
    let coordinate = FilteredComplex::from_levels(complex, &level)?;
    // Move to a random basis: d' = M_{n+1} d M_n^{-1}, F'^p = M_n F^p.
    let change: Vec<Mat<F>> = dims.iter().map(|&k| invertible(&mut rng, k)).collect();
    let c = coordinate.complex();
    let d = (0..top)
        .map(|n| {
            let inv = change[n].solve(&Mat::identity(dims[n])).expect("invertible");
            change[n + 1].mul(c.d(n)).mul(&inv)
        })
        .collect();
    let moved = FiniteComplex::new(dims, d)?;
    let levels = (0..=top)
        .map(|n| (0..=coordinate.u(n) + 1).map(|p| change[n].mul(&coordinate.level(n, p as i64))).collect())
        .collect();
    FilteredComplex::new(moved, levels)
}

fn nonzero<F: Field>(rng: &mut Rng) -> F {
    loop {
        let x = F::from_i64(rng.gen_range(-3..=3));
        if !x.is_zero() {
            return x;
        }
    }
}

fn invertible<F: Field>(rng: &mut Rng, k: usize) -> Mat<F> {
    loop {
        let mut m = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, F::from_i64(rng.gen_range(-2..=2)));
            }
        }
        if m.rank() == k {
            return m;
        }
    }
}
