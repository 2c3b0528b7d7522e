use std::sync::Arc;

use super::{run_samples, Check, Outcome, RunConfig};
use crate::check::CheckReport;
use crate::error::Result;
use crate::extension::fixtures::z4_extension;
use crate::group::FiniteGroup;
use crate::spectral::{
    bar_cohomology_dims, hs_double_complex, random_filtered_complex, FilteredComplex, HsComplex, RandomComplexOptions,
    SpectralSequence, F2,
};

/// Reported total degrees for the HS fixture.
const HS_WINDOW: usize = 3;
const PAGE_R_MAX: usize = 4;
const RANDOM_COMPLEXES: usize = 25;

fn hs(cfg: &RunConfig) -> Result<HsComplex<F2>> {
    hs_double_complex::<F2>(&z4_extension()?.ext, HS_WINDOW, cfg.budget_mb)
}

fn vertical(cfg: &RunConfig) -> Result<SpectralSequence<F2>> {
    SpectralSequence::new(Arc::new(hs(cfg)?.vertical), cfg.budget_mb)
}

fn random_seeds(cfg: &RunConfig, id: &str) -> Vec<u64> {
    use rand::Rng as _;
    let mut rng = cfg.rng_for(id);
    (0..cfg.n(RANDOM_COMPLEXES)).map(|_| rng.gen()).collect()
}

/// Every cell of every page in the window, plus convergence, on one complex.
fn full_check(ss: &SpectralSequence<F2>) -> Result<Outcome> {
    let homology = ss.check_page_homology(PAGE_R_MAX)?;
    let stationary = ss.check_stationarity()?;
    let mut out = Outcome::check(homology.passed(), || first(&homology))
        .and(Outcome::check(stationary.passed(), || first(&stationary)));
    for n in 0..=ss.window() {
        let c = ss.e_infinity_check(n)?;
        out = out.and(Outcome::check(c.ok, || format!("degree {n}: sum E_inf = {}, dim H = {}", c.e_inf_sum, c.h_dim)));
    }
    Ok(out)
}

fn first(r: &CheckReport) -> String {
    r.failures.first().map(|w| w.detail.clone()).unwrap_or_default()
}

pub fn spectral_checks() -> Vec<Check> {
    vec![
        Check::new("spectral.hs-construction", "dim K^{p,q} = |Pi|^p |Gamma|^{q+1} / |G|, d_Pi d_U = d_U d_Pi, d^2 = 0", |cfg| {
            let h = hs(cfg)?;
            let mut r = CheckReport::new();
            for (i, &(p, q, dim)) in h.blocks.iter().enumerate() {
                let expected = 2usize.pow(p as u32) * 2 * 4usize.pow(q as u32);
                r.record(i, dim == expected, || format!("dim K^{{{p},{q}}} = {dim}, expected {expected}"));
            }
            let c = h.check_commutation();
            r.record(h.blocks.len(), c.is_ok(), || c.unwrap_err().to_string());
            Ok(r)
        }),
        Check::new("spectral.hs-e2-oracle", "dim E_2^{p,q} = dim H^p(Z/2; H^q(Z/2; F2)) = 1 for p + q <= 3", |cfg| {
            let ss = vertical(cfg)?;
            let e2 = ss.page(2)?;
            // H^q(G; F2) is one-dimensional, so Pi acts trivially on it.
            let hp = bar_cohomology_dims::<F2>(&FiniteGroup::cyclic(2), HS_WINDOW, cfg.budget_mb)?;
            let mut r = CheckReport::new();
            for (i, (p, n)) in ss.window_cells().into_iter().enumerate() {
                let q = n - p;
                let (got, want) = (SpectralSequence::<F2>::page_dim(&e2, p, q as i64), hp[p] * hp[q]);
                r.record(i, got == want, || format!("E_2^{{{p},{q}}} has dim {got}, bar complex gives {want}"));
            }
            Ok(r)
        }),
        Check::new("spectral.page-homology", "dim E_{r+1}^{p,q} = dim ker d_r^{p,q} - rank d_r^{p-r,q+r-1}, d_r d_r = 0, r <= 4", |cfg| {
            vertical(cfg)?.check_page_homology(PAGE_R_MAX)
        }),
        Check::new("spectral.stationarity", "E_r = E_{r+1} = E_inf for r >= max(u(p+q+1) - p + 1, p + 1)", |cfg| {
            vertical(cfg)?.check_stationarity()
        }),
        Check::new("spectral.e-infinity", "sum_p dim E_inf^{p,n-p} = dim H^n(Tot) = dim H^n(Z/4; F2), n <= 3", |cfg| {
            let ss = vertical(cfg)?;
            let oracle = bar_cohomology_dims::<F2>(&FiniteGroup::cyclic(4), HS_WINDOW, cfg.budget_mb)?;
            let mut r = CheckReport::new();
            for n in 0..=HS_WINDOW {
                let c = ss.e_infinity_check(n)?;
                r.record(n, c.ok && c.h_dim == oracle[n], || {
                    format!("degree {n}: sum E_inf = {}, dim H(Tot) = {}, bar complex = {}", c.e_inf_sum, c.h_dim, oracle[n])
                });
            }
            Ok(r)
        }),
        Check::new("spectral.horizontal-degeneration", "E_{1,h}^{p,q} = 0 for p >= 1", |cfg| {
            let ss = SpectralSequence::new(Arc::new(hs(cfg)?.horizontal), cfg.budget_mb)?;
            let e1 = ss.page(1)?;
            let mut r = CheckReport::new();
            // Filtration level is q here; the complementary index is p.
            for (i, c) in e1.cells.iter().enumerate() {
                let (q, p) = (c.p, c.q);
                r.record(i, p < 1 || c.dim == 0, || format!("E_1h at p = {p}, q = {q} has dim {}", c.dim));
            }
            Ok(r)
        }),
        Check::new("spectral.empty-row-hs", "E_2^{.,1} = 0 => E_3^{n,0} = E_2^{n,0}, E_3^{n,2} = coker d_2^{n-2,3}", |cfg| {
            vertical(cfg)?.empty_row_check()
        }),
        Check::new("spectral.trivial-filtration", "F^0 = K, F^1 = 0: E_0^{0,q} = K^q, d_0 = d, E_1^{0,q} = H^q", |cfg| {
            let h = hs(cfg)?;
            let c = h.vertical.complex().clone();
            let ss = SpectralSequence::new(Arc::new(FilteredComplex::trivial(c.clone())?), cfg.budget_mb)?;
            let (e0, e1) = (ss.page(0)?, ss.page(1)?);
            let mut r = CheckReport::new();
            for n in 0..=ss.window() {
                let (d0, d1) = (SpectralSequence::<F2>::page_dim(&e0, 0, n as i64), SpectralSequence::<F2>::page_dim(&e1, 0, n as i64));
                let rank = e0.cells.iter().find(|x| x.q == n as i64).map_or(0, |x| x.d_rank);
                let ok = d0 == c.dim(n) && rank == c.d(n).rank() && d1 == c.cohomology_dim(n);
                r.record(n, ok, || format!("degree {n}: E_0 {d0} vs {}, rank d_0 {rank}, E_1 {d1} vs H {}", c.dim(n), c.cohomology_dim(n)));
            }
            Ok(r)
        }),
        Check::new("spectral.random-e-infinity", "25 random filtered complexes: page homology, stationarity, sum E_inf = dim H", |cfg| {
            let seeds = random_seeds(cfg, "spectral.random-e-infinity");
            Ok(run_samples(&seeds, |&seed| {
                let fc = random_filtered_complex::<F2>(seed, &RandomComplexOptions::default())?;
                full_check(&SpectralSequence::new(Arc::new(fc), cfg.budget_mb)?)
            }))
        }),
        Check::new("spectral.empty-row-random", "first-quadrant random complexes with an empty q = 1 row satisfy the E_3 rank identities", |cfg| {
            let seeds = random_seeds(cfg, "spectral.empty-row-random");
            let opts = RandomComplexOptions { empty_row: Some(1), first_quadrant: true, ..RandomComplexOptions::default() };
            Ok(run_samples(&seeds, |&seed| {
                let fc = random_filtered_complex::<F2>(seed, &opts)?;
                let r = SpectralSequence::new(Arc::new(fc), cfg.budget_mb)?.empty_row_check()?;
                Ok(match &r.skipped {
                    Some(why) => Outcome::check(false, || format!("seed {seed}: {why}")),
                    None => Outcome::check(r.passed(), || format!("seed {seed}: {}", first(&r))),
                })
            }))
        }),
    ]
}
