use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;
use qmcoh::extension::fixtures::z4_extension;
use qmcoh::extension::ExtensionData;
use qmcoh::group::FiniteGroup;
use qmcoh::spectral::*;
use qmcoh::{Error, Q};

const BUDGET: usize = 512;

/// A filtered complex given by raw matrices mod `p`, before any library
/// basis change: `d[n]` as rows and `levels[n][k]` as spanning vectors of
/// `F^k K^n`, with `F^0 = K` implicit.
#[derive(Clone, Debug)]
struct Raw {
    p: u8,
    dims: Vec<usize>,
    d: Vec<Vec<Vec<u8>>>,
    levels: Vec<Vec<Vec<Vec<u8>>>>,
}

type Space = HashSet<Vec<u8>>;

/// Subspace oracle by enumeration: every subspace is its full set of vectors.
impl Raw {
    fn span(&self, n: usize, gens: &[Vec<u8>]) -> Space {
        let mut set: Space = [vec![0; self.dims[n]]].into_iter().collect();
        for g in gens {
            let mut next = Space::new();
            for v in &set {
                for c in 0..self.p {
                    next.insert(v.iter().zip(g).map(|(a, b)| (a + c * b) % self.p).collect());
                }
            }
            set = next;
        }
        set
    }

    fn dim(&self, s: &Space) -> usize {
        let mut k = 0;
        let mut size = 1;
        while size < s.len() {
            size *= self.p as usize;
            k += 1;
        }
        assert_eq!(size, s.len());
        k
    }

    fn filt(&self, n: usize, k: i64) -> Space {
        if k <= 0 {
            let id: Vec<Vec<u8>> = (0..self.dims[n]).map(|i| (0..self.dims[n]).map(|j| (i == j) as u8).collect()).collect();
            return self.span(n, &id);
        }
        match self.levels[n].get(k as usize - 1) {
            Some(g) => self.span(n, g),
            None => self.span(n, &[]),
        }
    }

    fn apply(&self, n: usize, x: &[u8]) -> Vec<u8> {
        self.d[n]
            .iter()
            .map(|row| (row.iter().zip(x).map(|(a, b)| *a as u32 * *b as u32).sum::<u32>() % self.p as u32) as u8)
            .collect()
    }

    fn z(&self, r: i64, k: i64, n: usize) -> Space {
        let target = self.filt(n + 1, k + r);
        self.filt(n, k).into_iter().filter(|x| target.contains(&self.apply(n, x))).collect()
    }

    fn b(&self, r: i64, k: i64, n: usize) -> Space {
        if n == 0 {
            return self.span(0, &[]);
        }
        let image: Vec<Vec<u8>> = self.filt(n - 1, k - r).iter().map(|x| self.apply(n - 1, x)).collect();
        let image = self.span(n, &image);
        let here = self.filt(n, k);
        image.intersection(&here).cloned().collect()
    }

    fn e(&self, r: i64, k: i64, n: usize) -> usize {
        let num = self.z(r, k, n);
        let den: Vec<Vec<u8>> = self.z(r - 1, k + 1, n).into_iter().chain(self.b(r - 1, k, n)).collect();
        self.dim(&num) - self.dim(&self.span(n, &den))
    }

    fn h(&self, n: usize) -> usize {
        let kernel: Space = self.filt(n, 0).into_iter().filter(|x| n >= self.d.len() || self.apply(n, x).iter().all(|&c| c == 0)).collect();
        let image = if n == 0 {
            0
        } else {
            let im: Vec<Vec<u8>> = self.filt(n - 1, 0).iter().map(|x| self.apply(n - 1, x)).collect();
            self.dim(&self.span(n, &im))
        };
        self.dim(&kernel) - image
    }

    fn to_library<F: Field>(&self) -> FilteredComplex<F> {
        let entry = |x: u8| F::from_i64(x as i64);
        let d = (0..self.d.len())
            .map(|n| {
                Mat::from_rows(self.dims[n + 1], self.dims[n], self.d[n].iter().map(|r| r.iter().map(|&x| entry(x)).collect()).collect())
                    .unwrap()
            })
            .collect();
        let complex = FiniteComplex::new(self.dims.clone(), d).unwrap();
        let levels = (0..self.dims.len())
            .map(|n| {
                let dim = self.dims[n];
                std::iter::once(Mat::identity(dim))
                    .chain(self.levels[n].iter().map(|g| {
                        let cols = Mat::from_rows(g.len(), dim, g.iter().map(|v| v.iter().map(|&x| entry(x)).collect()).collect()).unwrap();
                        cols.transpose()
                    }))
                    .collect()
            })
            .collect();
        FilteredComplex::new(complex, levels).unwrap()
    }
}

fn modp(x: i64, p: u8) -> u8 {
    x.rem_euclid(p as i64) as u8
}

/// Takes a library complex in its adapted basis and scrambles it with
/// elementary basis changes `K^n -> K^n`, applied to the raw matrices here.
fn scrambled<F: Field>(fc: &FilteredComplex<F>, p: u8, to_int: impl Fn(&F) -> i64, ops: &[(usize, usize, usize, u8)]) -> Raw {
    let c = fc.complex();
    let dims = c.dims().to_vec();
    let mut d: Vec<Vec<Vec<u8>>> = (0..c.top())
        .map(|n| (0..dims[n + 1]).map(|i| (0..dims[n]).map(|j| modp(to_int(c.d(n).get(i, j)), p)).collect()).collect())
        .collect();
    let mut levels: Vec<Vec<Vec<Vec<u8>>>> = (0..dims.len())
        .map(|n| {
            (1..=fc.u(n) as i64)
                .map(|k| {
                    let m = fc.level(n, k);
                    (0..m.cols()).map(|col| (0..m.rows()).map(|row| modp(to_int(m.get(row, col)), p)).collect()).collect()
                })
                .collect()
        })
        .collect();
    // E = I + c e_{ij} on K^n: vectors x -> Ex, d_n -> d_n E^{-1}, d_{n-1} -> E d_{n-1}.
    for &(n, i, j, cval) in ops {
        let n = n % dims.len();
        if dims[n] < 2 || cval % p == 0 {
            continue;
        }
        let (i, j) = (i % dims[n], j % dims[n]);
        if i == j {
            continue;
        }
        for level in levels[n].iter_mut() {
            for v in level.iter_mut() {
                v[i] = (v[i] + cval * v[j]) % p;
            }
        }
        if n < d.len() {
            // Column j of d_n E^{-1} gains -c times column i.
            for row in d[n].iter_mut() {
                row[j] = modp(row[j] as i64 - cval as i64 * row[i] as i64, p);
            }
        }
        if n > 0 {
            let src = d[n - 1][j].clone();
            for (x, y) in d[n - 1][i].iter_mut().zip(&src) {
                *x = (*x + cval * y) % p;
            }
        }
    }
    Raw { p, dims, d, levels }
}

fn fp_int<const P: u8>(x: &Fp<P>) -> i64 {
    x.value() as i64
}

fn assert_pages_match_oracle<F: Field>(raw: &Raw) {
    let ss = SpectralSequence::new(Arc::new(raw.to_library::<F>()), BUDGET).unwrap();
    let top = raw.dims.len() - 1;
    let kmax = raw.levels.iter().map(|l| l.len()).max().unwrap_or(0) as i64;
    for r in 0..=4usize {
        let page = ss.page(r).unwrap();
        for n in 0..=ss.window() {
            for k in 0..=kmax + 1 {
                let want = raw.e(r as i64, k, n);
                let got = SpectralSequence::<F>::page_dim(&page, k as usize, n as i64 - k);
                assert_eq!(got, want, "E_{r} at p = {k}, n = {n}");
            }
        }
    }
    for n in 0..=ss.window() {
        let c = ss.e_infinity_check(n).unwrap();
        assert_eq!(c.h_dim, raw.h(n), "H^{n}");
        assert!(c.ok);
        for k in 0..=kmax {
            assert_eq!(ss.e_infinity_dim(k as usize, n).unwrap(), raw.e(top as i64 + kmax + 2, k, n));
        }
    }
}

fn f2_raw(seed: u64, ops: &[(usize, usize, usize, u8)], opts: &RandomComplexOptions) -> Raw {
    scrambled(&random_filtered_complex::<F2>(seed, opts).unwrap(), 2, fp_int::<2>, ops)
}

fn ops_strategy() -> impl Strategy<Value = Vec<(usize, usize, usize, u8)>> {
    prop::collection::vec((0usize..8, 0usize..8, 0usize..8, 1u8..3), 0..30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn f2_pages_match_enumeration(seed in any::<u64>(), ops in ops_strategy()) {
        let opts = RandomComplexOptions { top: 4, max_dim: 5, ..RandomComplexOptions::default() };
        assert_pages_match_oracle::<F2>(&f2_raw(seed, &ops, &opts));
    }

    #[test]
    fn f3_pages_match_enumeration(seed in any::<u64>(), ops in ops_strategy()) {
        let opts = RandomComplexOptions { top: 4, max_dim: 4, ..RandomComplexOptions::default() };
        let raw = scrambled(&random_filtered_complex::<F3>(seed, &opts).unwrap(), 3, fp_int::<3>, &ops);
        assert_pages_match_oracle::<F3>(&raw);
    }

    #[test]
    fn page_homology_and_stationarity_hold(seed in any::<u64>()) {
        let ss = SpectralSequence::new(Arc::new(random_filtered_complex::<F5>(seed, &RandomComplexOptions::default()).unwrap()), BUDGET).unwrap();
        prop_assert!(ss.check_page_homology(4).unwrap().passed());
        prop_assert!(ss.check_stationarity().unwrap().passed());
        for n in 0..=ss.window() {
            prop_assert!(ss.e_infinity_check(n).unwrap().ok);
        }
    }

    #[test]
    fn dump_parse_roundtrip(seed in any::<u64>()) {
        let fc = random_filtered_complex::<F7>(seed, &RandomComplexOptions::default()).unwrap();
        let text = dump_complex(&fc);
        prop_assert_eq!(complex_file_field(&text).unwrap(), "F7");
        let back = parse_complex::<F7>(&text).unwrap();
        prop_assert_eq!(dump_complex(&back), text.clone());
        let a = SpectralSequence::new(Arc::new(fc), BUDGET).unwrap().report().unwrap();
        let b = SpectralSequence::new(Arc::new(back), BUDGET).unwrap().report().unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn empty_row_rank_identities_hold(seed in any::<u64>()) {
        let opts = RandomComplexOptions { empty_row: Some(1), first_quadrant: true, ..RandomComplexOptions::default() };
        let ss = SpectralSequence::new(Arc::new(random_filtered_complex::<F2>(seed, &opts).unwrap()), BUDGET).unwrap();
        let r = ss.empty_row_check().unwrap();
        prop_assert!(r.skipped.is_none());
        prop_assert!(r.passed(), "{:?}", r.failures);
    }
}

#[test]
fn rational_random_complex_converges() {
    for seed in 0..5 {
        let ss = SpectralSequence::new(Arc::new(random_filtered_complex::<Q>(seed, &RandomComplexOptions::default()).unwrap()), BUDGET).unwrap();
        assert!(ss.report().unwrap().converged);
        assert!(ss.check_page_homology(3).unwrap().passed());
    }
}

#[test]
fn random_complexes_are_deterministic() {
    let opts = RandomComplexOptions::default();
    let a = dump_complex(&random_filtered_complex::<F2>(9, &opts).unwrap());
    let b = dump_complex(&random_filtered_complex::<F2>(9, &opts).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, dump_complex(&random_filtered_complex::<F2>(10, &opts).unwrap()));
}

/// `dim H^n(Z/m; F_p)` is 1 in every degree when `p | m`, else only in degree 0.
#[test]
fn bar_complex_matches_cyclic_formula() {
    for m in 2..=6usize {
        let g = FiniteGroup::cyclic(m);
        let two = bar_cohomology_dims::<F2>(&g, 3, BUDGET).unwrap();
        let three = bar_cohomology_dims::<F3>(&g, 3, BUDGET).unwrap();
        for n in 0..=3 {
            let expect = |p: usize| if n == 0 || m % p == 0 { 1 } else { 0 };
            assert_eq!(two[n], expect(2), "Z/{m} over F2, degree {n}");
            assert_eq!(three[n], expect(3), "Z/{m} over F3, degree {n}");
        }
    }
}

#[test]
fn trivial_filtration_gives_the_complex_then_cohomology() {
    let raw = f2_raw(5, &[], &RandomComplexOptions::default());
    let c = raw.to_library::<F2>().complex().clone();
    let ss = SpectralSequence::new(Arc::new(FilteredComplex::trivial(c.clone()).unwrap()), BUDGET).unwrap();
    let (e0, e1) = (ss.page(0).unwrap(), ss.page(1).unwrap());
    for n in 0..=ss.window() {
        assert_eq!(SpectralSequence::<F2>::page_dim(&e0, 0, n as i64), c.dim(n));
        assert_eq!(SpectralSequence::<F2>::page_dim(&e1, 0, n as i64), raw.h(n));
        assert!(e1.cells.iter().all(|cell| cell.p == 0 || cell.dim == 0));
    }
}

fn hs_pages<F: Field>(ext: &ExtensionData<FiniteGroup, FiniteGroup, FiniteGroup>, window: usize) -> (HsComplex<F>, SpectralSequence<F>) {
    let hs = hs_double_complex::<F>(ext, window, BUDGET).unwrap();
    let ss = SpectralSequence::new(Arc::new(hs.vertical.clone()), BUDGET).unwrap();
    (hs, ss)
}

#[test]
fn z4_pages_in_the_window() {
    let ext = z4_extension().unwrap().ext;
    let (hs, ss) = hs_pages::<F2>(&ext, 3);
    hs.check_commutation().unwrap();
    for &(p, q, dim) in &hs.blocks {
        assert_eq!(dim, (1 << p) * 2 * 4usize.pow(q as u32));
    }
    let e2 = ss.page(2).unwrap();
    for (p, n) in ss.window_cells() {
        assert_eq!(SpectralSequence::<F2>::page_dim(&e2, p, (n - p) as i64), 1);
    }
    // Z/4 is not split, so d_2 kills the q = 1 row against q = 0.
    let e3 = ss.page(3).unwrap();
    assert_eq!(SpectralSequence::<F2>::page_dim(&e3, 0, 1), 0);
    assert_eq!(SpectralSequence::<F2>::page_dim(&e3, 2, 0), 0);
    let bar = bar_cohomology_dims::<F2>(&FiniteGroup::cyclic(4), 3, BUDGET).unwrap();
    for n in 0..=3 {
        let c = ss.e_infinity_check(n).unwrap();
        assert_eq!((c.e_inf_sum, c.h_dim), (bar[n], bar[n]));
    }
    assert!(ss.check_page_homology(4).unwrap().passed());
    assert!(ss.check_stationarity().unwrap().passed());
    let empty_row = ss.empty_row_check().unwrap();
    assert!(empty_row.skipped.unwrap().contains("hypothesis not met"));
}

#[test]
fn z4_horizontal_filtration_collapses() {
    let ext = z4_extension().unwrap().ext;
    let hs = hs_double_complex::<F2>(&ext, 3, BUDGET).unwrap();
    let ss = SpectralSequence::new(Arc::new(hs.horizontal), BUDGET).unwrap();
    let e1 = ss.page(1).unwrap();
    for c in &e1.cells {
        // Horizontal level is q, so the complementary index is p.
        if c.q >= 1 {
            assert_eq!(c.dim, 0, "level {} degree {}", c.p, c.q);
        }
    }
}

fn direct_product_z2_z2() -> ExtensionData<FiniteGroup, FiniteGroup, FiniteGroup> {
    let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
    let v4 = Arc::new(FiniteGroup::from_table(0, table).unwrap());
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    ExtensionData::new(
        v4,
        z2.clone(),
        z2,
        Arc::new(|x: &usize| x >> 1),
        Arc::new(|g: &usize| *g),
        Arc::new(|x: &usize| (*x < 2).then_some(*x)),
        Arc::new(|a: &usize| a << 1),
    )
    .unwrap()
}

/// `S_3` as permutations of three points, `A_3` normal, `Z/2` acting by inversion.
fn s3_extension() -> ExtensionData<FiniteGroup, FiniteGroup, FiniteGroup> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let table = (0..6)
        .map(|a| (0..6).map(|b| index([perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]])).collect())
        .collect();
    let s3 = Arc::new(FiniteGroup::from_table(0, table).unwrap());
    ExtensionData::new(
        s3,
        Arc::new(FiniteGroup::cyclic(2)),
        Arc::new(FiniteGroup::cyclic(3)),
        Arc::new(|x: &usize| (*x >= 3) as usize),
        Arc::new(|g: &usize| *g),
        Arc::new(|x: &usize| (*x < 3).then_some(*x)),
        Arc::new(|a: &usize| 3 * a),
    )
    .unwrap()
}

#[test]
fn split_klein_four_degenerates_at_e2() {
    let ext = direct_product_z2_z2();
    let (_, ss) = hs_pages::<F2>(&ext, 3);
    let (e2, e3) = (ss.page(2).unwrap(), ss.page(3).unwrap());
    for (p, n) in ss.window_cells() {
        let q = (n - p) as i64;
        assert_eq!(SpectralSequence::<F2>::page_dim(&e2, p, q), 1);
        assert_eq!(SpectralSequence::<F2>::page_dim(&e3, p, q), 1);
    }
    let bar = bar_cohomology_dims::<F2>(ext.gamma(), 3, BUDGET).unwrap();
    assert_eq!(bar, vec![1, 2, 3, 4]);
    for n in 0..=3 {
        assert_eq!(ss.e_infinity_check(n).unwrap().e_inf_sum, bar[n]);
    }
}

#[test]
fn s3_converges_to_bar_cohomology() {
    // Window 3 would need |Gamma|^5 sized blocks; window 2 stays small.
    let ext = s3_extension();
    let (_, s2) = hs_pages::<F2>(&ext, 2);
    let (_, s3) = hs_pages::<F3>(&ext, 2);
    let b2 = bar_cohomology_dims::<F2>(ext.gamma(), 2, BUDGET).unwrap();
    let b3 = bar_cohomology_dims::<F3>(ext.gamma(), 2, BUDGET).unwrap();
    assert_eq!(b2, vec![1, 1, 1]);
    assert_eq!(b3, vec![1, 0, 0]);
    for n in 0..=2 {
        assert_eq!(s2.e_infinity_check(n).unwrap().e_inf_sum, b2[n]);
        assert_eq!(s3.e_infinity_check(n).unwrap().e_inf_sum, b3[n]);
    }
    // Over F3 the quotient has invertible order, so only p = 0 survives at E_2,
    // and there Z/2 inverts the degree 1 class of Z/3.
    let e2 = s3.page(2).unwrap();
    assert!(e2.cells.iter().all(|c| c.p == 0 || c.dim == 0));
    assert_eq!(SpectralSequence::<F3>::page_dim(&e2, 0, 1), 0);
    assert!(s3.check_page_homology(3).unwrap().passed());
}

#[test]
fn budget_and_window_errors() {
    let ext = z4_extension().unwrap().ext;
    assert!(matches!(hs_double_complex::<F2>(&ext, 3, 1), Err(Error::BudgetExceeded { budget_mb: 1, .. })));
    let fc = random_filtered_complex::<F2>(1, &RandomComplexOptions::default()).unwrap();
    let ss = SpectralSequence::new(Arc::new(fc), BUDGET).unwrap();
    assert!(matches!(ss.cell(1, 0, 5), Err(Error::DegreeWindow(_))));
    assert!(matches!(ss.e_infinity_check(4), Err(Error::DegreeWindow(_))));
    assert!(ss.cell(1, 0, 4).is_ok());
}

#[test]
fn complex_file_errors() {
    let ok = r#"{"field":"Q","dims":[1,1,1],"differentials":[[["1/2"]],[[0]]]}"#;
    let fc = parse_complex::<Q>(ok).unwrap();
    assert_eq!(fc.complex().cohomology_dim(0), 0);
    assert!(matches!(parse_complex::<F2>(ok), Err(Error::Invalid(_))));
    let not_complex = r#"{"field":"F2","dims":[1,1,1],"differentials":[[[1]],[[1]]]}"#;
    assert!(parse_complex::<F2>(not_complex).is_err());
    let not_subcomplex = r#"{"field":"F2","dims":[1,1,1],"differentials":[[[1]],[[0]]],
        "filtration":[[[[1]],[[1]]],[[[1]]],[[[1]]]]}"#;
    assert!(parse_complex::<F2>(not_subcomplex).is_err());
    assert!(matches!(parse_complex::<F2>("{"), Err(Error::Parse(_))));
}
