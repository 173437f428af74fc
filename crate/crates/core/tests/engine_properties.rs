mod common;

use num_traits::{One, Signed};
use proptest::prelude::*;

use sls::dense::{DenseForm, MonomialBasis, Substitution};
use sls::engine::{decide_with, witness_point, DecideOptions, EngineError, Outcome};
use sls::oracle::{grid_classify, GridSpec};
use sls::subdivision::{
    compose, make_central3_scheme, make_midpoint3_scheme, make_trisection3_scheme, make_wds_scheme,
};
use sls::{decide, Form, SubdivisionScheme};

fn schemes3() -> Vec<SubdivisionScheme> {
    vec![make_wds_scheme(3).unwrap(), make_midpoint3_scheme(), make_trisection3_scheme()]
}

/// Every path of length `depth`, in the engine's traversal order.
fn all_paths(k: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=k).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

fn substitute_path(f: &Form, s: &SubdivisionScheme, path: &[usize]) -> Form {
    let ms: Vec<_> = path.iter().map(|&i| s.matrix(i).unwrap().clone()).collect();
    f.substitute_linear(compose(&ms).unwrap().matrix()).unwrap()
}

fn check_witness(f: &Form, s: &SubdivisionScheme, max_depth: usize) {
    let v = decide(f, s, max_depth).unwrap();
    let w = v.witness().expect("indefinite");
    assert_eq!(w.path.len(), v.depth_reached);
    assert!(w.point.iter().all(|x| !x.is_negative()));
    assert!(w.point.iter().sum::<sls::Rational>().is_one());
    assert_eq!(w.point, witness_point(&w.path, s).unwrap());
    assert_eq!(f.evaluate(&w.point).unwrap(), w.value);
    assert!(w.value.is_negative());
}

#[test]
fn witnesses_are_negative_points_of_the_simplex() {
    for s in schemes3() {
        check_witness(&common::example2(), &s, 10);
        check_witness(&common::example3(), &s, 10);
        check_witness(&common::form("x^2 - 3*x*y + y^2 + z^2"), &s, 10);
    }
}

/// Without pruning, every cell at the PSD depth carries a trivially positive
/// form, computed here through the sparse exact substitution.
#[test]
fn psd_verdicts_survive_full_expansion() {
    let f = common::example1();
    for s in schemes3() {
        let v = decide(&f, &s, 10).unwrap();
        assert!(v.is_psd());
        for path in all_paths(s.len(), v.depth_reached) {
            let g = substitute_path(&f, &s, &path);
            assert!(g.is_trivially_positive(), "{} {:?}", s.name(), path);
        }
        // one level earlier some cell is still undecided
        let undecided = all_paths(s.len(), v.depth_reached - 1)
            .iter()
            .any(|p| !substitute_path(&f, &s, p).is_trivially_positive());
        assert!(undecided, "{}", s.name());
    }
}

#[test]
fn decide_is_deterministic() {
    for s in schemes3() {
        for f in [common::example1(), common::example2(), common::form(common::CENTRAL_FORM)] {
            let a = decide(&f, &s, 6).unwrap();
            let b = decide(&f, &s, 6).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn dedup_does_not_change_the_verdict_kind() {
    for s in schemes3() {
        for f in [common::example1(), common::example2(), common::example3()] {
            let plain = decide_with(&f, &s, &DecideOptions { max_depth: 8, dedup: false }).unwrap();
            let dedup = decide_with(&f, &s, &DecideOptions { max_depth: 8, dedup: true }).unwrap();
            assert_eq!(plain.kind(), dedup.kind());
            if let Outcome::Indefinite(w) = &dedup.outcome {
                assert!(f.evaluate(&w.point).unwrap().is_negative());
            }
        }
    }
}

#[test]
fn central_fan_never_decides() {
    let f = common::form(common::CENTRAL_FORM);
    let s = make_central3_scheme();
    for depth in [1, 4, 8, 12] {
        let v = decide(&f, &s, depth).unwrap();
        assert!(v.is_inconclusive());
        assert_eq!(v.depth_reached, depth);
        // the cells along the shared edges never shrink, so the frontier stalls
        let sizes: Vec<usize> = v.stats.levels.iter().map(|l| l.frontier_size).collect();
        assert!(sizes.iter().all(|&k| k >= 1));
        assert!(sizes.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn stats_are_consistent() {
    let s = make_wds_scheme(3).unwrap();
    let v = decide(&common::example1(), &s, 10).unwrap();
    let mut prev = 1;
    for l in &v.stats.levels {
        assert_eq!(l.expanded, prev * s.len());
        assert_eq!(l.expanded, l.pruned_positive + l.duplicates + l.frontier_size);
        prev = l.frontier_size;
    }
    assert_eq!(v.stats.branches_expanded, v.stats.levels.iter().map(|l| l.expanded).sum::<usize>());
}

#[test]
fn engine_rejects_bad_input() {
    let s = make_wds_scheme(3).unwrap();
    let zero = Form::zero(3, 2);
    assert!(matches!(decide(&zero, &s, 5), Err(EngineError::ZeroForm)));
    let two = common::form("x^2 - y*z");
    assert!(matches!(decide(&two, &make_wds_scheme(4).unwrap(), 5), Err(EngineError::DimensionMismatch { .. })));
    assert!(matches!(decide(&two, &s, 0), Err(EngineError::BadDepth)));
    assert!(matches!(witness_point(&[7], &s), Err(EngineError::BadIndex { index: 7, len: 6 })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Level-by-level dense substitution with content normalization agrees
    /// with one substitution by the product matrix.
    #[test]
    fn sequential_substitution_matches_product(
        seed in any::<u64>(),
        which in 0usize..3,
        path_len in 1usize..=4,
    ) {
        let s = &schemes3()[which];
        let mut r = common::rng(seed);
        let d = rand::Rng::gen_range(&mut r, 1..=4);
        let f = common::random_form(&mut r, 3, d, 5);
        let path: Vec<usize> = (0..path_len).map(|_| rand::Rng::gen_range(&mut r, 1..=s.len())).collect();
        let basis = MonomialBasis::new(3, f.degree());
        let (mut dense, _) = DenseForm::from_form(&f, &basis);
        for &i in &path {
            Substitution::new(s.matrix(i).unwrap().matrix()).unwrap().apply(&mut dense);
            dense.normalize_content();
        }
        let exact = substitute_path(&f, s, &path).normalize_content();
        prop_assert_eq!(dense.to_form(), exact);
    }

    #[test]
    fn grid_has_binomial_size(n in 1usize..=4, d in 1u32..=12) {
        let want = (1..n as u64).fold(1u64, |acc, k| acc * (d as u64 + k) / k);
        prop_assert_eq!(GridSpec::new(n, d).len() as u64, want);
    }

    #[test]
    fn indefinite_witness_is_grid_consistent(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let d = rand::Rng::gen_range(&mut r, 1..=3);
        let f = common::random_form(&mut r, 3, d, 5);
        let v = decide(&f, &make_wds_scheme(3).unwrap(), 8).unwrap();
        let g = grid_classify(&f, GridSpec::new(3, 12)).unwrap();
        if let Some(w) = v.witness() {
            prop_assert!(f.evaluate(&w.point).unwrap().is_negative());
        }
        if v.is_psd() {
            prop_assert!(!g.negative_found);
        }
    }
}
