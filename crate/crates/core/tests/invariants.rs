use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use latgrow::asymptotics::{
    alpha_series, g1_diagnostic, growth_estimates, one_point_partial, penrose_bounds, tau_series,
    z0,
};
use latgrow::cuttree::cut_tree;
use latgrow::enumeration::{count_subgraphs, enumerate_subgraphs};
use latgrow::meanfield::{
    degree_product, for_each_map, maps_onto_cuttree, maps_onto_tree, FoldOptions, MeanFieldConfig,
};
use latgrow::planetree::{
    enumerate_plane_trees, f_count, f_partial_sum, f_partial_sums, w_closed_form,
};
use latgrow::{BondSubgraph, EnumOptions, Kind, LatticeSpec, Precision, Real};

fn nn(d: usize) -> LatticeSpec {
    LatticeSpec::nearest_neighbour(d).unwrap()
}

fn so(d: usize, l: u32) -> LatticeSpec {
    LatticeSpec::spread_out(d, l).unwrap()
}

fn prec() -> Precision {
    Precision::digits(40)
}

fn counts(spec: &LatticeSpec, kind: Kind, n: usize) -> Vec<BigUint> {
    count_subgraphs(spec, kind, n, &EnumOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mean_field_root_approaches_k_e(n in 5usize..=200, k in 2u64..1000) {
        let p = prec();
        let f = Real::from_ratio(&(BigRational::from_integer(k.into()).pow(n as i32) * w_closed_form(n)), p);
        let ke = &Real::from_u64(k, p) * &Real::e(p);
        let dev = (&(&f.root(n as u64) / &ke) - &Real::one(p)).abs().to_f64();
        prop_assert!(dev <= 2.0 * ((n + 1) as f64).ln() / n as f64);
    }

    #[test]
    fn mean_field_partial_sums_rise_below_e(k in 2u64..10_000, n in 1usize..80) {
        let p = prec();
        let z = (&Real::from_u64(k, p) * &Real::e(p)).recip();
        let sums = f_partial_sums(k, n, &z);
        let e = Real::e(p);
        prop_assert!(sums.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(sums.iter().all(|s| s < &e));
    }

    #[test]
    fn penrose_ratio_close_to_one(k in 10u64..2_000_000) {
        let p = prec();
        let r = penrose_bounds(k, p).unwrap().ratio();
        let dev = (&r - &Real::one(p)).abs();
        prop_assert!(dev <= Real::from_u64(k, p).recip());
        let next = penrose_bounds(k + 1, p).unwrap().ratio();
        prop_assert!((&next - &Real::one(p)).abs() < dev);
    }

    #[test]
    fn alpha_series_exceeds_tau(d in 2usize..=100) {
        let a = alpha_series(d, 5, prec()).unwrap().value;
        let t = tau_series(d, 5, prec()).unwrap().value;
        prop_assert!(a > t);
    }

    #[test]
    fn worker_count_does_not_change_counts(jobs in 1usize..5, animal in any::<bool>()) {
        let kind = if animal { Kind::Animal } else { Kind::Tree };
        let opts = EnumOptions { jobs, ..EnumOptions::default() };
        let spec = nn(2);
        prop_assert_eq!(
            count_subgraphs(&spec, kind, 6, &opts).unwrap(),
            count_subgraphs(&spec, kind, 6, &EnumOptions { jobs: 1, ..opts }).unwrap()
        );
    }
}

#[test]
fn series_normalised_by_leading_term() {
    for order in 0..=5 {
        for d in [100usize, 1000] {
            let p = prec();
            let t = tau_series(d, order, p).unwrap().value;
            let lead = &Real::from_u64(2 * d as u64, p) * &Real::e(p);
            let dev = (&(&t / &lead) - &Real::one(p)).abs().to_f64();
            assert!(dev <= 2.0 / d as f64, "order {order}, d {d}: {dev}");
        }
    }
}

#[test]
fn f_depends_only_on_degree() {
    for (a, b) in [(nn(4), so(1, 4)), (nn(12), so(2, 2))] {
        assert_eq!(a.degree(), b.degree());
        for n in 0..10 {
            assert_eq!(f_count(&a, n), f_count(&b, n));
        }
    }
}

#[test]
fn each_tree_has_k_to_the_n_maps() {
    let opts = FoldOptions::default();
    for spec in [nn(1), nn(2), so(2, 1)] {
        for n in 0..=4 {
            for tree in enumerate_plane_trees(n) {
                let mut maps = 0u64;
                for_each_map(&spec, &tree, &opts, |_| maps += 1).unwrap();
                assert_eq!(maps, spec.degree().pow(n as u32));
            }
        }
    }
}

#[test]
fn tree_folding_sum_on_spread_out_lattice() {
    let spec = so(2, 1);
    for n in 0..=3 {
        for t in enumerate_subgraphs(&spec, n, Kind::Tree, &EnumOptions::default()).unwrap() {
            assert!(maps_onto_tree(&spec, &t, &FoldOptions::default()).unwrap().is_one());
        }
    }
}

/// Every configuration whose edges land on distinct bonds forming an animal
/// is tested against that animal's cut-tree; matches must carry the cut-tree's
/// degree multiset and their number must equal `nu`.
#[test]
fn folding_configurations_transfer_degrees() {
    let spec = nn(2);
    let origin = spec.origin();
    let opts = FoldOptions::default();
    for n in 0..=5 {
        let mut folds: BTreeMap<_, u64> = BTreeMap::new();
        for tree in enumerate_plane_trees(n) {
            let mut xi: Vec<u32> = tree.xi().to_vec();
            xi.sort_unstable();
            for_each_map(&spec, &tree, &opts, |phi| {
                let config = MeanFieldConfig { tree: tree.clone(), phi: phi.to_vec() };
                let image = config.image();
                if image.multiplicity.len() != n {
                    return;
                }
                let animal = BondSubgraph::new(2, image.multiplicity.keys().cloned()).unwrap();
                let x = cut_tree(&spec, &animal);
                if !config.folds_onto_cuttree(&x) {
                    return;
                }
                let mut b: Vec<u32> = x.degrees_from(&origin).into_values().collect();
                b.retain(|&d| d > 0);
                let mut nonzero = xi.clone();
                nonzero.retain(|&d| d > 0);
                b.sort_unstable();
                assert_eq!(b, nonzero, "{x}");
                *folds.entry(x).or_default() += 1;
            })
            .unwrap();
        }
        let animals = enumerate_subgraphs(&spec, n, Kind::Animal, &EnumOptions::default()).unwrap();
        assert_eq!(folds.len(), animals.len(), "n={n}");
        for (x, hits) in &folds {
            let nu = maps_onto_cuttree(&spec, x, &opts).unwrap();
            assert_eq!(BigUint::from(*hits), nu);
            assert_eq!(nu, degree_product(x, &origin));
        }
    }
}

#[test]
fn one_point_partial_sums_below_e() {
    let p = prec();
    let e = Real::e(p);
    for (spec, n_max) in [(nn(2), 8), (nn(3), 5), (so(2, 1), 4)] {
        let z = z0(&spec, p);
        let t = counts(&spec, Kind::Tree, n_max);
        let a = counts(&spec, Kind::Animal, n_max);
        for n in 0..=n_max {
            let gt = one_point_partial(&t[..=n], &z);
            let ga = one_point_partial(&a[..=n], &z);
            assert!(gt < e && gt <= ga, "{spec} N={n}");
            assert!(ga <= f_partial_sum(&spec, n, &z), "{spec} N={n}");
        }
        if spec == nn(2) {
            let g6 = one_point_partial(&t[..=6], &z);
            assert!(g6 > Real::one(p) && g6 < e);
        }
    }
}

#[test]
fn square_animal_roots_below_penrose() {
    let p = prec();
    let a = counts(&nn(2), Kind::Animal, 8);
    let upper = penrose_bounds(4, p).unwrap().upper;
    let est = growth_estimates(&a, p).unwrap();
    assert_eq!(est.root_estimates.len(), 8);
    assert!(est.root_estimates.iter().all(|r| r <= &upper));
}

#[test]
fn line_ratios_tend_to_one() {
    let p = prec();
    let t = counts(&nn(1), Kind::Tree, 20);
    let est = growth_estimates(&t, p).unwrap();
    let r: Vec<f64> = est.ratio_estimates.iter().map(Real::to_f64).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0] && w[1] > 1.0));
    assert!((r[19] - 21.0 / 20.0).abs() < 1e-15);
}

#[test]
fn g1_diagnostics_are_positive_and_finite() {
    let p = prec();
    let line = counts(&nn(1), Kind::Tree, 11);
    let g = g1_diagnostic(2, &line, 10, p).unwrap();
    let z = 11.0 / 12.0f64;
    let expected = 2.0 * z * (0..=10).map(|n| (n + 1) as f64 * z.powi(n)).sum::<f64>();
    assert!((g.value.to_f64() - expected).abs() < 1e-9);
    for l in [1, 2] {
        let spec = so(2, l);
        let t = counts(&spec, Kind::Tree, 5);
        let g = g1_diagnostic(spec.degree(), &t, 4, p).unwrap();
        assert!(g.value.is_positive() && g.value.is_finite());
    }
}
