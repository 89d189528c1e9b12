use num_rational::Ratio;
use proptest::prelude::*;

use uclab::constructions::{approx_uc_experiment, make_binomial, make_fm, snk_orbit, snk_size, BinomialMode};
use uclab::entropy::{gilmer_ratio, shannon_entropy, SubsetDistribution};
use uclab::enumerate::{brute_force_report, enumerate_union_closed};
use uclab::SetFamily;

fn arb_family() -> impl Strategy<Value = SetFamily> {
    (1usize..=10).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(1..=n, 0..=n), 1..24)
            .prop_map(move |sets| SetFamily::from_sets(n, sets).unwrap())
    })
}

fn arb_relabeled() -> impl Strategy<Value = (SetFamily, Vec<usize>)> {
    arb_family().prop_flat_map(|f| {
        let perm = Just((1..=f.n()).collect::<Vec<_>>()).prop_shuffle();
        (Just(f), perm)
    })
}

proptest! {
    #[test]
    fn closure_step_grows_exactly_when_not_closed(f in arb_family()) {
        let g = f.union_closure_step();
        prop_assert!(f.members().iter().all(|s| g.contains(s)));
        prop_assert_eq!(g.len() > f.len(), !f.is_union_closed());
        prop_assert_eq!(g.union_closure_step() == g, g.is_union_closed());
        let c = f.generate_closure();
        prop_assert!(c.is_union_closed());
        prop_assert_eq!(c.union_closure_step(), c);
    }

    #[test]
    fn counts_match_membership(f in arb_family()) {
        let p = f.frequency_profile();
        for e in 1..=f.n() {
            let brute = f.members().iter().filter(|s| s.contains(e)).count();
            prop_assert_eq!(p.count(e), brute);
        }
        prop_assert_eq!(p.total, f.len());
    }

    #[test]
    fn blocks_partition_the_ground_set(f in arb_family()) {
        let b = f.blocks();
        let mut all: Vec<usize> = b.classes().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..=f.n()).collect::<Vec<_>>());
        for class in &b.blocks {
            for s in f.members() {
                prop_assert!(class.iter().all(|&e| s.contains(e) == s.contains(class[0])));
            }
        }
    }

    #[test]
    fn relabeling_is_equivariant((f, perm) in arb_relabeled()) {
        let g = f.relabel(&perm).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(g.is_union_closed(), f.is_union_closed());
        let (pf, pg) = (f.frequency_profile(), g.frequency_profile());
        for e in 1..=f.n() {
            prop_assert_eq!(pf.count(e), pg.count(perm[e - 1]));
        }
        let mut mapped: Vec<Vec<usize>> = f
            .blocks()
            .classes()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&e| perm[e - 1]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut direct: Vec<Vec<usize>> = g.blocks().classes().map(<[usize]>::to_vec).collect();
        mapped.sort();
        direct.sort();
        prop_assert_eq!(mapped, direct);
    }

    #[test]
    fn uniform_entropy_is_log_of_support(f in arb_family()) {
        let e = shannon_entropy(&SubsetDistribution::uniform(&f));
        prop_assert!((e.bits - (f.len() as f64).log2()).abs() <= e.error_bound.max(1e-15));
    }

    #[test]
    fn binomial_sizes_match_formula(n in 1usize..=12, k in 0usize..=12) {
        prop_assume!(k <= n);
        let c = |j: usize| (0..j).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
        let at_most: u64 = (0..=k).map(c).sum();
        let at_least: u64 = (k..=n).map(c).sum();
        prop_assert_eq!(make_binomial(n, BinomialMode::AtMost, k).unwrap().len() as u64, at_most);
        prop_assert_eq!(make_binomial(n, BinomialMode::AtLeast, k).unwrap().len() as u64, at_least);
        prop_assert_eq!(make_binomial(n, BinomialMode::Exact, k).unwrap().len() as u64, c(k));
    }
}

#[test]
fn fm_is_union_closed_with_formula_size() {
    for m in 1..=4 {
        let f = make_fm(m).unwrap();
        assert!(f.is_union_closed(), "m = {m}");
        assert_eq!(f.len(), (1 << m) + m * m - m, "m = {m}");
    }
}

#[test]
fn snk_size_matches_formula() {
    for (n, k) in [(30, 3), (40, 4), (50, 5), (60, 3)] {
        let o = snk_orbit(n, k).unwrap();
        assert_eq!(o.size(), snk_size(n, k));
        assert!(o.is_union_closed());
        assert_eq!(o.abundant_elements(), vec![1, 2]);
    }
}

#[test]
fn experiment_depends_only_on_seed() {
    let a = approx_uc_experiment(200, 2, 200, 7).unwrap();
    let b = approx_uc_experiment(200, 2, 200, 7).unwrap();
    let c = approx_uc_experiment(200, 2, 200, 8).unwrap();
    assert_eq!(a.p_hat, b.p_hat);
    assert_eq!(a.mean_union_size, b.mean_union_size);
    assert_eq!((a.slice_size, a.threshold), (c.slice_size, c.threshold));
}

#[test]
fn enumeration_visits_only_closed_families() {
    for n in 1..=4 {
        let mut visited = 0usize;
        let report = enumerate_union_closed(n, |f| {
            assert!(f.is_union_closed());
            if f.qualifies() {
                assert!(f.max_fraction() >= Ratio::new(1, 2));
            }
            visited += 1;
        })
        .unwrap();
        assert!(report.conjecture_holds);
        assert_eq!(report.min_max_fraction, Ratio::new(1, 2));
        assert!(visited >= report.uc_count as usize);
    }
}

#[test]
fn pruned_and_brute_force_reports_agree() {
    for n in 1..=3 {
        let pruned = enumerate_union_closed(n, |_| {}).unwrap();
        let brute = brute_force_report(n).unwrap();
        assert_eq!(pruned.uc_count, brute.uc_count);
        assert_eq!(pruned.min_max_fraction, brute.min_max_fraction);
    }
}

#[test]
fn sparse_random_families_have_large_ratio() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(11);
    let bound = num_rational::BigRational::new(1.into(), 100.into());
    let mut checked = 0;
    while checked < 20 {
        let n = 600;
        let m = rng.gen_range(100..200);
        let sets: Vec<Vec<usize>> = (0..m)
            .map(|i| vec![3 * i + 1, 3 * i + 1 + rng.gen_range(1..3)])
            .collect();
        let f = SetFamily::from_sets(n, sets).unwrap();
        let r = gilmer_ratio(&SubsetDistribution::uniform(&f)).unwrap();
        if r.sparse(&bound) {
            assert!(r.ratio >= 1.26, "ratio {}", r.ratio);
            checked += 1;
        }
    }
}
