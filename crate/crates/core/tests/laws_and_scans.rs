mod common;

use extcount::exact::{exact_laws, ExactTarget};
use extcount::experiment::{threshold_scan, ExperimentConfig, CSV_HEADER};
use extcount::stats::{mu_exact, sigma_sq_order};
use extcount::{builtin_fixture, Execution, RootTuple};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn laws_are_distributions_with_mean_mu(rg in common::rooted_graph(4), n in 4usize..=6, a in 1i64..8) {
        prop_assume!(n >= rg.v_h());
        let p = r(a, 8);
        let eps = r(1, 2);
        let laws = exact_laws(
            &rg,
            n,
            &p,
            &[
                ExactTarget::RootCount(RootTuple::first(rg.v_g())),
                ExactTarget::MaxCount,
                ExactTarget::MinCount,
                ExactTarget::Concentration(eps.clone()),
                ExactTarget::UpperTail(eps.clone()),
                ExactTarget::LowerTail(eps),
            ],
            Execution::Parallel,
        )
        .unwrap();
        for law in &laws {
            prop_assert!(law.total().is_one());
        }
        prop_assert_eq!(laws[0].mean(), mu_exact(&rg, n as u64, &p).unwrap());
        prop_assert!(laws[2].mean() <= laws[0].mean() && laws[0].mean() <= laws[1].mean());
        // Concentration fails exactly when one of the tails occurs.
        let fail = BigRational::one() - laws[3].prob(1);
        prop_assert!(laws[4].prob(1) <= fail.clone() && laws[5].prob(1) <= fail.clone());
        prop_assert!(laws[4].prob(1) + laws[5].prob(1) >= fail);
        prop_assert!(!laws[0].variance().is_zero() || laws[0].support.len() == 1);
    }
}

#[test]
fn sequential_and_parallel_laws_agree() {
    let rg = builtin_fixture("fig1c").unwrap();
    let targets = [ExactTarget::MaxCount, ExactTarget::Concentration(r(1, 3))];
    let a = exact_laws(&rg, 6, &r(2, 5), &targets, Execution::Sequential).unwrap();
    let b = exact_laws(&rg, 6, &r(2, 5), &targets, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn variance_has_the_predicted_order_on_a_triangle() {
    let rg = builtin_fixture("tri_root").unwrap();
    let p = r(1, 2);
    let law = exact_laws(&rg, 7, &p, &[ExactTarget::RootCount(RootTuple::first(1))], Execution::Parallel)
        .unwrap()
        .remove(0);
    let ratio = law.variance() / sigma_sq_order(&rg, 7, &p).unwrap();
    assert!(ratio > r(1, 64) && ratio < r(64, 1), "{ratio}");
}

const CONFIG: &str = r#"
graph = "fig1c"
n = [40, 60]
trials = 30
seed = 12345
event = "concentration"

[p_rule]
kind = "mu"
target = 12.0

[eps_rule]
kind = "eps2mu"
values = [0.5, 2.0, 8.0]
"#;

#[test]
fn scans_are_reproducible_under_any_execution() {
    let cfg = ExperimentConfig::from_toml(CONFIG).unwrap();
    let seq = threshold_scan(&cfg, Execution::Sequential).unwrap().csv();
    assert!(seq.starts_with(CSV_HEADER));
    assert_eq!(seq.lines().count(), 1 + 6);
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let par = pool.install(|| threshold_scan(&cfg, Execution::Parallel).unwrap().csv());
        assert_eq!(par, seq);
    }
    let reparsed = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
    assert_eq!(reparsed, cfg);
}
