//! Property tests for the invariants that hold across the whole parameter
//! space rather than at hand-picked points.

use proptest::prelude::*;

use elo::comm_model;
use elo::config::{parse_config, RunConfig, Scenario, SystemParams};
use elo::power_scenario::{self, PowerProblem};
use elo::specfun;

fn default_power(e_max: f64, rho: f64) -> PowerProblem {
    let p = SystemParams::default();
    PowerProblem {
        comp: p.comp,
        chan: p.chan,
        e_max,
        rho,
        theta: 1e-4,
        include_decomp_scale: true,
    }
}

proptest! {
    #[test]
    fn reg_lower_gamma_monotone_in_x(
        s in 0.05f64..30.0,
        a in 0.0f64..50.0,
        d in 1e-6f64..10.0,
    ) {
        let p1 = specfun::reg_lower_gamma(s, a).unwrap();
        let p2 = specfun::reg_lower_gamma(s, a + d).unwrap();
        prop_assert!(p2 >= p1 - 1e-14);
        prop_assert!((0.0..=1.0).contains(&p1));
    }

    #[test]
    fn gamma_quantile_inverts_cdf(
        shape in 0.1f64..25.0,
        scale in 1e-6f64..1e3,
        rho in 0.001f64..0.999,
    ) {
        let t = specfun::gamma_quantile(shape, scale, rho).unwrap();
        let back = specfun::reg_lower_gamma(shape, t / scale).unwrap();
        prop_assert!((back - rho).abs() <= 1e-10, "s={shape} rho={rho} back={back}");
    }

    #[test]
    fn nbinom_and_binomial_routes_agree(
        n in 1u64..40,
        eps in 0.001f64..0.95,
        extra in 0u64..60,
    ) {
        // trials ≤ k needed for n successes  ⇔  at least n successes in k trials
        let k = n + extra;
        let via_nbinom = specfun::nbinom_cdf(n, eps, k);
        let via_binom = 1.0 - specfun::binom_cdf(n - 1, k, 1.0 - eps);
        prop_assert!((via_nbinom - via_binom).abs() < 1e-11,
            "routes disagree at n={n} eps={eps} k={k}: {via_nbinom} vs {via_binom}");
    }

    #[test]
    fn probit_round_trip(z in -5.5f64..5.5) {
        let back = specfun::probit(specfun::normal_cdf(z)).unwrap();
        prop_assert!((back - z).abs() < 1e-8);
    }

    #[test]
    fn comm_energy_identity(n in 1.0f64..2000.0, eps in 0.0005f64..0.5) {
        let mut chan = SystemParams::default().chan;
        chan.eps = eps;
        let e = comm_model::comm_energy(n, &chan);
        let back = e * comm_model::energy_efficiency(&chan) * (1.0 - eps);
        prop_assert!((back - n * chan.n_p as f64).abs() <= 1e-9 * back);
    }

    #[test]
    fn latency_bound_is_sum_of_addends(
        q in 1.01f64..1.5,
        fc_frac in 0.0f64..1.0,
        rho in 0.5f64..0.999,
    ) {
        let prob = default_power(0.1, rho);
        let fc = prob.comp.fc_min + fc_frac * (prob.comp.fc_max - prob.comp.fc_min);
        let b = power_scenario::latency_quantile_bound(q, fc, &prob).unwrap();
        prop_assert!((b.total - (b.comp_quantile + b.tx_quantile)).abs() <= 1e-15 * b.total);
        // monotone in rho
        let lo = power_scenario::latency_quantile_bound(q, fc, &default_power(0.1, 0.5 * rho)).unwrap();
        prop_assert!(lo.total <= b.total);
    }

    #[test]
    fn config_round_trip(
        eps in 0.0001f64..0.9,
        seed in any::<u64>(),
        q_max in 1.05f64..3.0,
        e0 in 0.01f64..10.0,
        scenario_pick in 0usize..3,
    ) {
        let mut cfg = RunConfig::default();
        cfg.scenario = [Scenario::Power, Scenario::Time, Scenario::Validate][scenario_pick];
        cfg.params.chan.eps = eps;
        cfg.params.comp.q_max = q_max;
        cfg.sim.seed = seed;
        cfg.e_max_list = vec![e0, e0 * 2.0];
        let back = parse_config(&cfg.emit()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
