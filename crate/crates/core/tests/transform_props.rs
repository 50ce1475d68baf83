use bs_lab::analytic::{payoff_call, OptionContract};
use bs_lab::transform::{constants, from_heat, initial_condition, price_to_u, to_heat, u_to_price, HeatCoords};
use proptest::prelude::*;

proptest! {
    #[test]
    fn heat_coordinates_round_trip(
        s in 1e-3f64..1e4,
        k in 1.0f64..500.0,
        expiry in 0.01f64..10.0,
        frac in 0.0f64..=1.0,
        sigma in 0.01f64..2.0,
    ) {
        let c = OptionContract::new(k, expiry).unwrap();
        let t = expiry * frac;
        let h = to_heat(s, t, &c, sigma).unwrap();
        prop_assert!(h.tau >= 0.0 && h.tau <= 0.5 * sigma * sigma * expiry);
        let (s2, t2) = from_heat(h, &c, sigma);
        prop_assert!((s2 - s).abs() <= 1e-14 * s.abs() * 4.0);
        prop_assert!((t2 - t).abs() <= 1e-14 * expiry * 4.0);
    }

    #[test]
    fn terminal_payoff_survives_transform(x in -5.0f64..5.0, r in -0.02f64..0.2, sigma in 0.05f64..1.0) {
        let c = OptionContract::new(100.0, 1.0).unwrap();
        let consts = constants(r, sigma).unwrap();
        let f = u_to_price(initial_condition(x, consts.k), HeatCoords { x, tau: 0.0 }, &c, &consts);
        let want = payoff_call(100.0 * x.exp(), 100.0);
        prop_assert!((f - want).abs() <= 1e-10 * want.max(1.0));
    }

    #[test]
    fn constants_are_consistent(r in -0.1f64..0.3, sigma in 0.01f64..2.0) {
        let a = constants(r, sigma).unwrap();
        let b = constants(r, sigma).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.beta <= 0.0);
        prop_assert_eq!(a.alpha, (1.0 - a.k) / 2.0);
    }
}

#[test]
fn tau_spans_the_full_horizon() {
    let c = OptionContract::new(100.0, 1.0).unwrap();
    assert_eq!(to_heat(90.0, 1.0, &c, 0.2).unwrap().tau, 0.0);
    assert!((to_heat(90.0, 0.0, &c, 0.2).unwrap().tau - 0.02).abs() < 1e-16);
}

#[test]
fn transformed_underlying_solves_heat_equation() {
    // f = S solves Black-Scholes; its image in (x, tau) must satisfy u_tau = u_xx
    let c = OptionContract::new(100.0, 1.0).unwrap();
    let (r, sigma) = (0.05, 0.2);
    let consts = constants(r, sigma).unwrap();
    let u = |x: f64, tau: f64| {
        let (s, _) = from_heat(HeatCoords { x, tau }, &c, sigma);
        price_to_u(s, HeatCoords { x, tau }, &c, &consts)
    };
    for (x, tau) in [(-0.5, 0.005), (0.0, 0.01), (0.3, 0.015), (1.2, 0.002)] {
        let h = 1e-4;
        let u_tau = (u(x, tau + h) - u(x, tau - h)) / (2.0 * h);
        let u_xx = (u(x + h, tau) - 2.0 * u(x, tau) + u(x - h, tau)) / (h * h);
        let rel = (u_tau - u_xx).abs() / u_tau.abs().max(u_xx.abs());
        assert!(rel < 1e-6, "({x}, {tau}): {u_tau} vs {u_xx}");

        // the opposite sign on beta does not give a heat-equation solution
        let wrong = |x: f64, tau: f64| u(x, tau) * (2.0 * consts.beta * tau).exp();
        let w_tau = (wrong(x, tau + h) - wrong(x, tau - h)) / (2.0 * h);
        let w_xx = (wrong(x + h, tau) - 2.0 * wrong(x, tau) + wrong(x - h, tau)) / (h * h);
        assert!((w_tau - w_xx).abs() / w_xx.abs() > 1e-2);
    }
}
