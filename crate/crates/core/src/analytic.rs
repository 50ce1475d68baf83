//! Closed-form machinery for the Black-Scholes equation
//! `r S f_S + f_t + (sigma^2/2) S^2 f_SS - r f = 0`.
//!
//! Covers the second-order Cauchy-Euler equation `x^2 y'' + a x y' + b y = 0`,
//! the separable solution family `f(S, t) = A(S) B(t)`, the call payoff, a
//! quadrature pricing oracle and implied-volatility inversion.

use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::quadrature;

/// A European call: strike `K`, expiry `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionContract {
    pub strike: f64,
    pub expiry: f64,
}

impl OptionContract {
    pub fn new(strike: f64, expiry: f64) -> Result<Self> {
        let c = Self { strike, expiry };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.strike.is_finite() && self.strike > 0.0, || {
            format!("strike must be > 0, got {}", self.strike)
        })?;
        ensure(self.expiry.is_finite() && self.expiry > 0.0, || {
            format!("expiry must be > 0, got {}", self.expiry)
        })
    }
}

/// Coefficients of `x^2 y'' + a x y' + b y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyEulerCoeffs {
    pub a: f64,
    pub b: f64,
}

/// `y = alpha x^m1 + beta x^m2` with distinct real exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSolution {
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PowerSolution {
    pub fn from_coeffs(coeffs: CauchyEulerCoeffs, alpha: f64, beta: f64) -> Result<Self> {
        let (m1, m2) = cauchy_euler_roots(coeffs)?;
        Ok(Self { m1, m2, alpha, beta })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        eval_cauchy_euler(self, x)
    }
}

/// Roots of `m^2 + (a-1) m + b = 0`, larger first.
pub fn cauchy_euler_roots(coeffs: CauchyEulerCoeffs) -> Result<(f64, f64)> {
    let CauchyEulerCoeffs { a, b } = coeffs;
    let disc = (a - 1.0).powi(2) - 4.0 * b;
    if !(disc > 0.0) {
        return Err(Error::UnsupportedRoots { discriminant: disc });
    }
    let sq = disc.sqrt();
    Ok((0.5 * ((1.0 - a) + sq), 0.5 * ((1.0 - a) - sq)))
}

pub fn eval_cauchy_euler(sol: &PowerSolution, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("power solution needs x > 0, got {x}")));
    }
    Ok(sol.alpha * x.powf(sol.m1) + sol.beta * x.powf(sol.m2))
}

/// Exponents of the spatial factor `A(S) = S^m`, i.e. the roots of
/// `(sigma^2/2) m (m-1) + r m - c = 0`.
pub fn separation_exponents(r: f64, sigma: f64, c: f64) -> Result<(f64, f64)> {
    ensure(sigma > 0.0, || format!("sigma must be > 0, got {sigma}"))?;
    let k = 2.0 * r / (sigma * sigma);
    let disc = (k - 1.0).powi(2) + 8.0 * c / (sigma * sigma);
    if disc < 0.0 {
        return Err(Error::UnsupportedRoots { discriminant: disc });
    }
    let sq = disc.sqrt();
    Ok((0.5 * ((1.0 - k) + sq), 0.5 * ((1.0 - k) - sq)))
}

/// `f(S, t) = [alpha S^m1 + beta S^m2] gamma e^{(r-c) t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationSolution {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub c: f64,
    pub r: f64,
    pub sigma: f64,
}

impl SeparationSolution {
    pub fn exponents(&self) -> Result<(f64, f64)> {
        separation_exponents(self.r, self.sigma, self.c)
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        eval_separation(self, s, t)
    }
}

pub fn eval_separation(sol: &SeparationSolution, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("separation solution needs S > 0, got {s}")));
    }
    let (m1, m2) = sol.exponents()?;
    let spatial = sol.alpha * s.powf(m1) + sol.beta * s.powf(m2);
    Ok(spatial * sol.gamma * ((sol.r - sol.c) * t).exp())
}

pub fn payoff_call(s: f64, strike: f64) -> f64 {
    (s - strike).max(0.0)
}

/// Number of standard deviations covered by the pricing quadrature.
const TAIL_SD: f64 = 10.0;
const PANELS: usize = 64;

/// Discounted risk-neutral expectation `e^{-r(T-t)} E[max(S_T - K, 0)]`
/// with `ln S_T ~ N(ln S + (r - sigma^2/2)(T-t), sigma^2 (T-t))`.
///
/// Evaluated by composite Gauss-Legendre quadrature in the standard-normal
/// variable, starting at the exercise boundary so the integrand is smooth.
pub fn closed_form_call(s: f64, t: f64, contract: &OptionContract, r: f64, sigma: f64) -> Result<f64> {
    contract.validate()?;
    ensure(s.is_finite() && s > 0.0, || format!("spot must be > 0, got {s}"))?;
    ensure(sigma.is_finite() && sigma > 0.0, || {
        format!("sigma must be > 0, got {sigma}")
    })?;
    let tau = contract.expiry - t;
    if !(tau > 0.0) {
        return Err(Error::Domain(format!(
            "valuation time {t} is not before expiry {}",
            contract.expiry
        )));
    }
    let sd = sigma * tau.sqrt();
    let drift = (r - 0.5 * sigma * sigma) * tau;
    let k = contract.strike;

    // S_T > K  <=>  z > z_star
    let z_star = ((k / s).ln() - drift) / sd;
    let lower = z_star.max(-TAIL_SD);
    // the S_T-weighted density is centred at z = sd
    let upper = TAIL_SD + sd;
    if lower >= upper {
        return Ok(0.0);
    }
    let norm = 1.0 / (2.0 * PI).sqrt();
    let integrand = |z: f64| (s * (drift + sd * z).exp() - k) * norm * (-0.5 * z * z).exp();
    let value = quadrature::integrate(integrand, lower, upper, PANELS);
    Ok((-r * tau).exp() * value.max(0.0))
}

pub const IMPLIED_VOL_BRACKET: (f64, f64) = (1e-6, 5.0);
pub const IMPLIED_VOL_MAX_ITER: usize = 200;
const PRICE_TOL: f64 = 1e-8;

/// Volatility reproducing `target_price` at `t = 0`, found by bisection.
pub fn implied_vol(target_price: f64, s: f64, contract: &OptionContract, r: f64) -> Result<f64> {
    contract.validate()?;
    ensure(s.is_finite() && s > 0.0, || format!("spot must be > 0, got {s}"))?;
    let lower = (s - contract.strike * (-r * contract.expiry).exp()).max(0.0);
    let upper = s;
    let no_solution = || Error::NoSolution {
        target: target_price,
        lower,
        upper,
    };
    if !(target_price > lower && target_price < upper) {
        return Err(no_solution());
    }

    let price = |sigma: f64| closed_form_call(s, 0.0, contract, r, sigma);
    let (mut lo, mut hi) = IMPLIED_VOL_BRACKET;
    let (p_lo, p_hi) = (price(lo)?, price(hi)?);
    if target_price < p_lo - PRICE_TOL || target_price > p_hi + PRICE_TOL {
        return Err(no_solution());
    }

    for _ in 0..IMPLIED_VOL_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let diff = price(mid)? - target_price;
        if diff == 0.0 {
            return Ok(mid);
        }
        if diff < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.max(1.0) {
            let sigma = 0.5 * (lo + hi);
            if (price(sigma)? - target_price).abs() <= PRICE_TOL {
                return Ok(sigma);
            }
            break;
        }
    }
    Err(Error::Convergence {
        iterations: IMPLIED_VOL_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn char_poly(a: f64, b: f64, m: f64) -> f64 {
        m * m + (a - 1.0) * m + b
    }

    #[test]
    fn cauchy_euler_root_examples() {
        assert_eq!(
            cauchy_euler_roots(CauchyEulerCoeffs { a: 0.0, b: 0.0 }).unwrap(),
            (1.0, 0.0)
        );
        let (m1, m2) = cauchy_euler_roots(CauchyEulerCoeffs { a: 0.0, b: -2.0 }).unwrap();
        assert_eq!((m1, m2), (2.0, -1.0));
        assert!(char_poly(0.0, -2.0, m1).abs() < 1e-12);
        assert!(char_poly(0.0, -2.0, m2).abs() < 1e-12);
    }

    #[test]
    fn repeated_and_complex_roots_rejected() {
        assert!(matches!(
            cauchy_euler_roots(CauchyEulerCoeffs { a: 1.0, b: 0.25 }),
            Err(Error::UnsupportedRoots { .. })
        ));
        // (a-1)^2 - 4b == 0
        assert!(matches!(
            cauchy_euler_roots(CauchyEulerCoeffs { a: 3.0, b: 1.0 }),
            Err(Error::UnsupportedRoots { .. })
        ));
    }

    #[test]
    fn power_solution_values() {
        let sq = PowerSolution {
            m1: 2.0,
            m2: 0.0,
            alpha: 1.0,
            beta: 0.0,
        };
        assert_eq!(sq.eval(3.0).unwrap(), 9.0);
        let zero = PowerSolution {
            m1: 2.0,
            m2: -1.0,
            alpha: 0.0,
            beta: 0.0,
        };
        assert_eq!(zero.eval(7.5).unwrap(), 0.0);
        let sol = PowerSolution::from_coeffs(CauchyEulerCoeffs { a: 0.0, b: -2.0 }, 1.0, 1.0).unwrap();
        assert!((sol.eval(2.0).unwrap() - 4.5).abs() < 1e-14);
        assert!(matches!(sol.eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(sol.eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn separation_exponent_special_roots() {
        let (r, sigma) = (0.05, 0.2);
        let (m1, m2) = separation_exponents(r, sigma, r).unwrap();
        assert!((m1 - 1.0).abs() < 1e-12 || (m2 - 1.0).abs() < 1e-12);
        let (m1, m2) = separation_exponents(r, sigma, 0.0).unwrap();
        assert!(m1.abs() < 1e-12 || m2.abs() < 1e-12);

        let c = 0.1;
        let (m1, m2) = separation_exponents(r, sigma, c).unwrap();
        for m in [m1, m2] {
            let res = 0.5 * sigma * sigma * m * (m - 1.0) + r * m - c;
            assert!(res.abs() < 1e-12, "residual {res}");
        }
        assert!(separation_exponents(r, sigma, -10.0).is_err());
        assert!(separation_exponents(r, 0.0, c).is_err());
    }

    #[test]
    fn separation_special_solutions() {
        let (r, sigma) = (0.05, 0.2);
        let (m1, _) = separation_exponents(r, sigma, r).unwrap();
        assert!((m1 - 1.0).abs() < 1e-12);
        let f_is_s = SeparationSolution {
            alpha: 1.0,
            beta: 0.0,
            gamma: 1.0,
            c: r,
            r,
            sigma,
        };
        for (s, t) in [(50.0, 0.0), (80.0, 0.7), (120.0, 3.0)] {
            assert!((f_is_s.eval(s, t).unwrap() - s).abs() < 1e-10 * s);
        }
        // c = 0 gives exponents {0, 1 - 2r/sigma^2 < 0}: m1 = 0 here
        let (m1, _) = separation_exponents(r, sigma, 0.0).unwrap();
        assert!(m1.abs() < 1e-12);
        let growth = SeparationSolution {
            alpha: 1.0,
            beta: 0.0,
            gamma: 1.0,
            c: 0.0,
            r,
            sigma,
        };
        assert!((growth.eval(80.0, 2.0).unwrap() - (r * 2.0).exp()).abs() < 1e-12);
        assert!(matches!(growth.eval(0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn payoff_values() {
        assert_eq!(payoff_call(150.0, 100.0), 50.0);
        assert_eq!(payoff_call(100.0, 100.0), 0.0);
        assert_eq!(payoff_call(0.0, 100.0), 0.0);
    }

    #[test]
    fn closed_form_limits() {
        let c = OptionContract::new(100.0, 1.0).unwrap();
        let p = closed_form_call(150.0, 0.0, &c, 0.0, 1e-12).unwrap();
        assert!((p - 50.0).abs() < 1e-6);
        let low = closed_form_call(100.0, 0.0, &c, 0.05, 0.2).unwrap();
        let high = closed_form_call(100.0, 0.0, &c, 0.05, 0.4).unwrap();
        assert!(high > low);
        assert!(matches!(
            closed_form_call(100.0, 1.0, &c, 0.05, 0.2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            closed_form_call(100.0, 1.5, &c, 0.05, 0.2),
            Err(Error::Domain(_))
        ));
        // unreachable strike
        let far = OptionContract::new(1e8, 1.0).unwrap();
        assert_eq!(closed_form_call(100.0, 0.0, &far, 0.05, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn implied_vol_bounds() {
        let c = OptionContract::new(100.0, 1.0).unwrap();
        let intrinsic = 120.0 - 100.0 * (-0.05f64).exp();
        assert!(matches!(
            implied_vol(intrinsic, 120.0, &c, 0.05),
            Err(Error::NoSolution { .. })
        ));
        assert!(matches!(
            implied_vol(intrinsic - 1.0, 120.0, &c, 0.05),
            Err(Error::NoSolution { .. })
        ));
        assert!(matches!(
            implied_vol(120.0, 120.0, &c, 0.05),
            Err(Error::NoSolution { .. })
        ));
        assert!(matches!(
            implied_vol(0.0, 80.0, &c, 0.05),
            Err(Error::NoSolution { .. })
        ));
    }

    #[test]
    fn implied_vol_round_trip() {
        let c = OptionContract::new(100.0, 1.0).unwrap();
        let p = closed_form_call(100.0, 0.0, &c, 0.05, 0.2).unwrap();
        assert!((implied_vol(p, 100.0, &c, 0.05).unwrap() - 0.2).abs() < 1e-6);
        let p = closed_form_call(120.0, 0.0, &c, 0.05, 0.8).unwrap();
        assert!((implied_vol(p, 120.0, &c, 0.05).unwrap() - 0.8).abs() < 1e-6);
    }
}
