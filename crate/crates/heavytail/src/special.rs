//! Special functions, evaluated in `f64`.
//!
//! Thin front over statrs plus a trigamma implementation (statrs stops at
//! digamma). Quantiles and likelihood terms do not need more than double
//! precision anywhere in the crate, so generic callers convert.

use statrs::distribution::{ContinuousCDF, StudentsT};

pub use statrs::function::erf::{erf, erfc};
pub use statrs::function::gamma::{digamma, ln_gamma};

/// Derivative of digamma via the recurrence `psi'(x) = psi'(x+1) + 1/x^2`
/// and the asymptotic series for large argument.
pub fn trigamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0
            + inv * (0.5
                + inv * (1.0 / 6.0 + inv2 * (-1.0 / 30.0 + inv2 * (1.0 / 42.0 - inv2 / 30.0)))));
    acc + series
}

/// Two-sided Student-t quantile: `P(T <= t) = p` with `df` degrees of
/// freedom.
pub fn student_t_quantile(p: f64, df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df)
        .expect("df > 0 checked by caller")
        .inverse_cdf(p)
}
