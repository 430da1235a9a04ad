use crate::error::{Error, Result};

/// `gamma = d e^delta`: the absolute bound implied by relative privacy `delta`.
pub fn gamma_from_relative(d: f64, delta: f64) -> Result<f64> {
    if !(d > 0.0 && d < 1.0) || !(delta >= 0.0) {
        return Err(Error::InvalidParameter(format!("need 0 < d < 1 and delta >= 0 (got {d}, {delta})")));
    }
    let gamma = d * delta.exp();
    if gamma >= 1.0 {
        return Err(Error::DegenerateBudget(gamma));
    }
    Ok(gamma)
}

/// `delta = ln((gamma/d)(1-d)/(1-gamma))`.
pub fn delta_from_absolute(d: f64, gamma: f64) -> Result<f64> {
    if !(0.0 < d && d < gamma && gamma < 1.0) {
        return Err(Error::BudgetOrder { d, gamma });
    }
    Ok(((gamma / d) * ((1.0 - d) / (1.0 - gamma))).ln())
}

/// Indistinguishability level `2 delta + 2 ln 2` implied by relative privacy `delta`.
pub fn epsilon_from_relative(delta: f64) -> f64 {
    2.0 * delta + 2.0 * std::f64::consts::LN_2
}

/// `(1/c)(gamma/(1-gamma))(n/sqrt(m))`.
///
/// An order-of-magnitude threshold only: for priors `d` at or above it, no
/// meaningful algorithm is `(d, gamma)`-private. `c` is the caller's choice
/// of the unspecified constant.
pub fn impossibility_frontier(n: u64, m: u64, gamma: f64, c: f64) -> f64 {
    (1.0 / c) * (gamma / (1.0 - gamma)) * (n as f64 / (m as f64).sqrt())
}

/// Range `[(1 - d e^delta)/(1-d), (1 - d e^-delta)/(1-d)]` for the posterior
/// over prior ratio of the event "t absent", given the ratio for "t present"
/// lies in `[e^-delta, e^delta]` and the prior of t is `d`.
pub fn complement_ratio_bounds(d: f64, delta: f64) -> Result<(f64, f64)> {
    gamma_from_relative(d, delta)?;
    let lo = (1.0 - d * delta.exp()) / (1.0 - d);
    let hi = (1.0 - d * (-delta).exp()) / (1.0 - d);
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn examples() {
        assert_eq!(gamma_from_relative(0.3, 0.0).unwrap(), 0.3);
        assert!((gamma_from_relative(0.1, LN_2).unwrap() - 0.2).abs() < 1e-15);
        assert!(matches!(gamma_from_relative(0.5, 1.0), Err(Error::DegenerateBudget(_))));
        assert!((delta_from_absolute(0.1, 0.2).unwrap() - 2.25f64.ln()).abs() < 1e-15);
        assert!(delta_from_absolute(0.1, 0.1 + 1e-9).unwrap() < 1e-7);
        assert!(delta_from_absolute(0.2, 0.1).is_err());
        assert_eq!(epsilon_from_relative(0.0), 2.0 * LN_2);
        assert!((epsilon_from_relative(LN_2) - 4.0 * LN_2).abs() < 1e-15);
        assert!((impossibility_frontier(100, 1_000_000, 0.2, 1.0) - 0.025).abs() < 1e-15);
        let a = impossibility_frontier(10, 100, 0.3, 2.0);
        let b = impossibility_frontier(10, 400, 0.3, 2.0);
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_dominates() {
        for i in 1..10 {
            for j in i + 1..10 {
                let (d, g) = (i as f64 / 10.0, j as f64 / 10.0);
                let delta = delta_from_absolute(d, g).unwrap();
                match gamma_from_relative(d, delta) {
                    Ok(back) => assert!(back >= g - 1e-12),
                    Err(Error::DegenerateBudget(back)) => assert!(back >= g),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
