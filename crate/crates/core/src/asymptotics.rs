//! Finite-size growth estimators, the reference activity `z0 = 1/(K e)`, the
//! Penrose upper bound `K^K / (K-1)^(K-1)`, and the truncated large-`d`
//! expansions of the tree and animal growth constants.
//!
//! None of these report extrapolated limits: estimators are raw ratios and
//! roots of exact counts, and series values are labelled truncations.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::enumeration::BigCount;
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::real::{Precision, Real};

/// Highest exponent order with known coefficients.
pub const MAX_SERIES_ORDER: usize = 5;

pub fn z0(spec: &LatticeSpec, prec: Precision) -> Real {
    z0_for_degree(spec.degree(), prec)
}

pub fn z0_for_degree(k: u64, prec: Precision) -> Real {
    (&Real::from_u64(k, prec) * &Real::e(prec)).recip()
}

#[derive(Clone, Debug)]
pub struct PenroseBounds {
    pub k: u64,
    /// `K^K / (K-1)^(K-1)`
    pub upper: Real,
    /// `K e`
    pub main_term: Real,
}

impl PenroseBounds {
    /// `upper / (K e)`.
    pub fn ratio(&self) -> Real {
        &self.upper / &self.main_term
    }
}

pub fn penrose_bounds(k: u64, prec: Precision) -> Result<PenroseBounds> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("Penrose bound needs K >= 2, got {k}")));
    }
    let kr = Real::from_u64(k, prec);
    let m = Real::from_u64(k - 1, prec);
    // K * (K/(K-1))^(K-1), evaluated through logarithms.
    let upper = &kr * &(&m * &(&kr / &m).ln()).exp();
    Ok(PenroseBounds {
        k,
        upper,
        main_term: &kr * &Real::e(prec),
    })
}

/// `K^K / (K-1)^(K-1)` as an exact rational.
pub fn penrose_upper_exact(k: u64) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("Penrose bound needs K >= 2, got {k}")));
    }
    let e = usize::try_from(k).map_err(|_| Error::InvalidInput("K too large".into()))?;
    Ok(BigRational::new(
        BigInt::from(num_traits::pow(BigUint::from(k), e)),
        BigInt::from(num_traits::pow(BigUint::from(k - 1), e - 1)),
    ))
}

/// An exponent coefficient `a + b/e + c/e^2` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoefficient {
    pub rational: BigRational,
    pub per_e: BigRational,
    pub per_e2: BigRational,
}

impl SeriesCoefficient {
    fn from_parts(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Self {
        let q = |(n, d): (i64, i64)| BigRational::new(n.into(), d.into());
        SeriesCoefficient {
            rational: q(a),
            per_e: q(b),
            per_e2: q(c),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.per_e.is_zero() && self.per_e2.is_zero()
    }

    pub fn value(&self, prec: Precision) -> Real {
        let inv_e = Real::e(prec).recip();
        let inv_e2 = &inv_e * &inv_e;
        let a = Real::from_ratio(&self.rational, prec);
        let b = &Real::from_ratio(&self.per_e, prec) * &inv_e;
        let c = &Real::from_ratio(&self.per_e2, prec) * &inv_e2;
        &(&a + &b) + &c
    }
}

const TAU_RATIONAL: [(i64, i64); MAX_SERIES_ORDER] = [(1, 2), (8, 3), (85, 12), (931, 20), (2777, 10)];
const ALPHA_PER_E: [(i64, i64); MAX_SERIES_ORDER] = [(0, 1), (-1, 2), (-1, 4), (-139, 48), (177, 32)];
const ALPHA_PER_E2: [(i64, i64); MAX_SERIES_ORDER] = [(0, 1), (0, 1), (0, 1), (-1, 8), (-29, 12)];

/// Coefficients `c_1..c_5` in `tau = sigma e exp(-sum c_i sigma^-i)`.
pub fn tau_coefficients() -> Vec<SeriesCoefficient> {
    TAU_RATIONAL
        .iter()
        .map(|&a| SeriesCoefficient::from_parts(a, (0, 1), (0, 1)))
        .collect()
}

/// Coefficients `c_1..c_5` in `alpha = sigma e exp(-sum c_i sigma^-i)`.
pub fn alpha_coefficients() -> Vec<SeriesCoefficient> {
    (0..MAX_SERIES_ORDER)
        .map(|i| SeriesCoefficient::from_parts(TAU_RATIONAL[i], ALPHA_PER_E[i], ALPHA_PER_E2[i]))
        .collect()
}

/// A truncated growth-constant expansion at `sigma = 2d - 1`.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub sigma: u64,
    pub order: usize,
    pub value: Real,
}

fn evaluate_series(
    coeffs: &[SeriesCoefficient],
    d: usize,
    order: usize,
    prec: Precision,
) -> Result<SeriesValue> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::OrderUnavailable(order));
    }
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let sigma = 2 * d as u64 - 1;
    let inv_sigma = Real::from_u64(sigma, prec).recip();
    let mut exponent = Real::zero(prec);
    let mut power = Real::one(prec);
    for c in &coeffs[..order] {
        power = &power * &inv_sigma;
        exponent = &exponent - &(&c.value(prec) * &power);
    }
    let lead = &Real::from_u64(sigma, prec) * &Real::e(prec);
    Ok(SeriesValue {
        sigma,
        order,
        value: &lead * &exponent.exp(),
    })
}

pub fn tau_series(d: usize, order: usize, prec: Precision) -> Result<SeriesValue> {
    evaluate_series(&tau_coefficients(), d, order, prec)
}

pub fn alpha_series(d: usize, order: usize, prec: Precision) -> Result<SeriesValue> {
    evaluate_series(&alpha_coefficients(), d, order, prec)
}

/// Root and ratio estimators over `counts[0..=n_max]`.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    pub n_max: usize,
    /// `counts[n]^(1/n)` for `n = 1..=n_max`; entry `i` is `n = i + 1`.
    pub root_estimates: Vec<Real>,
    /// `counts[n+1] / counts[n]` for `n = 0..n_max`.
    pub ratio_estimates: Vec<Real>,
}

pub fn growth_estimates(counts: &[BigCount], prec: Precision) -> Result<GrowthEstimate> {
    if counts.is_empty() {
        return Err(Error::InvalidInput("no counts".into()));
    }
    if let Some(n) = counts.iter().position(Zero::is_zero) {
        return Err(Error::InvalidInput(format!("count at n={n} is zero")));
    }
    let reals: Vec<Real> = counts.iter().map(|c| Real::from_biguint(c, prec)).collect();
    let root_estimates = reals
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c.root(n as u64))
        .collect();
    let ratio_estimates = reals.windows(2).map(|w| &w[1] / &w[0]).collect();
    Ok(GrowthEstimate {
        n_max: counts.len() - 1,
        root_estimates,
        ratio_estimates,
    })
}

/// `sum_n counts[n] z^n` over all supplied counts.
pub fn one_point_partial(counts: &[BigCount], z: &Real) -> Real {
    let prec = z.precision();
    let mut acc = Real::zero(prec);
    let mut power = Real::one(prec);
    for c in counts {
        acc = &acc + &(&Real::from_biguint(c, prec) * &power);
        power = &power * z;
    }
    acc
}

pub const G1_LABEL: &str = "finite-n diagnostic";

/// `K * zhat * ghat` with `zhat = counts[N] / counts[N+1]` and `ghat` the
/// one-point partial sum through `N` at `zhat`. Carries no convergence claim.
#[derive(Clone, Debug)]
pub struct G1Diagnostic {
    pub n: usize,
    pub z_hat: Real,
    pub g_hat: Real,
    pub value: Real,
    pub label: &'static str,
}

pub fn g1_diagnostic(k: u64, counts: &[BigCount], n: usize, prec: Precision) -> Result<G1Diagnostic> {
    if counts.len() < n + 2 {
        return Err(Error::InvalidInput(format!(
            "diagnostic at N={n} needs counts through N+1, have {}",
            counts.len()
        )));
    }
    if counts[..=n + 1].iter().any(Zero::is_zero) {
        return Err(Error::InvalidInput("zero count".into()));
    }
    let z_hat = &Real::from_biguint(&counts[n], prec) / &Real::from_biguint(&counts[n + 1], prec);
    let g_hat = one_point_partial(&counts[..=n], &z_hat);
    let value = &(&Real::from_u64(k, prec) * &z_hat) * &g_hat;
    Ok(G1Diagnostic {
        n,
        z_hat,
        g_hat,
        value,
        label: G1_LABEL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol
    }

    #[test]
    fn z0_values() {
        let nn1 = LatticeSpec::nearest_neighbour(1).unwrap();
        assert_eq!(z0(&nn1, p()).to_decimal_string(5), "1.8394e-1");
        let so = LatticeSpec::spread_out(2, 1).unwrap();
        let expect = (&Real::from_u64(8, p()) * &Real::e(p())).recip();
        assert!(close(&z0(&so, p()), &expect, 1e-48));
    }

    #[test]
    fn penrose_small_k() {
        let b2 = penrose_bounds(2, p()).unwrap();
        assert!(close(&b2.upper, &Real::from_u64(4, p()), 1e-45));
        let b4 = penrose_bounds(4, p()).unwrap();
        let exact = penrose_upper_exact(4).unwrap();
        assert_eq!(exact, BigRational::new(256.into(), 27.into()));
        assert!(close(&b4.upper, &Real::from_ratio(&exact, p()), 1e-45));
        assert!(penrose_bounds(1, p()).is_err());
        for k in [3u64, 10, 57] {
            let exact = Real::from_ratio(&penrose_upper_exact(k).unwrap(), p());
            let via_logs = penrose_bounds(k, p()).unwrap().upper;
            assert!(((&exact - &via_logs) / exact).abs().to_f64() < 1e-45);
        }
    }

    #[test]
    fn penrose_large_k() {
        let b = penrose_bounds(1_000_000, p()).unwrap();
        let gap = (&b.ratio() - &Real::one(p())).abs().to_f64();
        assert!(gap < 1e-5);
        // ratio ~ exp(-1/(2(K-1)))
        assert!((gap - 0.5e-6).abs() < 1e-9);
    }

    #[test]
    fn tau_values() {
        let t0 = tau_series(2, 0, p()).unwrap();
        assert_eq!(t0.sigma, 3);
        assert!(close(&t0.value, &(&Real::from_u64(3, p()) * &Real::e(p())), 1e-45));
        let t1 = tau_series(2, 1, p()).unwrap();
        let expect = &(&Real::from_u64(3, p()) * &Real::e(p()))
            * &(-Real::from_u64(6, p()).recip()).exp();
        assert!(close(&t1.value, &expect, 1e-45));
        assert!(matches!(tau_series(2, 6, p()), Err(Error::OrderUnavailable(6))));
        assert!(matches!(alpha_series(2, 9, p()), Err(Error::OrderUnavailable(9))));
    }

    #[test]
    fn coefficient_tables() {
        let tau = tau_coefficients();
        let alpha = alpha_coefficients();
        assert!(tau.iter().all(SeriesCoefficient::is_rational));
        assert_eq!(tau[0], alpha[0]);
        assert_eq!(alpha[3].per_e2, BigRational::new((-1).into(), 8.into()));
        assert_eq!(alpha[4].per_e, BigRational::new(177.into(), 32.into()));
    }

    #[test]
    fn alpha_exceeds_tau_at_d10() {
        let a = alpha_series(10, 5, p()).unwrap().value;
        let t = tau_series(10, 5, p()).unwrap().value;
        assert!(a > t);
    }

    #[test]
    fn estimators() {
        let counts: Vec<BigCount> = (1..=10u32).map(BigCount::from).collect();
        let g = growth_estimates(&counts, p()).unwrap();
        assert_eq!(g.n_max, 9);
        assert_eq!(g.root_estimates.len(), 9);
        assert_eq!(g.ratio_estimates.len(), 9);
        assert!(close(&g.ratio_estimates[8], &Real::from_ratio(&BigRational::new(10.into(), 9.into()), p()), 1e-45));
        let mut bad = counts.clone();
        bad[3] = BigCount::zero();
        assert!(growth_estimates(&bad, p()).is_err());
    }

    #[test]
    fn one_point_sums() {
        let counts: Vec<BigCount> = vec![1u32.into()];
        let z = Real::from_u64(3, p());
        assert_eq!(one_point_partial(&counts, &z), Real::one(p()));
    }

    #[test]
    fn g1_for_segments() {
        // t_n = n + 1: zhat = 11/12, ghat = sum_{n<=10} (n+1) zhat^n.
        let counts: Vec<BigCount> = (1..=12u32).map(BigCount::from).collect();
        let g = g1_diagnostic(2, &counts, 10, p()).unwrap();
        let z = 11.0f64 / 12.0;
        let ghat: f64 = (0..=10).map(|n| (n + 1) as f64 * z.powi(n)).sum();
        assert!((g.value.to_f64() - 2.0 * z * ghat).abs() < 1e-9);
        assert!(g.value.is_positive() && g.value.is_finite());
        assert_eq!(g.label, G1_LABEL);
        assert!(g1_diagnostic(2, &counts, 11, p()).is_err());
    }
}
