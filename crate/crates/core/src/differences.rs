//! Certified signed finite differences of `log p̄(n)` and their two-sided
//! asymptotic bounds.
//!
//! The r-th forward difference of the log-counts,
//! `Δʳ log p̄(n) = ∑_i (−1)^(r−i) C(r,i) log p̄(n+i)`, alternates in sign;
//! the signed difference `(−1)^(r−1) Δʳ log p̄(n)` is the positive quantity
//! the toolkit bounds.  Writing the leading term as
//! `T̂(n) = (π²/8)·(μ̂−1)/μ̂³·e^{μ̂}` with `μ̂ = π√n`, the decomposition
//!
//! ```text
//! (−1)^(r−1) Δʳ log p̄(n) = smooth + correction
//! smooth      = (−1)^(r−1) Δʳ [ μ̂ − 3 log μ̂ + log(μ̂ − 1) ]
//! correction  = (−1)^(r−1) Δʳ log(1 + ê(n)),   ê = (p̄ − T̂)/T̂
//! ```
//!
//! holds identically (the constant `log(π²/8)` vanishes under differencing).
//! The smooth part admits explicit elementary bounds — a first-order sandwich
//! valid from n = 1 and, for r ≥ 2 and n ≥ 2r², a two-sided expansion with
//! the constants from [`crate::constants`] — while the correction is
//! eventually smaller than `n^{−(r+1)}`.
//!
//! All differences are assembled from endpoint-exact rational arithmetic:
//! each log is enclosed once, the binomial combination is carried out
//! exactly on the rational endpoints, and the result is rounded outward a
//! single time.  An iterated difference of intervals produces the same
//! endpoint selection, so the two assembly routes agree bit for bit.

use crate::constants::ConstantSet;
use crate::counts::OverpartitionTable;
use crate::formula::{growth_parameter, relative_remainder, FormulaError};
use crate::interval::{log_of_big_integer, Interval, IntervalError};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Errors from difference evaluation.
#[derive(Debug, thiserror::Error)]
pub enum DifferenceError {
    /// Difference order must be at least 1.
    #[error("difference order r must be ≥ 1, got {0}")]
    BadOrder(u32),
    /// Index must be at least 1 (the smooth part needs μ̂ > 1 ⇔ n ≥ 1).
    #[error("difference base index n must be ≥ 1, got {0}")]
    BadIndex(u64),
    /// The difference needs entries `n ..= n+r`, which exceed the table.
    #[error("difference at n = {n}, r = {r} needs table entries through {needed}, max is {max_n}")]
    TableTooShort {
        n: u64,
        r: u32,
        needed: u64,
        max_n: u64,
    },
    /// Higher-order bounds require `n ≥ 2r²`.
    #[error("higher-order bounds require n ≥ 2r² = {min_n}, got n = {n}")]
    BelowBoundRange { n: u64, min_n: u64 },
    /// The enclosure of `1 + ê(n)` was not certifiably positive.
    #[error("relative remainder at n = {0} is not certifiably above -1")]
    RemainderNotCertified(u64),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// One signed-difference evaluation: order `r ≥ 1`, base index `n ≥ 1`, the
/// exact table to difference, and the working precision.
#[derive(Debug, Clone, Copy)]
pub struct DifferenceRequest<'a> {
    pub r: u32,
    pub n: u64,
    pub table: &'a OverpartitionTable,
    pub bits: u32,
}

impl<'a> DifferenceRequest<'a> {
    pub fn new(
        r: u32,
        n: u64,
        table: &'a OverpartitionTable,
        bits: u32,
    ) -> Result<Self, DifferenceError> {
        if r == 0 {
            return Err(DifferenceError::BadOrder(r));
        }
        if n == 0 {
            return Err(DifferenceError::BadIndex(n));
        }
        let needed = n + r as u64;
        if needed > table.max_n() {
            return Err(DifferenceError::TableTooShort {
                n,
                r,
                needed,
                max_n: table.max_n(),
            });
        }
        Ok(DifferenceRequest { r, n, table, bits })
    }
}

/// Signed binomial coefficients of `(−1)^(r−1) Δʳ` applied at offsets
/// `0 ..= r`: the weight of the value at `n+i` is `(−1)^(i+1) C(r,i)`.
fn signed_weights(r: u32) -> Vec<Integer> {
    (0..=r)
        .map(|i| {
            let c = Integer::from(r).binomial(i);
            if i % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// Combine per-offset enclosures with the signed binomial weights exactly:
/// endpoints are converted to rationals, the weighted sum picks the lower or
/// upper endpoint according to the sign of each weight, and the exact
/// rational bounds are rounded outward once at the end.
fn signed_combination(values: &[Interval], r: u32, bits: u32) -> Interval {
    let weights = signed_weights(r);
    debug_assert_eq!(values.len(), weights.len());
    let mut lo = Rational::new();
    let mut hi = Rational::new();
    for (v, w) in values.iter().zip(&weights) {
        let (v_lo, v_hi) = (v.lo_rational(), v.hi_rational());
        if *w >= 0 {
            lo += Rational::from((w.clone(), Integer::from(1))) * v_lo;
            hi += Rational::from((w.clone(), Integer::from(1))) * v_hi;
        } else {
            lo += Rational::from((w.clone(), Integer::from(1))) * v_hi;
            hi += Rational::from((w.clone(), Integer::from(1))) * v_lo;
        }
    }
    Interval::from_rational_bounds(&lo, &hi, bits)
}

/// Iterated-difference assembly of the same signed difference, kept for the
/// equivalence property: interval subtraction is endpoint-linear, so `r`
/// exact subtraction passes select exactly the endpoints the binomial form
/// selects.
#[doc(hidden)]
pub fn signed_combination_iterated(values: &[Interval], r: u32, bits: u32) -> Interval {
    let mut level: Vec<(Rational, Rational)> = values
        .iter()
        .map(|v| (v.lo_rational(), v.hi_rational()))
        .collect();
    for _ in 0..r {
        level = level
            .windows(2)
            .map(|w| {
                let (a_lo, a_hi) = &w[0];
                let (b_lo, b_hi) = &w[1];
                (b_lo.clone() - a_hi.clone(), b_hi.clone() - a_lo.clone())
            })
            .collect();
    }
    let (lo, hi) = level.pop().expect("r + 1 values give one result");
    let signed = if r % 2 == 1 { (lo, hi) } else { (-hi, -lo) };
    Interval::from_rational_bounds(&signed.0, &signed.1, bits)
}

/// Enclosure of the signed difference `(−1)^(r−1) Δʳ log p̄(n)`.
pub fn signed_log_difference(req: &DifferenceRequest<'_>) -> Result<Interval, DifferenceError> {
    let DifferenceRequest { r, n, table, bits } = *req;
    let logs: Vec<Interval> = (0..=r as u64)
        .map(|i| log_of_big_integer(table.count(n + i).expect("validated"), bits))
        .collect::<Result<_, _>>()?;
    Ok(signed_combination(&logs, r, bits))
}

/// Enclosure of the smooth part of the difference decomposition:
/// `(−1)^(r-1) Δʳ f(n)` with `f(m) = μ̂(m) − 3 log μ̂(m) + log(μ̂(m) − 1)`.
pub fn smooth_difference(r: u32, n: u64, bits: u32) -> Result<Interval, DifferenceError> {
    if r == 0 {
        return Err(DifferenceError::BadOrder(r));
    }
    if n == 0 {
        return Err(DifferenceError::BadIndex(n));
    }
    let values: Vec<Interval> = (0..=r as u64)
        .map(|i| smooth_log_main(n + i, bits))
        .collect::<Result<_, _>>()?;
    Ok(signed_combination(&values, r, bits))
}

/// `f(m) = μ̂ − 3 log μ̂ + log(μ̂ − 1)`, the log of the leading term without
/// its constant factor.
fn smooth_log_main(m: u64, bits: u32) -> Result<Interval, DifferenceError> {
    let mu = growth_parameter(m, bits);
    let log_mu = mu.ln()?;
    let log_mu_minus = mu.sub(&Interval::one(bits)).ln()?;
    Ok(mu
        .sub(&log_mu.mul_rational(&Rational::from(3)))
        .add(&log_mu_minus))
}

/// Enclosure of the correction part
/// `(−1)^(r-1) Δʳ log(1 + ê(n))` computed from the exact table and the
/// leading term, never from the smooth part (the decomposition identity is
/// checked downstream, so the two routes must stay independent).
pub fn correction_difference(req: &DifferenceRequest<'_>) -> Result<Interval, DifferenceError> {
    let DifferenceRequest { r, n, table, bits } = *req;
    let values: Vec<Interval> = (0..=r as u64)
        .map(|i| {
            let e_hat = relative_remainder(table, n + i, bits)?;
            e_hat
                .ln_1p()
                .map_err(|_| DifferenceError::RemainderNotCertified(n + i))
        })
        .collect::<Result<_, _>>()?;
    Ok(signed_combination(&values, r, bits))
}

/// First-order sandwich for the smooth part, valid for every n ≥ 1:
///
/// ```text
/// lower = π/(2√(n+1)) − 3/(2n)     + π/(2√(n+1)(μ̂(n+1) − 1))
/// upper = π/(2√n)     − 3/(2(n+1)) + π/(2√n(μ̂(n) − 1))
/// ```
///
/// and `lower ≤ smooth_difference(1, n) ≤ upper`.
pub fn first_order_bounds(n: u64, bits: u32) -> Result<(Interval, Interval), DifferenceError> {
    if n == 0 {
        return Err(DifferenceError::BadIndex(n));
    }
    let bound_at = |m: u64, subtract_centered_at: u64| -> Result<Interval, DifferenceError> {
        let pi = Interval::pi(bits);
        let two_sqrt = Interval::from_u64(m, bits)
            .sqrt()?
            .mul_rational(&Rational::from(2));
        let first = pi.div(&two_sqrt)?;
        let second = Interval::from_rational(&Rational::from((3, 2 * subtract_centered_at)), bits);
        let mu_minus = growth_parameter(m, bits).sub(&Interval::one(bits));
        let third = pi.div(&two_sqrt.mul(&mu_minus))?;
        Ok(first.sub(&second).add(&third))
    };
    let upper = bound_at(n, n + 1)?;
    let lower = bound_at(n + 1, n)?;
    Ok((lower, upper))
}

/// Two-sided bounds for the smooth part at order `r ≥ 2`, valid for
/// `n ≥ 2r²`:
///
/// ```text
/// C(r)/n^{r−1/2} − C₁(r)/n^r
///   <  smooth  <
/// C(r)/n^{r−1/2} − (r−1)!/(2^r n^r) + C₂(r)/n^{r+1/2}
/// ```
pub fn higher_order_bounds(
    constants: &ConstantSet,
    n: u64,
    bits: u32,
) -> Result<(Interval, Interval), DifferenceError> {
    let r = constants.r;
    let min_n = 2 * (r as u64) * (r as u64);
    if n < min_n {
        return Err(DifferenceError::BelowBoundRange { n, min_n });
    }
    let c = constants.leading_interval(bits);
    let c1 = constants.lower_offset_interval(bits);
    let c2 = constants.upper_offset_interval(bits);
    let n_r = Interval::from_integer(&Integer::from(n).pow(r), bits);
    let n_r_minus_half = Interval::from_u64(n, bits).pow_rational(2 * r as i32 - 1, 2)?;
    let n_r_plus_half = Interval::from_u64(n, bits).pow_rational(2 * r as i32 + 1, 2)?;
    let main = c.div(&n_r_minus_half)?;
    let lower = main.sub(&c1.div(&n_r)?);
    let factorial_term = Interval::from_rational(
        &Rational::from((factorial(r - 1), Integer::from(1) << r)),
        bits,
    )
    .div(&n_r)?;
    let upper = main.sub(&factorial_term).add(&c2.div(&n_r_plus_half)?);
    Ok((lower, upper))
}

pub(crate) fn factorial(m: u32) -> Integer {
    Integer::factorial(m).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::constants_for;
    use crate::counts::build_table;
    use crate::interval::{certified_compare, CertifiedOrder, PrecisionPolicy};

    #[test]
    fn order_one_is_a_log_ratio() {
        let table = build_table(20).unwrap();
        let req = DifferenceRequest::new(1, 10, &table, 128).unwrap();
        let d = signed_log_difference(&req).unwrap();
        // Δ log p̄(10) = log(p̄(11)/p̄(10)) = log(344/232).
        let direct = log_of_big_integer(&Integer::from(344), 128)
            .unwrap()
            .sub(&log_of_big_integer(&Integer::from(232), 128).unwrap());
        assert!(d.encloses(&direct) || direct.encloses(&d));
        let mid = d.midpoint_f64();
        assert!((mid - (344f64 / 232f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn order_two_sign_convention() {
        // The signed difference at r = 2 is 2 log p̄(n+1) − log p̄(n) − log p̄(n+2).
        let table = build_table(20).unwrap();
        let n = 5u64;
        let req = DifferenceRequest::new(2, n, &table, 128).unwrap();
        let d = signed_log_difference(&req).unwrap();
        let l = |m: u64| table.count(m).unwrap().to_f64().ln();
        let expected = 2.0 * l(n + 1) - l(n) - l(n + 2);
        assert!((d.midpoint_f64() - expected).abs() < 1e-12);
        // p̄ is log-concave from n = 4, so the signed second difference is
        // positive at 344 (and already at 5).
        assert!(d.lo() > &0);
    }

    #[test]
    fn binomial_and_iterated_assembly_agree_bitwise() {
        let table = build_table(40).unwrap();
        for r in 1..=4u32 {
            for n in [1u64, 7, 20] {
                let logs: Vec<Interval> = (0..=r as u64)
                    .map(|i| log_of_big_integer(table.count(n + i).unwrap(), 160).unwrap())
                    .collect();
                let a = signed_combination(&logs, r, 160);
                let b = signed_combination_iterated(&logs, r, 160);
                assert!(a.lo() == b.lo() && a.hi() == b.hi(), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn decomposition_identity_residual_encloses_zero() {
        let table = build_table(1004).unwrap();
        for r in 1..=4u32 {
            for n in [100u64, 500, 1000] {
                let bits = PrecisionPolicy::default().working_bits(n, r);
                let req = DifferenceRequest::new(r, n, &table, bits).unwrap();
                let total = signed_log_difference(&req).unwrap();
                let smooth = smooth_difference(r, n, bits).unwrap();
                let correction = correction_difference(&req).unwrap();
                let residual = total.sub(&smooth.add(&correction));
                assert!(
                    residual.contains_zero(),
                    "identity fails at r={r} n={n}: {residual}"
                );
                assert!(residual.width().to_f64() < 1e-25, "loose at r={r} n={n}");
            }
        }
    }

    #[test]
    fn first_order_sandwich_reference_point() {
        // At n = 1: lower ≈ −0.06667 < H₁ ≈ 0.73633 < upper ≈ 1.55427.
        let table = build_table(3).unwrap();
        let (lower, upper) = first_order_bounds(1, 128).unwrap();
        assert!(lower.lo() > &-0.0667 && lower.hi() < &-0.0666);
        assert!(upper.lo() > &1.5542 && upper.hi() < &1.5543);
        let h1 = smooth_difference(1, 1, 128).unwrap();
        assert!(h1.lo() > &0.7363 && h1.hi() < &0.7364);
        assert_eq!(certified_compare(&lower, &h1), CertifiedOrder::Less);
        assert_eq!(certified_compare(&h1, &upper), CertifiedOrder::Less);
        drop(table);
    }

    #[test]
    fn higher_order_sandwich_at_boundary() {
        let policy = PrecisionPolicy::default();
        for (r, ns) in [(2u32, vec![8u64, 132, 344]), (3, vec![18, 100, 1486])] {
            let constants = constants_for(r, &policy).unwrap();
            for n in ns {
                let bits = policy.working_bits(n, r);
                let (lower, upper) = higher_order_bounds(&constants, n, bits).unwrap();
                let h = smooth_difference(r, n, bits).unwrap();
                assert_eq!(
                    certified_compare(&lower, &h),
                    CertifiedOrder::Less,
                    "lower fails r={r} n={n}"
                );
                assert_eq!(
                    certified_compare(&h, &upper),
                    CertifiedOrder::Less,
                    "upper fails r={r} n={n}"
                );
            }
        }
    }

    #[test]
    fn bounds_reject_out_of_range_inputs() {
        let policy = PrecisionPolicy::default();
        let constants = constants_for(2, &policy).unwrap();
        assert!(matches!(
            higher_order_bounds(&constants, 7, 128),
            Err(DifferenceError::BelowBoundRange { n: 7, min_n: 8 })
        ));
        assert!(matches!(
            first_order_bounds(0, 128),
            Err(DifferenceError::BadIndex(0))
        ));
        let table = build_table(10).unwrap();
        assert!(matches!(
            DifferenceRequest::new(0, 1, &table, 64),
            Err(DifferenceError::BadOrder(0))
        ));
        assert!(matches!(
            DifferenceRequest::new(2, 9, &table, 64),
            Err(DifferenceError::TableTooShort { needed: 11, .. })
        ));
    }

    #[test]
    fn correction_is_small_at_moderate_index() {
        let table = build_table(160).unwrap();
        let policy = PrecisionPolicy::default();
        let bits = policy.working_bits(150, 1);
        let req = DifferenceRequest::new(1, 150, &table, bits).unwrap();
        let g = correction_difference(&req).unwrap().abs();
        // |G₁(150)| < 150⁻².
        let bound = Interval::from_rational(&Rational::from((1, 150 * 150)), bits);
        assert_eq!(certified_compare(&g, &bound), CertifiedOrder::Less);
    }
}
