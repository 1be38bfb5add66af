//! Certified evaluation of the explicit series for overpartition counts.
//!
//! The counting function admits the exact convergent expansion
//!
//! ```text
//! p̄(n) = 1/(2π) ∑_{k ≥ 1, 2∤k} √k ∑_{h: gcd(h,k)=1} ω(h,k)²/ω(2h,k)
//!          · e^{−2πinh/k} · d/dn [ sinh(π√n/k) / √n ]
//! ```
//!
//! where `ω(h,k) = exp(πi ∑_{r=1}^{k−1} (r/k)(hr/k − ⌊hr/k⌋ − 1/2))` is the
//! standard multiplier from the modular transformation of the generating
//! function.  Everything in the phase factors is an exact rational multiple
//! of π, so a truncation of the series evaluates to a certified interval:
//! the real part via exact-rational cosine phases and the imaginary part as
//! a residual whose enclosure must contain zero (conjugate terms cancel).
//!
//! Truncating after the odd indices `k ≤ N` leaves a tail bounded by
//! `N^{5/2}/(π n^{3/2}) · sinh(π√n/N)` ([`truncation_error_bound`]), and the
//! `k = 1` term splits off the leading exponential
//! `T̂(n) = (1/8n)(1 − 1/μ̂)e^{μ̂}` with `μ̂ = π√n` ([`leading_term`]), whose
//! relative error `ê(n) = (p̄(n) − T̂(n))/T̂(n)` ([`relative_remainder`]) is
//! the quantity the difference bounds in [`crate::differences`] control.

use crate::counts::OverpartitionTable;
use crate::interval::{cos_pi_rational, sin_pi_rational, Interval, IntervalError};
use rug::{Integer, Rational};

/// Errors from series evaluation and its inputs.
#[derive(Debug, thiserror::Error)]
pub enum FormulaError {
    /// `h` must satisfy `0 ≤ h < k`.
    #[error("phase numerator h = {h} out of range for modulus k = {k}")]
    PhaseOutOfRange { h: u64, k: u64 },
    /// The multiplier is only defined for coprime `h, k`.
    #[error("phase requires gcd(h, k) = 1, got h = {h}, k = {k}")]
    NotCoprime { h: u64, k: u64 },
    /// The series and its multiplier are evaluated at odd moduli only.
    #[error("modulus k = {0} must be odd and positive")]
    BadModulus(u64),
    /// Series parameters out of domain.
    #[error("series parameters require n ≥ 1 and terms ≥ 1, got n = {n}, terms = {terms}")]
    BadParameters { n: u64, terms: u64 },
    /// The imaginary part of the truncated series failed to enclose zero,
    /// which indicates an internal inconsistency in the phase computation.
    #[error(
        "imaginary part of the truncated series excludes zero: [{lo}, {hi}] \
         (internal inconsistency)"
    )]
    ImaginaryResidual { lo: String, hi: String },
    /// Index beyond the supplied exact table.
    #[error("index {n} exceeds table maximum {max_n}")]
    BeyondTable { n: u64, max_n: u64 },
    /// Propagated interval domain failure.
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Exact phase of the series multiplier: `ω(h,k) = e^{iπ t}` with `t` a
/// reduced rational, normalized into `(−1, 1]`.
///
/// Invariants: `|t| ≤ 1` after normalization and the reduced denominator
/// divides `2k²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierPhase {
    half_turns: Rational,
}

impl MultiplierPhase {
    /// Evaluate the defining sum
    /// `t = ∑_{r=1}^{k−1} (r/k)(hr/k − ⌊hr/k⌋ − 1/2)`
    /// in exact rational arithmetic and normalize modulo 2 into `(−1, 1]`.
    pub fn new(h: u64, k: u64) -> Result<Self, FormulaError> {
        if k == 0 || k % 2 == 0 {
            return Err(FormulaError::BadModulus(k));
        }
        if h >= k && !(k == 1 && h == 0) {
            return Err(FormulaError::PhaseOutOfRange { h, k });
        }
        if Integer::from(h).gcd(&Integer::from(k)) != 1 {
            return Err(FormulaError::NotCoprime { h, k });
        }
        // ∑ r (hr mod k)/k² − (1/2) ∑ r/k  =  [∑ r (2(hr mod k) − k)] / (2k²)
        let ki = Integer::from(k);
        let mut numerator = Integer::new();
        for r in 1..k {
            let residue = Integer::from(h) * r % &ki;
            numerator += Integer::from(r) * (residue * 2u32 - &ki);
        }
        let t = Rational::from((numerator, Integer::from(2) * &ki * &ki));
        Ok(MultiplierPhase {
            half_turns: normalize_half_turns(t),
        })
    }

    /// The phase as an exact rational number of half-turns: `ω = e^{iπ t}`.
    pub fn half_turns(&self) -> &Rational {
        &self.half_turns
    }
}

/// Reduce a phase modulo 2 into the canonical window `(−1, 1]`.
fn normalize_half_turns(t: Rational) -> Rational {
    // Shift so the window maps to [0, 2): compute (t + 1) mod 2 − 1, placing
    // the result in (−1, 1] by flooring (t + 1)/2... use ceiling convention:
    // r = t − 2·⌈(t − 1)/2⌉ lands in (−1, 1].
    let shifted = (t.clone() - 1u32) / 2u32;
    let mut ceil = Integer::new();
    rug::Assign::assign(&mut ceil, shifted.ceil_ref());
    let reduced = t - Rational::from(2) * Rational::from(ceil);
    debug_assert!(reduced > -1 && reduced <= 1);
    reduced
}

/// Parameters of one truncated-series evaluation: the index `n`, the last
/// series modulus `terms` (only odd `k ≤ terms` contribute), and the working
/// precision in bits.
#[derive(Debug, Clone, Copy)]
pub struct SeriesParams {
    pub n: u64,
    pub terms: u64,
    pub bits: u32,
}

impl SeriesParams {
    pub fn new(n: u64, terms: u64, bits: u32) -> Result<Self, FormulaError> {
        if n == 0 || terms == 0 {
            return Err(FormulaError::BadParameters { n, terms });
        }
        Ok(SeriesParams { n, terms, bits })
    }
}

/// Enclosure of `μ̂(n) = π√n`, the growth parameter of the main term.
pub fn growth_parameter(n: u64, bits: u32) -> Interval {
    let sqrt_n = Interval::from_u64(n, bits).sqrt().expect("n ≥ 0");
    Interval::pi(bits).mul(&sqrt_n)
}

/// Enclosure of `d/dn [ sinh(π√n/k)/√n ]` in closed form:
///
/// ```text
/// (π/(2kn)) cosh(π√n/k) − (1/(2n^{3/2})) sinh(π√n/k)
/// ```
pub fn sinh_ratio_derivative(n: u64, k: u64, bits: u32) -> Result<Interval, FormulaError> {
    if n == 0 {
        return Err(FormulaError::BadParameters { n, terms: k });
    }
    if k == 0 || k % 2 == 0 {
        return Err(FormulaError::BadModulus(k));
    }
    let pi = Interval::pi(bits);
    let arg = growth_parameter(n, bits).div(&Interval::from_u64(k, bits))?;
    let cosh_part = pi
        .div(&Interval::from_u64(2 * k * n, bits))?
        .mul(&arg.cosh());
    let n_three_halves = Interval::from_u64(n, bits).pow_rational(3, 2)?;
    let sinh_part = arg
        .sinh()
        .div(&n_three_halves.mul_rational(&Rational::from(2)))?;
    Ok(cosh_part.sub(&sinh_part))
}

/// Evaluate the truncated explicit series over odd moduli `k ≤ terms` as a
/// certified interval.
///
/// For each `k`, the inner sum over residues `h` coprime to `k` is an exact
/// sum of unit phases `e^{iπψ}` with
/// `ψ = 2t(h,k) − t(2h mod k, k) − 2nh/k` a rational number of half-turns.
/// Real and imaginary parts are accumulated separately; conjugate residues
/// `h` and `k−h` carry opposite phases, so the imaginary total must enclose
/// zero.  That containment is checked and the imaginary part then discarded;
/// an enclosure excluding zero aborts with
/// [`FormulaError::ImaginaryResidual`].
pub fn truncated_series(params: &SeriesParams) -> Result<Interval, FormulaError> {
    let SeriesParams { n, terms, bits } = *params;
    if n == 0 || terms == 0 {
        return Err(FormulaError::BadParameters { n, terms });
    }
    let mut real_total = Interval::zero(bits);
    let mut imag_total = Interval::zero(bits);
    for k in (1..=terms).step_by(2) {
        let derivative = sinh_ratio_derivative(n, k, bits)?;
        let mut real_k = Interval::zero(bits);
        let mut imag_k = Interval::zero(bits);
        for h in 0..k.max(1) {
            if k > 1 && (h == 0 || Integer::from(h).gcd(&Integer::from(k)) != 1) {
                continue;
            }
            let t_h = MultiplierPhase::new(h, k)?;
            let t_2h = MultiplierPhase::new((2 * h) % k, k)?;
            // ψ = 2 t(h,k) − t(2h mod k, k) − 2nh/k, in half-turns.
            let psi = Rational::from(2) * t_h.half_turns().clone()
                - t_2h.half_turns().clone()
                - Rational::from((2 * Integer::from(n) * Integer::from(h), Integer::from(k)));
            real_k = real_k.add(&cos_pi_rational(&psi, bits));
            imag_k = imag_k.add(&sin_pi_rational(&psi, bits));
        }
        let sqrt_k = Interval::from_u64(k, bits).sqrt()?;
        let weighted = sqrt_k.mul(&derivative);
        real_total = real_total.add(&weighted.mul(&real_k));
        imag_total = imag_total.add(&weighted.mul(&imag_k));
    }
    let two_pi = Interval::pi(bits).mul_rational(&Rational::from(2));
    let imag_scaled = imag_total.div(&two_pi)?;
    if !imag_scaled.contains_zero() {
        return Err(FormulaError::ImaginaryResidual {
            lo: imag_scaled.lo_string(17),
            hi: imag_scaled.hi_string(17),
        });
    }
    Ok(real_total.div(&two_pi)?)
}

/// Enclosure of the tail bound after truncating at modulus `terms`:
///
/// ```text
/// terms^{5/2} / (π n^{3/2}) · sinh(π√n/terms)
/// ```
///
/// The exact truncation error is strictly smaller in magnitude.
pub fn truncation_error_bound(n: u64, terms: u64, bits: u32) -> Result<Interval, FormulaError> {
    if n == 0 || terms == 0 {
        return Err(FormulaError::BadParameters { n, terms });
    }
    let n_pow = Interval::from_u64(n, bits).pow_rational(3, 2)?;
    let terms_pow = Interval::from_u64(terms, bits).pow_rational(5, 2)?;
    let arg = growth_parameter(n, bits).div(&Interval::from_u64(terms, bits))?;
    Ok(terms_pow
        .div(&Interval::pi(bits).mul(&n_pow))?
        .mul(&arg.sinh()))
}

/// Enclosure of the leading exponential term
/// `T̂(n) = (1/8n)(1 − 1/μ̂(n)) e^{μ̂(n)}`.
pub fn leading_term(n: u64, bits: u32) -> Result<Interval, FormulaError> {
    if n == 0 {
        return Err(FormulaError::BadParameters { n, terms: 1 });
    }
    let mu = growth_parameter(n, bits);
    let one = Interval::one(bits);
    let factor = one.sub(&one.div(&mu)?);
    Ok(factor
        .mul(&mu.exp())
        .div(&Interval::from_u64(8 * n, bits))?)
}

/// Enclosure of the relative remainder of the leading term against the exact
/// count: `ê(n) = (p̄(n) − T̂(n)) / T̂(n)`.
///
/// The numerator subtracts an interval from an exact integer, so the
/// enclosure width is the leading term's own width and no precision is lost
/// to the near-total cancellation.
pub fn relative_remainder(
    table: &OverpartitionTable,
    n: u64,
    bits: u32,
) -> Result<Interval, FormulaError> {
    let count = table.count(n).ok_or(FormulaError::BeyondTable {
        n,
        max_n: table.max_n(),
    })?;
    let t_hat = leading_term(n, bits)?;
    let exact = Interval::from_integer(count, bits);
    Ok(exact.sub(&t_hat).div(&t_hat)?)
}
