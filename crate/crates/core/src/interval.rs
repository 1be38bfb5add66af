//! Certified interval arithmetic on arbitrary-precision floats.
//!
//! Every value is represented by a closed interval `[lo, hi]` whose endpoints
//! are MPFR floats rounded outward: `lo` toward −∞ and `hi` toward +∞.  Each
//! operation preserves the enclosure property — if the inputs contain the
//! exact operands, the output contains the exact result — so any comparison
//! decided from disjoint intervals is a proof, not an estimate.
//!
//! Comparisons are three-valued ([`CertifiedOrder`]): overlapping enclosures
//! yield `Undecided` rather than a guess, and callers escalate the working
//! precision (see [`PrecisionPolicy`]) until the question is decided or the
//! precision budget is exhausted.

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, PowAssignRound, SubAssignRound};
use rug::{Assign, Float, Integer, Rational};
use std::fmt;

/// Errors from interval construction and arithmetic.
///
/// Domain violations are reported, never silently widened: an operation whose
/// mathematical domain excludes part of the input interval refuses to produce
/// a result rather than returning an enclosure of a partial function.
#[derive(Debug, thiserror::Error)]
pub enum IntervalError {
    /// Division by an interval whose enclosure contains zero.
    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: String, hi: String },
    /// Logarithm of an interval touching or crossing zero.
    #[error("logarithm of an interval touching zero or below: [{lo}, {hi}]")]
    LogDomain { lo: String, hi: String },
    /// `ln_1p` of an interval touching or crossing −1.
    #[error("log1p of an interval touching -1 or below: [{lo}, {hi}]")]
    Log1pDomain { lo: String, hi: String },
    /// Square root of an interval extending below zero.
    #[error("square root of an interval extending below zero: [{lo}, {hi}]")]
    SqrtDomain { lo: String, hi: String },
    /// Rational power of an interval not strictly positive.
    #[error("rational power of an interval not strictly positive: [{lo}, {hi}]")]
    PowDomain { lo: String, hi: String },
    /// Zero raised to a negative power, or reciprocal of an interval with zero.
    #[error("negative power of an interval containing zero")]
    NegativePowerOfZero,
    /// Logarithm requested for a non-positive integer.
    #[error("logarithm of non-positive integer {0}")]
    NonPositiveInteger(Integer),
    /// A ceiling could not be pinned to a unique integer within the precision
    /// budget; the enclosure still straddles an integer at `bits` precision.
    #[error(
        "ceiling undecidable at {bits} bits: enclosure [{lo}, {hi}] straddles an integer \
         (precision budget exhausted)"
    )]
    CeilingAmbiguous { bits: u32, lo: String, hi: String },
    /// An escalation ladder was asked to continue past the configured maximum.
    #[error("precision budget exhausted at {0} bits")]
    PrecisionExhausted(u32),
}

/// Outcome of comparing two certified intervals.
///
/// `Less`/`Greater` are proofs about the exact values enclosed; `Undecided`
/// means the enclosures overlap and nothing is claimed either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifiedOrder {
    Less,
    Greater,
    Undecided,
}

/// Precision schedule for certified computations.
///
/// `base_bits` seeds the working precision, [`PrecisionPolicy::working_bits`]
/// scales it with the problem size, and escalation doubles the precision on
/// every `Undecided` outcome until `max_bits` is reached.
#[derive(Debug, Clone)]
pub struct PrecisionPolicy {
    /// Starting precision before problem-size scaling (default 128).
    pub base_bits: u32,
    /// Multiplier applied on each escalation step (default 2).
    pub escalation_factor: u32,
    /// Hard ceiling on working precision (default 2^20).
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            base_bits: 128,
            escalation_factor: 2,
            max_bits: 1 << 20,
        }
    }
}

impl PrecisionPolicy {
    /// Working precision for a computation indexed by `n` at difference
    /// order `r`:
    ///
    /// ```text
    /// bits(n, r) = base + 2r + ⌈(r+1)·log2(n+2)⌉ + ⌈log2(π√n + 1)⌉
    /// ```
    ///
    /// The growth terms cover the digits cancelled by r-fold differencing of
    /// slowly varying logarithms; anything sharper than the estimate is
    /// recovered by escalation.
    pub fn working_bits(&self, n: u64, r: u32) -> u32 {
        let nf = n as f64;
        let log_n = (nf + 2.0).log2();
        let log_mu = (std::f64::consts::PI * nf.sqrt() + 1.0).log2();
        let extra =
            2 * r + ((r as f64 + 1.0) * log_n).ceil() as u32 + log_mu.ceil().max(0.0) as u32;
        (self.base_bits + extra).min(self.max_bits)
    }

    /// The escalation ladder starting from `start` bits: `start`, then
    /// repeated multiplication by `escalation_factor`, capped at `max_bits`
    /// (which is always the final rung when reached).
    pub fn ladder(&self, start: u32) -> impl Iterator<Item = u32> + '_ {
        let mut next = Some(start.min(self.max_bits));
        let factor = self.escalation_factor.max(2);
        let max = self.max_bits;
        std::iter::from_fn(move || {
            let current = next?;
            next = if current >= max {
                None
            } else {
                Some(current.saturating_mul(factor).min(max))
            };
            Some(current)
        })
    }
}

/// A closed interval `[lo, hi]` with outward-rounded endpoints.
///
/// Invariant: `lo ≤ hi`, endpoints never NaN.  All arithmetic rounds `lo`
/// toward −∞ and `hi` toward +∞, so the interval always encloses the exact
/// real result of the corresponding exact-operand computation.
#[derive(Debug, Clone)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_string(17), self.hi_string(17))
    }
}

fn float_min(a: Float, b: Float) -> Float {
    if a <= b {
        a
    } else {
        b
    }
}

fn float_max(a: Float, b: Float) -> Float {
    if a >= b {
        a
    } else {
        b
    }
}

impl Interval {
    fn assert_valid(&self) {
        debug_assert!(!self.lo.is_nan() && !self.hi.is_nan(), "NaN endpoint");
        debug_assert!(self.lo <= self.hi, "inverted interval {self:?}");
    }

    fn from_endpoints(lo: Float, hi: Float) -> Self {
        let iv = Interval { lo, hi };
        iv.assert_valid();
        iv
    }

    /// The exact point interval `[0, 0]`.
    pub fn zero(bits: u32) -> Self {
        Interval::from_endpoints(Float::with_val(bits, 0), Float::with_val(bits, 0))
    }

    /// The exact point interval `[1, 1]`.
    pub fn one(bits: u32) -> Self {
        Interval::from_endpoints(Float::with_val(bits, 1), Float::with_val(bits, 1))
    }

    /// Enclosure of π at the given precision.
    pub fn pi(bits: u32) -> Self {
        let (lo, _) = Float::with_val_round(bits, Constant::Pi, Round::Down);
        let (hi, _) = Float::with_val_round(bits, Constant::Pi, Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Enclosure of an exact integer (a point whenever it fits in `bits`).
    pub fn from_integer(value: &Integer, bits: u32) -> Self {
        let (lo, _) = Float::with_val_round(bits, value, Round::Down);
        let (hi, _) = Float::with_val_round(bits, value, Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Enclosure of an unsigned machine integer.
    pub fn from_u64(value: u64, bits: u32) -> Self {
        Interval::from_integer(&Integer::from(value), bits)
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(value: &Rational, bits: u32) -> Self {
        let (lo, _) = Float::with_val_round(bits, value, Round::Down);
        let (hi, _) = Float::with_val_round(bits, value, Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Enclosure of an exact rational pair `[lo, hi]`, each rounded outward.
    pub fn from_rational_bounds(lo: &Rational, hi: &Rational, bits: u32) -> Self {
        debug_assert!(lo <= hi);
        let (flo, _) = Float::with_val_round(bits, lo, Round::Down);
        let (fhi, _) = Float::with_val_round(bits, hi, Round::Up);
        Interval::from_endpoints(flo, fhi)
    }

    /// Lower endpoint (rounded toward −∞).
    pub fn lo(&self) -> &Float {
        &self.lo
    }

    /// Upper endpoint (rounded toward +∞).
    pub fn hi(&self) -> &Float {
        &self.hi
    }

    /// Working precision of the endpoints in bits.
    pub fn bits(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Exact rational value of the lower endpoint.
    pub fn lo_rational(&self) -> Rational {
        self.lo.to_rational().expect("finite endpoint")
    }

    /// Exact rational value of the upper endpoint.
    pub fn hi_rational(&self) -> Rational {
        self.hi.to_rational().expect("finite endpoint")
    }

    /// Whether the enclosure contains zero.
    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// Whether the enclosure contains the exact rational `q`.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        self.lo_rational() <= *q && *q <= self.hi_rational()
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Whether both endpoints are the same float (exactly representable value).
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on the interval width `hi − lo`, rounded up.
    pub fn width(&self) -> Float {
        let bits = self.bits();
        let mut w = Float::with_val(bits, &self.hi);
        w.sub_assign_round(&self.lo, Round::Up);
        w
    }

    /// Midpoint as a plain float (for display only; carries no certificate).
    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Decimal rendering of the lower endpoint, rounded toward −∞.
    pub fn lo_string(&self, digits: usize) -> String {
        self.lo.to_string_radix_round(10, Some(digits), Round::Down)
    }

    /// Decimal rendering of the upper endpoint, rounded toward +∞.
    pub fn hi_string(&self, digits: usize) -> String {
        self.hi.to_string_radix_round(10, Some(digits), Round::Up)
    }

    /// Interval sum.
    pub fn add(&self, other: &Interval) -> Interval {
        let bits = self.bits().max(other.bits());
        let mut lo = Float::with_val(bits, &self.lo);
        lo.add_assign_round(&other.lo, Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.add_assign_round(&other.hi, Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Interval difference.
    pub fn sub(&self, other: &Interval) -> Interval {
        let bits = self.bits().max(other.bits());
        let mut lo = Float::with_val(bits, &self.lo);
        lo.sub_assign_round(&other.hi, Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.sub_assign_round(&other.lo, Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Negation.
    pub fn neg(&self) -> Interval {
        let bits = self.bits();
        let mut lo = Float::with_val(bits, &self.hi);
        lo = -lo;
        let mut hi = Float::with_val(bits, &self.lo);
        hi = -hi;
        Interval::from_endpoints(lo, hi)
    }

    /// Absolute value.
    pub fn abs(&self) -> Interval {
        let bits = self.bits();
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let mag = float_max(
                -Float::with_val(bits, &self.lo),
                Float::with_val(bits, &self.hi),
            );
            Interval::from_endpoints(Float::with_val(bits, 0), mag)
        }
    }

    /// Interval product: min/max over the four endpoint products, each
    /// computed with the rounding direction of the endpoint it may become.
    pub fn mul(&self, other: &Interval) -> Interval {
        let bits = self.bits().max(other.bits());
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let mut down = Float::with_val(bits, a);
            down.mul_assign_round(b, Round::Down);
            let mut up = Float::with_val(bits, a);
            up.mul_assign_round(b, Round::Up);
            lo = Some(match lo {
                None => down,
                Some(m) => float_min(m, down),
            });
            hi = Some(match hi {
                None => up,
                Some(m) => float_max(m, up),
            });
        }
        Interval::from_endpoints(lo.unwrap(), hi.unwrap())
    }

    /// Scale by an exact rational (single multiplication per endpoint).
    pub fn mul_rational(&self, q: &Rational) -> Interval {
        let bits = self.bits();
        if *q >= 0 {
            let mut lo = Float::with_val(bits, &self.lo);
            lo.mul_assign_round(q, Round::Down);
            let mut hi = Float::with_val(bits, &self.hi);
            hi.mul_assign_round(q, Round::Up);
            Interval::from_endpoints(lo, hi)
        } else {
            let mut lo = Float::with_val(bits, &self.hi);
            lo.mul_assign_round(q, Round::Down);
            let mut hi = Float::with_val(bits, &self.lo);
            hi.mul_assign_round(q, Round::Up);
            Interval::from_endpoints(lo, hi)
        }
    }

    /// Interval quotient; errors if `other` encloses zero.
    pub fn div(&self, other: &Interval) -> Result<Interval, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZero {
                lo: other.lo_string(17),
                hi: other.hi_string(17),
            });
        }
        let bits = self.bits().max(other.bits());
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let mut down = Float::with_val(bits, a);
            down.div_assign_round(b, Round::Down);
            let mut up = Float::with_val(bits, a);
            up.div_assign_round(b, Round::Up);
            lo = Some(match lo {
                None => down,
                Some(m) => float_min(m, down),
            });
            hi = Some(match hi {
                None => up,
                Some(m) => float_max(m, up),
            });
        }
        Ok(Interval::from_endpoints(lo.unwrap(), hi.unwrap()))
    }

    /// Square root; errors if the interval extends below zero.
    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.lo < 0 {
            return Err(IntervalError::SqrtDomain {
                lo: self.lo_string(17),
                hi: self.hi_string(17),
            });
        }
        let bits = self.bits();
        let mut lo = Float::with_val(bits, &self.lo);
        lo.sqrt_round(Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.sqrt_round(Round::Up);
        Ok(Interval::from_endpoints(lo, hi))
    }

    /// Exponential (monotone, total).
    pub fn exp(&self) -> Interval {
        let bits = self.bits();
        let mut lo = Float::with_val(bits, &self.lo);
        lo.exp_round(Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.exp_round(Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Natural logarithm; errors unless the interval is strictly positive.
    pub fn ln(&self) -> Result<Interval, IntervalError> {
        if self.lo <= 0 {
            return Err(IntervalError::LogDomain {
                lo: self.lo_string(17),
                hi: self.hi_string(17),
            });
        }
        let bits = self.bits();
        let mut lo = Float::with_val(bits, &self.lo);
        lo.ln_round(Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.ln_round(Round::Up);
        Ok(Interval::from_endpoints(lo, hi))
    }

    /// `ln(1 + x)` evaluated without forming `1 + x` (accurate near zero);
    /// errors unless the interval is strictly greater than −1.
    pub fn ln_1p(&self) -> Result<Interval, IntervalError> {
        if self.lo <= -1 {
            return Err(IntervalError::Log1pDomain {
                lo: self.lo_string(17),
                hi: self.hi_string(17),
            });
        }
        let bits = self.bits();
        let mut lo = Float::with_val(bits, &self.lo);
        lo.ln_1p_round(Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.ln_1p_round(Round::Up);
        Ok(Interval::from_endpoints(lo, hi))
    }

    /// Hyperbolic sine (monotone, total).
    pub fn sinh(&self) -> Interval {
        let bits = self.bits();
        let mut lo = Float::with_val(bits, &self.lo);
        lo.sinh_round(Round::Down);
        let mut hi = Float::with_val(bits, &self.hi);
        hi.sinh_round(Round::Up);
        Interval::from_endpoints(lo, hi)
    }

    /// Hyperbolic cosine; even with minimum 1 at zero, so an interval
    /// straddling zero maps to `[1, cosh(max |endpoint|)]`.
    pub fn cosh(&self) -> Interval {
        let bits = self.bits();
        let eval = |f: &Float, round: Round| {
            let mut v = Float::with_val(bits, f);
            v.cosh_round(round);
            v
        };
        if self.lo >= 0 {
            Interval::from_endpoints(eval(&self.lo, Round::Down), eval(&self.hi, Round::Up))
        } else if self.hi <= 0 {
            Interval::from_endpoints(eval(&self.hi, Round::Down), eval(&self.lo, Round::Up))
        } else {
            let hi = float_max(eval(&self.lo, Round::Up), eval(&self.hi, Round::Up));
            Interval::from_endpoints(Float::with_val(bits, 1), hi)
        }
    }

    /// Integer power.  Handles sign cases for even exponents; negative
    /// exponents require an interval excluding zero.
    pub fn pow_integer(&self, exponent: i32) -> Result<Interval, IntervalError> {
        let bits = self.bits();
        if exponent == 0 {
            return Ok(Interval::one(bits));
        }
        if exponent < 0 && self.contains_zero() {
            return Err(IntervalError::NegativePowerOfZero);
        }
        let eval = |f: &Float, round: Round| {
            let mut v = Float::with_val(bits, f);
            v.pow_assign_round(exponent, round);
            v
        };
        let even = exponent % 2 == 0;
        if !even || self.lo >= 0 {
            // Monotone increasing (odd power, or even power on [0, ∞)) or,
            // for negative exponents on a positive interval, monotone
            // decreasing; pick endpoints accordingly.
            let decreasing = exponent < 0 && self.lo > 0;
            if decreasing {
                Ok(Interval::from_endpoints(
                    eval(&self.hi, Round::Down),
                    eval(&self.lo, Round::Up),
                ))
            } else if exponent < 0 && self.hi < 0 {
                // Negative interval, odd negative exponent: still decreasing.
                Ok(Interval::from_endpoints(
                    eval(&self.hi, Round::Down),
                    eval(&self.lo, Round::Up),
                ))
            } else {
                Ok(Interval::from_endpoints(
                    eval(&self.lo, Round::Down),
                    eval(&self.hi, Round::Up),
                ))
            }
        } else if self.hi <= 0 {
            // Even positive power of a non-positive interval: decreasing.
            Ok(Interval::from_endpoints(
                eval(&self.hi, Round::Down),
                eval(&self.lo, Round::Up),
            ))
        } else {
            // Even positive power across zero: minimum 0 at the origin.
            let hi = float_max(eval(&self.lo, Round::Up), eval(&self.hi, Round::Up));
            Ok(Interval::from_endpoints(Float::with_val(bits, 0), hi))
        }
    }

    /// Rational power `x^(num/den)` for strictly positive `x` (and `den > 0`),
    /// computed as the `den`-th root of the `num`-th power so every step uses
    /// a directly rounded MPFR primitive.
    pub fn pow_rational(&self, num: i32, den: u32) -> Result<Interval, IntervalError> {
        if self.lo <= 0 {
            return Err(IntervalError::PowDomain {
                lo: self.lo_string(17),
                hi: self.hi_string(17),
            });
        }
        assert!(den > 0, "rational exponent with zero denominator");
        let powered = self.pow_integer(num)?;
        let bits = powered.bits();
        let mut lo = Float::with_val(bits, &powered.lo);
        lo.root_round(den, Round::Down);
        let mut hi = Float::with_val(bits, &powered.hi);
        hi.root_round(den, Round::Up);
        Ok(Interval::from_endpoints(lo, hi))
    }

    /// Re-round this interval's endpoints outward at a new precision.
    pub fn with_bits(&self, bits: u32) -> Interval {
        let (lo, _) = Float::with_val_round(bits, &self.lo, Round::Down);
        let (hi, _) = Float::with_val_round(bits, &self.hi, Round::Up);
        Interval::from_endpoints(lo, hi)
    }
}

/// Three-valued certified comparison: `Less` iff `a.hi < b.lo`, `Greater`
/// iff `a.lo > b.hi`, otherwise `Undecided`.
pub fn certified_compare(a: &Interval, b: &Interval) -> CertifiedOrder {
    if a.hi < b.lo {
        CertifiedOrder::Less
    } else if a.lo > b.hi {
        CertifiedOrder::Greater
    } else {
        CertifiedOrder::Undecided
    }
}

/// Comparison against an exact rational point.
pub fn certified_compare_rational(a: &Interval, q: &Rational) -> CertifiedOrder {
    let hi = a.hi_rational();
    if hi < *q {
        return CertifiedOrder::Less;
    }
    let lo = a.lo_rational();
    if lo > *q {
        CertifiedOrder::Greater
    } else {
        CertifiedOrder::Undecided
    }
}

/// Certified ceiling with precision escalation.
///
/// `refine(bits)` must return an enclosure of the same exact real number at
/// the requested precision.  Starting from `start_bits` and walking the
/// policy's ladder, the ceiling is returned as soon as both endpoints agree
/// on it, i.e. the whole enclosure sits inside a single half-open cell
/// `(m−1, m]`.  If the budget is exhausted while the enclosure still
/// straddles an integer — as would happen when the exact value *is* an
/// integer — the ambiguity is reported as an error rather than resolved by
/// convention.
pub fn certified_ceiling<E, F>(
    policy: &PrecisionPolicy,
    start_bits: u32,
    mut refine: F,
) -> Result<Integer, E>
where
    E: From<IntervalError>,
    F: FnMut(u32) -> Result<Interval, E>,
{
    let mut last_bits = start_bits;
    let mut last: Option<Interval> = None;
    for bits in policy.ladder(start_bits) {
        let iv = refine(bits)?;
        let ceil_lo = iv.lo.clone().ceil().to_integer().expect("finite endpoint");
        let ceil_hi = iv.hi.clone().ceil().to_integer().expect("finite endpoint");
        if ceil_lo == ceil_hi {
            return Ok(ceil_lo);
        }
        last_bits = bits;
        last = Some(iv);
    }
    let iv = last.expect("ladder yields at least one precision");
    Err(IntervalError::CeilingAmbiguous {
        bits: last_bits,
        lo: iv.lo_string(25),
        hi: iv.hi_string(25),
    }
    .into())
}

/// Enclosure of `ln m` for a positive big integer, independent of whether
/// `m` fits the working precision: the integer is first rounded outward onto
/// the float grid, then the logarithm of each endpoint is rounded outward
/// again.
pub fn log_of_big_integer(m: &Integer, bits: u32) -> Result<Interval, IntervalError> {
    if *m <= 0 {
        return Err(IntervalError::NonPositiveInteger(m.clone()));
    }
    Interval::from_integer(m, bits).ln()
}

/// Reduce `t` modulo 2 into `[0, 2)` exactly.
fn reduce_mod_two(t: &Rational) -> Rational {
    let half = Rational::from((t.numer().clone(), t.denom() * Integer::from(2)));
    let mut fl = Integer::new();
    fl.assign(half.floor_ref());
    let reduced = t - Rational::from(2) * Rational::from(fl);
    debug_assert!((0..2).contains(&reduced));
    reduced
}

fn overlaps(a_lo: &Float, a_hi: &Float, b_lo: &Float, b_hi: &Float) -> bool {
    !(a_hi < b_lo || b_hi < a_lo)
}

/// Shared core of `cos_pi_rational`/`sin_pi_rational`: enclose `f(π t)` for a
/// point rational `t ∈ [0, 2)`, where `f` is evaluated at the endpoint floats
/// with directed rounding and `critical` lists the abscissae (as multiples of
/// π) where `f'` vanishes, together with the extreme value attained there.
fn trig_pi_reduced(
    t: &Rational,
    bits: u32,
    eval: impl Fn(&Float, Round) -> Float,
    critical: &[(Rational, i8)],
) -> Interval {
    let pi = Interval::pi(bits);
    let x = pi.mul_rational(t);
    let lo_candidates = [eval(&x.lo, Round::Down), eval(&x.hi, Round::Down)];
    let hi_candidates = [eval(&x.lo, Round::Up), eval(&x.hi, Round::Up)];
    let mut lo = float_min(lo_candidates[0].clone(), lo_candidates[1].clone());
    let mut hi = float_max(hi_candidates[0].clone(), hi_candidates[1].clone());
    // If the enclosure of πt may contain a critical point mπ, widen to the
    // extremum attained there; exact hits were filtered out by the caller,
    // so this only triggers when rounding blurs across the critical point.
    for (mult, extreme) in critical {
        let crit = pi.mul_rational(mult);
        if overlaps(&x.lo, &x.hi, &crit.lo, &crit.hi) {
            if *extreme > 0 {
                hi = float_max(hi, Float::with_val(bits, 1));
            } else {
                lo = float_min(lo, Float::with_val(bits, -1));
            }
        }
    }
    Interval::from_endpoints(lo, hi)
}

/// Enclosure of `cos(π t)` for an exact rational `t`.
///
/// Quarter-turn inputs (`t ≡ 0, 1/2, 1, 3/2 mod 2`) produce exact point
/// intervals, so phase sums built from them cancel exactly.
pub fn cos_pi_rational(t: &Rational, bits: u32) -> Interval {
    let t = reduce_mod_two(t);
    if t == 0 {
        return Interval::one(bits);
    }
    if t == (1, 2) || t == (3, 2) {
        return Interval::zero(bits);
    }
    if t == 1 {
        return Interval::one(bits).neg();
    }
    let critical = [
        (Rational::from(0), 1i8),
        (Rational::from(1), -1i8),
        (Rational::from(2), 1i8),
    ];
    trig_pi_reduced(
        &t,
        bits,
        |f, round| {
            let mut v = Float::with_val(bits, f);
            v.cos_round(round);
            v
        },
        &critical,
    )
}

/// Enclosure of `sin(π t)` for an exact rational `t`.
pub fn sin_pi_rational(t: &Rational, bits: u32) -> Interval {
    let t = reduce_mod_two(t);
    if t == 0 || t == 1 {
        return Interval::zero(bits);
    }
    if t == (1, 2) {
        return Interval::one(bits);
    }
    if t == (3, 2) {
        return Interval::one(bits).neg();
    }
    let critical = [
        (Rational::from((1, 2)), 1i8),
        (Rational::from((3, 2)), -1i8),
    ];
    trig_pi_reduced(
        &t,
        bits,
        |f, round| {
            let mut v = Float::with_val(bits, f);
            v.sin_round(round);
            v
        },
        &critical,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn rat(n: i64, d: u64) -> Rational {
        Rational::from((n, d as i64))
    }

    #[test]
    fn pi_encloses_reference_value() {
        let pi = Interval::pi(128);
        // 3.14159265358979323846 < π < 3.14159265358979323847
        let den = Integer::from(10u32).pow(20u32);
        let below = Rational::from((
            Integer::from_str_radix("314159265358979323846", 10).unwrap(),
            den.clone(),
        ));
        let above = Rational::from((
            Integer::from_str_radix("314159265358979323847", 10).unwrap(),
            den,
        ));
        assert!(pi.lo_rational() < above && pi.hi_rational() > below);
        assert!(!pi.is_point());
        assert!(pi.width() < 1e-35);
    }

    #[test]
    fn arithmetic_encloses_exact_rationals() {
        let a = Interval::from_rational(&rat(1, 3), 64);
        let b = Interval::from_rational(&rat(2, 7), 64);
        let sum = a.add(&b);
        assert!(sum.contains_rational(&rat(13, 21)));
        let diff = a.sub(&b);
        assert!(diff.contains_rational(&rat(1, 21)));
        let prod = a.mul(&b);
        assert!(prod.contains_rational(&rat(2, 21)));
        let quot = a.div(&b).unwrap();
        assert!(quot.contains_rational(&rat(7, 6)));
    }

    #[test]
    fn division_by_zero_interval_is_an_error() {
        let a = Interval::one(64);
        let b = Interval::from_rational_bounds(&rat(-1, 2), &rat(1, 2), 64);
        assert!(matches!(
            a.div(&b),
            Err(IntervalError::DivisionByZero { .. })
        ));
    }

    #[test]
    fn log_domain_is_enforced() {
        let touching = Interval::from_rational_bounds(&rat(0, 1), &rat(1, 1), 64);
        assert!(matches!(
            touching.ln(),
            Err(IntervalError::LogDomain { .. })
        ));
        let negative = Interval::from_rational(&rat(-1, 2), 64);
        assert!(matches!(
            negative.sqrt(),
            Err(IntervalError::SqrtDomain { .. })
        ));
        let below = Interval::from_rational(&rat(-3, 2), 64);
        assert!(matches!(
            below.ln_1p(),
            Err(IntervalError::Log1pDomain { .. })
        ));
    }

    #[test]
    fn transcendental_enclosures_nest_under_refinement() {
        let x = rat(7, 5);
        let coarse = Interval::from_rational(&x, 64);
        let fine = Interval::from_rational(&x, 128);
        for (c, f) in [
            (coarse.exp(), fine.exp()),
            (coarse.ln().unwrap(), fine.ln().unwrap()),
            (coarse.sinh(), fine.sinh()),
            (coarse.cosh(), fine.cosh()),
            (coarse.sqrt().unwrap(), fine.sqrt().unwrap()),
        ] {
            assert!(c.encloses(&f), "refined {f} escapes coarse {c}");
        }
    }

    #[test]
    fn even_powers_across_zero_clamp_at_zero() {
        let x = Interval::from_rational_bounds(&rat(-3, 2), &rat(1, 2), 64);
        let sq = x.pow_integer(2).unwrap();
        assert!(sq.lo() == &0);
        assert!(sq.contains_rational(&rat(9, 4)));
        assert!(sq.hi() >= &2.25);
        let cube = x.pow_integer(3).unwrap();
        assert!(cube.contains_rational(&rat(-27, 8)));
        assert!(cube.contains_rational(&rat(1, 8)));
    }

    #[test]
    fn negative_power_needs_nonzero_interval() {
        let spanning = Interval::from_rational_bounds(&rat(-1, 2), &rat(1, 2), 64);
        assert!(matches!(
            spanning.pow_integer(-1),
            Err(IntervalError::NegativePowerOfZero)
        ));
        let pos = Interval::from_rational_bounds(&rat(1, 2), &rat(2, 1), 64);
        let inv = pos.pow_integer(-1).unwrap();
        assert!(inv.contains_rational(&rat(1, 2)));
        assert!(inv.contains_rational(&rat(2, 1)));
    }

    #[test]
    fn rational_power_via_root() {
        let x = Interval::from_u64(8, 96);
        let p = x.pow_rational(2, 3).unwrap();
        assert!(p.contains_rational(&rat(4, 1)));
        assert!(p.width() < 1e-20);
        // n^{3/2} for n = 4 is exactly 8.
        let y = Interval::from_u64(4, 96);
        let q = y.pow_rational(3, 2).unwrap();
        assert!(q.contains_rational(&rat(8, 1)));
    }

    #[test]
    fn compare_is_three_valued() {
        let a = Interval::from_rational_bounds(&rat(1, 1), &rat(2, 1), 64);
        let b = Interval::from_rational_bounds(&rat(3, 1), &rat(4, 1), 64);
        assert_eq!(certified_compare(&a, &b), CertifiedOrder::Less);
        assert_eq!(certified_compare(&b, &a), CertifiedOrder::Greater);
        let c = Interval::from_rational_bounds(&rat(3, 2), &rat(7, 2), 64);
        assert_eq!(certified_compare(&a, &c), CertifiedOrder::Undecided);
        // Identical points are undecidable by enclosure alone.
        let p = Interval::one(64);
        assert_eq!(certified_compare(&p, &p.clone()), CertifiedOrder::Undecided);
    }

    #[test]
    fn ceiling_decides_simple_cases() {
        let policy = PrecisionPolicy::default();
        let v = certified_ceiling::<IntervalError, _>(&policy, 64, |bits| {
            // 10·ln 2 ≈ 6.93: ceiling 7.
            Ok(Interval::from_u64(2, bits)
                .ln()
                .unwrap()
                .mul_rational(&Rational::from(10)))
        })
        .unwrap();
        assert_eq!(v, 7);
        // An exact integer point is its own ceiling.
        let w = certified_ceiling::<IntervalError, _>(&policy, 64, |bits| {
            Ok(Interval::from_u64(5, bits))
        })
        .unwrap();
        assert_eq!(w, 5);
    }

    #[test]
    fn ceiling_refuses_exact_integers_reached_by_rounding() {
        // The target value is exactly 3 but computed with outward error, so
        // the enclosure always straddles 3 and the ceiling must refuse.
        let policy = PrecisionPolicy {
            base_bits: 64,
            escalation_factor: 2,
            max_bits: 512,
        };
        let r = certified_ceiling::<IntervalError, _>(&policy, 64, |bits| {
            let third = Interval::from_rational(&rat(1, 3), bits);
            Ok(third.mul_rational(&Rational::from(9)))
        });
        assert!(matches!(r, Err(IntervalError::CeilingAmbiguous { .. })));
    }

    #[test]
    fn big_integer_log_width_bound() {
        // Width must stay below 2^(4−bits) · ln m.
        let m = Integer::from(Integer::u_pow_u(7, 120)); // ~337 bits
        let reference = log_of_big_integer(&m, 512).unwrap();
        for bits in [64u32, 128, 256] {
            let iv = log_of_big_integer(&m, bits).unwrap();
            let ln_m = 120.0 * 7f64.ln();
            let budget = ln_m * 2f64.powi(4 - bits as i32);
            assert!(
                iv.width().to_f64() < budget,
                "width {} exceeds budget {} at {} bits",
                iv.width().to_f64(),
                budget,
                bits
            );
            assert!(iv.encloses(&reference));
        }
        assert!(matches!(
            log_of_big_integer(&Integer::from(0), 64),
            Err(IntervalError::NonPositiveInteger(_))
        ));
    }

    #[test]
    fn quarter_phases_are_exact() {
        for (num, den, c, s) in [
            (0i64, 1u64, 1i64, 0i64),
            (1, 2, 0, 1),
            (1, 1, -1, 0),
            (3, 2, 0, -1),
            (4, 1, 1, 0),
            (-1, 2, 0, -1),
            (-7, 2, 0, 1),
        ] {
            let t = rat(num, den);
            let cos = cos_pi_rational(&t, 64);
            let sin = sin_pi_rational(&t, 64);
            assert!(cos.is_point() && cos.lo() == &c, "cos(π·{num}/{den})");
            assert!(sin.is_point() && sin.lo() == &s, "sin(π·{num}/{den})");
        }
    }

    #[test]
    fn phase_enclosures_contain_reference_values() {
        // cos(π/3) = 1/2 and sin(π/6) = 1/2 exactly.
        let c = cos_pi_rational(&rat(1, 3), 128);
        assert!(c.contains_rational(&rat(1, 2)));
        assert!(c.width() < 1e-30);
        let s = sin_pi_rational(&rat(1, 6), 128);
        assert!(s.contains_rational(&rat(1, 2)));
        // Near-integer phases stay within [−1, 1] and include the extremum
        // region: cos(π·(1 − 10^−30)) is close to −1.
        let near = rat(1, 1) - rat(1, 1_000_000_000) * rat(1, 1_000_000_000);
        let c2 = cos_pi_rational(&near, 64);
        assert!(c2.lo() >= &-1.0000001);
        assert!(c2.hi() < &-0.9);
    }

    #[test]
    fn phase_conjugacy_cancels_at_interval_level() {
        let t = rat(5, 18);
        let plus = sin_pi_rational(&t, 96);
        let minus = sin_pi_rational(&(-t.clone()), 96);
        let sum = plus.add(&minus);
        assert!(sum.contains_zero());
        assert!(sum.width() < 1e-25);
    }

    #[test]
    fn ladder_reaches_and_stops_at_max() {
        let policy = PrecisionPolicy {
            base_bits: 128,
            escalation_factor: 2,
            max_bits: 1000,
        };
        let rungs: Vec<u32> = policy.ladder(150).collect();
        assert_eq!(rungs, vec![150, 300, 600, 1000]);
        let single: Vec<u32> = policy.ladder(1000).collect();
        assert_eq!(single, vec![1000]);
    }

    #[test]
    fn working_bits_grows_with_order_and_size() {
        let policy = PrecisionPolicy::default();
        let b0 = policy.working_bits(10, 1);
        let b1 = policy.working_bits(10_000, 1);
        let b2 = policy.working_bits(10_000, 4);
        assert!(b0 >= 128);
        assert!(b1 > b0);
        assert!(b2 > b1);
    }
}
