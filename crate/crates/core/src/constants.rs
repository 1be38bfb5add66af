//! The explicit constants governing the two-sided difference bounds.
//!
//! For each order r ≥ 2 the toolkit materialises one family of constants:
//!
//! ```text
//! C(r)  = (π/2)·(1/2)_{r−1}                         leading coefficient
//! C₁(r) = (r−1)! + 4r²·C(r)                         lower-bound offset
//! C₂(r) = ∑_{k=0}^{2r−2} ((k+1)/2)_r / ((k+1)·π^{k+1}·r^k) + r/10^r
//!                                                   upper-bound offset
//! N₀(m) = 1 if m = 1, else 2m·ln m − m·ln ln m      exponential-decay onset
//! N₁(r) = max(85, ⌈(4/π²)·N₀(2r+2)²⌉)               correction-term onset
//! N₂(r) = ⌈((1 + C₁)/C)²⌉
//! N₃(r) = max(N₁, 2r², ⌈(2^{r+1}(C₂+1)/(r−1)!)²⌉, ⌈(2^r·C²/(r−1)!)^{1/(r−1)}⌉)
//! N(r)  = max(N₂, N₃)                               validity threshold
//! ```
//!
//! where `(α)_j = α(α+1)⋯(α+j−1)` is the rising factorial.  The rational
//! scaffolding (Pochhammer products, factorials, powers of r and 10) is kept
//! exact; π enters only through certified enclosures, and every ceiling is a
//! certified ceiling — an enclosure still straddling an integer after
//! precision escalation is an error, never a guess.

use crate::interval::{certified_ceiling, Interval, IntervalError, PrecisionPolicy};
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::ser::{Serialize, SerializeStruct, Serializer};

/// Errors from constant evaluation.
#[derive(Debug, thiserror::Error)]
pub enum ConstantsError {
    /// The constant family is defined for r ≥ 2.
    #[error("constant family requires r ≥ 2, got {0}")]
    BadOrder(u32),
    /// Threshold formulas need a positive order.
    #[error("threshold requires r ≥ 1, got {0}")]
    BadThresholdOrder(u32),
    /// A certified ceiling produced a value outside the machine range.
    #[error("threshold {0} does not fit in 64 bits")]
    ThresholdOverflow(Integer),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Exact rising factorial `(1/2)_j = (1/2)(3/2)⋯((2j−1)/2)`; the empty
/// product at j = 0 is 1.
pub fn pochhammer_half(j: u32) -> Rational {
    rising_factorial(&Rational::from((1, 2)), j)
}

/// Exact rising factorial `(base)_count = base·(base+1)⋯(base+count−1)`.
pub fn rising_factorial(base: &Rational, count: u32) -> Rational {
    let mut product = Rational::from(1);
    let mut factor = base.clone();
    for _ in 0..count {
        product *= &factor;
        factor += 1u32;
    }
    product
}

/// Enclosure of `N₀(m)`: the degenerate point 1 for m = 1, otherwise
/// `2m·ln m − m·ln ln m` (natural logarithms; `ln ln 2 < 0` simply pushes
/// the bound up).
pub fn n0_bound(m: u64, bits: u32) -> Result<Interval, IntervalError> {
    if m == 1 {
        return Ok(Interval::one(bits));
    }
    let m_iv = Interval::from_u64(m, bits);
    let ln_m = m_iv.ln()?;
    let ln_ln_m = ln_m.ln()?;
    Ok(ln_m
        .mul_rational(&Rational::from(2 * m))
        .sub(&ln_ln_m.mul_rational(&Rational::from(m))))
}

/// Enclosure of the leading coefficient `C(r) = (π/2)·(1/2)_{r−1}`.
pub fn leading_constant(r: u32, bits: u32) -> Interval {
    let factor = pochhammer_half(r - 1) / 2u32;
    Interval::pi(bits).mul_rational(&factor)
}

/// Enclosure of the lower-bound offset `C₁(r) = (r−1)! + 4r²·C(r)`.
pub fn lower_offset_constant(r: u32, bits: u32) -> Interval {
    let factorial = Interval::from_integer(&Integer::from(Integer::factorial(r - 1)), bits);
    factorial.add(&leading_constant(r, bits).mul_rational(&Rational::from(4 * r * r)))
}

/// Enclosure of the upper-bound offset
/// `C₂(r) = ∑_{k=0}^{2r−2} ((k+1)/2)_r / ((k+1)·π^{k+1}·r^k) + r/10^r`.
pub fn upper_offset_constant(r: u32, bits: u32) -> Result<Interval, IntervalError> {
    let pi = Interval::pi(bits);
    let mut sum = Interval::zero(bits);
    for k in 0..=(2 * r - 2) {
        let rising = rising_factorial(&Rational::from((k + 1, 2)), r);
        let scale = rising / (Rational::from(k + 1) * Rational::from(Integer::from(r).pow(k)));
        sum = sum.add(&pi.pow_integer(-(k as i32) - 1)?.mul_rational(&scale));
    }
    let tail = Rational::from((Integer::from(r), Integer::from(10).pow(r)));
    Ok(sum.add(&Interval::from_rational(&tail, bits)))
}

/// The correction-term onset `N₁(r) = max(85, ⌈(4/π²)·N₀(2r+2)²⌉)`,
/// defined for every r ≥ 1.
pub fn n1_threshold(r: u32, policy: &PrecisionPolicy) -> Result<u64, ConstantsError> {
    if r == 0 {
        return Err(ConstantsError::BadThresholdOrder(r));
    }
    let m = 2 * r as u64 + 2;
    let raw = certified_ceiling(policy, policy.base_bits, |bits| {
        let n0 = n0_bound(m, bits)?;
        n0.pow_integer(2)?
            .mul_rational(&Rational::from(4))
            .div(&Interval::pi(bits).pow_integer(2)?)
            .map_err(ConstantsError::from)
    })?;
    Ok((85u64).max(to_u64(raw)?))
}

fn to_u64(value: Integer) -> Result<u64, ConstantsError> {
    value
        .to_u64()
        .ok_or(ConstantsError::ThresholdOverflow(value))
}

/// All constants for one order r ≥ 2.  The intervals stored here are the
/// display enclosures computed at construction precision; computations that
/// need a particular working precision re-derive the enclosures through
/// [`ConstantSet::leading_interval`] and friends.
#[derive(Debug, Clone)]
pub struct ConstantSet {
    pub r: u32,
    c: Interval,
    c1: Interval,
    c2: Interval,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n: u64,
}

impl ConstantSet {
    /// Enclosure of C(r) at the requested precision.
    pub fn leading_interval(&self, bits: u32) -> Interval {
        leading_constant(self.r, bits)
    }

    /// Enclosure of C₁(r) at the requested precision.
    pub fn lower_offset_interval(&self, bits: u32) -> Interval {
        lower_offset_constant(self.r, bits)
    }

    /// Enclosure of C₂(r) at the requested precision.
    pub fn upper_offset_interval(&self, bits: u32) -> Interval {
        upper_offset_constant(self.r, bits).expect("positive integer powers of pi")
    }

    /// The stored display enclosures, in the order C, C₁, C₂.
    pub fn display_intervals(&self) -> (&Interval, &Interval, &Interval) {
        (&self.c, &self.c1, &self.c2)
    }
}

impl Serialize for ConstantSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        fn endpoints<S: Serializer>(
            state: &mut S::SerializeStruct,
            key: &'static str,
            iv: &Interval,
        ) -> Result<(), S::Error> {
            #[derive(serde::Serialize)]
            struct Endpoints {
                lo: String,
                hi: String,
            }
            state.serialize_field(
                key,
                &Endpoints {
                    lo: iv.lo_string(30),
                    hi: iv.hi_string(30),
                },
            )
        }
        let mut state = serializer.serialize_struct("ConstantSet", 8)?;
        state.serialize_field("r", &self.r)?;
        endpoints::<S>(&mut state, "C", &self.c)?;
        endpoints::<S>(&mut state, "C1", &self.c1)?;
        endpoints::<S>(&mut state, "C2", &self.c2)?;
        state.serialize_field("N1", &self.n1)?;
        state.serialize_field("N2", &self.n2)?;
        state.serialize_field("N3", &self.n3)?;
        state.serialize_field("N", &self.n)?;
        state.end()
    }
}

/// Compute the full constant family for one order r ≥ 2, with certified
/// ceilings for every threshold.
pub fn constants_for(r: u32, policy: &PrecisionPolicy) -> Result<ConstantSet, ConstantsError> {
    if r < 2 {
        return Err(ConstantsError::BadOrder(r));
    }
    let display_bits = policy.base_bits.max(192);
    let c = leading_constant(r, display_bits);
    let c1 = lower_offset_constant(r, display_bits);
    let c2 = upper_offset_constant(r, display_bits)?;

    let n1 = n1_threshold(r, policy)?;

    let n2 = to_u64(certified_ceiling(policy, policy.base_bits, |bits| {
        let c = leading_constant(r, bits);
        let c1 = lower_offset_constant(r, bits);
        c1.add(&Interval::one(bits))
            .div(&c)?
            .pow_integer(2)
            .map_err(ConstantsError::from)
    })?)?;

    let factorial = Rational::from(Integer::from(Integer::factorial(r - 1)));
    let quadratic_piece = to_u64(certified_ceiling(policy, policy.base_bits, |bits| {
        let c2 = upper_offset_constant(r, bits)?;
        let scale = Rational::from(Integer::from(1) << (r + 1)) / factorial.clone();
        c2.add(&Interval::one(bits))
            .mul_rational(&scale)
            .pow_integer(2)
            .map_err(ConstantsError::from)
    })?)?;
    let root_piece = to_u64(certified_ceiling(policy, policy.base_bits, |bits| {
        let c = leading_constant(r, bits);
        let scale = Rational::from(Integer::from(1) << r) / factorial.clone();
        let base = c.pow_integer(2)?.mul_rational(&scale);
        if r == 2 {
            // Exponent 1/(r−1) = 1: no root, no widening.
            Ok(base)
        } else {
            base.pow_rational(1, r - 1).map_err(ConstantsError::from)
        }
    })?)?;
    let n3 = n1
        .max(2 * r as u64 * r as u64)
        .max(quadratic_piece)
        .max(root_piece);
    let n = n2.max(n3);

    Ok(ConstantSet {
        r,
        c,
        c1,
        c2,
        n1,
        n2,
        n3,
        n,
    })
}
