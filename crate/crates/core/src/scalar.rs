//! Real scalar abstraction underneath the complex matrix layer.
//!
//! Every numeric kernel in this crate is generic over a [`Real`] type: `f64`
//! for double mode and [`Extended`] for multiprecision mode. The trait is a
//! thin extension of the num-traits surface with the operations the kernels
//! actually need: prototype-style construction (a value carries its working
//! precision, so new constants are made *from* an existing value), a handful
//! of transcendental functions, and the error-tracking hooks used by the
//! rounding-radius bookkeeping (`unit_roundoff`, `is_rounded`, `mag_upper`).
//!
//! [`Extended`] wraps `astro_float::BigFloat`, which exposes arithmetic only
//! through explicit `(precision, rounding-mode)` methods. The wrapper stores
//! the target mantissa length and gives the value ordinary operator syntax;
//! binary operations produce results at the larger of the two operand
//! precisions, so neutral elements created by `Zero::zero` or `One::one`
//! never truncate the other operand.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_traits::{Num, One, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Mantissa length used when a value must be created without a prototype
/// (`Zero::zero`, `One::one`, `from_str_radix`). Binary operations take the
/// maximum of the operand precisions, so these neutral values never lower
/// the precision of a computation.
const FALLBACK_BITS: u32 = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constants cache allocation"));
}

/// Real scalar usable as the component type of complex matrix arithmetic.
///
/// The error-tracking hooks have conservative contracts: `mag_upper` must
/// return an upper bound on |self| (never an underestimate), `is_rounded`
/// may report `true` for an exact value but never the reverse, and
/// `unit_roundoff` must not exceed 2^-52.
pub trait Real:
    Clone
    + Num
    + Neg<Output = Self>
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Builds a value from `v` at the same working precision as `self`.
    fn of_f64(&self, v: f64) -> Self;

    /// Nearest `f64`, saturating on overflow.
    fn to_f64(&self) -> f64;

    /// Absolute value.
    fn abs(&self) -> Self;

    /// Square root (of a nonnegative value).
    fn sqrt(&self) -> Self;

    /// The circle constant at the working precision of `self`.
    fn pi_like(&self) -> Self;

    /// Sine at the working precision of `self`.
    fn sin(&self) -> Self;

    /// Cosine at the working precision of `self`.
    fn cos(&self) -> Self;

    /// Cosine and sine of `2 pi num / den`, at the working precision of
    /// `self`.
    ///
    /// Quarter turns (`4 num` divisible by `den`) yield the exact constants
    /// 0, 1, -1. For every other fraction the angle is formed with guard
    /// precision, so the distance between the returned pair and the true
    /// point on the unit circle stays below `unit_roundoff` times the
    /// magnitude bound the error-tracking layer computes for it. Requires
    /// `0 < den <= 2^40`.
    fn cis_frac(&self, num: u64, den: u64) -> (Self, Self);

    /// Upper bound on the relative rounding error of one arithmetic
    /// operation at the working precision of `self`.
    fn unit_roundoff(&self) -> f64;

    /// Whether the value may differ from the mathematically exact result of
    /// the operations that produced it.
    fn is_rounded(&self) -> bool;

    /// Upper bound on |self| as an `f64`. Never underestimates; values whose
    /// magnitude falls below the smallest positive `f64` report that number.
    fn mag_upper(&self) -> f64;
}

/// Exact (cos, sin) when `num/den` is a multiple of a quarter turn.
fn quarter_turn(num: u64, den: u64) -> Option<(f64, f64)> {
    assert!(den != 0, "cis_frac needs a nonzero denominator");
    debug_assert!(
        den <= 1 << 40,
        "cis_frac denominator exceeds the error contract"
    );
    let m = (num % den) as u128;
    let four_m = 4 * m;
    if four_m % den as u128 != 0 {
        return None;
    }
    Some(match (four_m / den as u128) as u8 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    })
}

impl Real for f64 {
    fn of_f64(&self, v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn pi_like(&self) -> Self {
        std::f64::consts::PI
    }

    fn sin(&self) -> Self {
        f64::sin(*self)
    }

    fn cos(&self) -> Self {
        f64::cos(*self)
    }

    fn cis_frac(&self, num: u64, den: u64) -> (Self, Self) {
        if let Some(exact) = quarter_turn(num, den) {
            return exact;
        }
        let theta = 2.0 * std::f64::consts::PI * ((num % den) as f64 / den as f64);
        (theta.cos(), theta.sin())
    }

    fn unit_roundoff(&self) -> f64 {
        f64::EPSILON / 2.0
    }

    fn is_rounded(&self) -> bool {
        true
    }

    fn mag_upper(&self) -> f64 {
        f64::abs(*self)
    }
}

/// Arbitrary-precision real number carrying its target mantissa length.
///
/// Construction happens through a prototype ([`Extended::with_bits`] makes a
/// zero at the requested precision, [`Real::of_f64`] copies the precision of
/// an existing value); arithmetic follows max-of-operands precision rules.
/// The `astro_float` backend tracks whether any rounding occurred on the
/// path that produced a value, which [`Real::is_rounded`] exposes and the
/// ball-arithmetic layer uses to keep exactly-cancelling eliminations at
/// radius zero.
#[derive(Clone)]
pub struct Extended {
    v: BigFloat,
    bits: u32,
}

impl Extended {
    /// Zero at `bits` of mantissa; the prototype for a whole computation.
    ///
    /// `bits` is clamped to at least one machine word (the backend allocates
    /// whole words anyway, so the effective precision never drops below the
    /// request).
    pub fn with_bits(bits: u32) -> Self {
        let bits = bits.max(FALLBACK_BITS);
        Self {
            v: BigFloat::from_f64(0.0, bits as usize),
            bits,
        }
    }

    /// Exact embedding of an `f64` at `bits` of mantissa.
    pub fn from_f64_bits(v: f64, bits: u32) -> Self {
        Extended::with_bits(bits).of_f64(v)
    }

    /// Target mantissa length in bits.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn wp(&self, other: &Self) -> (usize, u32) {
        let bits = self.bits.max(other.bits);
        (bits as usize, bits)
    }
}

impl PartialEq for Extended {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.v.cmp(&other.v), Some(0))
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|s| s.cmp(&0))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Debug for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}b", self.v, self.bits)
    }
}

impl Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Self) -> Self {
        let (p, bits) = self.wp(&rhs);
        Extended {
            v: self.v.add(&rhs.v, p, RM),
            bits,
        }
    }
}

impl Sub for Extended {
    type Output = Extended;
    fn sub(self, rhs: Self) -> Self {
        let (p, bits) = self.wp(&rhs);
        Extended {
            v: self.v.sub(&rhs.v, p, RM),
            bits,
        }
    }
}

impl Mul for Extended {
    type Output = Extended;
    fn mul(self, rhs: Self) -> Self {
        let (p, bits) = self.wp(&rhs);
        Extended {
            v: self.v.mul(&rhs.v, p, RM),
            bits,
        }
    }
}

impl Div for Extended {
    type Output = Extended;
    fn div(self, rhs: Self) -> Self {
        let (p, bits) = self.wp(&rhs);
        Extended {
            v: self.v.div(&rhs.v, p, RM),
            bits,
        }
    }
}

impl Rem for Extended {
    type Output = Extended;
    fn rem(self, rhs: Self) -> Self {
        let bits = self.bits.max(rhs.bits);
        Extended {
            v: self.v.rem(&rhs.v),
            bits,
        }
    }
}

impl Neg for Extended {
    type Output = Extended;
    fn neg(self) -> Self {
        Extended {
            v: self.v.neg(),
            bits: self.bits,
        }
    }
}

impl Zero for Extended {
    fn zero() -> Self {
        Extended::with_bits(FALLBACK_BITS)
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
}

impl One for Extended {
    fn one() -> Self {
        Extended::with_bits(FALLBACK_BITS).of_f64(1.0)
    }
}

/// Error returned by `Extended`'s `from_str_radix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExtendedError(String);

impl fmt::Display for ParseExtendedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse extended float: {}", self.0)
    }
}

impl std::error::Error for ParseExtendedError {}

impl Num for Extended {
    type FromStrRadixErr = ParseExtendedError;

    /// Parses at a fixed 256-bit precision. Prefer building values through a
    /// prototype; this exists to satisfy the num-traits surface.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let rdx = match radix {
            2 => Radix::Bin,
            8 => Radix::Oct,
            10 => Radix::Dec,
            16 => Radix::Hex,
            _ => return Err(ParseExtendedError(format!("unsupported radix {radix}"))),
        };
        let v = CONSTS.with(|c| BigFloat::parse(s, rdx, 256, RM, &mut c.borrow_mut()));
        if v.is_nan() {
            return Err(ParseExtendedError(format!("invalid literal {s:?}")));
        }
        Ok(Extended { v, bits: 256 })
    }
}

/// 2^e, exact for every representable power including the subnormal range,
/// saturating to zero or infinity outside it. `f64::powi` cannot be used
/// here: for exponents below about -1023 it evaluates as the reciprocal of
/// an overflowing power and silently returns zero.
fn pow2(e: i32) -> f64 {
    if (-1022..=1023).contains(&e) {
        f64::from_bits(((e as i64 + 1023) as u64) << 52)
    } else if e > 1023 {
        f64::INFINITY
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}

impl Real for Extended {
    fn of_f64(&self, v: f64) -> Self {
        let p = self.bits as usize;
        // The backend converts subnormal doubles to half their value; feed
        // it a normalized one and undo the scaling by an exact power of two.
        if v != 0.0 && v.is_finite() && v.abs() < f64::MIN_POSITIVE {
            let scaled = BigFloat::from_f64(v * pow2(108), p);
            let down = BigFloat::from_f64(pow2(-108), p);
            return Extended {
                v: scaled.mul(&down, p, RM),
                bits: self.bits,
            };
        }
        Extended {
            v: BigFloat::from_f64(v, p),
            bits: self.bits,
        }
    }

    fn to_f64(&self) -> f64 {
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.v.as_raw_parts() {
            None => f64::NAN,
            Some((words, n_bits, sign, exp, _)) => {
                if n_bits == 0 || words.is_empty() {
                    return 0.0;
                }
                // Little-endian word order: the most significant word comes
                // last and is normalized. The value is 0.mantissa * 2^exp,
                // so frac below lies in [0.5, 1). The scaling is staged so
                // every intermediate stays inside the representable range.
                let msw = words[words.len() - 1] as f64;
                let next = if words.len() >= 2 {
                    words[words.len() - 2] as f64
                } else {
                    0.0
                };
                let frac = msw * pow2(-64) + next * pow2(-128);
                let mag = if (-965..=1023).contains(&exp) {
                    frac * pow2(exp)
                } else if exp == 1024 {
                    frac * pow2(1023) * 2.0
                } else if exp > 1024 {
                    f64::INFINITY
                } else if exp >= -1140 {
                    frac * pow2(-900) * pow2(exp + 900)
                } else {
                    0.0
                };
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    fn abs(&self) -> Self {
        Extended {
            v: self.v.abs(),
            bits: self.bits,
        }
    }

    fn sqrt(&self) -> Self {
        Extended {
            v: self.v.sqrt(self.bits as usize, RM),
            bits: self.bits,
        }
    }

    fn pi_like(&self) -> Self {
        let v = CONSTS.with(|c| c.borrow_mut().pi(self.bits as usize, RM));
        Extended { v, bits: self.bits }
    }

    fn sin(&self) -> Self {
        let v = CONSTS.with(|c| self.v.sin(self.bits as usize, RM, &mut c.borrow_mut()));
        Extended { v, bits: self.bits }
    }

    fn cos(&self) -> Self {
        let v = CONSTS.with(|c| self.v.cos(self.bits as usize, RM, &mut c.borrow_mut()));
        Extended { v, bits: self.bits }
    }

    fn cis_frac(&self, num: u64, den: u64) -> (Self, Self) {
        if let Some((c, s)) = quarter_turn(num, den) {
            return (self.of_f64(c), self.of_f64(s));
        }
        // The angle carries 64 guard bits. Sine and cosine are correctly
        // rounded at the target precision, so the angle's rounding error,
        // propagated through them, stays far below the half-ulp the final
        // rounding already contributes.
        let m = num % den;
        let p = self.bits as usize;
        let a = p + 64;
        let (cv, sv) = CONSTS.with(|c| {
            let mut cc = c.borrow_mut();
            let pi = cc.pi(a, RM);
            let two_m = BigFloat::from_f64((2 * m) as f64, a);
            let d = BigFloat::from_f64(den as f64, a);
            let theta = pi.mul(&two_m, a, RM).div(&d, a, RM);
            (theta.cos(p, RM, &mut cc), theta.sin(p, RM, &mut cc))
        });
        (
            Extended {
                v: cv,
                bits: self.bits,
            },
            Extended {
                v: sv,
                bits: self.bits,
            },
        )
    }

    fn unit_roundoff(&self) -> f64 {
        2f64.powi(-(self.bits.min(1074) as i32))
    }

    fn is_rounded(&self) -> bool {
        self.v.inexact()
    }

    fn mag_upper(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let approx = self.to_f64().abs();
        if !approx.is_finite() {
            return f64::INFINITY;
        }
        // to_f64 keeps 128 mantissa bits before the final double rounding,
        // so inflating by 2^-50 dominates its conversion error. Values that
        // underflow the double range are still nonzero; report the smallest
        // positive double as their bound.
        let ub = approx * (1.0 + 2f64.powi(-50));
        if ub == 0.0 {
            f64::MIN_POSITIVE
        } else {
            ub
        }
    }
}
