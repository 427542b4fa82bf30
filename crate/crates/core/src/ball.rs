//! Complex values with attached rounding-error radii.
//!
//! The extended-precision determinant tracks, alongside every computed
//! value, an `f64` radius bounding the distance to the mathematically exact
//! result. Radii grow by first-order propagation rules plus a rounding term
//! per operation; the rounding term is skipped when the backend reports the
//! value as exact, which is what keeps determinants of exactly repeated
//! rows at radius zero. All radius arithmetic is done in `f64` with a small
//! multiplicative inflation per step so that its own rounding cannot make a
//! bound optimistic.

use num_complex::Complex;
use num_traits::Zero;

use crate::cmatrix::complex_mag_upper;
use crate::scalar::Real;

/// Generous per-operation rounding-constant for complex addition.
const C_ADD: f64 = 4.0;
/// For complex multiplication (true constant is 2 sqrt 2).
const C_MUL: f64 = 8.0;
/// For complex division in the textbook formula.
const C_DIV: f64 = 16.0;

/// Inflates an upper bound so that the `f64` arithmetic that computed it
/// cannot have rounded it below the true value.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    x * (1.0 + 1e-9)
}

/// A complex value together with a bound on its distance from the exact
/// result it approximates.
#[derive(Clone, Debug)]
pub(crate) struct Ball<T: Real> {
    pub v: Complex<T>,
    pub r: f64,
}

impl<T: Real> Ball<T> {
    /// Wraps a value with zero radius. For inputs that are exact by
    /// construction (file entries, lifted doubles).
    pub fn exact(v: Complex<T>) -> Self {
        Ball { v, r: 0.0 }
    }

    /// Wraps a freshly computed value, charging one rounding term when the
    /// backend flags it as rounded.
    pub fn from_computed(v: Complex<T>) -> Self {
        let r = rounding_term(&v, 1.0);
        Ball { v, r }
    }

    /// Upper bound on the magnitude of the center.
    pub fn mag(&self) -> f64 {
        complex_mag_upper(&self.v)
    }

    /// Whether the ball contains zero: |center| could be at or below the
    /// radius. A zero center always contains zero regardless of radius.
    pub fn contains_zero(&self) -> bool {
        if self.v.is_zero() {
            return true;
        }
        mag_lower(&self.v) <= self.r
    }

    pub fn sub(&self, o: &Ball<T>) -> Ball<T> {
        let v = self.v.clone() - o.v.clone();
        let r = up(self.r + o.r + rounding_term(&v, C_ADD));
        Ball { v, r }
    }

    pub fn mul(&self, o: &Ball<T>) -> Ball<T> {
        let ma = self.mag();
        let mb = o.mag();
        let v = self.v.clone() * o.v.clone();
        let r = up(ma * o.r + mb * self.r + self.r * o.r + rounding_term(&v, C_MUL));
        Ball { v, r }
    }

    /// Division. The divisor ball must exclude zero; otherwise the quotient
    /// is poisoned with an infinite radius.
    pub fn div(&self, o: &Ball<T>) -> Ball<T> {
        let denom_lower = mag_lower(&o.v) - o.r;
        if !(denom_lower > 0.0) {
            let v = self.v.clone() / o.v.clone();
            return Ball {
                v,
                r: f64::INFINITY,
            };
        }
        let v = self.v.clone() / o.v.clone();
        let mq = complex_mag_upper(&v);
        let r = up((self.r + mq * o.r) / denom_lower + rounding_term(&v, C_DIV));
        Ball { v, r }
    }

    pub fn neg(&self) -> Ball<T> {
        Ball {
            v: -self.v.clone(),
            r: self.r,
        }
    }
}

/// Lower bound on the magnitude of a complex value: the `f64` estimate
/// deflated past its conversion and hypot error.
fn mag_lower<T: Real>(z: &Complex<T>) -> f64 {
    let ub = complex_mag_upper(z);
    ub * (1.0 - 1e-9) * (1.0 - 1e-9)
}

/// One rounding charge: `c * u * |v|`, floored at the smallest positive
/// `f64` so underflow cannot hide it. Zero when the backend knows the value
/// is exact.
fn rounding_term<T: Real>(v: &Complex<T>, c: f64) -> f64 {
    let rounded = v.re.is_rounded() || v.im.is_rounded();
    if !rounded {
        return 0.0;
    }
    let u = v.re.unit_roundoff().max(v.im.unit_roundoff());
    (c * u * complex_mag_upper(v)).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Extended;

    fn xb(re: f64, im: f64) -> Ball<Extended> {
        let proto = Extended::with_bits(192);
        Ball::exact(Complex::new(proto.of_f64(re), proto.of_f64(im)))
    }

    #[test]
    fn exact_cancellation_keeps_zero_radius() {
        let a = xb(1.0, 0.5);
        let d = a.sub(&a);
        assert!(d.v.is_zero());
        assert_eq!(d.r, 0.0);
        assert!(d.contains_zero());
    }

    #[test]
    fn rounded_results_carry_positive_radius() {
        let one = xb(1.0, 0.0);
        let three = xb(3.0, 0.0);
        let third = one.div(&three);
        assert!(third.r > 0.0);
        assert!(third.r < 1e-50);
        assert!(!third.contains_zero());
    }

    #[test]
    fn radius_bounds_known_error() {
        // (1/3) * 3 - 1 is within the tracked radius of zero.
        let one = xb(1.0, 0.0);
        let three = xb(3.0, 0.0);
        let z = one.div(&three).mul(&three).sub(&one);
        let actual = complex_mag_upper(&z.v);
        assert!(actual <= z.r, "residual {actual} exceeds radius {}", z.r);
    }

    #[test]
    fn division_by_ambiguous_ball_poisons() {
        let mut tiny = xb(1e-40, 0.0);
        tiny.r = 1e-39;
        let q = xb(1.0, 0.0).div(&tiny);
        assert!(q.r.is_infinite());
        assert!(q.contains_zero() || q.r.is_infinite());
    }

    #[test]
    fn mul_radius_scales_with_magnitudes() {
        let mut a = xb(1e6, 0.0);
        a.r = 1e-3;
        let b = xb(2e6, 0.0);
        let p = a.mul(&b);
        // Radius must cover |b| * ra = 2e3.
        assert!(p.r >= 2e3);
        assert!(p.r < 3e3);
    }
}
