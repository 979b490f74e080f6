//! Small numeric helpers shared by the parameter formulas and the exact code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

const INTEGER_SNAP: f64 = 1e-9;

/// `⌈x⌉`, treating values within a relative `1e-9` of an integer as that
/// integer. Parameter formulas such as `⌈1/ε'⌉` with `ε' = 0.12/6` would
/// otherwise round up on binary64 noise.
pub fn ceil_snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= INTEGER_SNAP * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// `⌊x⌋` with the same integer snapping as [`ceil_snap`].
pub fn floor_snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= INTEGER_SNAP * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

/// Formats a rational as `"p/q"`, always including the denominator.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.35"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let r = BigRational::new(numer, denom);
    Some(if negative { -r } else { r })
}

/// Nearest binary64 to an exact rational. Handles numerators and
/// denominators far beyond the binary64 range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(p), Some(q)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if p.is_finite() && q.is_finite() && q != 0.0 {
            return p / q;
        }
    }
    // Scale both sides down to keep them representable.
    let bits = |x: &BigInt| x.abs().bits() as i64;
    let shift = (bits(r.numer()).max(bits(r.denom())) - 900).max(0) as usize;
    let p = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let q = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    if q == 0.0 {
        return r.to_f64().unwrap_or(f64::NAN);
    }
    p / q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping_absorbs_float_noise() {
        assert_eq!(ceil_snap(1.0 / (0.12 / 6.0)), 50.0);
        assert_eq!(ceil_snap(50.2), 51.0);
        assert_eq!(floor_snap(1.0 / 0.02f64.powf(2.0)), 2500.0);
        assert_eq!(floor_snap(2499.5), 2499.0);
    }

    #[test]
    fn parses_rationals() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(parse_rational("3/10"), Some(r(3, 10)));
        assert_eq!(parse_rational("0.35"), Some(r(7, 20)));
        assert_eq!(parse_rational("1"), Some(r(1, 1)));
        assert_eq!(parse_rational(".5"), Some(r(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = num_traits::pow(BigInt::from(10u32), 400);
        let r = BigRational::new(big.clone() * 3, big * 4);
        assert_eq!(rational_to_f64(&r), 0.75);
        assert_eq!(rational_string(&BigRational::from_integer(1.into())), "1/1");
    }
}
