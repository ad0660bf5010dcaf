//! Arbitrary-precision rational scalars and the few conversions the rest of
//! the crate needs (exact decimal parsing, robust float rendering).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub use num_rational::BigRational;

/// Exact `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// `1/n!` as a rational.
pub fn inv_factorial(n: u32) -> BigRational {
    BigRational::new(BigInt::one(), factorial(n))
}

/// Integer power with possibly negative exponent. `base` must be nonzero
/// when `exp < 0`.
pub fn pow_i64(base: &BigRational, exp: i64) -> BigRational {
    assert!(
        exp >= 0 || !base.is_zero(),
        "negative power of zero"
    );
    base.pow(exp as i32)
}

/// Parse a rational from decimal (`"0.25"`, `"3"`) or fraction (`"3/2"`)
/// notation. Decimal literals are converted exactly, digit by digit, never
/// through binary floating point.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty rational literal"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::invalid(format!("bad rational literal `{s}`")));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::invalid(format!("bad rational literal `{s}`")));
    }
    let mut num: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().unwrap()
    };
    let mut den = BigInt::one();
    for c in frac_part.chars() {
        num = num * 10 + (c as u8 - b'0');
        den *= 10;
    }
    Ok(BigRational::new(num * sign, den))
}

/// Render as `num/den` (always with an explicit denominator, so the output
/// re-parses bit-exactly).
pub fn to_fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Render as an integer when the denominator is 1, `num/den` otherwise.
pub fn to_short_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational to `f64`, safe for numerators/denominators far beyond the f64
/// range (the naive numer/denom conversion would give `inf/inf = NaN`).
pub fn to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    if nbits < 900 && dbits < 900 {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        return n / d;
    }
    // Scale so the quotient carries ~80 significant bits, convert, undo.
    let shift = nbits - dbits - 80;
    let (num, den) = if shift >= 0 {
        (r.numer().clone(), r.denom().clone() << shift as u64)
    } else {
        (r.numer().clone() << (-shift) as u64, r.denom().clone())
    };
    let q = &num / &den;
    let qf = q.to_f64().unwrap_or(f64::NAN);
    qf * 2f64.powi(shift as i32)
}

/// `ln` of a positive rational, stable for values outside the f64 range.
pub fn ln(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln of non-positive rational");
    fn ln_bigint(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 900 {
            return x.to_f64().unwrap().ln();
        }
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap();
        top.ln() + (shift as f64) * std::f64::consts::LN_2
    }
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

/// Format with the given number of significant digits, plain decimal
/// notation for moderate magnitudes and scientific otherwise.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..13).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.*e}", sig - 1, x)
    }
}

/// Sum of a slice of rationals.
pub fn sum(rs: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for r in rs {
        acc += r;
    }
    acc
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_i64(7).unwrap());
        // 0.1 is exactly 1/10, not the nearest binary double
        assert_eq!(parse_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn f64_rendering_handles_huge_values() {
        // (10^400)! style magnitudes: build 2^2000 / (3 * 2^2000 - 1)-ish
        let big = BigInt::one() << 2000u32;
        let r = BigRational::new(big.clone(), big.clone() * 3 - 1);
        let f = to_f64(&r);
        assert!((f - 1.0 / 3.0).abs() < 1e-12);
        let tiny = BigRational::new(BigInt::one(), big);
        assert_eq!(to_f64(&tiny), 0.0); // underflows cleanly, not NaN
    }

    #[test]
    fn ln_of_huge_rational() {
        let big = BigInt::one() << 4000u32;
        let r = BigRational::new(big, BigInt::one());
        assert!((ln(&r) - 4000.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(-0.36470530190000001, 10), "-0.3647053019");
        assert_eq!(format_sig(2.0 * (-2.0f64).exp(), 10), "0.2706705665");
        assert_eq!(format_sig(0.0, 10), "0");
        assert_eq!(format_sig(1.23456789012e20, 10), "1.234567890e20");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(inv_factorial(3), BigRational::new(1.into(), 6.into()));
    }
}
