//! Exact complex-rational scalars.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gaussian rational `re + i·im` with arbitrary-precision parts.
pub type ComplexRational = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn real(value: BigRational) -> ComplexRational {
    Complex::new(value, BigRational::zero())
}

pub fn cr(re: i64, im: i64) -> ComplexRational {
    Complex::new(integer(re), integer(im))
}

pub fn imag_unit() -> ComplexRational {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// `i^k` for any integer `k`.
pub fn i_pow(k: i64) -> ComplexRational {
    match k.rem_euclid(4) {
        0 => cr(1, 0),
        1 => cr(0, 1),
        2 => cr(-1, 0),
        _ => cr(0, -1),
    }
}

pub fn sign_pow(k: i64) -> ComplexRational {
    if k.rem_euclid(2) == 0 {
        cr(1, 0)
    } else {
        cr(-1, 0)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // Ratio<BigInt>::to_f64 is exact to rounding for huge numerators too.
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn to_c64(c: &ComplexRational) -> Complex64 {
    Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

pub fn is_integer(q: &BigRational) -> bool {
    q.is_integer()
}

/// Returns the value as `i64` when it is an integer that fits.
pub fn as_small_integer(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Parses `"3"`, `"-1/2"` or a finite decimal such as `"0.25"` into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    if let Some(q) = parse_rational(s) {
        return Some(q);
    }
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        return None;
    } else {
        digits.parse().ok()?
    };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Some(if neg { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_i_cycle() {
        assert_eq!(i_pow(0), cr(1, 0));
        assert_eq!(i_pow(5), imag_unit());
        assert_eq!(i_pow(-1), cr(0, -1));
        assert_eq!(i_pow(2) * i_pow(2), cr(1, 0));
    }

    #[test]
    fn division_is_exact() {
        let a = Complex::new(rational(1, 3), rational(-2, 5));
        let b = Complex::new(rational(7, 2), rational(1, 9));
        let q = a.clone() / b.clone();
        assert_eq!(q * b, a);
    }

    #[test]
    fn rational_strings_round_trip() {
        let q = rational(-6, 4);
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(q));
        assert_eq!(parse_rational("4"), Some(integer(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_decimal_rational("0.25"), Some(rational(1, 4)));
        assert_eq!(parse_decimal_rational("-1.5"), Some(rational(-3, 2)));
    }
}
