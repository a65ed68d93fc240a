//! Exact rational scalars: the only numeric carrier in the IR.
//!
//! A [`Scalar`] is an arbitrary-precision rational kept in lowest terms with a
//! positive denominator (guaranteed by the underlying representation). All
//! field operations on scalars are exact; nothing in the IR ever rounds.

use rug::ops::Pow;
use rug::{Integer, Rational};
use std::fmt::Write as _;

pub type Scalar = Rational;

/// 2^e as an exact rational, for any (possibly negative) exponent.
pub fn pow2(e: i64) -> Scalar {
    if e >= 0 {
        Scalar::from(Integer::from(1) << e as u32)
    } else {
        Scalar::from((Integer::from(1), Integer::from(1) << (-e) as u32))
    }
}

pub fn from_i64(v: i64) -> Scalar {
    Scalar::from(v)
}

/// Parses a scalar from a decimal, scientific, integer or `p/q` literal.
///
/// The conversion is exact: `1.769513e-8` becomes `1769513/10^14`.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: Integer = p.trim().parse().ok()?;
        let den: Integer = q.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Scalar::from((num, den)));
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let neg = int_part.starts_with('-');
    let int_digits = int_part.strip_prefix(['-', '+']).unwrap_or(int_part);
    if !int_digits.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_digits}{frac_part}");
    let mut value = Scalar::from(digits.parse::<Integer>().ok()?);
    let scale = exp10 - frac_part.len() as i64;
    let ten = Integer::from(10);
    if scale >= 0 {
        value *= Scalar::from(ten.pow(scale as u32));
    } else {
        value /= Scalar::from(ten.pow((-scale) as u32));
    }
    if neg {
        value = -value;
    }
    Some(value)
}

/// Renders a scalar exactly.
///
/// Integers print bare; rationals whose denominator is of the form 2^a·5^b
/// with a short decimal expansion print as exact decimals (`-0.5`), and
/// everything else prints as `p/q`. Round-trips through [`parse_scalar`].
pub fn render_scalar(q: &Scalar) -> String {
    const MAX_FRAC_DIGITS: u32 = 12;
    if q.denom() == &1 {
        return q.numer().to_string();
    }
    if let Some(digits) = decimal_frac_digits(q.denom()) {
        if digits <= MAX_FRAC_DIGITS {
            return render_decimal(q, digits);
        }
    }
    format!("{}/{}", q.numer(), q.denom())
}

/// Number of fractional decimal digits needed, if the denominator is 2^a·5^b.
fn decimal_frac_digits(den: &Integer) -> Option<u32> {
    let mut d = den.clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while d.is_even() {
        d >>= 1;
        twos += 1;
    }
    while d.clone() % 5u32 == 0 {
        d /= 5u32;
        fives += 1;
    }
    (d == 1).then_some(twos.max(fives))
}

fn render_decimal(q: &Scalar, digits: u32) -> String {
    let scaled: Integer = (q.clone() * Scalar::from(Integer::from(10).pow(digits)))
        .numer()
        .clone();
    let neg = scaled < 0;
    let body = scaled.abs().to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if body.len() > digits as usize {
        let split = body.len() - digits as usize;
        out.push_str(&body[..split]);
        out.push('.');
        out.push_str(&body[split..]);
    } else {
        out.push_str("0.");
        for _ in 0..(digits as usize - body.len()) {
            out.push('0');
        }
        out.push_str(&body);
    }
    // Trim trailing zeros, keep at least one fractional digit.
    while out.ends_with('0') && !out.ends_with(".0") {
        out.pop();
    }
    out
}

/// FNV-1a over a byte string; used for stable structural identifiers.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Writes `q` in the form used by SMT-LIB exports: `n`, `(- n)`, `(/ p q)`.
pub fn render_smt2(q: &Scalar, out: &mut String) {
    if q.denom() == &1 {
        let n = q.numer();
        if *n < 0 {
            write!(out, "(- {})", n.clone().abs()).unwrap();
        } else {
            write!(out, "{n}").unwrap();
        }
    } else if *q < 0 {
        let abs = Scalar::from((-q.numer().clone(), q.denom().clone()));
        out.push_str("(- ");
        render_smt2(&abs, out);
        out.push(')');
    } else {
        write!(out, "(/ {} {})", q.numer(), q.denom()).unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimal_exact() {
        assert_eq!(parse_scalar("1.769513e-8").unwrap(), Scalar::from((1769513, Integer::from(10).pow(14))));
        assert_eq!(parse_scalar("-0.5").unwrap(), Scalar::from((-1, 2)));
        assert_eq!(parse_scalar("25889/100000000").unwrap(), Scalar::from((25889, 100000000)));
        assert_eq!(parse_scalar("6.0").unwrap(), Scalar::from(6));
        assert_eq!(parse_scalar("5e2").unwrap(), Scalar::from(500));
        assert!(parse_scalar("abc").is_none());
        assert!(parse_scalar("1/0").is_none());
    }

    #[test]
    fn render_short_decimals() {
        assert_eq!(render_scalar(&Scalar::from((-1, 2))), "-0.5");
        assert_eq!(render_scalar(&Scalar::from((25889, 100000000))), "0.00025889");
        assert_eq!(render_scalar(&Scalar::from(6)), "6");
        // 2^23 denominator needs 23 fractional digits: stays rational.
        assert_eq!(render_scalar(&Scalar::from((6851933, 8388608))), "6851933/8388608");
        assert_eq!(render_scalar(&Scalar::from((1, 3))), "1/3");
    }

    #[test]
    fn render_parse_roundtrip() {
        for q in [
            Scalar::from((355, 113)),
            Scalar::from((-7, 10)),
            pow2(-150),
            Scalar::from(0),
            Scalar::from((1769513, Integer::from(10).pow(14))),
        ] {
            assert_eq!(parse_scalar(&render_scalar(&q)).unwrap(), q);
        }
    }

    #[test]
    fn smt2_rendering() {
        let mut s = String::new();
        render_smt2(&Scalar::from((-25889, 100000000)), &mut s);
        assert_eq!(s, "(- (/ 25889 100000000))");
        s.clear();
        render_smt2(&Scalar::from(-3), &mut s);
        assert_eq!(s, "(- 3)");
        s.clear();
        render_smt2(&Scalar::from((1, 2)), &mut s);
        assert_eq!(s, "(/ 1 2)");
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), Scalar::from(8));
        assert_eq!(pow2(-2), Scalar::from((1, 4)));
        assert_eq!(pow2(0), Scalar::from(1));
    }
}
