//! Closed intervals with exact rational or infinite endpoints.
//!
//! Field operations (add, sub, mul, div, min, max, abs, pow, mod) are computed
//! with exact rational endpoint arithmetic, so they introduce no rounding at
//! all. Transcendental functions (sqrt, sin, cos, exp, log) and pi are
//! enclosed by evaluating MPFR at a configurable working precision with
//! outward rounding; the returned endpoints are the exact rational values of
//! the directed-rounded floats, so the enclosures are rigorous.
//!
//! Division by an interval containing zero, and other domain escapes, widen
//! to the entire real line rather than erroring: unknown is always sound.

use crate::scalar::{render_scalar, Scalar};
use rug::float::{Constant, Round};
use rug::Float;
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInf,
    Finite(Scalar),
    PosInf,
}

use Endpoint::*;

impl Endpoint {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    fn neg(&self) -> Endpoint {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            Finite(q) => Finite(-q.clone()),
        }
    }

    fn add(&self, other: &Endpoint) -> Option<Endpoint> {
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => None,
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (Finite(a), Finite(b)) => Some(Finite(Scalar::from(a + b.clone()))),
        }
    }

    /// Product with the convention 0 · ±inf = 0, which is sound for closed
    /// interval endpoints.
    fn mul(&self, other: &Endpoint) -> Endpoint {
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(Scalar::from(a * b.clone())),
            (Finite(a), inf) | (inf, Finite(a)) => match a.cmp0() {
                Ordering::Equal => Finite(Scalar::from(0)),
                Ordering::Greater => inf.clone(),
                Ordering::Less => inf.neg(),
            },
            (NegInf, NegInf) | (PosInf, PosInf) => PosInf,
            _ => NegInf,
        }
    }
}

impl PartialOrd for Endpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Endpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => write!(f, "-inf"),
            PosInf => write!(f, "inf"),
            Finite(q) => write!(f, "{}", render_scalar(q)),
        }
    }
}

/// Set of reals `{x : lo <= x <= hi}` (closed-endpoint semantics).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn entire() -> Interval {
        Interval { lo: NegInf, hi: PosInf }
    }

    pub fn point(q: Scalar) -> Interval {
        Interval { lo: Finite(q.clone()), hi: Finite(q) }
    }

    pub fn finite(lo: Scalar, hi: Scalar) -> Interval {
        Interval::new(Finite(lo), Finite(hi))
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo.is_finite() && self.lo == self.hi
    }

    pub fn as_point(&self) -> Option<&Scalar> {
        if self.is_point() {
            self.lo.finite()
        } else {
            None
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Width as an endpoint; infinite for unbounded intervals.
    pub fn width(&self) -> Endpoint {
        match (&self.lo, &self.hi) {
            (Finite(a), Finite(b)) => Finite(Scalar::from(b - a.clone())),
            _ => PosInf,
        }
    }

    pub fn contains(&self, q: &Scalar) -> bool {
        let p = Finite(q.clone());
        self.lo <= p && p <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Scalar::from(0))
    }

    pub fn midpoint(&self) -> Option<Scalar> {
        match (&self.lo, &self.hi) {
            (Finite(a), Finite(b)) => Some(Scalar::from(a + b.clone()) / Scalar::from(2)),
            _ => None,
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Intersection; `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// |x| over the interval: [max(lo,0,-hi)... computed via cases.
    pub fn abs(&self) -> Interval {
        let neg = self.neg();
        let zero = Scalar::from(0);
        if self.lo >= Finite(zero.clone()) {
            self.clone()
        } else if self.hi <= Finite(zero.clone()) {
            neg
        } else {
            Interval {
                lo: Finite(zero),
                hi: self.hi.clone().max(neg.hi),
            }
        }
    }

    /// Largest absolute value attained, as an endpoint.
    pub fn magnitude(&self) -> Endpoint {
        self.abs().hi
    }

    /// Smallest absolute value attained.
    pub fn mignitude(&self) -> Scalar {
        match self.abs().lo {
            Finite(q) => q,
            _ => unreachable!("abs lower bound is finite"),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo).unwrap_or(NegInf),
            hi: self.hi.add(&other.hi).unwrap_or(PosInf),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    /// Interval division. An interval divisor containing 0 yields the entire
    /// line (the evaluation stays total; unknown = infinite interval).
    pub fn div(&self, other: &Interval) -> Interval {
        if other.contains_zero() {
            return Interval::entire();
        }
        let inv = |e: &Endpoint| -> Endpoint {
            match e {
                NegInf | PosInf => Finite(Scalar::from(0)),
                Finite(q) => Finite(Scalar::from(1) / q.clone()),
            }
        };
        // 0 not in divisor, so reciprocal is monotone decreasing on it.
        let recip = Interval {
            lo: inv(&other.hi),
            hi: inv(&other.lo),
        };
        self.mul(&recip)
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// x^n for a literal non-negative integer exponent.
    pub fn pow(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::point(Scalar::from(1));
        }
        let ep = |e: &Endpoint| -> Endpoint {
            match e {
                Finite(q) => Finite(Scalar::from(rug::ops::Pow::pow(q, n))),
                NegInf => {
                    if n % 2 == 0 {
                        PosInf
                    } else {
                        NegInf
                    }
                }
                PosInf => PosInf,
            }
        };
        if n % 2 == 1 {
            Interval { lo: ep(&self.lo), hi: ep(&self.hi) }
        } else {
            let a = ep(&self.lo);
            let b = ep(&self.hi);
            let hi = a.clone().max(b.clone());
            let lo = if self.contains_zero() {
                Finite(Scalar::from(0))
            } else {
                a.min(b)
            };
            Interval { lo, hi }
        }
    }

    /// Euclidean modulus: values lie in [0, |m|). When both operands are
    /// points (and the divisor nonzero) the result is exact; otherwise a
    /// sound over-approximation [0, sup|divisor|] is returned.
    pub fn mod_euclid(&self, other: &Interval) -> Interval {
        if let (Some(x), Some(m)) = (self.as_point(), other.as_point()) {
            if *m != 0 {
                return Interval::point(euclid_mod(x, m));
            }
        }
        // Divisor a nonzero point, dividend an interval that stays within one
        // period: shift exactly.
        if let Some(m) = other.as_point() {
            if *m != 0 {
                if let (Finite(a), Finite(b)) = (&self.lo, &self.hi) {
                    let qa = euclid_quotient(a, m);
                    let qb = euclid_quotient(b, m);
                    if qa == qb {
                        let base = Scalar::from(&qa * m.clone());
                        return Interval::finite(
                            Scalar::from(a - base.clone()),
                            Scalar::from(b - base),
                        );
                    }
                }
            }
        }
        match other.magnitude() {
            Finite(q) => Interval::finite(Scalar::from(0), q),
            _ => Interval::new(Finite(Scalar::from(0)), PosInf),
        }
    }

    /// sqrt enclosure; the negative part of the input is treated as unknown
    /// and widens the result to the entire line.
    pub fn sqrt(&self, prec: u32) -> Interval {
        if self.hi < Finite(Scalar::from(0)) {
            return Interval::entire();
        }
        let partial = self.lo < Finite(Scalar::from(0));
        let lo = if partial {
            Finite(Scalar::from(0))
        } else {
            match &self.lo {
                Finite(q) => monotone_point(q, prec, Round::Down, |f, r| {
                    f.sqrt_round(r);
                }),
                _ => unreachable!(),
            }
        };
        let hi = match &self.hi {
            PosInf => PosInf,
            Finite(q) => monotone_point(q, prec, Round::Up, |f, r| {
                f.sqrt_round(r);
            }),
            NegInf => unreachable!(),
        };
        Interval { lo, hi }
    }

    pub fn exp(&self, prec: u32) -> Interval {
        let lo = match &self.lo {
            NegInf => Finite(Scalar::from(0)),
            PosInf => PosInf,
            Finite(q) => monotone_point(q, prec, Round::Down, |f, r| {
                f.exp_round(r);
            }),
        };
        let hi = match &self.hi {
            NegInf => Finite(Scalar::from(0)),
            PosInf => PosInf,
            Finite(q) => monotone_point(q, prec, Round::Up, |f, r| {
                f.exp_round(r);
            }),
        };
        Interval { lo, hi }
    }

    /// Natural logarithm enclosure over the positive part of the input.
    pub fn log(&self, prec: u32) -> Interval {
        let zero = Scalar::from(0);
        if self.hi <= Finite(zero.clone()) {
            return Interval::entire();
        }
        let lo = if self.lo <= Finite(zero) {
            NegInf
        } else {
            match &self.lo {
                Finite(q) => monotone_point(q, prec, Round::Down, |f, r| {
                    f.ln_round(r);
                }),
                _ => unreachable!(),
            }
        };
        let hi = match &self.hi {
            PosInf => PosInf,
            Finite(q) => monotone_point(q, prec, Round::Up, |f, r| {
                f.ln_round(r);
            }),
            NegInf => unreachable!(),
        };
        Interval { lo, hi }
    }

    pub fn sin(&self, prec: u32) -> Interval {
        periodic_enclosure(self, prec, Trig::Sin)
    }

    pub fn cos(&self, prec: u32) -> Interval {
        periodic_enclosure(self, prec, Trig::Cos)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo.is_finite() { "[" } else { "(" };
        let close = if self.hi.is_finite() { "]" } else { ")" };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

pub fn euclid_quotient(x: &Scalar, m: &Scalar) -> rug::Integer {
    let q = Scalar::from(x / m.clone());
    if *m > 0 {
        q.floor().numer().clone()
    } else {
        q.ceil().numer().clone()
    }
}

/// Euclidean remainder: `x - m*q` in `[0, |m|)`.
pub fn euclid_mod(x: &Scalar, m: &Scalar) -> Scalar {
    let q = euclid_quotient(x, m);
    Scalar::from(x - Scalar::from(q * m.clone()))
}

/// Enclosure of pi at the given working precision.
pub fn pi_interval(prec: u32) -> Interval {
    let lo = Float::with_val_round(prec, Constant::Pi, Round::Down).0;
    let hi = Float::with_val_round(prec, Constant::Pi, Round::Up).0;
    Interval::finite(lo.to_rational().unwrap(), hi.to_rational().unwrap())
}

/// Directed-rounded transcendental at a rational point for a monotone
/// increasing function: with Round::Down the result is a sound lower bound,
/// with Round::Up a sound upper bound.
fn monotone_point(q: &Scalar, prec: u32, round: Round, apply: impl Fn(&mut Float, Round)) -> Endpoint {
    let mut x = Float::with_val_round(prec, q, round).0;
    apply(&mut x, round);
    float_to_endpoint(&x, round)
}

fn float_to_endpoint(f: &Float, round: Round) -> Endpoint {
    if f.is_finite() {
        Finite(f.to_rational().unwrap())
    } else if f.is_infinite() {
        if f.is_sign_positive() {
            PosInf
        } else {
            NegInf
        }
    } else {
        // NaN from a domain escape: the only sound bound is unbounded.
        match round {
            Round::Down => NegInf,
            _ => PosInf,
        }
    }
}

#[derive(Clone, Copy)]
enum Trig {
    Sin,
    Cos,
}

/// Enclosure of sin(q) or cos(q) at a rational point. The rational is first
/// rounded to a float in both directions; since both functions are
/// 1-Lipschitz, the conversion gap widens the result soundly.
fn trig_point(q: &Scalar, prec: u32, f: Trig) -> Interval {
    let x_lo = Float::with_val_round(prec, q, Round::Down).0;
    let x_hi = Float::with_val_round(prec, q, Round::Up).0;
    let gap = x_hi.to_rational().unwrap() - x_lo.to_rational().unwrap();
    let mut lo_f = x_lo.clone();
    let mut hi_f = x_lo;
    match f {
        Trig::Sin => {
            lo_f.sin_round(Round::Down);
            hi_f.sin_round(Round::Up);
        }
        Trig::Cos => {
            lo_f.cos_round(Round::Down);
            hi_f.cos_round(Round::Up);
        }
    }
    let lo = lo_f.to_rational().unwrap() - gap.clone();
    let hi = hi_f.to_rational().unwrap() + gap;
    clamp_unit(Interval::finite(lo, hi))
}

fn clamp_unit(iv: Interval) -> Interval {
    iv.intersect(&Interval::finite(Scalar::from(-1), Scalar::from(1)))
        .expect("trig enclosure intersects [-1,1]")
}

/// Interval extension of sin/cos via endpoint evaluation plus a scan for
/// critical points. Critical arguments of sin are pi/2 + k*pi (max at even
/// k, min at odd k); of cos they are k*pi (max at even k). Any critical
/// point whose pi-enclosure overlaps the input makes the respective bound
/// saturate, which errs on the side of wider results.
fn periodic_enclosure(iv: &Interval, prec: u32, f: Trig) -> Interval {
    let unit = Interval::finite(Scalar::from(-1), Scalar::from(1));
    let (a, b) = match (&iv.lo, &iv.hi) {
        (Finite(a), Finite(b)) => (a, b),
        _ => return unit,
    };
    let pi = pi_interval(prec);
    let two_pi_hi = match pi.hi() {
        Finite(q) => q.clone() * Scalar::from(2),
        _ => unreachable!(),
    };
    if Scalar::from(b - a.clone()) >= two_pi_hi {
        return unit;
    }
    let (pl, ph) = (pi.lo().finite().unwrap(), pi.hi().finite().unwrap());

    // Offset of critical points in units of pi: 1/2 for sin, 0 for cos.
    let offset = match f {
        Trig::Sin => Scalar::from((1, 2)),
        Trig::Cos => Scalar::from(0),
    };
    // Conservative integer range of k with a <= (k + offset)*pi <= b.
    let ratios = [
        Scalar::from(a / pl.clone()),
        Scalar::from(a / ph.clone()),
        Scalar::from(b / pl.clone()),
        Scalar::from(b / ph.clone()),
    ];
    let k_lo: i64 = {
        let m = ratios.iter().min().unwrap().clone() - &offset;
        m.floor().numer().to_i64().unwrap_or(i64::MIN / 2) - 1
    };
    let k_hi: i64 = {
        let m = ratios.iter().max().unwrap().clone() - &offset;
        m.ceil().numer().to_i64().unwrap_or(i64::MAX / 2) + 1
    };

    let mut result = trig_point(a, prec, f).hull(&trig_point(b, prec, f));
    for k in k_lo..=k_hi {
        let factor = Scalar::from(k) + &offset;
        // Enclosure of (k + offset)*pi.
        let c1 = factor.clone() * pl;
        let c2 = factor.clone() * ph;
        let (c_lo, c_hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        if c_hi < *a || c_lo > *b {
            continue;
        }
        // Critical point may lie inside: saturate the corresponding bound.
        let is_max = match f {
            Trig::Sin => k.rem_euclid(2) == 0,
            Trig::Cos => k.rem_euclid(2) == 0,
        };
        if is_max {
            result = result.hull(&Interval::point(Scalar::from(1)));
        } else {
            result = result.hull(&Interval::point(Scalar::from(-1)));
        }
    }
    clamp_unit(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::pow2;

    fn fin(a: i64, b: i64) -> Interval {
        Interval::finite(Scalar::from(a), Scalar::from(b))
    }

    #[test]
    fn exact_field_ops() {
        let x = fin(2, 3);
        let one = Interval::point(Scalar::from(1));
        assert_eq!(one.add(&x), fin(3, 4));
        assert_eq!(x.sub(&one), fin(1, 2));
        assert_eq!(x.mul(&fin(-1, 2)), fin(-3, 6));
        assert_eq!(x.neg(), fin(-3, -2));
    }

    #[test]
    fn division_by_zero_interval_is_entire() {
        assert_eq!(fin(1, 2).div(&fin(-1, 1)), Interval::entire());
        assert_eq!(fin(1, 2).div(&fin(0, 0)), Interval::entire());
        assert_eq!(fin(4, 8).div(&fin(2, 4)), fin(1, 4));
        assert_eq!(fin(4, 8).div(&fin(-4, -2)), fin(-4, -1));
    }

    #[test]
    fn unbounded_arithmetic() {
        let entire = Interval::entire();
        assert_eq!(entire.add(&fin(1, 2)), entire);
        assert_eq!(fin(0, 0).mul(&entire), fin(0, 0));
        assert_eq!(fin(0, 1).mul(&entire), entire);
        let upper = Interval::new(Finite(Scalar::from(1)), PosInf);
        assert_eq!(upper.mul(&fin(2, 3)), Interval::new(Finite(Scalar::from(2)), PosInf));
    }

    #[test]
    fn pow_even_odd() {
        assert_eq!(fin(-2, 3).pow(2), fin(0, 9));
        assert_eq!(fin(-2, 3).pow(3), fin(-8, 27));
        assert_eq!(fin(-3, -2).pow(2), fin(4, 9));
        assert_eq!(fin(-2, 3).pow(0), fin(1, 1));
    }

    #[test]
    fn abs_and_magnitude() {
        assert_eq!(fin(-3, 2).abs(), fin(0, 3));
        assert_eq!(fin(1, 2).abs(), fin(1, 2));
        assert_eq!(fin(-3, 2).magnitude(), Finite(Scalar::from(3)));
        assert_eq!(fin(-3, 2).mignitude(), Scalar::from(0));
        assert_eq!(fin(-3, -1).mignitude(), Scalar::from(1));
    }

    #[test]
    fn euclid_mod_points() {
        assert_eq!(euclid_mod(&Scalar::from(7), &Scalar::from(4)), Scalar::from(3));
        assert_eq!(euclid_mod(&Scalar::from(-7), &Scalar::from(4)), Scalar::from(1));
        assert_eq!(euclid_mod(&Scalar::from(-7), &Scalar::from(-4)), Scalar::from(1));
        assert_eq!(euclid_mod(&Scalar::from((7, 2)), &Scalar::from(2)), Scalar::from((3, 2)));
    }

    #[test]
    fn mod_interval_forms() {
        // Point-point: exact.
        assert_eq!(
            Interval::point(Scalar::from(7)).mod_euclid(&Interval::point(Scalar::from(4))),
            Interval::point(Scalar::from(3))
        );
        // Same-period shift.
        assert_eq!(fin(5, 6).mod_euclid(&Interval::point(Scalar::from(4))), fin(1, 2));
        // Straddling a period boundary: falls back to [0, m].
        assert_eq!(fin(3, 5).mod_euclid(&Interval::point(Scalar::from(4))), fin(0, 4));
        assert_eq!(fin(0, 10).mod_euclid(&fin(2, 4)), fin(0, 4));
    }

    #[test]
    fn sqrt_enclosure() {
        let r = fin(4, 9).sqrt(64);
        assert!(r.contains(&Scalar::from(2)) && r.contains(&Scalar::from(3)));
        assert!(r.contains_interval(&fin(2, 3)));
        // Tightness: within 2^-50 of [2,3].
        let slack = pow2(-50);
        assert!(*r.lo().finite().unwrap() >= Scalar::from(2) - slack.clone());
        assert!(*r.hi().finite().unwrap() <= Scalar::from(3) + slack);
        // Partially negative input keeps the defined part.
        let p = fin(-1, 4).sqrt(64);
        assert_eq!(p.lo(), &Finite(Scalar::from(0)));
        assert!(p.contains(&Scalar::from(2)));
        // Entirely negative: unknown.
        assert_eq!(fin(-4, -1).sqrt(64), Interval::entire());
    }

    #[test]
    fn exp_log_enclosures() {
        let e = fin(0, 1).exp(64);
        assert!(e.contains(&Scalar::from(1)));
        assert!(e.contains(&Scalar::from((271828, 100000))));
        let l = fin(1, 3).log(64);
        assert!(l.contains(&Scalar::from(0)));
        assert!(l.contains(&Scalar::from((104, 100)))); // ln 3 ~ 1.0986 > 1.04
        assert_eq!(fin(-2, -1).log(64), Interval::entire());
        let partial = fin(0, 1).log(64);
        assert_eq!(partial.lo(), &NegInf);
    }

    #[test]
    fn sin_enclosures() {
        let prec = 113;
        // Monotone range.
        let s = fin(0, 1).sin(prec);
        assert!(s.contains(&Scalar::from(0)));
        assert!(*s.hi().finite().unwrap() < Scalar::from((85, 100)));
        assert!(*s.hi().finite().unwrap() > Scalar::from((84, 100)));
        // Contains the maximum at pi/2.
        let m = fin(1, 2).sin(prec);
        assert_eq!(m.hi(), &Finite(Scalar::from(1)));
        assert!(*m.lo().finite().unwrap() < Scalar::from((85, 100)));
        // Full period.
        let full = fin(-10, 10).sin(prec);
        assert_eq!(full, Interval::finite(Scalar::from(-1), Scalar::from(1)));
        // Unbounded.
        assert_eq!(Interval::entire().sin(prec), Interval::finite(Scalar::from(-1), Scalar::from(1)));
    }

    #[test]
    fn cos_enclosures() {
        let prec = 113;
        let c = fin(0, 1).cos(prec);
        assert_eq!(c.hi(), &Finite(Scalar::from(1))); // critical point at 0
        let c2 = fin(1, 4).cos(prec);
        assert!(*c2.hi().finite().unwrap() < Scalar::from((55, 100)));
        assert_eq!(c2.lo(), &Finite(Scalar::from(-1))); // contains pi
        // No critical point inside [1, 3]: min is cos(3), not -1.
        let c3 = fin(1, 3).cos(prec);
        assert!(*c3.lo().finite().unwrap() > Scalar::from(-1));
        assert!(*c3.lo().finite().unwrap() < Scalar::from((-98, 100)));
        let c4 = fin(-1, 1).cos(prec);
        assert_eq!(c4.hi(), &Finite(Scalar::from(1)));
    }

    #[test]
    fn pi_enclosure_tight() {
        let pi = pi_interval(113);
        // 36 digits, well beyond the 113-bit working precision.
        let approx = crate::scalar::parse_scalar("3.14159265358979323846264338327950288").unwrap();
        assert!(pi.contains(&approx));
        let w = match pi.width() {
            Finite(q) => q,
            _ => panic!(),
        };
        assert!(w < pow2(-100));
    }

    #[test]
    fn precision_refinement_narrows() {
        let x = Interval::finite(Scalar::from((1, 3)), Scalar::from((2, 3)));
        let coarse = x.sin(53);
        let fine = x.sin(237);
        assert!(coarse.contains_interval(&fine));
        let ec = x.exp(53);
        let ef = x.exp(237);
        assert!(ec.contains_interval(&ef));
    }

    #[test]
    fn intersect_and_hull() {
        assert_eq!(fin(0, 5).intersect(&fin(3, 8)), Some(fin(3, 5)));
        assert_eq!(fin(0, 2).intersect(&fin(3, 8)), None);
        assert_eq!(fin(0, 2).hull(&fin(5, 8)), fin(0, 8));
        // Touching intervals intersect in a point.
        assert_eq!(fin(0, 3).intersect(&fin(3, 8)), Some(fin(3, 3)));
    }

    #[test]
    fn display_format() {
        assert_eq!(fin(-1, 2).to_string(), "[-1, 2]");
        assert_eq!(Interval::entire().to_string(), "(-inf, inf)");
        assert_eq!(
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2))).to_string(),
            "[-0.5, 0.5]"
        );
    }
}
