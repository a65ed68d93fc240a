//! IEEE 754 binary formats and the exact rounding model used throughout.
//!
//! Rounding a real x into a format is over-approximated in interval contexts
//! by `x·(1 ± eps) ± zeta`, where `eps` is the relative half-ulp bound and
//! `zeta` absorbs rounding in the subnormal range. For point-level work
//! (counter-example certification, bit decoding, representability checks)
//! [`FloatFormat::round`] performs the genuine correctly-rounded conversion.

use crate::scalar::{pow2, Scalar};
use rug::Integer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FloatFormat {
    Single,
    Double,
}

/// Rounding mode of a floating-point operation. Only the two nearest modes
/// occur in the inputs we consume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoundMode {
    NearestEven,
    NearestAway,
}

/// Tie mode for rounding a real to an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntRoundMode {
    NearestAway,
    NearestEven,
}

impl RoundMode {
    pub fn from_token(tok: &str) -> Option<RoundMode> {
        match tok {
            "RNE" | "roundNearestTiesToEven" => Some(RoundMode::NearestEven),
            "RNA" | "roundNearestTiesToAway" => Some(RoundMode::NearestAway),
            _ => None,
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            RoundMode::NearestEven => "RNE",
            RoundMode::NearestAway => "RNA",
        }
    }
}

impl IntRoundMode {
    pub fn from_token(tok: &str) -> Option<IntRoundMode> {
        match tok {
            "RNE" => Some(IntRoundMode::NearestEven),
            "RNA" => Some(IntRoundMode::NearestAway),
            _ => None,
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            IntRoundMode::NearestEven => "RNE",
            IntRoundMode::NearestAway => "RNA",
        }
    }
}

impl FloatFormat {
    pub fn name(&self) -> &'static str {
        match self {
            FloatFormat::Single => "Single",
            FloatFormat::Double => "Double",
        }
    }

    /// Significand bits including the hidden bit.
    pub fn mantissa_bits(&self) -> u32 {
        match self {
            FloatFormat::Single => 24,
            FloatFormat::Double => 53,
        }
    }

    pub fn exponent_bits(&self) -> u32 {
        match self {
            FloatFormat::Single => 8,
            FloatFormat::Double => 11,
        }
    }

    /// Smallest normal exponent (of the leading bit).
    fn min_exp(&self) -> i64 {
        match self {
            FloatFormat::Single => -126,
            FloatFormat::Double => -1022,
        }
    }

    fn max_exp(&self) -> i64 {
        match self {
            FloatFormat::Single => 127,
            FloatFormat::Double => 1023,
        }
    }

    /// Relative rounding error of one correctly rounded operation (half ulp).
    pub fn eps(&self) -> Scalar {
        match self {
            FloatFormat::Single => pow2(-24),
            FloatFormat::Double => pow2(-53),
        }
    }

    /// Absolute error floor covering the subnormal range.
    pub fn zeta(&self) -> Scalar {
        match self {
            FloatFormat::Single => pow2(-150),
            FloatFormat::Double => pow2(-1075),
        }
    }

    pub fn max_finite(&self) -> Scalar {
        let p = self.mantissa_bits() as i64;
        let emax = self.max_exp();
        // (2 - 2^(1-p)) * 2^emax
        pow2(emax + 1) - pow2(emax + 1 - p)
    }

    pub fn min_finite(&self) -> Scalar {
        -self.max_finite()
    }

    /// Correctly rounded conversion of an exact rational into this format.
    ///
    /// Returns the exact value of the resulting float, or `None` when the
    /// result overflows to infinity. Subnormals are handled exactly.
    pub fn round(&self, q: &Scalar, mode: RoundMode) -> Option<Scalar> {
        if *q == 0 {
            return Some(Scalar::from(0));
        }
        let neg = *q < 0;
        let aq: Scalar = if neg { -q.clone() } else { q.clone() };
        let p = self.mantissa_bits() as i64;

        // Exponent of the leading bit: 2^e <= aq < 2^(e+1).
        let mut e = ilog2_floor(&aq);
        if e < self.min_exp() {
            e = self.min_exp(); // subnormal range: fixed scale
        }
        // Significand as a real in units of 2^(e - p + 1).
        let scale = e - p + 1;
        let m_real = aq / pow2(scale);
        let mut m = round_integer_ties(&m_real, match mode {
            RoundMode::NearestEven => IntRoundMode::NearestEven,
            RoundMode::NearestAway => IntRoundMode::NearestAway,
        });
        let mut e = e;
        if m == pow2(p).numer().clone() {
            m >>= 1;
            e += 1;
        }
        if e > self.max_exp() {
            return None;
        }
        let value = Scalar::from(m) * pow2(e - p + 1);
        Some(if neg { -value } else { value })
    }

    /// True iff `q` is the exact value of some finite float in this format.
    pub fn is_representable(&self, q: &Scalar) -> bool {
        self.round(q, RoundMode::NearestEven)
            .is_some_and(|r| r == *q)
    }

    /// Bit-level encoding of an exactly representable value.
    ///
    /// Returns `(sign, exponent_field, mantissa_field)` or `None` when `q`
    /// is not representable in this format.
    pub fn encode_bits(&self, q: &Scalar) -> Option<(bool, u64, u64)> {
        if !self.is_representable(q) {
            return None;
        }
        if *q == 0 {
            return Some((false, 0, 0));
        }
        let neg = *q < 0;
        let aq: Scalar = if neg { -q.clone() } else { q.clone() };
        let p = self.mantissa_bits() as i64;
        let mut e = ilog2_floor(&aq);
        let subnormal = e < self.min_exp();
        if subnormal {
            e = self.min_exp();
        }
        let m: Integer = (aq / pow2(e - p + 1)).numer().clone();
        let m64 = m.to_u64().expect("mantissa fits in 64 bits");
        let frac_mask = (1u64 << (p - 1)) - 1;
        if subnormal || m64 < (1u64 << (p - 1)) {
            Some((neg, 0, m64 & frac_mask))
        } else {
            let bias = self.max_exp();
            Some((neg, (e + bias) as u64, m64 & frac_mask))
        }
    }
}

/// floor(log2(q)) for q > 0.
pub fn ilog2_floor(q: &Scalar) -> i64 {
    debug_assert!(*q > 0);
    let nb = q.numer().significant_bits() as i64;
    let db = q.denom().significant_bits() as i64;
    // Bit lengths give q in (2^(nb-db-1), 2^(nb-db+1)).
    let mut e = nb - db;
    if *q < pow2(e) {
        e -= 1;
    } else if *q >= pow2(e + 1) {
        e += 1;
    }
    debug_assert!(pow2(e) <= *q && *q < pow2(e + 1));
    e
}

/// Rounds a rational to the nearest integer under the given tie mode.
pub fn round_integer_ties(q: &Scalar, mode: IntRoundMode) -> Integer {
    let half = Scalar::from((1, 2));
    let shifted = q.clone() + &half;
    let fl = shifted.clone().floor();
    let fl_int = fl.numer().clone();
    if shifted == fl {
        // q is exactly k + 1/2
        match mode {
            IntRoundMode::NearestAway => {
                if *q >= 0 {
                    fl_int
                } else {
                    fl_int - 1
                }
            }
            IntRoundMode::NearestEven => {
                let lower: Integer = fl_int.clone() - 1;
                if lower.is_even() {
                    lower
                } else {
                    fl_int
                }
            }
        }
    } else {
        fl_int
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn eps_zeta_constants() {
        assert_eq!(FloatFormat::Single.eps(), pow2(-24));
        assert_eq!(FloatFormat::Single.zeta(), pow2(-150));
        assert_eq!(FloatFormat::Double.eps(), pow2(-53));
        assert_eq!(FloatFormat::Double.zeta(), pow2(-1075));
    }

    /// MPFR at the format's mantissa width, ties to even, as an independent
    /// rounding oracle (valid outside the subnormal range, which the
    /// generator avoids).
    fn mpfr_round(q: &Scalar, bits: u32) -> Scalar {
        use rug::float::Round;
        use rug::Float;
        Float::with_val_round(bits, q, Round::Nearest)
            .0
            .to_rational()
            .unwrap()
    }

    #[test]
    fn round_matches_native_f64() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let num: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
            let den: i64 = rng.gen_range(1..1_000_000);
            if num == 0 {
                continue;
            }
            let q = Scalar::from((num, den));
            let ours = FloatFormat::Double.round(&q, RoundMode::NearestEven).unwrap();
            assert_eq!(ours, mpfr_round(&q, 53), "q = {q}");
        }
    }

    #[test]
    fn round_matches_native_f32() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20_000 {
            let num: i64 = rng.gen_range(-1_000_000..1_000_000);
            let den: i64 = rng.gen_range(1..100_000);
            if num == 0 {
                continue;
            }
            let q = Scalar::from((num, den));
            let ours = FloatFormat::Single.round(&q, RoundMode::NearestEven).unwrap();
            assert_eq!(ours, mpfr_round(&q, 24), "q = {q}");
        }
    }

    #[test]
    fn ties_away_vs_even() {
        let h = Scalar::from((5, 2)); // 2.5
        assert_eq!(round_integer_ties(&h, IntRoundMode::NearestAway), 3);
        assert_eq!(round_integer_ties(&h, IntRoundMode::NearestEven), 2);
        let nh = Scalar::from((-5, 2));
        assert_eq!(round_integer_ties(&nh, IntRoundMode::NearestAway), -3);
        assert_eq!(round_integer_ties(&nh, IntRoundMode::NearestEven), -2);
        let t = Scalar::from((3, 2)); // 1.5
        assert_eq!(round_integer_ties(&t, IntRoundMode::NearestEven), 2);
        assert_eq!(round_integer_ties(&t, IntRoundMode::NearestAway), 2);
    }

    #[test]
    fn float_round_ties() {
        // 1 + 2^-24 is exactly between 1 and 1 + 2^-23 in Single.
        let q = Scalar::from(1) + pow2(-24);
        assert_eq!(
            FloatFormat::Single.round(&q, RoundMode::NearestEven).unwrap(),
            Scalar::from(1)
        );
        assert_eq!(
            FloatFormat::Single.round(&q, RoundMode::NearestAway).unwrap(),
            Scalar::from(1) + pow2(-23)
        );
    }

    #[test]
    fn subnormal_rounding() {
        // Smallest positive single subnormal is 2^-149.
        let tiny = pow2(-151);
        assert_eq!(
            FloatFormat::Single.round(&tiny, RoundMode::NearestEven).unwrap(),
            Scalar::from(0)
        );
        let sub = pow2(-149);
        assert!(FloatFormat::Single.is_representable(&sub));
        assert!(FloatFormat::Single.is_representable(&(sub.clone() * Scalar::from(3))));
    }

    #[test]
    fn overflow_to_none() {
        let big = pow2(128);
        assert!(FloatFormat::Single.round(&big, RoundMode::NearestEven).is_none());
        let max = FloatFormat::Single.max_finite();
        assert!(FloatFormat::Single.is_representable(&max));
    }

    #[test]
    fn encode_one_half() {
        let (s, e, m) = FloatFormat::Single.encode_bits(&Scalar::from((-1, 2))).unwrap();
        assert!(s);
        assert_eq!(e, 0b01111110);
        assert_eq!(m, 0);
        let (s, e, m) = FloatFormat::Single.encode_bits(&Scalar::from(1)).unwrap();
        assert!(!s);
        assert_eq!(e, 0b01111111);
        assert_eq!(m, 0);
    }

    #[test]
    fn representability() {
        assert!(FloatFormat::Single.is_representable(&Scalar::from(1)));
        assert!(FloatFormat::Single.is_representable(&Scalar::from((1, 4))));
        assert!(!FloatFormat::Single.is_representable(&Scalar::from((1, 3))));
        assert!(!FloatFormat::Single.is_representable(&(Scalar::from(1) + pow2(-24))));
        assert!(FloatFormat::Double.is_representable(&(Scalar::from(1) + pow2(-52))));
    }
}
