//! Pitch arithmetic on the log2 scale.
//!
//! A [`Ratio`] is an exact frequency ratio (interval coefficient). Its
//! [`Height`] is the fractional part of `log2` of the ratio, i.e. its
//! position inside the octave, and [`Cents`] measure heights and intervals
//! with 1200 cents to the octave. Steps of an equal temperament are numbered
//! from 1 (the fundamental) to `q`.

use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Cents in one octave.
pub const OCTAVE_CENTS: f64 = 1200.0;

/// Height of the pure fifth 3/2, `log2 3 - 1`.
pub fn pure_fifth_height() -> f64 {
    libm::log(3.0) / libm::log(2.0) - 1.0
}

/// Positive rational frequency ratio in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidRatio { num, den });
        }
        let g = gcd(num, den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    /// The ratio `k/1`, e.g. the k-th harmonic.
    pub fn harmonic(k: u64) -> Result<Self> {
        Self::new(k, 1)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Whether the ratio is `2^m` for some integer `m` (including 1/1).
    pub fn is_octave_multiple(self) -> bool {
        (self.num.is_power_of_two() && self.den == 1) || (self.num == 1 && self.den.is_power_of_two())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Parses `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRatio(s.into());
        let (num, den) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: u64 = num.parse().map_err(|_| bad())?;
        let den: u64 = den.parse().map_err(|_| bad())?;
        Ratio::new(num, den)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Octave-reduced pitch position, `0 <= value < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Height(f64);

impl Height {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..1.0).contains(&value) {
            Ok(Height(value))
        } else {
            Err(Error::HeightOutOfRange(value))
        }
    }

    /// Fractional part of any finite real.
    pub fn from_log2(x: f64) -> Self {
        let frac = x - libm::floor(x);
        // x just below an integer can round up to exactly 1.0
        Height(if frac >= 1.0 { 0.0 } else { frac })
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Hundredths of a 12-EDO semitone; 1200 to the octave.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Cents(pub f64);

impl Cents {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Cents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*} c", p, self.0),
            None => write!(f, "{} c", self.0),
        }
    }
}

/// An equal division of the octave into `q` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdoSystem {
    divisions: u32,
}

impl EdoSystem {
    pub fn new(divisions: u32) -> Result<Self> {
        if divisions == 0 {
            return Err(Error::TooFewDivisions { q: 0, min: 1 });
        }
        Ok(EdoSystem { divisions })
    }

    pub fn divisions(self) -> u32 {
        self.divisions
    }

    pub fn step_cents(self) -> f64 {
        OCTAVE_CENTS / self.divisions as f64
    }

    /// Checks that `step` lies in `1..=q`.
    pub fn check_step(self, step: i64) -> Result<u32> {
        if step >= 1 && step <= self.divisions as i64 {
            Ok(step as u32)
        } else {
            Err(Error::StepOutOfRange {
                step,
                q: self.divisions,
            })
        }
    }
}

/// Fractional part of `log2` of the ratio.
///
/// Powers of two are divided out of both terms before taking logarithms, so
/// the result is exactly octave invariant.
pub fn height_of_ratio(r: Ratio) -> Height {
    let num = r.num >> r.num.trailing_zeros();
    let den = r.den >> r.den.trailing_zeros();
    Height::from_log2(libm::log2(num as f64) - libm::log2(den as f64))
}

pub fn cents_of_height(h: Height) -> Cents {
    Cents(OCTAVE_CENTS * h.0)
}

pub fn edo_step_cents(q: u32) -> Result<Cents> {
    Ok(Cents(EdoSystem::new(q)?.step_cents()))
}

/// Height `(n - 1) / q` of step `n`.
pub fn step_height(q: u32, n: u32) -> Result<Height> {
    let system = EdoSystem::new(q)?;
    let n = system.check_step(n as i64)?;
    Height::new((n - 1) as f64 / q as f64)
}

/// Nearest step of `q`-EDO to a height, with the signed deviation
/// `1200·h - 1200·r/q` where `r` is the rounded (unwrapped) position.
///
/// Heights within half a step of the octave map to step 1 with a negative
/// deviation. Exact half-step ties round away from zero.
pub fn nearest_step(q: u32, h: Height) -> Result<(u32, Cents)> {
    let system = EdoSystem::new(q)?;
    let rounded = libm::round(q as f64 * h.0);
    let step = (rounded as u64 % q as u64) as u32 + 1;
    let deviation = OCTAVE_CENTS * h.0 - rounded * system.step_cents();
    Ok((step, Cents(deviation)))
}

/// Frequency in Hz of step `n` in the given octave above `base`.
pub fn frequency_of_step(base: f64, q: u32, n: u32, octave: i32) -> Result<f64> {
    if base.is_nan() || base <= 0.0 || !base.is_finite() {
        return Err(Error::NonPositiveFrequency(base));
    }
    let system = EdoSystem::new(q)?;
    let n = system.check_step(n as i64)?;
    let exponent = octave as f64 + (n - 1) as f64 / q as f64;
    Ok(base * libm::exp2(exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ratio(n: u64, d: u64) -> Ratio {
        Ratio::new(n, d).unwrap()
    }

    #[test]
    fn ratio_is_reduced_and_rejects_zero() {
        assert_eq!(ratio(6, 4), ratio(3, 2));
        assert_eq!(ratio(6, 4).num(), 3);
        assert!(Ratio::new(0, 3).is_err());
        assert!(Ratio::new(3, 0).is_err());
        assert_eq!("10/4".parse::<Ratio>().unwrap(), ratio(5, 2));
        assert_eq!("7".parse::<Ratio>().unwrap(), ratio(7, 1));
        assert!("x/2".parse::<Ratio>().is_err());
    }

    #[test]
    fn heights() {
        assert!((height_of_ratio(ratio(3, 2)).value() - 0.5849625007).abs() < 1e-9);
        assert_eq!(height_of_ratio(ratio(2, 1)).value(), 0.0);
        // mpmath, 40 digits: frac(log2 6/5) = 0.26303440583379...
        assert!((height_of_ratio(ratio(6, 5)).value() - 0.2630344058).abs() < 1e-9);
        assert!(Height::new(1.0).is_err());
        assert!(Height::new(-0.1).is_err());
    }

    #[test]
    fn cents() {
        let c = cents_of_height(Height::new(0.5849625007).unwrap());
        assert!((c.value() - 701.95500084).abs() < 1e-6);
        assert_eq!(cents_of_height(Height::new(0.0).unwrap()).value(), 0.0);
        let c = cents_of_height(Height::new(0.2630344058).unwrap());
        assert!((c.value() - 315.6412870).abs() < 1e-4);
    }

    #[test]
    fn step_sizes() {
        assert!((edo_step_cents(53).unwrap().value() - 22.641509434).abs() < 1e-8);
        assert_eq!(edo_step_cents(12).unwrap().value(), 100.0);
        assert!((edo_step_cents(29).unwrap().value() - 41.379310345).abs() < 1e-6);
        assert!((edo_step_cents(41).unwrap().value() - 29.268292683).abs() < 1e-6);
        assert!(edo_step_cents(0).is_err());
        for q in 1..=1000 {
            let system = EdoSystem::new(q).unwrap();
            let total = system.step_cents() * q as f64;
            assert!((total - 1200.0).abs() <= f64::EPSILON * 1200.0, "q={q}");
        }
    }

    #[test]
    fn step_heights() {
        assert!((step_height(53, 32).unwrap().value() - 0.5849056604).abs() < 1e-9);
        assert_eq!(step_height(17, 1).unwrap().value(), 0.0);
        let tone = cents_of_height(step_height(53, 10).unwrap());
        assert!((tone.value() - 203.77358491).abs() < 1e-6);
        assert!(step_height(53, 0).is_err());
        assert!(step_height(53, 54).is_err());
    }

    #[test]
    fn nearest_steps() {
        let (n, dev) = nearest_step(53, height_of_ratio(ratio(3, 2))).unwrap();
        assert_eq!(n, 32);
        assert!((dev.value() - 0.068208).abs() < 1e-6);
        assert_eq!(nearest_step(53, Height::new(0.0).unwrap()).unwrap(), (1, Cents(0.0)));
        let (n, dev) = nearest_step(53, height_of_ratio(ratio(7, 4))).unwrap();
        assert_eq!(n, 44);
        assert!((dev.value() + 4.7590).abs() < 1e-4);
    }

    #[test]
    fn nearest_step_wraps_and_breaks_ties_upward() {
        let (n, dev) = nearest_step(12, Height::new(0.999).unwrap()).unwrap();
        assert_eq!(n, 1);
        assert!(dev.value() < 0.0);
        // exactly half a step: 50 cents in 12-EDO
        let (n, dev) = nearest_step(12, Height::new(0.5 / 12.0).unwrap()).unwrap();
        assert_eq!(n, 2);
        assert!((dev.value() + 50.0).abs() < 1e-9);
    }

    #[test]
    fn frequencies() {
        assert_eq!(frequency_of_step(440.0, 53, 1, 0).unwrap(), 440.0);
        // mpmath: 440 * 2^(31/53) = 659.973997354...
        let f = frequency_of_step(440.0, 53, 32, 0).unwrap();
        assert!((f - 659.973997354).abs() < 1e-6);
        assert_eq!(frequency_of_step(440.0, 53, 1, 1).unwrap(), 880.0);
        assert!(frequency_of_step(440.0, 53, 54, 0).is_err());
        assert!(frequency_of_step(0.0, 53, 1, 0).is_err());
        assert!(frequency_of_step(-1.0, 53, 1, 0).is_err());
        assert!(frequency_of_step(f64::NAN, 53, 1, 0).is_err());
    }

    proptest! {
        #[test]
        fn octave_invariance(num in 1u64..1_000_000, den in 1u64..1_000_000, octaves in 0u32..20) {
            let r = ratio(num, den);
            let up = ratio(num << octaves, den);
            let down = ratio(num, den << octaves);
            prop_assert_eq!(height_of_ratio(r), height_of_ratio(up));
            prop_assert_eq!(height_of_ratio(r), height_of_ratio(down));
        }

        #[test]
        fn quantization_bound(q in 1u32..400, h in 0.0f64..1.0) {
            let (n, dev) = nearest_step(q, Height::new(h).unwrap()).unwrap();
            prop_assert!((1..=q).contains(&n));
            prop_assert!(dev.value().abs() <= 600.0 / q as f64 + 1e-9);
        }

        #[test]
        fn step_round_trip(q in 1u32..400, seed in 0u32..u32::MAX) {
            let n = seed % q + 1;
            let steps = cents_of_height(step_height(q, n).unwrap()).value()
                / edo_step_cents(q).unwrap().value();
            prop_assert!((steps - (n - 1) as f64).abs() <= 1e-9 * (n as f64));
        }

        #[test]
        fn frequency_is_monotone(q in 1u32..100, seed in 0u32..u32::MAX, octave in -4i32..4) {
            let n = seed % q + 1;
            let here = frequency_of_step(261.626, q, n, octave).unwrap();
            let next = if n == q {
                frequency_of_step(261.626, q, 1, octave + 1).unwrap()
            } else {
                frequency_of_step(261.626, q, n + 1, octave).unwrap()
            };
            prop_assert!(next > here);
        }
    }
}
