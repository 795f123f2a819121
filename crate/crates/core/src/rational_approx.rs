//! Rational approximation of the pure fifth and of the low harmonics.
//!
//! The fifth of a `q`-tone equal temperament spans `p` steps, so its height
//! is `p/q` against the pure height `alpha = log2 3/2`. The signed deviation
//! is always reported as `alpha - p/q`, in cents.

use alloc::vec::Vec;
use core::fmt;

use crate::pitch_math::{
    cents_of_height, height_of_ratio, nearest_step, pure_fifth_height, Cents, EdoSystem, Height,
    Ratio, OCTAVE_CENTS,
};
use crate::{Error, Result};

/// Below this remainder the expansion of a float is considered exhausted.
const CF_EPSILON: f64 = 1e-12;

/// Divisions compared in the classic fifth-approximation table.
pub const TABLE_DIVISIONS: [u32; 12] = [5, 7, 12, 17, 21, 24, 29, 31, 41, 53, 65, 359];

/// Simple continued fraction `[a0; a1, a2, ...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
}

/// A fraction `num/den` produced by a continued fraction (may be `0/1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl ContinuedFraction {
    /// Builds a continued fraction from explicit terms; every term after the
    /// first must be at least 1.
    pub fn from_terms(terms: Vec<u64>) -> Option<Self> {
        if terms.is_empty() || terms[1..].contains(&0) {
            return None;
        }
        Some(ContinuedFraction { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// Convergents `p_n/q_n` from the recurrence
    /// `p_n = a_n p_{n-1} + p_{n-2}`, `q_n = a_n q_{n-1} + q_{n-2}`.
    /// Stops early if a term would overflow `u64`.
    pub fn convergents(&self) -> Vec<Fraction> {
        let mut out = Vec::with_capacity(self.terms.len());
        let (mut p_prev, mut p) = (0u64, 1u64);
        let (mut q_prev, mut q) = (1u64, 0u64);
        for &a in &self.terms {
            let next_p = a.checked_mul(p).and_then(|v| v.checked_add(p_prev));
            let next_q = a.checked_mul(q).and_then(|v| v.checked_add(q_prev));
            let (Some(next_p), Some(next_q)) = (next_p, next_q) else {
                break;
            };
            (p_prev, p) = (p, next_p);
            (q_prev, q) = (q, next_q);
            out.push(Fraction { num: p, den: q });
        }
        out
    }

    /// Intermediate fractions `(p_{n-2} + m p_{n-1}) / (q_{n-2} + m q_{n-1})`
    /// for `1 <= m < a_n`, `n >= 2`, in increasing order of denominator.
    pub fn semiconvergents(&self) -> Vec<Fraction> {
        let conv = self.convergents();
        let mut out = Vec::new();
        for n in 2..conv.len() {
            let (older, prev) = (conv[n - 2], conv[n - 1]);
            for m in 1..self.terms[n] {
                let num = m.checked_mul(prev.num).and_then(|v| v.checked_add(older.num));
                let den = m.checked_mul(prev.den).and_then(|v| v.checked_add(older.den));
                let (Some(num), Some(den)) = (num, den) else {
                    break;
                };
                out.push(Fraction { num, den });
            }
        }
        out
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.terms[0])?;
        for (i, a) in self.terms[1..].iter().enumerate() {
            let sep = if i == 0 { "; " } else { ", " };
            write!(f, "{sep}{a}")?;
        }
        f.write_str("]")
    }
}

/// Continued fraction of a real in `(0, 1)`, at most `max_terms` terms
/// (counting the leading zero).
pub fn continued_fraction(x: f64, max_terms: usize) -> Result<ContinuedFraction> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutsideUnitInterval(x));
    }
    let mut terms = alloc::vec![0];
    let mut rest = x;
    while terms.len() < max_terms.max(1) {
        let inv = 1.0 / rest;
        let nearest = libm::round(inv);
        if (inv - nearest).abs() < CF_EPSILON {
            terms.push(nearest as u64);
            break;
        }
        let a = libm::floor(inv);
        terms.push(a as u64);
        rest = inv - a;
        if rest < CF_EPSILON {
            break;
        }
    }
    Ok(ContinuedFraction { terms })
}

/// Exact continued fraction of a positive rational (Euclid's algorithm).
pub fn continued_fraction_of_ratio(r: Ratio) -> ContinuedFraction {
    let (mut a, mut b) = (r.num(), r.den());
    let mut terms = Vec::new();
    while b != 0 {
        terms.push(a / b);
        (a, b) = (b, a % b);
    }
    ContinuedFraction { terms }
}

/// `p = round(q·alpha)` and the deviation `1200·(alpha - p/q)`.
pub fn best_fifth_step(q: u32) -> Result<(u32, Cents)> {
    if q < 2 {
        return Err(Error::TooFewDivisions { q, min: 2 });
    }
    let alpha = pure_fifth_height();
    let p = libm::round(q as f64 * alpha) as u32;
    Ok((p, Cents(OCTAVE_CENTS * (alpha - p as f64 / q as f64))))
}

/// One row of the fifth-approximation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperamentRow {
    pub q: u32,
    pub p: u32,
    pub fifth_height: f64,
    pub fifth_cents: f64,
    pub delta_cents: f64,
}

pub fn fifth_table(divisions: &[u32]) -> Result<Vec<TemperamentRow>> {
    divisions
        .iter()
        .map(|&q| {
            let (p, delta) = best_fifth_step(q)?;
            let fifth_height = p as f64 / q as f64;
            Ok(TemperamentRow {
                q,
                p,
                fifth_height,
                fifth_cents: OCTAVE_CENTS * fifth_height,
                delta_cents: delta.value(),
            })
        })
        .collect()
}

/// A value that circulates in print with a known mistake.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub q: u32,
    pub printed: &'static str,
    pub note: &'static str,
}

const FIFTH_TABLE_ERRATA: &[Erratum] = &[Erratum {
    q: 29,
    printed: "+1.49327508",
    note: "17/29 lies above the pure fifth, so the deviation is negative",
}];

pub fn fifth_table_erratum(q: u32) -> Option<&'static Erratum> {
    FIFTH_TABLE_ERRATA.iter().find(|e| e.q == q)
}

/// The pair often cited as the next best approximation after 31/53.
pub const CITED_NEXT_BEST: (u32, u32) = (359, 210);

/// How the quality of `p/q` as an approximation of the fifth is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorMeasure {
    /// `|q·alpha - p|`: the error in steps, the classic "best approximation"
    /// criterion that convergents optimise.
    #[default]
    Scaled,
    /// `|alpha - p/q|`: the error in cents regardless of step size.
    Absolute,
}

impl ErrorMeasure {
    fn error(self, q: u32) -> f64 {
        let alpha = pure_fifth_height();
        let scaled = (q as f64 * alpha - libm::round(q as f64 * alpha)).abs();
        match self {
            ErrorMeasure::Scaled => scaled,
            ErrorMeasure::Absolute => scaled / q as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Improvement {
    pub q: u32,
    pub p: u32,
    pub delta_cents: f64,
}

/// Every `q` in `(q0, q_max]` whose fifth beats the one of `q0` under the
/// given measure, ascending. Exhaustive scan.
pub fn next_better_division(
    q0: u32,
    q_max: u32,
    measure: ErrorMeasure,
) -> Result<Vec<Improvement>> {
    if q0 < 2 {
        return Err(Error::TooFewDivisions { q: q0, min: 2 });
    }
    if q_max <= q0 {
        return Err(Error::InvalidRange {
            low: q0 + 1,
            high: q_max,
        });
    }
    let reference = measure.error(q0);
    (q0 + 1..=q_max)
        .filter(|&q| measure.error(q) < reference)
        .map(|q| {
            let (p, delta) = best_fifth_step(q)?;
            Ok(Improvement {
                q,
                p,
                delta_cents: delta.value(),
            })
        })
        .collect()
}

/// `|Δ(q_other)| / |Δ(q_ref)|`: how many times better `q_ref` approximates
/// the fifth than `q_other`.
pub fn improvement_ratio(q_ref: u32, q_other: u32) -> Result<f64> {
    let (_, reference) = best_fifth_step(q_ref)?;
    let (_, other) = best_fifth_step(q_other)?;
    Ok(other.value().abs() / reference.value().abs())
}

/// A harmonic (or harmonic-derived interval) placed on the nearest step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OvertoneRow {
    pub label: &'static str,
    pub ratio: Ratio,
    /// `log2` of the ratio before octave reduction.
    pub log2: f64,
    pub height: Height,
    pub mantissa_cents: Cents,
    /// Nearest step; exact octaves above the fundamental are reported as
    /// `q + 1`, the key an octave up.
    pub nearest: u32,
    pub deviation_cents: Cents,
}

const OVERTONES: [(&str, u64, u64); 12] = [
    ("prime", 1, 1),
    ("octave", 2, 1),
    ("fifth", 3, 1),
    ("major third", 5, 1),
    ("minor third (6:5)", 6, 5),
    ("minor seventh", 7, 1),
    ("major second", 9, 1),
    ("diminished fifth", 11, 1),
    ("minor sixth", 13, 1),
    ("major seventh", 15, 1),
    ("minor second", 17, 1),
    ("minor third (19th harmonic)", 19, 1),
];

/// Harmonics 1, 2, 3, 5, 7, 9, ..., 19 plus the minor third 6/5, each on
/// its nearest step of `q`-EDO.
pub fn overtone_table(q: u32) -> Result<Vec<OvertoneRow>> {
    if q < 2 {
        return Err(Error::TooFewDivisions { q, min: 2 });
    }
    let system = EdoSystem::new(q)?;
    OVERTONES
        .iter()
        .map(|&(label, num, den)| {
            let ratio = Ratio::new(num, den)?;
            let height = height_of_ratio(ratio);
            let (mut nearest, deviation) = nearest_step(system.divisions(), height)?;
            if ratio.is_octave_multiple() && ratio.num() > 1 {
                nearest = q + 1;
            }
            Ok(OvertoneRow {
                label,
                ratio,
                log2: libm::log2(ratio.to_f64()),
                height,
                mantissa_cents: cents_of_height(height),
                nearest,
                deviation_cents: deviation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cf_of_simple_values() {
        assert_eq!(continued_fraction(0.5, 10).unwrap().terms(), &[0, 2]);
        assert_eq!(continued_fraction(7.0 / 12.0, 10).unwrap().terms(), &[0, 1, 1, 2, 2]);
        assert_eq!(
            continued_fraction_of_ratio(Ratio::new(7, 12).unwrap()).terms(),
            &[0, 1, 1, 2, 2]
        );
        assert!(continued_fraction(0.0, 5).is_err());
        assert!(continued_fraction(1.0, 5).is_err());
        assert!(continued_fraction(f64::NAN, 5).is_err());
        assert_eq!(continued_fraction(pure_fifth_height(), 1).unwrap().terms(), &[0]);
    }

    #[test]
    fn convergents_of_one_half() {
        let cf = ContinuedFraction::from_terms(vec![0, 2]).unwrap();
        assert_eq!(
            cf.convergents(),
            vec![Fraction { num: 0, den: 1 }, Fraction { num: 1, den: 2 }]
        );
        assert!(ContinuedFraction::from_terms(vec![0, 0]).is_none());
        assert!(ContinuedFraction::from_terms(vec![]).is_none());
    }

    #[test]
    fn cf_display() {
        let cf = ContinuedFraction::from_terms(vec![0, 1, 1, 2]).unwrap();
        assert_eq!(alloc::format!("{cf}"), "[0; 1, 1, 2]");
        let cf = ContinuedFraction::from_terms(vec![3]).unwrap();
        assert_eq!(alloc::format!("{cf}"), "[3]");
    }

    #[test]
    fn fifth_steps() {
        let (p, d) = best_fifth_step(53).unwrap();
        assert_eq!(p, 31);
        assert!((d.value() - 0.06820836).abs() < 1e-6);
        let (p, d) = best_fifth_step(12).unwrap();
        assert_eq!(p, 7);
        assert!((d.value() - 1.95500084).abs() < 1e-6);
        // 17/29 = 0.5862 > alpha, so the deviation is negative
        let (p, d) = best_fifth_step(29).unwrap();
        assert_eq!(p, 17);
        assert!((d.value() + 1.49327508).abs() < 1e-6);
        assert!(best_fifth_step(1).is_err());
    }

    #[test]
    fn table_rows() {
        let rows = fifth_table(&[5, 21, 359]).unwrap();
        assert_eq!((rows[0].p, rows[1].p, rows[2].p), (3, 12, 210));
        assert!((rows[0].delta_cents + 18.04499916).abs() < 1e-6);
        assert!((rows[1].fifth_cents - 685.71428568).abs() < 1e-6);
        assert!((rows[2].delta_cents - 0.00514020).abs() < 1e-6);
        assert!(fifth_table(&[]).unwrap().is_empty());
        assert_eq!(fifth_table_erratum(29).unwrap().printed, "+1.49327508");
        assert!(fifth_table_erratum(53).is_none());
    }

    #[test]
    fn next_better() {
        let found = next_better_division(53, 359, ErrorMeasure::Scaled).unwrap();
        assert_eq!(found[0].q, 306);
        assert_eq!(found[0].p, 179);
        // |D17| = 3.93 c is worse than |D12| = 1.96 c under either measure
        assert!(next_better_division(12, 17, ErrorMeasure::Scaled).unwrap().is_empty());
        assert!(next_better_division(12, 17, ErrorMeasure::Absolute).unwrap().is_empty());
        let found = next_better_division(2, 3, ErrorMeasure::Absolute).unwrap();
        assert_eq!((found[0].q, found[0].p), (3, 2));
        assert!(next_better_division(53, 53, ErrorMeasure::Scaled).is_err());
        assert!(next_better_division(1, 10, ErrorMeasure::Scaled).is_err());
    }

    #[test]
    fn ratios() {
        assert!((improvement_ratio(53, 41).unwrap() - 7.1).abs() < 0.1);
        assert!((improvement_ratio(53, 12).unwrap() - 28.7).abs() < 0.1);
        assert_eq!(improvement_ratio(41, 41).unwrap(), 1.0);
    }

    #[test]
    fn overtones() {
        let rows = overtone_table(53).unwrap();
        assert_eq!(rows.len(), 12);
        let ninth = rows.iter().find(|r| r.ratio.num() == 9).unwrap();
        assert!((ninth.mantissa_cents.value() - 203.91000168).abs() < 1e-6);
        assert_eq!(ninth.nearest, 10);
        assert!((ninth.deviation_cents.value() - 0.13642).abs() < 1e-4);
        assert_eq!(rows[0].nearest, 1);
        assert_eq!(rows[0].mantissa_cents.value(), 0.0);
        assert_eq!(rows[0].deviation_cents.value(), 0.0);
        assert_eq!(rows[1].nearest, 54);
        let seventeenth = rows.iter().find(|r| r.ratio.num() == 17).unwrap();
        assert_eq!(seventeenth.nearest, 6);
        assert!((seventeenth.deviation_cents.value() + 8.2521).abs() < 1e-3);
        assert!(overtone_table(1).is_err());
    }

    #[test]
    fn overtone_rows_agree_with_nearest_step() {
        for q in [12, 29, 41, 53, 306] {
            for row in overtone_table(q).unwrap() {
                let (n, dev) = nearest_step(q, row.height).unwrap();
                assert_eq!((row.nearest - 1) % q, n - 1);
                assert_eq!(row.deviation_cents, dev);
            }
        }
    }
}
