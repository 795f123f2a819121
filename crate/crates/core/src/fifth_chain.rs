//! The chain of fifths on a tempered circle.
//!
//! Fifth index `f` counts pure-fifth moves from C (`f = 0`): G is 1, F is -1,
//! every +7 adds a sharp and every -7 a flat. In 53-EDO the fifth spans 31
//! steps, so `f` lands on step `(31·f mod 53) + 1`. Names use the German
//! letters F C G D A E H, where `B` is the customary alias of `Hb`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::pitch_math::gcd;
use crate::rational_approx::best_fifth_step;
use crate::{Error, Result};

/// Position on the chain of fifths, C = 0.
pub type FifthIndex = i64;

/// Fifth index of D, the centre of symmetry of the natural letters.
pub const D_FIFTH: FifthIndex = 2;

/// Naming horizon used throughout: up to four sharps or flats.
pub const DEFAULT_MAX_ACCIDENTALS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    F,
    C,
    G,
    D,
    A,
    E,
    H,
}

const LETTERS: [Letter; 7] = [
    Letter::F,
    Letter::C,
    Letter::G,
    Letter::D,
    Letter::A,
    Letter::E,
    Letter::H,
];

impl Letter {
    /// Position in F C G D A E H order.
    pub fn chain_position(self) -> i64 {
        self as i64
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::F => 'F',
            Letter::C => 'C',
            Letter::G => 'G',
            Letter::D => 'D',
            Letter::A => 'A',
            Letter::E => 'E',
            Letter::H => 'H',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        LETTERS.iter().copied().find(|l| l.symbol() == c)
    }
}

/// Letter plus signed accidental count (positive = sharps).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoteName {
    letter: Letter,
    accidentals: i32,
}

impl NoteName {
    pub const fn new(letter: Letter, accidentals: i32) -> Self {
        NoteName {
            letter,
            accidentals,
        }
    }

    pub fn letter(self) -> Letter {
        self.letter
    }

    pub fn accidentals(self) -> i32 {
        self.accidentals
    }

    /// `B` for `Hb`.
    pub fn alias(self) -> Option<&'static str> {
        (self.letter == Letter::H && self.accidentals == -1).then_some("B")
    }
}

impl fmt::Display for NoteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter.symbol())?;
        let sign = if self.accidentals > 0 { '#' } else { 'b' };
        match self.accidentals.unsigned_abs() {
            0 => Ok(()),
            n @ 1..=3 => (0..n).try_for_each(|_| write!(f, "{sign}")),
            n => write!(f, "{n}{sign}"),
        }
    }
}

impl FromStr for NoteName {
    type Err = Error;

    /// Accepts `C`, `F#`, `Ebbb`, `F4#`, `D4b`, `C12#` and `B` (= `Hb`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidNoteName(s.into());
        let s = s.trim();
        if s == "B" {
            return Ok(NoteName::new(Letter::H, -1));
        }
        let mut chars = s.chars();
        let letter = chars.next().and_then(Letter::from_symbol).ok_or_else(bad)?;
        let rest = chars.as_str();
        if rest.is_empty() {
            return Ok(NoteName::new(letter, 0));
        }
        let sign = match rest.chars().last() {
            Some('#') => 1,
            Some('b') => -1,
            _ => return Err(bad()),
        };
        let body = &rest[..rest.len() - 1];
        let count: i32 = if body.is_empty() {
            1
        } else if body.bytes().all(|b| b.is_ascii_digit()) {
            body.parse().map_err(|_| bad())?
        } else if body.chars().all(|c| c == rest.chars().last().unwrap_or('#')) {
            body.len() as i32 + 1
        } else {
            return Err(bad());
        };
        if count == 0 {
            return Err(bad());
        }
        Ok(NoteName::new(letter, sign * count))
    }
}

/// Spelling of fifth index `f`: with `t = f + 1`, the letter is
/// `FCGDAEH[t mod 7]` and the accidental count `floor(t / 7)`.
pub fn spelling_of_fifth(f: FifthIndex) -> NoteName {
    let t = f + 1;
    NoteName::new(LETTERS[t.rem_euclid(7) as usize], t.div_euclid(7) as i32)
}

pub fn fifth_of_spelling(name: NoteName) -> FifthIndex {
    7 * name.accidentals as i64 + name.letter.chain_position() - 1
}

/// Whether `f` is named within a horizon of `max_acc` accidentals.
///
/// The horizon is symmetric about D on the chain of fifths: every name with
/// fewer than `max_acc` accidentals is inside, and at exactly `max_acc` only
/// sharps of F C G D and flats of D A E H.
pub fn within_horizon(f: FifthIndex, max_acc: u32) -> bool {
    (f - D_FIFTH).abs() <= 7 * max_acc as i64
}

/// Musical name of the Pythagorean interval from C to fifth index `f`.
pub fn diatonic_interval_name(f: FifthIndex) -> Result<&'static str> {
    Ok(match f {
        -6 => "diminished fifth",
        -5 => "minor second",
        -4 => "minor sixth",
        -3 => "minor third",
        -2 => "minor seventh",
        -1 => "fourth",
        0 => "prime",
        1 => "fifth",
        2 => "major second",
        3 => "major sixth",
        4 => "major third",
        5 => "major seventh",
        6 => "augmented fourth",
        _ => return Err(Error::NotDiatonic(f)),
    })
}

/// A run of consecutive fifths and the steps they occupy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSegment {
    pub f_start: FifthIndex,
    pub count: usize,
    pub steps: Vec<u32>,
}

/// Two spellings of the same step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enharmonic {
    pub step: u32,
    pub first: NoteName,
    pub second: NoteName,
}

/// An equal temperament together with the step count of its fifth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FifthCircle {
    q: u32,
    fifth: u32,
    inverse: u32,
}

impl FifthCircle {
    /// The fifth must generate every step, i.e. `gcd(fifth, q) = 1`.
    pub fn new(q: u32, fifth: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::TooFewDivisions { q, min: 2 });
        }
        if gcd(q as u64, fifth as u64) != 1 {
            return Err(Error::NotAGenerator { q, p: fifth });
        }
        let inverse = mod_inverse(fifth as i64, q as i64);
        Ok(FifthCircle { q, fifth, inverse })
    }

    /// Uses the best fifth of `q`-EDO.
    pub fn for_divisions(q: u32) -> Result<Self> {
        let (p, _) = best_fifth_step(q)?;
        Self::new(q, p)
    }

    pub fn edo53() -> Self {
        // 31 is coprime to the prime 53
        Self::for_divisions(53).expect("53-EDO fifth generates the circle")
    }

    pub fn divisions(&self) -> u32 {
        self.q
    }

    pub fn fifth(&self) -> u32 {
        self.fifth
    }

    /// `fifth⁻¹ mod q` (12 for 53-EDO).
    pub fn inverse(&self) -> u32 {
        self.inverse
    }

    pub fn step_of_fifth(&self, f: FifthIndex) -> u32 {
        let q = self.q as i128;
        ((self.fifth as i128 * f as i128).rem_euclid(q)) as u32 + 1
    }

    fn check_step(&self, step: u32) -> Result<()> {
        if (1..=self.q).contains(&step) {
            Ok(())
        } else {
            Err(Error::StepOutOfRange {
                step: step as i64,
                q: self.q,
            })
        }
    }

    /// Residue of the fifth indices landing on `step`, in `0..q`.
    pub fn fifth_class(&self, step: u32) -> Result<u32> {
        self.check_step(step)?;
        Ok(((self.inverse as u64 * (step as u64 - 1)) % self.q as u64) as u32)
    }

    /// The fifth index of `step` inside the window `[low, low + q)`.
    pub fn fifth_in_window(&self, step: u32, low: FifthIndex) -> Result<FifthIndex> {
        let class = self.fifth_class(step)? as i64;
        Ok(low + (class - low).rem_euclid(self.q as i64))
    }

    /// Every spelling of `step` within the accidental horizon, fewest
    /// accidentals first, sharps before flats.
    pub fn names_of_step(&self, step: u32, max_acc: u32) -> Result<Vec<NoteName>> {
        let low = D_FIFTH - 7 * max_acc as i64;
        let high = D_FIFTH + 7 * max_acc as i64;
        let mut f = self.fifth_in_window(step, low)?;
        let mut names = Vec::new();
        while f <= high {
            names.push(spelling_of_fifth(f));
            f += self.q as i64;
        }
        names.sort_by_key(|n| (n.accidentals.unsigned_abs(), n.accidentals < 0));
        Ok(names)
    }

    /// Steps carrying more than one spelling within the horizon.
    pub fn enharmonic_pairs(&self, max_acc: u32) -> Vec<Enharmonic> {
        let mut out = Vec::new();
        for step in 1..=self.q {
            let names = self
                .names_of_step(step, max_acc)
                .expect("step is in range");
            for &second in names.iter().skip(1) {
                out.push(Enharmonic {
                    step,
                    first: names[0],
                    second,
                });
            }
        }
        out
    }

    /// Steps of `count` consecutive fifths starting at `f_start`.
    pub fn pythagorean_chain(&self, f_start: FifthIndex, count: usize) -> Result<ChainSegment> {
        if count == 0 || count > self.q as usize {
            return Err(Error::ChainTooLong { count, q: self.q });
        }
        let steps = (0..count as i64)
            .map(|i| self.step_of_fifth(f_start + i))
            .collect();
        Ok(ChainSegment {
            f_start,
            count,
            steps,
        })
    }

    /// The seven naturals with their steps, in ascending step order.
    pub fn naturals(&self) -> Vec<(NoteName, u32)> {
        let mut out: Vec<_> = (-1..=5)
            .map(|f| (spelling_of_fifth(f), self.step_of_fifth(f)))
            .collect();
        out.sort_by_key(|&(_, step)| step);
        out
    }
}

fn mod_inverse(a: i64, m: i64) -> u32 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    old_s.rem_euclid(m) as u32
}

pub fn step_of_fifth(f: FifthIndex) -> u32 {
    FifthCircle::edo53().step_of_fifth(f)
}

pub fn names_of_step(step: u32, max_acc: u32) -> Result<Vec<NoteName>> {
    FifthCircle::edo53().names_of_step(step, max_acc)
}

pub fn enharmonic_pairs(max_acc: u32) -> Vec<Enharmonic> {
    FifthCircle::edo53().enharmonic_pairs(max_acc)
}

pub fn pythagorean_chain(f_start: FifthIndex, count: usize) -> Result<ChainSegment> {
    FifthCircle::edo53().pythagorean_chain(f_start, count)
}
