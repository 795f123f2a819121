use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Ratio with a zero numerator or denominator.
    InvalidRatio { num: u64, den: u64 },
    /// Height outside `[0, 1)` or not finite.
    HeightOutOfRange(f64),
    /// Real number outside the open unit interval.
    OutsideUnitInterval(f64),
    /// An equal temperament needs at least `min` divisions.
    TooFewDivisions { q: u32, min: u32 },
    StepOutOfRange { step: i64, q: u32 },
    NonPositiveFrequency(f64),
    /// A fifth generator that does not generate every step.
    NotAGenerator { q: u32, p: u32 },
    ChainTooLong { count: usize, q: u32 },
    NotDiatonic(i64),
    InvalidNoteName(String),
    ParseRatio(String),
    InvalidRange { low: u32, high: u32 },
    UnknownVariant(String),
    /// Malformed layout data, with a 1-based line number.
    LayoutSyntax { line: usize, message: String },
    /// A layout that failed validation; `report` lists the violations.
    InvalidLayout { id: String, report: String },
    /// The variant has no chain-of-fifths naming.
    NoNaming(String),
    ManualNotPresent { id: String, manual: &'static str },
    EmptySelection,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRatio { num, den } => {
                write!(f, "invalid ratio {num}/{den}: both terms must be positive")
            }
            Error::HeightOutOfRange(h) => write!(f, "height {h} is outside [0, 1)"),
            Error::OutsideUnitInterval(x) => write!(f, "{x} is outside the open interval (0, 1)"),
            Error::TooFewDivisions { q, min } => {
                write!(f, "{q} divisions requested, at least {min} required")
            }
            Error::StepOutOfRange { step, q } => {
                write!(f, "step {step} is outside 1..={q}")
            }
            Error::NonPositiveFrequency(hz) => write!(f, "base frequency {hz} must be positive"),
            Error::NotAGenerator { q, p } => {
                write!(f, "{p} steps do not generate all {q} steps (gcd must be 1)")
            }
            Error::ChainTooLong { count, q } => {
                write!(f, "a chain of {count} fifths exceeds the {q} distinct steps")
            }
            Error::NotDiatonic(fifth) => {
                write!(f, "fifth index {fifth} is outside the diatonic range -6..=6")
            }
            Error::InvalidNoteName(s) => write!(f, "cannot parse note name {s:?}"),
            Error::ParseRatio(s) => write!(f, "cannot parse ratio {s:?}, expected a/b"),
            Error::InvalidRange { low, high } => write!(f, "empty range {low}..={high}"),
            Error::UnknownVariant(id) => write!(f, "unknown layout variant {id:?}"),
            Error::LayoutSyntax { line, message } => write!(f, "line {line}: {message}"),
            Error::InvalidLayout { id, report } => write!(f, "layout {id} is invalid: {report}"),
            Error::NoNaming(id) => write!(f, "layout {id} has no chain-of-fifths naming"),
            Error::ManualNotPresent { id, manual } => {
                write!(f, "layout {id} has no {manual} manual")
            }
            Error::EmptySelection => f.write_str("no manuals selected"),
        }
    }
}

impl core::error::Error for Error {}
