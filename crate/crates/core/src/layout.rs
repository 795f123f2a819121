//! Keyboard layouts: which step sits on which key of which manual.
//!
//! Ten variants ship with the crate: six three-manual layouts of 53-EDO
//! (`53-v1` .. `53-v6`), two layouts of 29-EDO on the lower and middle
//! manuals and two of 41-EDO on the middle and upper manuals. Manual sizes
//! follow 12 + 17 = 29, 17 + 24 = 41 and 12 + 17 + 24 = 53.
//!
//! # Data format
//!
//! One plain-text file per variant:
//!
//! ```text
//! # free-form description (first comment line)
//! # <manual> <row> <x> <step>
//! id=53-v1 q=53
//! upper back 0 2
//! ```
//!
//! Lines starting with `#` are comments. Front-row keys are white and
//! back-row keys black.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::str::FromStr;

use crate::fifth_chain::{diatonic_interval_name, FifthCircle, FifthIndex};
use crate::pitch_math::EdoSystem;
use crate::rational_approx::overtone_table;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Manual {
    Lower,
    Middle,
    Upper,
}

impl Manual {
    /// Drawing order, top first.
    pub const TOP_DOWN: [Manual; 3] = [Manual::Upper, Manual::Middle, Manual::Lower];

    pub fn name(self) -> &'static str {
        match self {
            Manual::Lower => "lower",
            Manual::Middle => "middle",
            Manual::Upper => "upper",
        }
    }
}

impl fmt::Display for Manual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Manual {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "lower" => Ok(Manual::Lower),
            "middle" => Ok(Manual::Middle),
            "upper" => Ok(Manual::Upper),
            _ => Err(alloc::format!("unknown manual {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    Back,
    Front,
}

impl Row {
    pub fn name(self) -> &'static str {
        match self {
            Row::Back => "back",
            Row::Front => "front",
        }
    }

    pub fn color(self) -> Color {
        match self {
            Row::Front => Color::White,
            Row::Back => Color::Black,
        }
    }
}

impl FromStr for Row {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "back" => Ok(Row::Back),
            "front" => Ok(Row::Front),
            _ => Err(alloc::format!("unknown row {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::White => "white",
            Color::Black => "black",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Key {
    pub step: u32,
    pub manual: Manual,
    pub row: Row,
    pub x: u32,
    pub color: Color,
}

impl Key {
    pub fn new(manual: Manual, row: Row, x: u32, step: u32) -> Self {
        Key {
            step,
            manual,
            row,
            x,
            color: row.color(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutVariant {
    pub id: String,
    pub system: EdoSystem,
    pub keys: Vec<Key>,
    pub source: String,
}

struct Shipped {
    id: &'static str,
    text: &'static str,
    /// Lower end of the 53-wide fifth window used for naming, if any.
    fifth_window: Option<FifthIndex>,
}

const SHIPPED: [Shipped; 10] = [
    Shipped {
        id: "53-v1",
        text: include_str!("../data/53-v1.layout"),
        fifth_window: Some(-22),
    },
    Shipped {
        id: "53-v2",
        text: include_str!("../data/53-v2.layout"),
        fifth_window: Some(-26),
    },
    Shipped {
        id: "53-v3",
        text: include_str!("../data/53-v3.layout"),
        fifth_window: Some(-22),
    },
    Shipped {
        id: "53-v4",
        text: include_str!("../data/53-v4.layout"),
        fifth_window: None,
    },
    Shipped {
        id: "53-v5",
        text: include_str!("../data/53-v5.layout"),
        fifth_window: None,
    },
    Shipped {
        id: "53-v6",
        text: include_str!("../data/53-v6.layout"),
        fifth_window: None,
    },
    Shipped {
        id: "29-v1",
        text: include_str!("../data/29-v1.layout"),
        fifth_window: None,
    },
    Shipped {
        id: "29-v2",
        text: include_str!("../data/29-v2.layout"),
        fifth_window: None,
    },
    Shipped {
        id: "41-v1",
        text: include_str!("../data/41-v1.layout"),
        fifth_window: None,
    },
    Shipped {
        id: "41-v2",
        text: include_str!("../data/41-v2.layout"),
        fifth_window: None,
    },
];

/// Ids of the shipped variants.
pub fn variant_ids() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|s| s.id)
}

/// Raw data file of a shipped variant.
pub fn variant_text(id: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|s| s.id == id).map(|s| s.text)
}

/// Loads and validates a shipped variant.
pub fn load_variant(id: &str) -> Result<LayoutVariant> {
    let text = variant_text(id).ok_or_else(|| Error::UnknownVariant(id.into()))?;
    let layout = parse_variant(text)?;
    if layout.id != id {
        return Err(Error::InvalidLayout {
            id: id.into(),
            report: alloc::format!("file declares id {}", layout.id),
        });
    }
    let report = validate(&layout);
    if !report.is_valid() {
        return Err(Error::InvalidLayout {
            id: id.into(),
            report: report.to_string(),
        });
    }
    Ok(layout)
}

/// Parses a layout file without validating it.
pub fn parse_variant(text: &str) -> Result<LayoutVariant> {
    let mut header: Option<(String, EdoSystem)> = None;
    let mut source: Option<String> = None;
    let mut keys = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let syntax = |message: String| Error::LayoutSyntax {
            line: index + 1,
            message,
        };
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if source.is_none() && header.is_none() {
                source = Some(comment.trim().into());
            }
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line).map_err(syntax)?);
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [manual, row, x, step] = fields[..] else {
            return Err(syntax(alloc::format!(
                "expected `<manual> <row> <x> <step>`, found {line:?}"
            )));
        };
        let manual: Manual = manual.parse().map_err(syntax)?;
        let row: Row = row.parse().map_err(syntax)?;
        let x: u32 = x
            .parse()
            .map_err(|_| syntax(alloc::format!("bad slot {x:?}")))?;
        let step: u32 = step
            .parse()
            .map_err(|_| syntax(alloc::format!("bad step {step:?}")))?;
        keys.push(Key::new(manual, row, x, step));
    }
    let (id, system) = header.ok_or(Error::LayoutSyntax {
        line: 0,
        message: "missing `id=.. q=..` header".into(),
    })?;
    Ok(LayoutVariant {
        id,
        system,
        keys,
        source: source.unwrap_or_default(),
    })
}

fn parse_header(line: &str) -> core::result::Result<(String, EdoSystem), String> {
    let mut id = None;
    let mut q = None;
    for field in line.split_whitespace() {
        match field.split_once('=') {
            Some(("id", v)) if !v.is_empty() => id = Some(v.to_string()),
            Some(("q", v)) => {
                let divisions: u32 = v.parse().map_err(|_| alloc::format!("bad q {v:?}"))?;
                q = Some(EdoSystem::new(divisions).map_err(|e| e.to_string())?);
            }
            _ => return Err(alloc::format!("unexpected header field {field:?}")),
        }
    }
    match (id, q) {
        (Some(id), Some(q)) => Ok((id, q)),
        _ => Err(alloc::format!("header needs id= and q=, found {line:?}")),
    }
}

impl LayoutVariant {
    pub fn divisions(&self) -> u32 {
        self.system.divisions()
    }

    /// Manuals present, top first.
    pub fn manuals(&self) -> Vec<Manual> {
        Manual::TOP_DOWN
            .into_iter()
            .filter(|m| self.keys.iter().any(|k| k.manual == *m))
            .collect()
    }

    /// Steps on a manual, ascending.
    pub fn manual_steps(&self, manual: Manual) -> Vec<u32> {
        let mut steps: Vec<u32> = self
            .keys
            .iter()
            .filter(|k| k.manual == manual)
            .map(|k| k.step)
            .collect();
        steps.sort_unstable();
        steps
    }

    /// Keys of one row, left to right.
    pub fn row_keys(&self, manual: Manual, row: Row) -> Vec<Key> {
        let mut keys: Vec<Key> = self
            .keys
            .iter()
            .filter(|k| k.manual == manual && k.row == row)
            .copied()
            .collect();
        keys.sort_by_key(|k| k.x);
        keys
    }

    /// Lower end of the fifth window naming this layout, if it has one.
    pub fn fifth_window(&self) -> Option<FifthIndex> {
        SHIPPED
            .iter()
            .find(|s| s.id == self.id)
            .and_then(|s| s.fifth_window)
            .filter(|_| self.divisions() == 53)
    }

    pub fn has_naming(&self) -> bool {
        self.fifth_window().is_some()
    }

    /// Serializes back to the data-file format.
    pub fn to_data_text(&self) -> String {
        let mut out = String::new();
        if !self.source.is_empty() {
            let _ = writeln!(out, "# {}", self.source);
        }
        out.push_str("# <manual> <row> <x> <step>\n");
        let _ = writeln!(out, "id={} q={}", self.id, self.divisions());
        for manual in self.manuals() {
            for row in [Row::Back, Row::Front] {
                for key in self.row_keys(manual, row) {
                    let _ = writeln!(out, "{} {} {} {}", manual, row.name(), key.x, key.step);
                }
            }
        }
        out
    }
}

/// Manual sizes required for the systems that split across manuals.
fn expected_sizes(q: u32) -> Option<&'static [(Manual, usize)]> {
    match q {
        53 => Some(&[(Manual::Upper, 24), (Manual::Middle, 17), (Manual::Lower, 12)]),
        41 => Some(&[(Manual::Upper, 24), (Manual::Middle, 17)]),
        29 => Some(&[(Manual::Middle, 17), (Manual::Lower, 12)]),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StepOutOfRange(u32),
    DuplicateStep(u32),
    MissingStep(u32),
    ManualSize {
        manual: Manual,
        expected: usize,
        found: usize,
    },
    UnexpectedManual(Manual),
    /// Slots in a row are repeated or do not follow ascending steps.
    SlotOrder { manual: Manual, row: Row },
    ColorMismatch(u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StepOutOfRange(s) => write!(f, "step {s} out of range"),
            Violation::DuplicateStep(s) => write!(f, "duplicate step {s}"),
            Violation::MissingStep(s) => write!(f, "missing step {s}"),
            Violation::ManualSize {
                manual,
                expected,
                found,
            } => write!(f, "{manual} manual has {found} keys, expected {expected}"),
            Violation::UnexpectedManual(m) => write!(f, "unexpected {m} manual"),
            Violation::SlotOrder { manual, row } => {
                write!(f, "slots out of order in {manual} {} row", row.name())
            }
            Violation::ColorMismatch(s) => write!(f, "key for step {s} has the wrong color"),
        }
    }
}

/// Every violated invariant; empty when the layout is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate(layout: &LayoutVariant) -> ValidationReport {
    let q = layout.divisions();
    let mut violations = Vec::new();

    let mut counts = alloc::vec![0usize; q as usize + 1];
    for key in &layout.keys {
        if key.step == 0 || key.step > q {
            violations.push(Violation::StepOutOfRange(key.step));
        } else {
            counts[key.step as usize] += 1;
        }
    }
    for step in 1..=q {
        match counts[step as usize] {
            0 => violations.push(Violation::MissingStep(step)),
            1 => {}
            _ => violations.push(Violation::DuplicateStep(step)),
        }
    }

    if let Some(sizes) = expected_sizes(q) {
        for manual in layout.manuals() {
            if !sizes.iter().any(|(m, _)| *m == manual) {
                violations.push(Violation::UnexpectedManual(manual));
            }
        }
        for &(manual, expected) in sizes {
            let found = layout.keys.iter().filter(|k| k.manual == manual).count();
            if found != expected {
                violations.push(Violation::ManualSize {
                    manual,
                    expected,
                    found,
                });
            }
        }
    }

    for manual in Manual::TOP_DOWN {
        for row in [Row::Back, Row::Front] {
            let keys = layout.row_keys(manual, row);
            let ordered = keys
                .windows(2)
                .all(|w| w[0].x < w[1].x && w[0].step < w[1].step);
            if !ordered {
                violations.push(Violation::SlotOrder { manual, row });
            }
        }
    }

    for key in &layout.keys {
        if key.color != key.row.color() {
            violations.push(Violation::ColorMismatch(key.step));
        }
    }

    ValidationReport { violations }
}

fn require_manual(layout: &LayoutVariant, manual: Manual) -> Result<()> {
    if layout.keys.iter().any(|k| k.manual == manual) {
        Ok(())
    } else {
        Err(Error::ManualNotPresent {
            id: layout.id.clone(),
            manual: manual.name(),
        })
    }
}

/// Fifth indices of a manual's steps, each taken from the layout's naming
/// window.
pub fn manual_fifth_window(layout: &LayoutVariant, manual: Manual) -> Result<BTreeSet<FifthIndex>> {
    let low = layout
        .fifth_window()
        .ok_or_else(|| Error::NoNaming(layout.id.clone()))?;
    require_manual(layout, manual)?;
    let circle = FifthCircle::edo53();
    layout
        .manual_steps(manual)
        .into_iter()
        .map(|step| circle.fifth_in_window(step, low))
        .collect()
}

/// Sorted union of the steps on the selected manuals.
pub fn subsystem_steps(layout: &LayoutVariant, manuals: &[Manual]) -> Result<Vec<u32>> {
    if manuals.is_empty() {
        return Err(Error::EmptySelection);
    }
    let mut steps = Vec::new();
    for &manual in manuals.iter().collect::<BTreeSet<_>>() {
        require_manual(layout, manual)?;
        steps.extend(layout.manual_steps(manual));
    }
    steps.sort_unstable();
    Ok(steps)
}

/// What a 53-EDO step means relative to C.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepAnnotation {
    pub step: u32,
    /// Pythagorean interval name, for steps within six fifths of C.
    pub diatonic: Option<&'static str>,
    /// Harmonic whose nearest step this is.
    pub overtone: Option<&'static str>,
}

/// Window of fifth indices centred on C used for diatonic labels.
const CENTERED_WINDOW: FifthIndex = -26;

pub fn annotate(step: u32) -> Result<StepAnnotation> {
    let circle = FifthCircle::edo53();
    let f = circle.fifth_in_window(step, CENTERED_WINDOW)?;
    let diatonic = diatonic_interval_name(f).ok();
    let overtone = overtone_table(53)?
        .into_iter()
        .find(|row| (row.nearest - 1) % 53 + 1 == step)
        .map(|row| row.label);
    Ok(StepAnnotation {
        step,
        diatonic,
        overtone,
    })
}

/// Step distances between neighbouring keys of a manual, ascending, closed
/// around the octave so the profile sums to `q`.
pub fn adjacent_interval_profile(layout: &LayoutVariant, manual: Manual) -> Result<Vec<u32>> {
    require_manual(layout, manual)?;
    Ok(interval_profile(&layout.manual_steps(manual), layout.divisions()))
}

/// Cyclic gaps between sorted steps; empty for fewer than two steps.
pub fn interval_profile(steps: &[u32], q: u32) -> Vec<u32> {
    let mut sorted = steps.to_vec();
    sorted.sort_unstable();
    if sorted.len() < 2 {
        return Vec::new();
    }
    let mut gaps: Vec<u32> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(sorted[0] + q - sorted[sorted.len() - 1]);
    gaps
}
