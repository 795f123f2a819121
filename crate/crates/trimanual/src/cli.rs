//! Command-line front end.
//!
//! ```bash
//! trimanual temperaments --format csv
//! trimanual overtones --q 53
//! trimanual cf --ratio 3/2 --terms 10
//! trimanual next-better --after 53 --max 400
//! trimanual name --step 43
//! trimanual step --name F4#
//! trimanual circle --from -26 --to 30
//! trimanual chain --start -18 --count 41
//! trimanual layout export 53-v1 --format json --out 53-v1.json
//! trimanual scl --q 53 --out c53.scl
//! trimanual freq --base 261.63 --step 32
//! ```
//!
//! Exit codes: 0 success, 1 validation or IO failure, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use trimanual_core::fifth_chain::{
    names_of_step, pythagorean_chain, spelling_of_fifth, step_of_fifth, FifthCircle, FifthIndex,
    NoteName, DEFAULT_MAX_ACCIDENTALS,
};
use trimanual_core::layout::{parse_variant, validate, variant_ids, variant_text, LayoutVariant, Row};
use trimanual_core::pitch_math::{frequency_of_step, height_of_ratio, Ratio};
use trimanual_core::rational_approx::{
    continued_fraction, continued_fraction_of_ratio, fifth_table, fifth_table_erratum,
    next_better_division, overtone_table, ErrorMeasure, CITED_NEXT_BEST, TABLE_DIVISIONS,
};
use trimanual_core::Error as CoreError;

use crate::export::{
    default_scl_description, emit_layout_csv, emit_layout_json, emit_scl, emit_table_csv,
    ExportError,
};

/// Tables, note names, keyboard layouts and tuning files for 53-EDO.
#[derive(Parser, Debug)]
#[command(name = "trimanual", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best fifth of each division and its deviation from 3/2
    Temperaments {
        /// Divisions to list, comma separated
        #[arg(long = "q", value_delimiter = ',', default_values_t = TABLE_DIVISIONS)]
        q: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Harmonics placed on their nearest step
    Overtones {
        #[arg(long = "q", default_value_t = 53)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Continued fraction of an interval, with convergents
    Cf {
        /// Interval ratio such as 3/2
        #[arg(long)]
        ratio: Ratio,
        /// Maximum number of terms, counting the leading integer part
        #[arg(long, default_value_t = 10)]
        terms: usize,
        /// Expand the ratio itself instead of its octave-reduced log2
        #[arg(long)]
        exact: bool,
    },
    /// Divisions whose fifth beats a given one
    NextBetter {
        #[arg(long, default_value_t = 53)]
        after: u32,
        #[arg(long, default_value_t = 400)]
        max: u32,
        #[arg(long, value_enum, default_value_t = Measure::Scaled)]
        measure: Measure,
    },
    /// Names of a 53-EDO step
    Name {
        #[arg(long)]
        step: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_ACCIDENTALS)]
        max_acc: u32,
    },
    /// Step of a note name
    Step {
        #[arg(long)]
        name: NoteName,
    },
    /// Chain of fifths with steps and names
    #[command(allow_negative_numbers = true)]
    Circle {
        #[arg(long, default_value_t = -26)]
        from: FifthIndex,
        #[arg(long, default_value_t = 30)]
        to: FifthIndex,
    },
    /// Steps of a run of consecutive fifths
    #[command(allow_negative_numbers = true)]
    Chain {
        #[arg(long)]
        start: FifthIndex,
        #[arg(long)]
        count: usize,
    },
    /// Keyboard layouts
    Layout {
        #[command(subcommand)]
        action: LayoutAction,
    },
    /// Scala tuning file for an equal division
    Scl {
        #[arg(long = "q")]
        q: u32,
        #[arg(long)]
        description: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Frequency of a step
    Freq {
        /// Frequency of step 1 in Hz
        #[arg(long)]
        base: f64,
        #[arg(long)]
        step: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        octave: i32,
        #[arg(long = "q", default_value_t = 53)]
        q: u32,
    },
}

#[derive(Subcommand, Debug)]
enum LayoutAction {
    /// Shipped layout ids
    List,
    /// Print a layout manual by manual
    Show { layout: String },
    /// Check a layout against the keyboard invariants
    Validate { layout: String },
    /// Write a layout as JSON or CSV
    Export {
        layout: String,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Pretty,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Measure {
    Scaled,
    Absolute,
}

impl From<Measure> for ErrorMeasure {
    fn from(m: Measure) -> Self {
        match m {
            Measure::Scaled => ErrorMeasure::Scaled,
            Measure::Absolute => ErrorMeasure::Absolute,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Invalid(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) => m,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::LayoutSyntax { .. } | CoreError::InvalidLayout { .. } => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Core(e) => e.into(),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(format!("io: {e}"))
    }
}

type Outcome = Result<String, Failure>;

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: io: {e}");
                1
            }
        },
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.code()
        }
    }
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Temperaments { q, format } => temperaments(&q, format),
        Command::Overtones { q, format } => overtones(q, format),
        Command::Cf {
            ratio,
            terms,
            exact,
        } => cf(ratio, terms, exact),
        Command::NextBetter {
            after,
            max,
            measure,
        } => next_better(after, max, measure.into()),
        Command::Name { step, max_acc } => name(step, max_acc),
        Command::Step { name } => {
            let circle = FifthCircle::edo53();
            let f = trimanual_core::fifth_chain::fifth_of_spelling(name);
            Ok(format!("{}\n", circle.step_of_fifth(f)))
        }
        Command::Circle { from, to } => circle(from, to),
        Command::Chain { start, count } => chain(start, count),
        Command::Layout { action } => layout(action),
        Command::Scl { q, description, out } => {
            let description = description.unwrap_or_else(|| default_scl_description(q));
            deliver(emit_scl(q, &description)?, out.out.as_deref())
        }
        Command::Freq {
            base,
            step,
            octave,
            q,
        } => Ok(format!("{:.6}\n", frequency_of_step(base, q, step, octave)?)),
    }
}

fn deliver(text: String, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn temperaments(divisions: &[u32], format: Format) -> Outcome {
    let rows = fifth_table(divisions)?;
    if let Format::Csv = format {
        return Ok(emit_table_csv(&rows)?);
    }
    let mut s = format!(
        "{:>5} {:>5}  {:>12}  {:>14}  {:>13}\n",
        "q", "p", "p/q", "fifth (cents)", "delta (cents)"
    );
    let mut notes = Vec::new();
    for row in &rows {
        let mark = match fifth_table_erratum(row.q) {
            Some(e) => {
                notes.push(format!(
                    "* q={}: often printed as {}; {}.",
                    e.q, e.printed, e.note
                ));
                " *"
            }
            None => "",
        };
        let _ = writeln!(
            s,
            "{:>5} {:>5}  {:>12.8}  {:>14.8}  {:>+13.8}{mark}",
            row.q, row.p, row.fifth_height, row.fifth_cents, row.delta_cents
        );
    }
    for note in notes {
        let _ = writeln!(s, "{note}");
    }
    Ok(s)
}

fn overtones(q: u32, format: Format) -> Outcome {
    let rows = overtone_table(q)?;
    if let Format::Csv = format {
        return Ok(emit_table_csv(&rows)?);
    }
    let mut s = format!(
        "{:<28} {:>6}  {:>12}  {:>15}  {:>7}  {:>14}\n",
        "interval", "ratio", "log2", "mantissa (c)", "nearest", "deviation (c)"
    );
    for row in &rows {
        let _ = writeln!(
            s,
            "{:<28} {:>6}  {:>12.8}  {:>15.8}  {:>7}  {:>+14.8}",
            row.label,
            row.ratio.to_string(),
            row.log2,
            row.mantissa_cents.value(),
            row.nearest,
            row.deviation_cents.value()
        );
    }
    Ok(s)
}

fn cf(ratio: Ratio, terms: usize, exact: bool) -> Outcome {
    let expansion = if exact {
        let mut cf = continued_fraction_of_ratio(ratio);
        let kept: Vec<u64> = cf.terms().iter().copied().take(terms.max(1)).collect();
        if kept.len() < cf.terms().len() {
            cf = trimanual_core::rational_approx::ContinuedFraction::from_terms(kept)
                .expect("prefix of a valid expansion");
        }
        cf
    } else {
        let h = height_of_ratio(ratio).value();
        if h == 0.0 {
            return Err(Failure::Usage(format!(
                "{ratio} is a whole number of octaves; use --exact"
            )));
        }
        continued_fraction(h, terms)?
    };
    let join = |v: Vec<String>| if v.is_empty() { "-".to_owned() } else { v.join(" ") };
    let mut s = String::new();
    if exact {
        let _ = writeln!(s, "value: {ratio}");
    } else {
        let _ = writeln!(s, "value: frac(log2({ratio})) = {:.12}", height_of_ratio(ratio).value());
    }
    let _ = writeln!(s, "continued fraction: {expansion}");
    let _ = writeln!(
        s,
        "convergents: {}",
        join(expansion.convergents().iter().map(|f| f.to_string()).collect())
    );
    let _ = writeln!(
        s,
        "semiconvergents: {}",
        join(expansion.semiconvergents().iter().map(|f| f.to_string()).collect())
    );
    Ok(s)
}

fn next_better(after: u32, max: u32, measure: ErrorMeasure) -> Outcome {
    let found = next_better_division(after, max, measure)?;
    let mut s = format!("{:>5} {:>5}  {:>13}\n", "q", "p", "delta (cents)");
    for imp in &found {
        let _ = writeln!(s, "{:>5} {:>5}  {:>+13.8}", imp.q, imp.p, imp.delta_cents);
    }
    if found.is_empty() {
        let _ = writeln!(s, "no division in {}..={max} improves on {after}", after + 1);
    }
    let (q, p) = CITED_NEXT_BEST;
    if after < q && q <= max {
        let _ = writeln!(s, "note: {p}/{q} is the approximation usually cited after 31/53");
    }
    Ok(s)
}

fn name(step: u32, max_acc: u32) -> Outcome {
    let names = names_of_step(step, max_acc)?;
    let rendered: Vec<String> = names
        .iter()
        .map(|n| match n.alias() {
            Some(alias) => format!("{n} ({alias})"),
            None => n.to_string(),
        })
        .collect();
    if rendered.is_empty() {
        return Err(Failure::Usage(format!(
            "step {step} has no name within {max_acc} accidentals"
        )));
    }
    Ok(format!("{}\n", rendered.join(" / ")))
}

fn circle(from: FifthIndex, to: FifthIndex) -> Outcome {
    if to < from {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let mut s = format!("{:>5} {:>5}  {}\n", "fifth", "step", "name");
    for f in from..=to {
        let note = spelling_of_fifth(f);
        let alias = note.alias().map(|a| format!(" ({a})")).unwrap_or_default();
        let _ = writeln!(s, "{f:>5} {:>5}  {note}{alias}", step_of_fifth(f));
    }
    Ok(s)
}

fn chain(start: FifthIndex, count: usize) -> Outcome {
    let segment = pythagorean_chain(start, count)?;
    let mut sorted = segment.steps.clone();
    sorted.sort_unstable();
    let line = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "fifths {start}..={}: {count} steps", start + count as i64 - 1);
    let _ = writeln!(s, "chain order: {}", line(&segment.steps));
    let _ = writeln!(s, "ascending: {}", line(&sorted));

    let mut missing: Vec<u32> = overtone_table(53)?
        .iter()
        .map(|row| (row.nearest - 1) % 53 + 1)
        .filter(|step| !sorted.contains(step))
        .collect();
    missing.dedup();
    if missing.is_empty() {
        let _ = writeln!(s, "contains all overtone steps");
    } else {
        let _ = writeln!(s, "contains all overtone steps except {}", line(&missing));
    }
    Ok(s)
}

/// A shipped id, or else a path to a layout file.
fn layout_source(arg: &str) -> Result<String, Failure> {
    if let Some(text) = variant_text(arg) {
        return Ok(text.to_owned());
    }
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(fs::read_to_string(path)?);
    }
    Err(Failure::Usage(format!(
        "unknown layout {arg}; known: {}",
        variant_ids().collect::<Vec<_>>().join(", ")
    )))
}

fn load_layout(arg: &str) -> Result<LayoutVariant, Failure> {
    let layout = parse_variant(&layout_source(arg)?)?;
    let report = validate(&layout);
    if !report.is_valid() {
        return Err(Failure::Invalid(format!("{}: {report}", layout.id)));
    }
    Ok(layout)
}

fn layout(action: LayoutAction) -> Outcome {
    match action {
        LayoutAction::List => {
            let mut s = String::new();
            for id in variant_ids() {
                let layout = load_layout(id)?;
                let _ = writeln!(s, "{id:<7} {}", layout.source);
            }
            Ok(s)
        }
        LayoutAction::Show { layout } => show(&load_layout(&layout)?),
        LayoutAction::Validate { layout } => {
            let parsed = parse_variant(&layout_source(&layout)?)?;
            let report = validate(&parsed);
            if report.is_valid() {
                Ok(format!("{}: valid\n", parsed.id))
            } else {
                Err(Failure::Invalid(format!("{}: invalid: {report}", parsed.id)))
            }
        }
        LayoutAction::Export {
            layout,
            format,
            out,
        } => {
            let layout = load_layout(&layout)?;
            let text = match format {
                ExportFormat::Json => emit_layout_json(&layout)?,
                ExportFormat::Csv => emit_layout_csv(&layout)?,
            };
            deliver(text, out.out.as_deref())
        }
    }
}

fn show(layout: &LayoutVariant) -> Outcome {
    let mut s = format!("{}  {} steps  {}\n", layout.id, layout.divisions(), layout.source);
    if let Some(low) = layout.fifth_window() {
        let _ = writeln!(s, "fifths {low}..={}", low + layout.divisions() as i64 - 1);
    }
    for manual in layout.manuals() {
        for row in [Row::Back, Row::Front] {
            let keys = layout.row_keys(manual, row);
            let cells: Vec<String> = keys
                .iter()
                .map(|k| {
                    // Spell each key as the layout does, from its own window.
                    let name = layout.fifth_window().and_then(|low| {
                        FifthCircle::edo53()
                            .fifth_in_window(k.step, low)
                            .ok()
                            .map(|f| spelling_of_fifth(f).to_string())
                    });
                    match name {
                        Some(n) => format!("{}:{n}", k.step),
                        None => k.step.to_string(),
                    }
                })
                .collect();
            let _ = writeln!(
                s,
                "{:<7} {:<6} {}",
                manual.name(),
                row.name(),
                cells.join(" ")
            );
        }
    }
    Ok(s)
}
