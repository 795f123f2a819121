//! Serializers: Scala `.scl` files, CSV tables and canonical layout JSON.
//!
//! All output is byte-for-byte deterministic: fixed decimal places, LF line
//! endings, and JSON objects with sorted keys and two-space indentation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use trimanual_core::fifth_chain::{names_of_step, DEFAULT_MAX_ACCIDENTALS};
use trimanual_core::layout::{annotate, validate, LayoutVariant, Row};
use trimanual_core::pitch_math::{EdoSystem, Ratio};
use trimanual_core::rational_approx::{fifth_table_erratum, OvertoneRow, TemperamentRow};

/// Version of the layout JSON schema.
pub const LAYOUT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Core(#[from] trimanual_core::Error),
    #[error("refusing to export invalid layout {id}: {report}")]
    InvalidLayout { id: String, report: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ExportError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SclDegree {
    Cents(f64),
    Ratio(Ratio),
}

/// A Scala scale file. The last degree is the period.
#[derive(Debug, Clone, PartialEq)]
pub struct SclDocument {
    pub name: String,
    pub description: String,
    pub degrees: Vec<SclDegree>,
}

impl SclDocument {
    /// `q` equal steps in cents, closed by an exact `2/1`.
    pub fn equal_temperament(q: u32, description: &str) -> Result<Self> {
        let system = EdoSystem::new(q)?;
        let mut degrees: Vec<SclDegree> = (1..q)
            .map(|i| SclDegree::Cents(i as f64 * 1200.0 / q as f64))
            .collect();
        degrees.push(SclDegree::Ratio(Ratio::new(2, 1)?));
        Ok(SclDocument {
            name: format!("c{}", system.divisions()),
            description: description.to_owned(),
            degrees,
        })
    }

    pub fn degree_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "! {}.scl\n!\n{}\n {}\n!\n",
            self.name,
            self.description,
            self.degree_count()
        );
        for degree in &self.degrees {
            match degree {
                SclDegree::Cents(c) => out.push_str(&format!(" {c:.5}\n")),
                SclDegree::Ratio(r) => out.push_str(&format!(" {}/{}\n", r.num(), r.den())),
            }
        }
        out
    }
}

/// Scala file for `q`-EDO.
pub fn emit_scl(q: u32, description: &str) -> Result<String> {
    Ok(SclDocument::equal_temperament(q, description)?.render())
}

pub fn default_scl_description(q: u32) -> String {
    format!("{q} equal divisions of the octave")
}

/// A row type that can be written as one CSV record.
pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

fn real(x: f64) -> String {
    format!("{x:.8}")
}

impl CsvRow for TemperamentRow {
    fn header() -> &'static [&'static str] {
        &["q", "p", "fifth_height", "fifth_cents", "delta_cents", "note"]
    }

    fn record(&self) -> Vec<String> {
        let note = fifth_table_erratum(self.q)
            .map(|e| format!("erratum: often printed as {}, {}", e.printed, e.note))
            .unwrap_or_default();
        vec![
            self.q.to_string(),
            self.p.to_string(),
            real(self.fifth_height),
            real(self.fifth_cents),
            real(self.delta_cents),
            note,
        ]
    }
}

impl CsvRow for OvertoneRow {
    fn header() -> &'static [&'static str] {
        &["label", "ratio", "log2", "mantissa_cents", "nearest_step", "deviation_cents"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.label.to_owned(),
            self.ratio.to_string(),
            real(self.log2),
            real(self.mantissa_cents.value()),
            self.nearest.to_string(),
            real(self.deviation_cents.value()),
        ]
    }
}

fn write_csv(header: &[&str], records: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for record in records {
        writer.write_record(&record)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Header plus one record per row, reals to 8 decimals.
pub fn emit_table_csv<R: CsvRow>(rows: &[R]) -> Result<String> {
    write_csv(R::header(), rows.iter().map(CsvRow::record))
}

/// One record per key: manual, row, x, step, color.
pub fn emit_layout_csv(layout: &LayoutVariant) -> Result<String> {
    ensure_valid(layout)?;
    let mut records = Vec::new();
    for manual in layout.manuals() {
        for row in [Row::Back, Row::Front] {
            for key in layout.row_keys(manual, row) {
                records.push(vec![
                    manual.name().to_owned(),
                    row.name().to_owned(),
                    key.x.to_string(),
                    key.step.to_string(),
                    key.color.name().to_owned(),
                ]);
            }
        }
    }
    write_csv(&["manual", "row", "x", "step", "color"], records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutJson {
    pub schema_version: u32,
    pub system: SystemJson,
    pub variant_id: String,
    pub manuals: Vec<ManualJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotations: Option<BTreeMap<String, AnnotationJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemJson {
    pub divisions: u32,
    pub step_cents: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManualJson {
    pub name: String,
    pub rows: Vec<RowJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowJson {
    pub kind: String,
    pub keys: Vec<KeyJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyJson {
    pub step: u32,
    pub x: u32,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationJson {
    pub step: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diatonic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overtone: Option<String>,
}

fn ensure_valid(layout: &LayoutVariant) -> Result<()> {
    let report = validate(layout);
    if report.is_valid() {
        Ok(())
    } else {
        Err(ExportError::InvalidLayout {
            id: layout.id.clone(),
            report: report.to_string(),
        })
    }
}

impl LayoutJson {
    /// Labels and annotations are only attached to layouts with a
    /// chain-of-fifths naming.
    pub fn from_layout(layout: &LayoutVariant) -> Result<Self> {
        ensure_valid(layout)?;
        let manuals = layout
            .manuals()
            .into_iter()
            .map(|manual| ManualJson {
                name: manual.name().to_owned(),
                rows: [Row::Back, Row::Front]
                    .into_iter()
                    .map(|row| RowJson {
                        kind: row.name().to_owned(),
                        keys: layout
                            .row_keys(manual, row)
                            .into_iter()
                            .map(|k| KeyJson {
                                step: k.step,
                                x: k.x,
                                color: k.color.name().to_owned(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect();

        let (labels, annotations) = if layout.has_naming() {
            let mut labels = BTreeMap::new();
            let mut annotations = BTreeMap::new();
            for step in 1..=layout.divisions() {
                let names = names_of_step(step, DEFAULT_MAX_ACCIDENTALS)?;
                labels.insert(step.to_string(), names.iter().map(|n| n.to_string()).collect());
                let a = annotate(step)?;
                annotations.insert(
                    step.to_string(),
                    AnnotationJson {
                        step,
                        diatonic: a.diatonic.map(str::to_owned),
                        overtone: a.overtone.map(str::to_owned),
                    },
                );
            }
            (Some(labels), Some(annotations))
        } else {
            (None, None)
        };

        Ok(LayoutJson {
            schema_version: LAYOUT_SCHEMA_VERSION,
            system: SystemJson {
                divisions: layout.divisions(),
                step_cents: layout.system.step_cents(),
            },
            variant_id: layout.id.clone(),
            manuals,
            labels,
            annotations,
        })
    }

    pub fn key_count(&self) -> usize {
        self.manuals
            .iter()
            .flat_map(|m| &m.rows)
            .map(|r| r.keys.len())
            .sum()
    }
}

/// Canonical JSON: sorted keys, two-space indent, trailing LF.
pub fn emit_layout_json(layout: &LayoutVariant) -> Result<String> {
    let doc = LayoutJson::from_layout(layout)?;
    // Value maps are BTreeMaps, so every object comes out key-sorted.
    let value = serde_json::to_value(&doc)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use trimanual_core::layout::{load_variant, Manual};
    use trimanual_core::rational_approx::{fifth_table, overtone_table, TABLE_DIVISIONS};

    #[test]
    fn scl_layout() {
        let text = emit_scl(53, "53 equal divisions of the octave").unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "! c53.scl");
        assert_eq!(lines[1], "!");
        assert_eq!(lines[2], "53 equal divisions of the octave");
        assert_eq!(lines[3], " 53");
        assert_eq!(lines[4], "!");
        assert_eq!(lines[5], " 22.64151");
        assert_eq!(lines.len(), 5 + 53);
        assert_eq!(*lines.last().unwrap(), " 2/1");
        assert!(text.ends_with(" 2/1\n"));
        assert!(lines[5..].iter().all(|l| l.starts_with(' ')));
    }

    #[test]
    fn scl_small_systems() {
        let text = emit_scl(12, "12").unwrap();
        assert!(text.contains("\n 100.00000\n"));
        assert!(text.contains("\n 1100.00000\n 2/1\n"));
        assert_eq!(emit_scl(41, "41").unwrap().lines().nth(5), Some(" 29.26829"));
        assert_eq!(emit_scl(1, "octave").unwrap().lines().skip(5).collect::<Vec<_>>(), [" 2/1"]);
        assert!(emit_scl(0, "none").is_err());
    }

    #[test]
    fn temperament_csv() {
        let rows = fifth_table(&TABLE_DIVISIONS).unwrap();
        let text = emit_table_csv(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[0], "q,p,fifth_height,fifth_cents,delta_cents,note");
        assert!(lines[7].starts_with("29,17,0.58620690,703.44827586,-1.49327500,\"erratum:"));
        assert!(!text.contains('\r'));
        let empty: Vec<TemperamentRow> = Vec::new();
        assert_eq!(emit_table_csv(&empty).unwrap(), "q,p,fifth_height,fifth_cents,delta_cents,note\n");
    }

    #[test]
    fn overtone_csv() {
        let text = emit_table_csv(&overtone_table(53).unwrap()).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let nearest: Vec<u32> = reader
            .records()
            .map(|r| r.unwrap()[4].parse().unwrap())
            .collect();
        assert_eq!(nearest, [1, 54, 32, 18, 15, 44, 10, 25, 38, 49, 6, 14]);
    }

    #[test]
    fn layout_json_contents() {
        let layout = load_variant("53-v1").unwrap();
        let doc = LayoutJson::from_layout(&layout).unwrap();
        assert_eq!(doc.key_count(), 53);
        assert_eq!(doc.labels.as_ref().unwrap()["43"], ["F4#", "D4b"]);
        assert_eq!(doc.manuals[0].name, "upper");
        let ten = &doc.annotations.as_ref().unwrap()["10"];
        assert_eq!(ten.diatonic.as_deref(), Some("major second"));

        let two = LayoutJson::from_layout(&load_variant("29-v1").unwrap()).unwrap();
        assert!(two.labels.is_none() && two.annotations.is_none());
        assert_eq!(two.manuals.len(), 2);
        let text = emit_layout_json(&load_variant("29-v1").unwrap()).unwrap();
        assert!(!text.contains("labels"));
    }

    #[test]
    fn json_is_canonical() {
        let layout = load_variant("53-v1").unwrap();
        let text = emit_layout_json(&layout).unwrap();
        assert_eq!(text, emit_layout_json(&layout).unwrap());
        assert!(text.ends_with("}\n"));
        assert!(text.starts_with("{\n  \"annotations\": {"));
        let back: LayoutJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, LayoutJson::from_layout(&layout).unwrap());
    }

    #[test]
    fn invalid_layouts_are_refused() {
        let mut layout = load_variant("53-v1").unwrap();
        layout.keys.retain(|k| k.manual != Manual::Lower || k.step != 9);
        assert!(matches!(emit_layout_json(&layout), Err(ExportError::InvalidLayout { .. })));
        assert!(emit_layout_csv(&layout).is_err());
    }
}
