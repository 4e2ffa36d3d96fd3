//! Analogy records with multi-valued exemplar objects and answers.
//!
//! Dataset files are UTF-8 and tab-separated with five fields per line:
//!
//! ```text
//! relation_id <TAB> a <TAB> b1|b2|... <TAB> c <TAB> d1|d2|...
//! ```
//!
//! Lines starting with `#` are comments. List order is significant: the
//! first listed object is the one used by the single-object settings.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One analogy `a : B :: c : D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogyRecord {
    pub relation: String,
    pub a: String,
    pub b_list: Vec<String>,
    pub c: String,
    pub d_list: Vec<String>,
}

impl AnalogyRecord {
    pub fn validate(&self) -> Result<()> {
        for (name, list) in [("exemplar objects", &self.b_list), ("answers", &self.d_list)] {
            if list.is_empty() {
                return Err(Error::InvalidRecord(format!("empty list of {name}")));
            }
            let mut seen = HashSet::new();
            if let Some(dup) = list.iter().find(|t| !seen.insert(t.as_str())) {
                return Err(Error::InvalidRecord(format!("duplicate {dup:?} in {name}")));
            }
        }
        if self.a == self.c {
            return Err(Error::InvalidRecord(format!(
                "exemplar and query subjects are both {:?}",
                self.a
            )));
        }
        Ok(())
    }

    pub fn view(&self, setting: EvaluationSetting) -> QueryView<'_> {
        apply_setting(self, setting)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvaluationSetting {
    /// First exemplar object, first answer.
    #[serde(rename = "single")]
    SingleAnswer,
    /// First exemplar object, every answer.
    #[serde(rename = "multi")]
    MultiAnswer,
    /// Every exemplar object (averaged offset), every answer.
    #[serde(rename = "all-info")]
    AllInfo,
}

impl EvaluationSetting {
    pub const ALL: [EvaluationSetting; 3] = [
        EvaluationSetting::SingleAnswer,
        EvaluationSetting::MultiAnswer,
        EvaluationSetting::AllInfo,
    ];
}

impl FromStr for EvaluationSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(EvaluationSetting::SingleAnswer),
            "multi" => Ok(EvaluationSetting::MultiAnswer),
            "all-info" => Ok(EvaluationSetting::AllInfo),
            other => Err(Error::Config(format!(
                "unknown setting {other:?} (expected single, multi or all-info)"
            ))),
        }
    }
}

impl fmt::Display for EvaluationSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvaluationSetting::SingleAnswer => "single",
            EvaluationSetting::MultiAnswer => "multi",
            EvaluationSetting::AllInfo => "all-info",
        })
    }
}

/// A record as seen under one evaluation setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryView<'a> {
    pub a: &'a str,
    pub b_used: &'a [String],
    pub c: &'a str,
    pub d_valid: &'a [String],
}

pub fn apply_setting(r: &AnalogyRecord, setting: EvaluationSetting) -> QueryView<'_> {
    let (b_used, d_valid) = match setting {
        EvaluationSetting::SingleAnswer => (&r.b_list[..1], &r.d_list[..1]),
        EvaluationSetting::MultiAnswer => (&r.b_list[..1], &r.d_list[..]),
        EvaluationSetting::AllInfo => (&r.b_list[..], &r.d_list[..]),
    };
    QueryView {
        a: &r.a,
        b_used,
        c: &r.c,
        d_valid,
    }
}

/// Records in file order, with 1-based source line numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub records: Vec<AnalogyRecord>,
    pub lines: Vec<usize>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Relation ids in order of first appearance, each with its record indices.
    pub fn relations(&self) -> Vec<(&str, Vec<usize>)> {
        let mut order: Vec<(&str, Vec<usize>)> = Vec::new();
        let mut slot: HashMap<&str, usize> = HashMap::new();
        for (i, r) in self.records.iter().enumerate() {
            let k = *slot.entry(r.relation.as_str()).or_insert_with(|| {
                order.push((r.relation.as_str(), Vec::new()));
                order.len() - 1
            });
            order[k].1.push(i);
        }
        order
    }
}

pub fn parse_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset_str(&text, &path.display().to_string())
}

pub fn parse_dataset_str(text: &str, origin: &str) -> Result<Dataset> {
    let mut dataset = Dataset::default();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::parse(
                origin,
                lineno,
                format!("expected 5 tab-separated fields, found {}", fields.len()),
            ));
        }
        let single = |idx: usize, name: &str| -> Result<String> {
            let v = fields[idx].trim();
            if v.is_empty() {
                return Err(Error::parse(origin, lineno, format!("empty {name}")));
            }
            Ok(v.to_owned())
        };
        let list = |idx: usize, name: &str| -> Result<Vec<String>> {
            if fields[idx].trim().is_empty() {
                return Err(Error::parse(origin, lineno, format!("empty {name} list")));
            }
            fields[idx]
                .split('|')
                .map(|t| match t.trim() {
                    "" => Err(Error::parse(origin, lineno, format!("empty term in {name} list"))),
                    t => Ok(t.to_owned()),
                })
                .collect()
        };
        let record = AnalogyRecord {
            relation: single(0, "relation id")?,
            a: single(1, "exemplar subject")?,
            b_list: list(2, "exemplar object")?,
            c: single(3, "query subject")?,
            d_list: list(4, "answer")?,
        };
        record
            .validate()
            .map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
        dataset.records.push(record);
        dataset.lines.push(lineno);
    }
    Ok(dataset)
}

pub fn write_dataset<W: Write>(mut w: W, records: &[AnalogyRecord]) -> io::Result<()> {
    for r in records {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            r.relation,
            r.a,
            r.b_list.join("|"),
            r.c,
            r.d_list.join("|")
        )?;
    }
    Ok(())
}

/// Combines every ordered pair of distinct `(subject, objects)` bundles of one
/// relation into an analogy: `n` bundles yield `n * (n - 1)` records.
pub fn combine_pairs(relation: &str, pairs: &[(String, Vec<String>)]) -> Result<Vec<AnalogyRecord>> {
    if pairs.len() < 2 {
        return Err(Error::Config(format!(
            "relation {relation:?} needs at least 2 subject bundles, found {}",
            pairs.len()
        )));
    }
    let mut seen = HashSet::new();
    for (subject, objects) in pairs {
        if !seen.insert(subject.as_str()) {
            return Err(Error::DuplicateSubject {
                relation: relation.to_owned(),
                subject: subject.clone(),
            });
        }
        if objects.is_empty() {
            return Err(Error::InvalidRecord(format!(
                "subject {subject:?} of {relation:?} has no objects"
            )));
        }
    }

    let mut out = Vec::with_capacity(pairs.len() * (pairs.len() - 1));
    for (i, (a, b_list)) in pairs.iter().enumerate() {
        for (j, (c, d_list)) in pairs.iter().enumerate() {
            if i == j {
                continue;
            }
            out.push(AnalogyRecord {
                relation: relation.to_owned(),
                a: a.clone(),
                b_list: b_list.clone(),
                c: c.clone(),
                d_list: d_list.clone(),
            });
        }
    }
    Ok(out)
}

/// Mean number of correct answers per analogy; `None` for no records.
pub fn ambiguity<'a, I>(records: I) -> Option<f64>
where
    I: IntoIterator<Item = &'a AnalogyRecord>,
{
    let (n, total) = records
        .into_iter()
        .fold((0usize, 0usize), |(n, t), r| (n + 1, t + r.d_list.len()));
    (n > 0).then(|| total as f64 / n as f64)
}
