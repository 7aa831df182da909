//! The flat record format.
//!
//! ```text
//! id facB
//! type body
//! name Faculty B
//! body-kind faculty
//! established 1963
//! subdivision-of schoolA@1963..
//! ```
//!
//! Records are separated by blank lines; each line is `key value`. Lines
//! starting with `#` are comments.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key {key:?} for {kind} records")]
    UnknownKey { line: usize, key: String, kind: RecordKind },
    #[error("line {line}: record {local_id:?} is missing required key {key:?}")]
    MissingRequiredKey {
        line: usize,
        local_id: String,
        key: &'static str,
    },
    #[error("line {line}: duplicate {kind} id {local_id:?}")]
    DuplicateLocalId {
        line: usize,
        local_id: String,
        kind: RecordKind,
    },
}

impl RecordError {
    pub fn line(&self) -> usize {
        match self {
            RecordError::Syntax { line, .. }
            | RecordError::UnknownKey { line, .. }
            | RecordError::MissingRequiredKey { line, .. }
            | RecordError::DuplicateLocalId { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    Person,
    Body,
    Work,
}

impl RecordKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            RecordKind::Person => "person",
            RecordKind::Body => "body",
            RecordKind::Work => "work",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "person" => Some(RecordKind::Person),
            "body" => Some(RecordKind::Body),
            "work" => Some(RecordKind::Work),
            _ => None,
        }
    }

    /// `(key, repeatable, required)` for every key the kind accepts.
    pub fn keys(&self) -> &'static [(&'static str, bool, bool)] {
        match self {
            RecordKind::Person => &[
                ("name", true, true),
                ("gender", true, false),
                ("student-of", true, false),
                ("professor-at", true, false),
                ("birth-place", false, false),
                ("same-as", true, false),
            ],
            RecordKind::Body => &[
                ("name", true, true),
                ("body-kind", false, true),
                ("established", false, false),
                ("subdivision-of", true, false),
                ("changed-to", true, false),
                ("same-as", true, false),
            ],
            RecordKind::Work => &[
                ("title", false, true),
                ("work-kind", false, true),
                ("dissertant", false, true),
                ("study", false, true),
                ("advisor", true, false),
                ("committee", true, false),
                ("grantor", true, true),
                ("same-as", true, false),
                ("related-to", true, false),
            ],
        }
    }

    fn key_spec(&self, key: &str) -> Option<(bool, bool)> {
        self.keys()
            .iter()
            .find(|(k, _, _)| *k == key)
            .map(|&(_, rep, req)| (rep, req))
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// One `key value` line. Equality ignores the line number.
#[derive(Debug, Clone, Eq)]
pub struct Field {
    pub key: String,
    pub value: String,
    pub line: usize,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.value == other.value
    }
}

/// One flat record before deconstruction. Equality ignores line numbers.
#[derive(Debug, Clone, Eq)]
pub struct Record {
    pub local_id: String,
    pub kind: RecordKind,
    pub fields: Vec<Field>,
    pub line: usize,
}

impl PartialEq for Record {
    fn eq(&self, other: &Self) -> bool {
        self.local_id == other.local_id && self.kind == other.kind && self.fields == other.fields
    }
}

impl Record {
    pub fn new(local_id: &str, kind: RecordKind) -> Self {
        Record {
            local_id: local_id.to_string(),
            kind,
            fields: Vec::new(),
            line: 0,
        }
    }

    pub fn with(mut self, key: &str, value: &str) -> Self {
        self.fields.push(Field {
            key: key.to_string(),
            value: value.to_string(),
            line: 0,
        });
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.key == key)
    }

    pub fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Field> + 'a {
        self.fields.iter().filter(move |f| f.key == key)
    }

    /// Key table, repetition and required-key checks.
    pub fn validate(&self) -> Result<(), RecordError> {
        let mut seen = HashSet::new();
        for f in &self.fields {
            let (repeatable, _) = self.kind.key_spec(&f.key).ok_or_else(|| RecordError::UnknownKey {
                line: f.line,
                key: f.key.clone(),
                kind: self.kind,
            })?;
            if !repeatable && !seen.insert(f.key.as_str()) {
                return Err(RecordError::Syntax {
                    line: f.line,
                    message: format!("key {:?} may appear only once", f.key),
                });
            }
        }
        for &(key, _, required) in self.kind.keys() {
            if required && self.get(key).is_none() {
                return Err(RecordError::MissingRequiredKey {
                    line: self.line,
                    local_id: self.local_id.clone(),
                    key,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "id {}", self.local_id)?;
        writeln!(f, "type {}", self.kind)?;
        for field in &self.fields {
            writeln!(f, "{} {}", field.key, field.value)?;
        }
        Ok(())
    }
}

/// Renders records back into the file format.
pub fn print_records(records: &[Record]) -> String {
    records
        .iter()
        .map(Record::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn parse_records(text: &str) -> Result<Vec<Record>, RecordError> {
    let mut records = Vec::new();
    let mut current: Vec<(usize, &str)> = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if !current.is_empty() {
                records.push(parse_one(&current)?);
                current.clear();
            }
        } else if !line.starts_with('#') {
            current.push((idx + 1, line));
        }
    }
    if !current.is_empty() {
        records.push(parse_one(&current)?);
    }

    let mut ids = HashSet::new();
    for r in &records {
        if !ids.insert((r.kind, r.local_id.as_str())) {
            return Err(RecordError::DuplicateLocalId {
                line: r.line,
                local_id: r.local_id.clone(),
                kind: r.kind,
            });
        }
    }
    Ok(records)
}

fn split_line(line_no: usize, line: &str) -> Result<(&str, &str), RecordError> {
    let syntax = |message: &str| RecordError::Syntax {
        line: line_no,
        message: message.to_string(),
    };
    let (key, value) = line.split_once(' ').ok_or_else(|| syntax("expected `key value`"))?;
    if key.is_empty() || value.trim().is_empty() {
        return Err(syntax("expected `key value`"));
    }
    Ok((key, value))
}

fn parse_one(lines: &[(usize, &str)]) -> Result<Record, RecordError> {
    let syntax = |line: usize, message: &str| RecordError::Syntax {
        line,
        message: message.to_string(),
    };
    let (first_line, first) = lines[0];
    let (key, local_id) = split_line(first_line, first)?;
    if key != "id" {
        return Err(syntax(first_line, "a record must start with `id LOCALID`"));
    }
    if local_id.chars().any(char::is_whitespace) {
        return Err(syntax(first_line, "record ids may not contain whitespace"));
    }
    let &(type_line, second) = lines
        .get(1)
        .ok_or_else(|| syntax(first_line, "missing `type` line"))?;
    let (key, kind) = split_line(type_line, second)?;
    if key != "type" {
        return Err(syntax(type_line, "second line must be `type person|body|work`"));
    }
    let kind = RecordKind::from_keyword(kind)
        .ok_or_else(|| syntax(type_line, "type must be person, body or work"))?;

    let mut record = Record {
        local_id: local_id.to_string(),
        kind,
        fields: Vec::with_capacity(lines.len() - 2),
        line: first_line,
    };
    for &(line, text) in &lines[2..] {
        let (key, value) = split_line(line, text)?;
        if key == "id" || key == "type" {
            return Err(syntax(line, "records are separated by a blank line"));
        }
        record.fields.push(Field {
            key: key.to_string(),
            value: value.to_string(),
            line,
        });
    }
    record.validate()?;
    Ok(record)
}
