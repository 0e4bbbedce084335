//! The `.qsr` instance file format.
//!
//! An instance file is a JSON object with three fields:
//!
//! ```text
//! {
//!   "universe": ["1", "2", "3"],
//!   "class":    [[], ["1"], ["1", "2"]],
//!   "measure":  {"": "0", "1": "1/2", "1,2": "3"}
//! }
//! ```
//!
//! `universe` names the atoms, `class` lists the members as label lists,
//! and `measure` assigns each member a value keyed by its canonical key:
//! the member's labels sorted lexicographically and joined with commas,
//! the empty set keyed by the empty string. Values are nonnegative
//! fractions (`"p/q"`), integers, or `"inf"`.
//!
//! Parsing is whole-file: every problem is reported, each as a
//! [`Diagnostic`] with a stable code and the field it concerns, rather
//! than stopping at the first.

use qsr_core::{Error, Instance, MeasureValue, Premeasure, SetClass, Subset, Universe};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

/// Atom limit applied when the caller does not override it.
pub const DEFAULT_MAX_UNIVERSE: usize = 20;

/// The raw JSON shape of an instance file, before any validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub universe: Vec<String>,
    pub class: Vec<Vec<String>>,
    pub measure: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticCode {
    /// The file is not valid JSON or not the expected object shape.
    MalformedFile,
    /// The universe itself is unusable (empty, too large, duplicate or
    /// comma-bearing labels).
    BadUniverse,
    /// A class entry names an atom the universe does not declare.
    UnknownLabel,
    /// Two class entries denote the same subset.
    DuplicateSubset,
    /// No class entry denotes the empty set.
    MissingEmptySet,
    /// A class member has no measure value.
    MissingMeasureKey,
    /// A measure key matches no class member.
    ExtraMeasureKey,
    /// A measure value is not a nonnegative fraction or "inf".
    MalformedFraction,
    /// The empty set is assigned a nonzero measure.
    EmptySetNonzero,
    /// The instance is well-formed but outside what the requested
    /// operation can handle (e.g. too many atoms for a full table).
    Unsupported,
    /// Two input files that must describe the same universe and class
    /// do not.
    MismatchedInputs,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::MalformedFile => "MALFORMED_FILE",
            DiagnosticCode::BadUniverse => "BAD_UNIVERSE",
            DiagnosticCode::UnknownLabel => "UNKNOWN_LABEL",
            DiagnosticCode::DuplicateSubset => "DUPLICATE_SUBSET",
            DiagnosticCode::MissingEmptySet => "MISSING_EMPTY_SET",
            DiagnosticCode::MissingMeasureKey => "MISSING_MEASURE_KEY",
            DiagnosticCode::ExtraMeasureKey => "EXTRA_MEASURE_KEY",
            DiagnosticCode::MalformedFraction => "MALFORMED_FRACTION",
            DiagnosticCode::EmptySetNonzero => "EMPTY_SET_NONZERO",
            DiagnosticCode::Unsupported => "UNSUPPORTED",
            DiagnosticCode::MismatchedInputs => "MISMATCHED_INPUTS",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DiagnosticCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One problem with an input, tied to the part of the file it concerns
/// (`field` is a path like `class[3]` or `measure["1,2"]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, field: impl Into<String>, message: impl fmt::Display) -> Self {
        Diagnostic {
            code,
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}] {}: {}", self.code, self.field, self.message)
    }
}

impl Serialize for Diagnostic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Diagnostic", 3)?;
        s.serialize_field("code", &self.code)?;
        s.serialize_field("field", &self.field)?;
        s.serialize_field("message", &self.message)?;
        s.end()
    }
}

/// Parses the JSON layer only; shape problems come back as a single
/// `MALFORMED_FILE` diagnostic.
pub fn parse_instance_file(text: &str) -> Result<InstanceFile, Diagnostic> {
    serde_json::from_str(text)
        .map_err(|e| Diagnostic::new(DiagnosticCode::MalformedFile, "file", e))
}

/// Validates a parsed file and builds the typed instance, reporting every
/// problem found rather than the first.
pub fn build_instance(file: &InstanceFile, max_atoms: usize) -> Result<Instance, Vec<Diagnostic>> {
    let universe = match Universe::with_max(file.universe.iter().cloned(), max_atoms) {
        Ok(u) => u,
        // Nothing below is checkable without a universe, so this one is
        // allowed to be a lone diagnostic.
        Err(e) => {
            return Err(vec![Diagnostic::new(
                DiagnosticCode::BadUniverse,
                "universe",
                e,
            )])
        }
    };

    let mut diagnostics = Vec::new();
    let mut members: Vec<Subset> = Vec::new();
    let mut first_seen: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, labels) in file.class.iter().enumerate() {
        let field = format!("class[{i}]");
        match universe.subset_from_labels(labels) {
            Ok(s) => {
                if let Some(&first) = first_seen.get(&s.bits()) {
                    diagnostics.push(Diagnostic::new(
                        DiagnosticCode::DuplicateSubset,
                        field,
                        format!("denotes the same subset as class[{first}]"),
                    ));
                } else {
                    first_seen.insert(s.bits(), i);
                    members.push(s);
                }
            }
            Err(e) => diagnostics.push(Diagnostic::new(DiagnosticCode::UnknownLabel, field, e)),
        }
    }

    if !members.iter().any(|s| s.is_empty()) {
        diagnostics.push(Diagnostic::new(
            DiagnosticCode::MissingEmptySet,
            "class",
            "the class must contain the empty set (an empty label list)",
        ));
    }

    let mut values: Vec<(Subset, MeasureValue)> = Vec::new();
    for &m in &members {
        let key = universe.subset_key(m);
        let field = format!("measure[{key:?}]");
        match file.measure.get(&key) {
            None => diagnostics.push(Diagnostic::new(
                DiagnosticCode::MissingMeasureKey,
                field,
                "class member has no measure value",
            )),
            Some(text) => match text.parse::<MeasureValue>() {
                Ok(v) => {
                    if m.is_empty() && !v.is_zero() {
                        diagnostics.push(Diagnostic::new(
                            DiagnosticCode::EmptySetNonzero,
                            field,
                            format!("the empty set must have measure 0, got {v}"),
                        ));
                    } else {
                        values.push((m, v));
                    }
                }
                Err(e) => {
                    diagnostics.push(Diagnostic::new(DiagnosticCode::MalformedFraction, field, e))
                }
            },
        }
    }

    let class_keys: BTreeSet<String> = members.iter().map(|&m| universe.subset_key(m)).collect();
    for key in file.measure.keys() {
        if !class_keys.contains(key) {
            diagnostics.push(Diagnostic::new(
                DiagnosticCode::ExtraMeasureKey,
                format!("measure[{key:?}]"),
                "key matches no class member",
            ));
        }
    }

    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }

    // All the Instance constructor's own preconditions were just checked,
    // so failures here would be bugs, not input problems; surface them as
    // diagnostics anyway rather than panicking.
    let fallback = |e: Error| vec![Diagnostic::new(DiagnosticCode::MalformedFile, "file", e)];
    let class = SetClass::new(universe, members).map_err(fallback)?;
    Instance::new(class, Premeasure::from_pairs(values)).map_err(fallback)
}

/// Reads, parses, and validates an instance file.
pub fn load_instance(path: &Path, max_atoms: usize) -> Result<Instance, Vec<Diagnostic>> {
    let text = fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic::new(
            DiagnosticCode::MalformedFile,
            path.display().to_string(),
            e,
        )]
    })?;
    let file = parse_instance_file(&text).map_err(|d| vec![d])?;
    build_instance(&file, max_atoms)
}

/// Inverse of [`build_instance`]: the raw file an instance serialises to.
/// Class order follows the instance; labels within an entry are sorted,
/// matching the measure keys.
pub fn instance_to_file(instance: &Instance) -> InstanceFile {
    let universe = instance.universe();
    let class = instance
        .class()
        .members()
        .iter()
        .map(|&m| {
            let mut labels: Vec<String> = m
                .iter_atoms()
                .map(|i| universe.atoms()[i].clone())
                .collect();
            labels.sort_unstable();
            labels
        })
        .collect();
    let measure = instance
        .class()
        .members()
        .iter()
        .map(|&m| (universe.subset_key(m), instance.value_of(m).to_string()))
        .collect();
    InstanceFile {
        universe: universe.atoms().to_vec(),
        class,
        measure,
    }
}

/// Stable bytes for a file: field order fixed by the struct, measure keys
/// sorted by the map, two-space indentation, trailing newline.
pub fn canonical_json(file: &InstanceFile) -> String {
    let mut text = serde_json::to_string_pretty(file).expect("instance files always serialise");
    text.push('\n');
    text
}

/// Resolves a canonical subset key (as produced by `Universe::subset_key`,
/// and as printed in report witnesses) against a universe. The empty
/// string denotes the empty set.
pub fn parse_set_key(universe: &Universe, key: &str) -> Result<Subset, Diagnostic> {
    let labels: Vec<&str> = if key.is_empty() {
        Vec::new()
    } else {
        key.split(',').collect()
    };
    universe
        .subset_from_labels(&labels)
        .map_err(|e| Diagnostic::new(DiagnosticCode::UnknownLabel, format!("--set {key:?}"), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intervals() -> InstanceFile {
        InstanceFile {
            universe: vec!["1".into(), "2".into(), "3".into()],
            class: vec![
                vec![],
                vec!["1".into()],
                vec!["2".into()],
                vec!["3".into()],
                vec!["1".into(), "2".into()],
                vec!["2".into(), "3".into()],
                vec!["1".into(), "2".into(), "3".into()],
            ],
            measure: [
                ("", "0"),
                ("1", "1"),
                ("2", "1"),
                ("3", "1"),
                ("1,2", "2"),
                ("2,3", "2"),
                ("1,2,3", "3"),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        }
    }

    #[test]
    fn well_formed_file_builds() {
        let instance = build_instance(&intervals(), DEFAULT_MAX_UNIVERSE).unwrap();
        assert_eq!(instance.class().len(), 7);
        assert_eq!(instance.universe().len(), 3);
        let full = instance.universe().full_set();
        assert_eq!(instance.value_of(full), &"3".parse().unwrap());
    }

    #[test]
    fn serialisation_round_trips() {
        let instance = build_instance(&intervals(), DEFAULT_MAX_UNIVERSE).unwrap();
        let file = instance_to_file(&instance);
        let text = canonical_json(&file);
        let reparsed = parse_instance_file(&text).unwrap();
        assert_eq!(reparsed, file);
        let rebuilt = build_instance(&reparsed, DEFAULT_MAX_UNIVERSE).unwrap();
        assert_eq!(rebuilt.digest(), instance.digest());
        // Canonical bytes are a fixpoint.
        assert_eq!(canonical_json(&instance_to_file(&rebuilt)), text);
    }

    #[test]
    fn every_problem_is_reported_with_its_code() {
        let mut file = intervals();
        file.class.push(vec!["7".into()]); // unknown label
        file.class.push(vec!["2".into(), "1".into()]); // duplicates class[4]
        file.measure.insert("1,3".into(), "1".into()); // extra key
        file.measure.insert("2".into(), "1/0".into()); // malformed fraction
        file.measure.remove("3"); // missing key
        file.measure.insert("".into(), "1/4".into()); // nonzero empty set

        let diagnostics = build_instance(&file, DEFAULT_MAX_UNIVERSE).unwrap_err();
        let codes: Vec<DiagnosticCode> = diagnostics.iter().map(|d| d.code).collect();
        for expected in [
            DiagnosticCode::UnknownLabel,
            DiagnosticCode::DuplicateSubset,
            DiagnosticCode::ExtraMeasureKey,
            DiagnosticCode::MalformedFraction,
            DiagnosticCode::MissingMeasureKey,
            DiagnosticCode::EmptySetNonzero,
        ] {
            assert!(codes.contains(&expected), "missing {expected}: {codes:?}");
        }
        assert_eq!(diagnostics.len(), 6);

        let dup = diagnostics
            .iter()
            .find(|d| d.code == DiagnosticCode::DuplicateSubset)
            .unwrap();
        assert_eq!(dup.field, "class[8]");
        assert!(dup.message.contains("class[4]"));
    }

    #[test]
    fn missing_empty_set_is_diagnosed() {
        let mut file = intervals();
        file.class.remove(0);
        file.measure.remove("");
        let diagnostics = build_instance(&file, DEFAULT_MAX_UNIVERSE).unwrap_err();
        assert!(diagnostics
            .iter()
            .any(|d| d.code == DiagnosticCode::MissingEmptySet));
    }

    #[test]
    fn universe_limit_is_enforced() {
        let file = intervals();
        let diagnostics = build_instance(&file, 2).unwrap_err();
        assert_eq!(diagnostics.len(), 1);
        assert_eq!(diagnostics[0].code, DiagnosticCode::BadUniverse);
    }

    #[test]
    fn set_keys_resolve_like_witnesses() {
        let instance = build_instance(&intervals(), DEFAULT_MAX_UNIVERSE).unwrap();
        let u = instance.universe();
        let empty = parse_set_key(u, "").unwrap();
        assert!(empty.is_empty());
        let pair = parse_set_key(u, "1,3").unwrap();
        assert_eq!(u.subset_key(pair), "1,3");
        assert!(parse_set_key(u, "1,9").is_err());
    }
}
