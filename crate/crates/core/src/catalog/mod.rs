//! Tool catalog ingestion: CSV parsing, cell normalization, validation and
//! compilation into an ontology population.

mod build;
mod normalize;
mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{ConsistencyReport, Ontology, OntologyError};
use crate::slug::slugify;

pub use build::{build_ontology, export_records};
pub use normalize::{normalize_record, Stopwords};
pub use schema::{Schema, SchemaError, SchemaItem};

/// The curated catalog shipped with the crate.
pub const SEED_CATALOG: &str = include_str!("../../data/seed_catalog.csv");
/// Concept hierarchy and properties the catalog is compiled against.
pub const SEED_SCHEMA: &str = include_str!("../../data/schema.csv");
/// Words dropped when deriving concern keywords.
pub const SEED_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

pub const HEADER: [&str; 9] = [
    "name",
    "aspect",
    "year",
    "concern",
    "environment",
    "technique",
    "medium",
    "evaluation",
    "url",
];
pub const LICENSE_COLUMN: &str = "license";

/// Earliest last-update year accepted by validation.
pub const MIN_YEAR: i64 = 1990;

macro_rules! display_enum {
    ($ty:ident { $($variant:ident => $text:literal / $slug:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),+ }
            }

            /// Id of the individual or class that represents this value.
            pub fn slug(self) -> &'static str {
                match self { $($ty::$variant => $slug),+ }
            }

            pub fn from_slug(slug: &str) -> Option<Self> {
                Self::ALL.iter().copied().find(|v| v.slug() == slug)
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Aspect {
    Behavior,
    Structure,
    Evolution,
    Combined,
}

display_enum!(Aspect {
    Behavior => "Behavior" / "behavior-tool",
    Structure => "Structure" / "structure-tool",
    Evolution => "Evolution" / "evolution-tool",
    Combined => "Combined" / "combined-aspect-tool",
});

impl Aspect {
    /// Data sources implied by the aspect a tool visualizes.
    pub fn data_sources(self) -> &'static [&'static str] {
        use crate::vocab::{RUNTIME, SOURCE_CODE, VERSION_HISTORY};
        match self {
            Aspect::Behavior => &[RUNTIME],
            Aspect::Structure => &[SOURCE_CODE],
            Aspect::Evolution => &[VERSION_HISTORY],
            Aspect::Combined => &[RUNTIME, SOURCE_CODE, VERSION_HISTORY],
        }
    }

    /// Class of the data-source individual for a single aspect.
    pub(crate) fn data_source_class(source: &str) -> &'static str {
        match source {
            crate::vocab::RUNTIME => "behavior",
            crate::vocab::SOURCE_CODE => "structure",
            _ => "evolution",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Medium {
    #[serde(rename = "SCS")]
    Scs,
    #[serde(rename = "I3D")]
    I3d,
}

display_enum!(Medium {
    Scs => "SCS" / "scs",
    I3d => "I3D" / "i3d",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Evaluation {
    Experiment,
    UsageScenario,
    CaseStudy,
    Survey,
    Anecdotal,
    Theoretical,
    None,
}

display_enum!(Evaluation {
    Experiment => "Experiment" / "experiment",
    UsageScenario => "UsageScenario" / "usage-scenario",
    CaseStudy => "CaseStudy" / "case-study",
    Survey => "Survey" / "survey",
    Anecdotal => "Anecdotal" / "anecdotal",
    Theoretical => "Theoretical" / "theoretical",
    None => "None" / "none",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum License {
    Free,
    Commercial,
    Unknown,
}

display_enum!(License {
    Free => "Free" / "free",
    Commercial => "Commercial" / "commercial",
    Unknown => "Unknown" / "unknown",
});

/// One normalized catalog row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolRecord {
    pub slug: String,
    pub name: String,
    pub aspect: Aspect,
    pub year: i64,
    pub concern: String,
    pub concern_keywords: BTreeSet<String>,
    pub environments: BTreeSet<String>,
    pub techniques: BTreeSet<String>,
    pub media: BTreeSet<Medium>,
    pub evaluations: BTreeSet<Evaluation>,
    pub url: String,
    pub license: Option<License>,
}

/// One data line of the catalog CSV, cells as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    /// 1-based data row number (the header is row 0).
    pub row: usize,
    pub name: String,
    pub aspect: String,
    pub year: String,
    pub concern: String,
    pub environment: String,
    pub technique: String,
    pub medium: String,
    pub evaluation: String,
    pub url: String,
    pub license: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CatalogIssue {
    pub row: usize,
    pub severity: Severity,
    pub message: String,
}

impl CatalogIssue {
    pub fn error(row: usize, message: impl Into<String>) -> Self {
        CatalogIssue { row, severity: Severity::Error, message: message.into() }
    }

    pub fn warning(row: usize, message: impl Into<String>) -> Self {
        CatalogIssue { row, severity: Severity::Warning, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for CatalogIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "row {}: {sev}: {}", self.row, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: u64, message: String },
    #[error("bad header: expected `{expected}`, found `{found}`")]
    BadHeader { expected: String, found: String },
    #[error("catalog has {} blocking issue(s)", .0.iter().filter(|i| i.is_error()).count())]
    Invalid(Vec<CatalogIssue>),
    #[error("schema: {0}")]
    Schema(#[from] SchemaError),
    #[error("ontology: {0}")]
    Ontology(#[from] OntologyError),
    #[error("compiled ontology is inconsistent ({} violation(s))", .0.violations.len())]
    Inconsistent(ConsistencyReport),
}

/// Reads the catalog CSV. The header must be exactly [`HEADER`], optionally
/// followed by a `license` column.
pub fn parse_catalog(bytes: &[u8]) -> Result<Vec<RawRow>, CatalogError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);
    let mut records = reader.records();

    let expected = HEADER.join(",");
    let header = match records.next() {
        Some(rec) => rec.map_err(malformed)?,
        None => return Err(CatalogError::BadHeader { expected, found: String::new() }),
    };
    let found: Vec<&str> = header.iter().collect();
    let with_license = match found.as_slice() {
        h if h == HEADER => false,
        [head @ .., last] if head == HEADER && *last == LICENSE_COLUMN => true,
        _ => return Err(CatalogError::BadHeader { expected, found: found.join(",") }),
    };
    let width = HEADER.len() + usize::from(with_license);

    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec.map_err(malformed)?;
        let line = rec.position().map_or(i as u64 + 2, |p| p.line());
        if rec.len() != width {
            return Err(CatalogError::MalformedCsv {
                line,
                message: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        let cell = |k: usize| rec[k].to_string();
        rows.push(RawRow {
            row: i + 1,
            name: cell(0),
            aspect: cell(1),
            year: cell(2),
            concern: cell(3),
            environment: cell(4),
            technique: cell(5),
            medium: cell(6),
            evaluation: cell(7),
            url: cell(8),
            license: with_license.then(|| cell(9)),
        });
    }
    Ok(rows)
}

fn malformed(e: csv::Error) -> CatalogError {
    let line = e.position().map_or(0, |p| p.line());
    CatalogError::MalformedCsv { line, message: e.to_string() }
}

/// Gives every record a unique slug. Records whose name slugs collide get
/// their year appended (`jive-2016`, `jive-2007`).
pub fn assign_slugs(records: &mut [ToolRecord]) {
    let mut by_base: BTreeMap<String, usize> = BTreeMap::new();
    for r in records.iter() {
        *by_base.entry(slugify(&r.name)).or_default() += 1;
    }
    for r in records.iter_mut() {
        let base = slugify(&r.name);
        r.slug = if by_base[&base] > 1 { format!("{base}-{}", r.year) } else { base };
    }
}

/// Reports duplicate names and slugs, blank names and URLs, out-of-range
/// years and empty facets. Rows are numbered by position, starting at 1.
pub fn validate_catalog(records: &[ToolRecord], current_year: i64) -> Vec<CatalogIssue> {
    let mut issues = Vec::new();
    let mut seen_names: BTreeMap<(String, i64), usize> = BTreeMap::new();
    let mut seen_slugs: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        let row = i + 1;
        if r.name.trim().is_empty() {
            issues.push(CatalogIssue::error(row, "tool name is blank; every tool must be identified with a name"));
        } else if let Some(first) = seen_names.insert((r.name.clone(), r.year), row) {
            issues.push(CatalogIssue::error(
                row,
                format!("duplicate tool `{}` ({}) already listed at row {first}", r.name, r.year),
            ));
        } else if let Some(first) = seen_slugs.insert(r.slug.as_str(), row) {
            issues.push(CatalogIssue::error(
                row,
                format!("slug `{}` of `{}` collides with row {first}", r.slug, r.name),
            ));
        }
        if r.url.trim().is_empty() {
            issues.push(CatalogIssue::error(
                row,
                format!(
                    "url of `{}` is blank; availability criterion requires the tool to be publicly available on the internet",
                    r.name
                ),
            ));
        }
        if r.year < MIN_YEAR || r.year > current_year {
            issues.push(CatalogIssue::error(
                row,
                format!("year {} outside [{MIN_YEAR}, {current_year}]", r.year),
            ));
        }
        if r.media.is_empty() {
            issues.push(CatalogIssue::error(row, "medium is empty"));
        }
        for (facet, empty) in [
            ("environment", r.environments.is_empty()),
            ("technique", r.techniques.is_empty()),
            ("evaluation", r.evaluations.is_empty()),
            ("concern", r.concern_keywords.is_empty()),
        ] {
            if empty {
                issues.push(CatalogIssue::warning(row, format!("{facet} is empty")));
            }
        }
    }
    issues.sort();
    issues
}

pub fn current_year() -> i64 {
    i64::from(time::OffsetDateTime::now_utc().year())
}

/// Result of a successful ingest.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub ontology: Ontology,
    pub records: Vec<ToolRecord>,
    /// Non-blocking issues (warnings) raised along the way.
    pub issues: Vec<CatalogIssue>,
}

/// Parses, normalizes and validates a catalog, then compiles it against
/// `schema`. Any error-severity issue aborts with [`CatalogError::Invalid`].
pub fn ingest(
    catalog: &[u8],
    schema: &Schema,
    stopwords: &Stopwords,
    current_year: i64,
) -> Result<Ingested, CatalogError> {
    let rows = parse_catalog(catalog)?;
    let mut issues = Vec::new();
    let mut records = Vec::with_capacity(rows.len());
    for raw in &rows {
        let (record, mut row_issues) = normalize_record(raw, stopwords);
        issues.append(&mut row_issues);
        records.extend(record);
    }
    if issues.iter().any(CatalogIssue::is_error) {
        issues.sort();
        return Err(CatalogError::Invalid(issues));
    }
    assign_slugs(&mut records);
    issues.extend(validate_catalog(&records, current_year));
    issues.sort();
    if issues.iter().any(CatalogIssue::is_error) {
        return Err(CatalogError::Invalid(issues));
    }
    let ontology = build_ontology(&records, schema)?;
    Ok(Ingested { ontology, records, issues })
}

/// Ingests the bundled seed catalog against the bundled schema.
pub fn ingest_seed() -> Result<Ingested, CatalogError> {
    ingest(
        SEED_CATALOG.as_bytes(),
        &Schema::bundled()?,
        &Stopwords::bundled(),
        current_year(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER_LINE: &str = "name,aspect,year,concern,environment,technique,medium,evaluation,url\n";

    #[test]
    fn seed_has_seventy_rows() {
        assert_eq!(parse_catalog(SEED_CATALOG.as_bytes()).unwrap().len(), 70);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse_catalog(HEADER_LINE.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn short_row_is_malformed_at_its_line() {
        let text = format!("{HEADER_LINE}A,Behavior,2017,c,Java,City,SCS,Experiment,http://a\nB,Behavior,2017,c,Java,City,SCS\n");
        match parse_catalog(text.as_bytes()) {
            Err(CatalogError::MalformedCsv { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("found 7"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_must_match_exactly() {
        assert!(matches!(parse_catalog(b""), Err(CatalogError::BadHeader { .. })));
        assert!(matches!(
            parse_catalog(b"Name,aspect,year,concern,environment,technique,medium,evaluation,url\n"),
            Err(CatalogError::BadHeader { .. })
        ));
        let with_license = "name,aspect,year,concern,environment,technique,medium,evaluation,url,license\nA,Behavior,2017,c,Java,City,SCS,Experiment,http://a,Free\n";
        let rows = parse_catalog(with_license.as_bytes()).unwrap();
        assert_eq!(rows[0].license.as_deref(), Some("Free"));
    }

    fn record(name: &str, year: i64) -> ToolRecord {
        ToolRecord {
            slug: String::new(),
            name: name.into(),
            aspect: Aspect::Behavior,
            year,
            concern: "Execution traces".into(),
            concern_keywords: ["execution", "traces"].map(String::from).into(),
            environments: ["Java".to_string()].into(),
            techniques: ["Charts".to_string()].into(),
            media: [Medium::Scs].into(),
            evaluations: [Evaluation::None].into(),
            url: "http://example.org".into(),
            license: None,
        }
    }

    #[test]
    fn two_jive_tools_get_year_suffixes() {
        let mut recs = vec![record("Jive", 2016), record("Jive", 2007), record("Jove", 2007)];
        assign_slugs(&mut recs);
        let slugs: Vec<_> = recs.iter().map(|r| r.slug.as_str()).collect();
        assert_eq!(slugs, ["jive-2016", "jive-2007", "jove"]);
        assert!(validate_catalog(&recs, 2026).is_empty());
    }

    #[test]
    fn validation_reports() {
        let mut recs = vec![record("A", 2017), record("A", 2017), record("B", 1980), record("C", 2017)];
        recs[3].url = "  ".into();
        recs[3].media.clear();
        recs[3].techniques.clear();
        assign_slugs(&mut recs);
        let issues = validate_catalog(&recs, 2026);
        let errors: Vec<_> = issues.iter().filter(|i| i.is_error()).map(|i| i.row).collect();
        assert_eq!(errors, [2, 3, 4, 4]);
        assert!(issues.iter().any(|i| i.row == 4 && i.message.contains("availability criterion")));
        assert!(issues.iter().any(|i| i.row == 4 && i.severity == Severity::Warning));
    }

    #[test]
    fn seed_ingests_and_round_trips() {
        let ing = ingest_seed().unwrap();
        assert_eq!(ing.records.len(), 70);
        assert!(ing.issues.iter().all(|i| !i.is_error()));
        let mut exported = export_records(&ing.ontology);
        let mut original = ing.records.clone();
        exported.sort_by(|a, b| a.slug.cmp(&b.slug));
        original.sort_by(|a, b| a.slug.cmp(&b.slug));
        assert_eq!(exported, original);
    }

    #[test]
    fn enums_round_trip_through_slugs() {
        for e in Evaluation::ALL {
            assert_eq!(Evaluation::from_slug(e.slug()), Some(*e));
        }
        assert_eq!(Aspect::from_slug("combined-aspect-tool"), Some(Aspect::Combined));
        assert_eq!(Medium::I3d.to_string(), "I3D");
    }
}
