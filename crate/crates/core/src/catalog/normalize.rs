use std::collections::BTreeSet;

use super::{Aspect, CatalogIssue, Evaluation, License, Medium, RawRow, ToolRecord, SEED_STOPWORDS};
use crate::slug::slugify;

/// Words dropped when splitting a concern into keywords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(BTreeSet<String>);

impl Stopwords {
    /// One word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_ascii_lowercase)
                .collect(),
        )
    }

    pub fn bundled() -> Self {
        Self::parse(SEED_STOPWORDS)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    /// Lowercase alphanumeric tokens of `concern` that are not stopwords.
    pub fn keywords(&self, concern: &str) -> BTreeSet<String> {
        concern
            .split(|c: char| !c.is_ascii_alphanumeric())
            .filter(|t| !t.is_empty())
            .map(str::to_ascii_lowercase)
            .filter(|t| !self.contains(t))
            .collect()
    }
}

// Keys are lowercase with whitespace removed.
const ABBREVIATIONS: &[(&str, &str)] = &[
    ("ecli.", "Eclipse"),
    ("vs", "VisualStudio"),
    ("node-l", "Node-link"),
    ("node-l.", "Node-link"),
    ("aug.src.", "Augmented source code"),
    ("aug.sourcecode", "Augmented source code"),
    ("anim.node-link", "Animated node-link"),
    ("exp.", "Experiment"),
    ("usagescen.", "UsageScenario"),
    ("n/a", "None"),
];

fn lookup_key(value: &str) -> String {
    value.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase()
}

/// Expands a known abbreviation. Returns `None` for unknown values.
pub(crate) fn expand(value: &str) -> Option<&'static str> {
    let key = lookup_key(value);
    ABBREVIATIONS.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn split_cell(cell: &str) -> impl Iterator<Item = String> + '_ {
    cell.split(';').map(collapse_ws).filter(|v| !v.is_empty())
}

/// Splits, expands and capitalizes a free-text facet cell (environment or
/// technique). Unknown abbreviations are kept verbatim with a warning.
fn facet_values(row: usize, column: &str, cell: &str, issues: &mut Vec<CatalogIssue>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for v in split_cell(cell) {
        let value = match expand(&v) {
            Some(full) => full.to_string(),
            None => {
                if v.ends_with('.') {
                    issues.push(CatalogIssue::warning(
                        row,
                        format!("unknown abbreviation `{v}` in {column} kept verbatim"),
                    ));
                }
                capitalize(&v)
            }
        };
        if slugify(&value).is_empty() {
            issues.push(CatalogIssue::error(row, format!("{column} value `{v}` has no letters or digits")));
            continue;
        }
        out.insert(value);
    }
    out
}

fn parse_aspect(v: &str) -> Option<Aspect> {
    match lookup_key(v).as_str() {
        "behavior" => Some(Aspect::Behavior),
        "structure" => Some(Aspect::Structure),
        "evolution" => Some(Aspect::Evolution),
        "combined" | "e.-s.-b." | "e.-s.-b" | "esb" => Some(Aspect::Combined),
        _ => None,
    }
}

fn parse_media(v: &str) -> Option<Vec<Medium>> {
    match lookup_key(v).as_str() {
        "scs" => Some(vec![Medium::Scs]),
        "i3d" => Some(vec![Medium::I3d]),
        "s/i" => Some(vec![Medium::Scs, Medium::I3d]),
        _ => None,
    }
}

fn parse_evaluation(v: &str) -> Option<Evaluation> {
    let expanded = expand(v).unwrap_or(v);
    match lookup_key(expanded).as_str() {
        "experiment" => Some(Evaluation::Experiment),
        "usagescenario" => Some(Evaluation::UsageScenario),
        "casestudy" => Some(Evaluation::CaseStudy),
        "survey" => Some(Evaluation::Survey),
        "anecdotal" => Some(Evaluation::Anecdotal),
        "theoretical" => Some(Evaluation::Theoretical),
        "none" => Some(Evaluation::None),
        _ => None,
    }
}

fn parse_license(v: &str) -> Option<License> {
    match lookup_key(v).as_str() {
        "free" => Some(License::Free),
        "commercial" => Some(License::Commercial),
        "unknown" => Some(License::Unknown),
        _ => None,
    }
}

/// Turns one raw row into a record. The record is `None` when any
/// error-severity issue was raised. The slug is the plain name slug;
/// collisions are resolved later by [`super::assign_slugs`].
pub fn normalize_record(raw: &RawRow, stopwords: &Stopwords) -> (Option<ToolRecord>, Vec<CatalogIssue>) {
    let row = raw.row;
    let mut issues = Vec::new();

    let name = collapse_ws(&raw.name);
    let aspect = parse_aspect(&raw.aspect);
    if aspect.is_none() {
        issues.push(CatalogIssue::error(row, format!("unknown aspect `{}`", raw.aspect.trim())));
    }
    let year = raw.year.trim().parse::<i64>().ok();
    if year.is_none() {
        issues.push(CatalogIssue::error(row, format!("year `{}` is not an integer", raw.year.trim())));
    }

    let concern = collapse_ws(&raw.concern);
    let concern_keywords = stopwords.keywords(&concern);
    let environments = facet_values(row, "environment", &raw.environment, &mut issues);
    let techniques = facet_values(row, "technique", &raw.technique, &mut issues);

    let mut media = BTreeSet::new();
    for v in split_cell(&raw.medium) {
        match parse_media(&v) {
            Some(ms) => media.extend(ms),
            None => issues.push(CatalogIssue::error(row, format!("unknown medium `{v}`"))),
        }
    }

    let mut evaluations = BTreeSet::new();
    for v in split_cell(&raw.evaluation) {
        match parse_evaluation(&v) {
            Some(e) => {
                evaluations.insert(e);
            }
            None => issues.push(CatalogIssue::error(row, format!("unknown evaluation `{v}`"))),
        }
    }

    let license = match raw.license.as_deref().map(str::trim) {
        None | Some("") => None,
        Some(v) => {
            let l = parse_license(v);
            if l.is_none() {
                issues.push(CatalogIssue::error(row, format!("unknown license `{v}`")));
            }
            l
        }
    };

    if issues.iter().any(CatalogIssue::is_error) {
        return (None, issues);
    }
    let record = ToolRecord {
        slug: slugify(&name),
        name,
        aspect: aspect.expect("checked"),
        year: year.expect("checked"),
        concern,
        concern_keywords,
        environments,
        techniques,
        media,
        evaluations,
        url: raw.url.trim().to_string(),
        license,
    };
    (Some(record), issues)
}
