use thiserror::Error;

use super::SEED_SCHEMA;
use crate::ontology::{Ontology, OntologyError, Polarity, PropertyKind, Value};

/// One declaration line of a schema file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaItem {
    Class { id: String, label: String, parents: Vec<String> },
    Disjoint { members: Vec<String> },
    Property {
        id: String,
        label: String,
        kind: PropertyKind,
        domain: Option<String>,
        range: Option<String>,
        super_property: Option<String>,
    },
    Individual { id: String, label: String, classes: Vec<String> },
    Assert { subject: String, pairs: Vec<(String, String)> },
}

/// Ordered schema declarations, applied top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub items: Vec<SchemaItem>,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("schema line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("schema item {item}: {source}")]
    Apply { item: usize, source: OntologyError },
}

const SCHEMA_HEADER: [&str; 7] = ["kind", "id", "label", "refs", "domain", "range", "super"];

fn list(cell: &str) -> Vec<String> {
    cell.split(';').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn opt(cell: &str) -> Option<String> {
    let c = cell.trim();
    (!c.is_empty()).then(|| c.to_string())
}

impl Schema {
    /// Parses the `kind,id,label,refs,domain,range,super` CSV format. Lines
    /// starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Schema, SchemaError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut items = Vec::new();
        let mut seen_header = false;
        for rec in reader.records() {
            let rec = rec.map_err(|e| SchemaError::Parse {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            let err = |message: String| SchemaError::Parse { line, message };
            if !seen_header {
                if rec.iter().collect::<Vec<_>>() != SCHEMA_HEADER {
                    return Err(err(format!("expected header `{}`", SCHEMA_HEADER.join(","))));
                }
                seen_header = true;
                continue;
            }
            if rec.len() != SCHEMA_HEADER.len() {
                return Err(err(format!("expected {} fields, found {}", SCHEMA_HEADER.len(), rec.len())));
            }
            let (id, label, refs) = (rec[1].trim(), rec[2].trim(), &rec[3]);
            let label = if label.is_empty() { id } else { label };
            let item = match rec[0].trim() {
                "class" => SchemaItem::Class { id: id.into(), label: label.into(), parents: list(refs) },
                "disjoint" => SchemaItem::Disjoint { members: list(refs) },
                "property" => {
                    let kind = match refs.trim() {
                        "object" => PropertyKind::Object,
                        "integer" => PropertyKind::Integer,
                        other => return Err(err(format!("unknown property kind `{other}`"))),
                    };
                    SchemaItem::Property {
                        id: id.into(),
                        label: label.into(),
                        kind,
                        domain: opt(&rec[4]),
                        range: opt(&rec[5]),
                        super_property: opt(&rec[6]),
                    }
                }
                "individual" => {
                    SchemaItem::Individual { id: id.into(), label: label.into(), classes: list(refs) }
                }
                "assert" => {
                    let mut pairs = Vec::new();
                    for pair in list(refs) {
                        let (p, t) = pair
                            .split_once('=')
                            .ok_or_else(|| err(format!("expected property=target, found `{pair}`")))?;
                        pairs.push((p.trim().to_string(), t.trim().to_string()));
                    }
                    SchemaItem::Assert { subject: id.into(), pairs }
                }
                other => return Err(err(format!("unknown kind `{other}`"))),
            };
            items.push(item);
        }
        if !seen_header {
            return Err(SchemaError::Parse { line: 1, message: "missing header".into() });
        }
        Ok(Schema { items })
    }

    pub fn bundled() -> Result<Schema, SchemaError> {
        Self::parse(SEED_SCHEMA)
    }

    /// Applies every declaration to `o`. Errors carry the 1-based item index.
    pub fn apply(&self, o: &mut Ontology) -> Result<(), SchemaError> {
        for (i, item) in self.items.iter().enumerate() {
            apply_item(o, item).map_err(|source| SchemaError::Apply { item: i + 1, source })?;
        }
        Ok(())
    }

    pub fn to_ontology(&self) -> Result<Ontology, SchemaError> {
        let mut o = Ontology::new();
        self.apply(&mut o)?;
        Ok(o)
    }
}

fn apply_item(o: &mut Ontology, item: &SchemaItem) -> Result<(), OntologyError> {
    match item {
        SchemaItem::Class { id, label, parents } => {
            o.declare_class(id, label, parents.iter().map(String::as_str))?;
        }
        SchemaItem::Disjoint { members } => {
            o.assert_disjoint_group(members.iter().map(String::as_str))?;
        }
        SchemaItem::Property { id, label, kind, domain, range, super_property } => {
            o.declare_property(
                id,
                label,
                *kind,
                domain.as_deref(),
                range.as_deref(),
                super_property.as_deref(),
            )?;
        }
        SchemaItem::Individual { id, label, classes } => {
            o.declare_individual(id, label)?;
            for c in classes {
                o.assert_membership(id, c)?;
            }
        }
        SchemaItem::Assert { subject, pairs } => {
            for (p, t) in pairs {
                let value = match o.property(p).map(|d| d.kind) {
                    Some(PropertyKind::Integer) => match t.parse() {
                        Ok(n) => Value::Integer(n),
                        Err(_) => {
                            return Err(OntologyError::KindMismatch {
                                property: p.clone(),
                                expected: PropertyKind::Integer,
                            })
                        }
                    },
                    _ => Value::individual(t.as_str()),
                };
                o.assert_property_value(subject, p, value, Polarity::Positive)?;
            }
        }
    }
    Ok(())
}
