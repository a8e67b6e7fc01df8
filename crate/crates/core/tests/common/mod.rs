#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value as Json;
use vison_core::catalog::{ingest_seed, SEED_CATALOG};
use vison_core::ontology::{Polarity, PropertyKind, Value};
use vison_core::query::{ClassExpression, CompareOp};
use vison_core::{MetricsReport, Ontology};

pub fn seed_ontology() -> &'static Ontology {
    static SEED: OnceLock<Ontology> = OnceLock::new();
    SEED.get_or_init(|| ingest_seed().expect("seed ingests").ontology)
}

/// Catalog rows read straight from CSV text, keyed by header.
pub fn csv_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            headers.iter().zip(rec.iter()).map(|(h, v)| (h.to_string(), v.trim().to_string())).collect()
        })
        .collect()
}

pub fn seed_rows() -> Vec<BTreeMap<String, String>> {
    csv_rows(SEED_CATALOG)
}

/// Lowercase alphanumeric words of a cell.
pub fn words(text: &str) -> BTreeSet<String> {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_ascii_lowercase())
        .collect()
}

/// Recounts every metric from the serialized document instead of the
/// in-memory maps.
pub fn metrics_oracle(o: &Ontology) -> MetricsReport {
    let doc = serde_json::to_value(o).unwrap();
    let arr = |k: &str| doc[k].as_array().unwrap().clone();
    let classes: Vec<Json> = arr("classes").into_iter().filter(|c| c["id"] != "thing").collect();
    let props = arr("properties");
    let inds = arr("individuals");
    let object: Vec<&Json> = props.iter().filter(|p| p["kind"] == "object").collect();
    let has = |p: &Json, k: &str| p.get(k).is_some_and(|v| !v.is_null());
    let len = |v: &Json| v.as_array().map_or(0, Vec::len);

    let mut m = MetricsReport {
        class_count: classes.len(),
        property_count: props.len(),
        individual_count: inds.len(),
        subclassof_count: classes
            .iter()
            .map(|c| c["parents"].as_array().unwrap().iter().filter(|p| *p != "thing").count())
            .sum(),
        disjointclasses_count: len(&doc["disjoint_groups"]),
        subobjectpropertyof_count: object.iter().filter(|p| has(p, "super_property")).count(),
        objectpropertydomain_count: object.iter().filter(|p| has(p, "domain")).count(),
        objectpropertyrange_count: object.iter().filter(|p| has(p, "range")).count(),
        classassertion_count: inds.iter().map(|i| len(&i["asserted_classes"])).sum(),
        objectpropertyassertion_count: inds
            .iter()
            .flat_map(|i| i["property_assertions"].as_array().unwrap().iter())
            .filter(|a| a["target"].get("individual").is_some())
            .count(),
        negativeobjectpropertyassertion_count: inds.iter().map(|i| len(&i["negative_assertions"])).sum(),
        ..MetricsReport::default()
    };
    m.logical_axiom_count = m.subclassof_count
        + m.disjointclasses_count
        + m.subobjectpropertyof_count
        + m.objectpropertydomain_count
        + m.objectpropertyrange_count
        + m.classassertion_count
        + m.objectpropertyassertion_count
        + m.negativeobjectpropertyassertion_count;
    m.declaration_axiom_count = m.class_count + m.property_count + m.individual_count;
    m.axiom_count = m.logical_axiom_count + m.declaration_axiom_count;
    m
}

fn pick<'a>(rng: &mut StdRng, items: &'a [String]) -> Option<&'a str> {
    items.choose(rng).map(String::as_str)
}

fn ids(o: &Ontology) -> (Vec<String>, Vec<String>, Vec<String>, Vec<String>) {
    let classes = o.classes().map(|c| c.id.clone()).collect();
    let object = o.properties().filter(|p| p.kind == PropertyKind::Object).map(|p| p.id.clone()).collect();
    let integer = o.properties().filter(|p| p.kind == PropertyKind::Integer).map(|p| p.id.clone()).collect();
    let inds = o.individuals().map(|i| i.id.clone()).collect();
    (classes, object, integer, inds)
}

/// Applies one random API mutation. Rejected mutations leave `o` as is.
pub fn mutate(o: &mut Ontology, rng: &mut StdRng) {
    let (classes, object, integer, inds) = ids(o);
    let fresh = format!("m{}", rng.gen::<u32>());
    let _ = match rng.gen_range(0..12) {
        0 => {
            let parents: Vec<&str> = (0..rng.gen_range(0..3)).filter_map(|_| pick(rng, &classes)).collect();
            o.declare_class(&fresh, &fresh, parents).map(|_| ())
        }
        1 => match (pick(rng, &classes), pick(rng, &classes)) {
            (Some(a), Some(b)) => o.add_parent(a, b).map(|_| ()),
            _ => Ok(()),
        },
        2 => {
            let members: Vec<&str> = (0..rng.gen_range(2..4)).filter_map(|_| pick(rng, &classes)).collect();
            o.assert_disjoint_group(members).map(|_| ())
        }
        3 => {
            let domain = if rng.gen_bool(0.5) { pick(rng, &classes) } else { None };
            let range = if rng.gen_bool(0.5) { pick(rng, &classes) } else { None };
            let sup = if rng.gen_bool(0.3) { pick(rng, &object) } else { None };
            o.declare_property(&fresh, &fresh, PropertyKind::Object, domain, range, sup).map(|_| ())
        }
        4 => {
            let domain = if rng.gen_bool(0.5) { pick(rng, &classes) } else { None };
            o.declare_property(&fresh, &fresh, PropertyKind::Integer, domain, None, None).map(|_| ())
        }
        5 => o.declare_individual(&fresh, &fresh).map(|_| ()),
        6 => match (pick(rng, &inds), pick(rng, &classes)) {
            (Some(i), Some(c)) => o.assert_membership(i, c).map(|_| ()),
            _ => Ok(()),
        },
        7 | 8 => match (pick(rng, &inds), pick(rng, &object), pick(rng, &inds)) {
            (Some(i), Some(p), Some(t)) => {
                let pol = if rng.gen_bool(0.7) { Polarity::Positive } else { Polarity::Negative };
                o.assert_property_value(i, p, Value::individual(t), pol).map(|_| ())
            }
            _ => Ok(()),
        },
        9 => match (pick(rng, &inds), pick(rng, &integer)) {
            (Some(i), Some(p)) => {
                let v = rng.gen_range(1990..2030);
                o.assert_property_value(i, p, Value::Integer(v), Polarity::Positive).map(|_| ())
            }
            _ => Ok(()),
        },
        10 => match (pick(rng, &object), pick(rng, &object)) {
            (Some(a), Some(b)) => o.set_super_property(a, b),
            _ => Ok(()),
        },
        _ => match pick(rng, &inds) {
            Some(i) => o.annotate(i, "note", &fresh),
            None => Ok(()),
        },
    };
}

/// Names an expression generator may draw from.
pub struct Vocab {
    pub classes: Vec<String>,
    pub object_props: Vec<String>,
    pub integer_props: Vec<String>,
    pub individuals: Vec<String>,
}

impl Vocab {
    pub fn of(o: &Ontology) -> Self {
        let (classes, object_props, integer_props, individuals) = ids(o);
        Vocab { classes, object_props, integer_props, individuals }
    }
}

fn shout(rng: &mut StdRng, name: &str) -> String {
    if rng.gen_bool(0.2) {
        name.to_ascii_uppercase()
    } else {
        name.to_string()
    }
}

/// A random well-typed expression over `v`.
pub fn random_expr(rng: &mut StdRng, v: &Vocab, depth: u32) -> ClassExpression {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..3) {
            0 => {
                let c = pick(rng, &v.classes).unwrap();
                ClassExpression::named(shout(rng, c))
            }
            1 if !v.integer_props.is_empty() => {
                let op = *[CompareOp::Eq, CompareOp::Ge, CompareOp::Le].choose(rng).unwrap();
                ClassExpression::compare(pick(rng, &v.integer_props).unwrap(), op, rng.gen_range(2000..2020))
            }
            _ => {
                let p = pick(rng, &v.object_props).unwrap();
                let p = shout(rng, p);
                ClassExpression::has_value(p, pick(rng, &v.individuals).unwrap())
            }
        };
    }
    match rng.gen_range(0..4) {
        0 => ClassExpression::And((0..rng.gen_range(2..4)).map(|_| random_expr(rng, v, depth - 1)).collect()),
        1 => ClassExpression::Or((0..rng.gen_range(2..4)).map(|_| random_expr(rng, v, depth - 1)).collect()),
        2 => ClassExpression::not(random_expr(rng, v, depth - 1)),
        _ => ClassExpression::some(pick(rng, &v.object_props).unwrap(), random_expr(rng, v, depth - 1)),
    }
}
