use std::collections::BTreeSet;

use super::{Aspect, CatalogError, Evaluation, License, Medium, Schema, ToolRecord};
use crate::ontology::{Individual, Ontology, OntologyError, Polarity, Value};
use crate::query::result_order;
use crate::slug::slugify;
use crate::vocab::*;

/// Reuses an existing individual (facet values share one namespace with
/// tools) or declares a new one, then asserts it into `class`.
fn ensure_facet(o: &mut Ontology, id: &str, label: &str, class: &str) -> Result<(), OntologyError> {
    if o.individual(id).is_none() {
        o.declare_individual(id, label)?;
    }
    o.assert_membership(id, class)?;
    Ok(())
}

fn link(o: &mut Ontology, tool: &str, property: &str, target: &str) -> Result<(), OntologyError> {
    o.assert_property_value(tool, property, Value::individual(target), Polarity::Positive)?;
    Ok(())
}

/// Compiles `records` on top of `schema`. Each tool becomes an individual of
/// its aspect class; facet values become individuals of their facet class.
/// The result must pass the consistency check.
pub fn build_ontology(records: &[ToolRecord], schema: &Schema) -> Result<Ontology, CatalogError> {
    let mut o = schema.to_ontology()?;

    for r in records {
        o.declare_individual(&r.slug, &r.name)?;
        o.assert_membership(&r.slug, r.aspect.slug())?;
        o.assert_property_value(&r.slug, LAST_UPDATE, Value::Integer(r.year), Polarity::Positive)?;
        o.annotate(&r.slug, URL, &r.url)?;
        o.annotate(&r.slug, CONCERN, &r.concern)?;
    }

    for r in records {
        for source in r.aspect.data_sources() {
            let label = source.replace('-', " ");
            ensure_facet(&mut o, source, &label, Aspect::data_source_class(source))?;
            link(&mut o, &r.slug, HAS_DATA_SOURCE, source)?;
        }
        for m in &r.media {
            ensure_facet(&mut o, m.slug(), m.as_str(), MEDIUM)?;
            link(&mut o, &r.slug, HAS_MEDIUM, m.slug())?;
        }
        for e in &r.evaluations {
            ensure_facet(&mut o, e.slug(), e.as_str(), EVALUATION)?;
            link(&mut o, &r.slug, EVALUATED_BY, e.slug())?;
        }
        if let Some(l) = r.license {
            ensure_facet(&mut o, l.slug(), l.as_str(), LICENSE)?;
            link(&mut o, &r.slug, HAS_LICENSE, l.slug())?;
        }
        for (values, class, property) in [
            (&r.environments, ENVIRONMENT, RUNS_IN),
            (&r.techniques, TECHNIQUE, USES_TECHNIQUE),
        ] {
            for v in values {
                let id = slugify(v);
                ensure_facet(&mut o, &id, v, class)?;
                link(&mut o, &r.slug, property, &id)?;
            }
        }
    }

    // Keywords last, so a term that is also an environment or technique keeps
    // that label.
    for r in records {
        for k in &r.concern_keywords {
            ensure_facet(&mut o, k, k, CONCERN_KEYWORD)?;
            link(&mut o, &r.slug, ADDRESSES_CONCERN_KEYWORD, k)?;
        }
    }

    let report = o.check_consistency();
    if !report.is_consistent() {
        return Err(CatalogError::Inconsistent(report));
    }
    Ok(o)
}

fn labels(o: &Ontology, ind: &Individual, property: &str) -> BTreeSet<String> {
    ind.individual_values(property)
        .filter_map(|t| o.individual(t))
        .map(|t| t.label.clone())
        .collect()
}

fn enum_values<T: Ord>(ind: &Individual, property: &str, from_slug: fn(&str) -> Option<T>) -> BTreeSet<T> {
    ind.individual_values(property).filter_map(from_slug).collect()
}

/// Reconstructs one record per tool individual, in result order. Tools
/// without exactly one aspect class or without a `lastUpdate` are skipped.
pub fn export_records(o: &Ontology) -> Vec<ToolRecord> {
    let Ok(tools) = o.instances_of(TOOL) else {
        return Vec::new();
    };
    let mut inds: Vec<&Individual> = tools.iter().filter_map(|t| o.individual(t)).collect();
    inds.sort_by(|a, b| result_order(a, b));
    inds.into_iter()
        .filter_map(|ind| {
            let aspects: Vec<Aspect> =
                ind.asserted_classes.iter().filter_map(|c| Aspect::from_slug(c)).collect();
            let [aspect] = aspects[..] else { return None };
            let year = ind.integer_values(LAST_UPDATE).max()?;
            Some(ToolRecord {
                slug: ind.id.clone(),
                name: ind.label.clone(),
                aspect,
                year,
                concern: ind.annotation(CONCERN).unwrap_or_default().to_string(),
                concern_keywords: ind
                    .individual_values(ADDRESSES_CONCERN_KEYWORD)
                    .map(str::to_string)
                    .collect(),
                environments: labels(o, ind, RUNS_IN),
                techniques: labels(o, ind, USES_TECHNIQUE),
                media: enum_values(ind, HAS_MEDIUM, Medium::from_slug),
                evaluations: enum_values(ind, EVALUATED_BY, Evaluation::from_slug),
                url: ind.annotation(URL).unwrap_or_default().to_string(),
                license: enum_values(ind, HAS_LICENSE, License::from_slug).into_iter().next(),
            })
        })
        .collect()
}
