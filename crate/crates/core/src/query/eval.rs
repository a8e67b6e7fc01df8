use std::cmp::{Ordering, Reverse};
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ast::ClassExpression;
use super::QueryError;
use crate::ontology::{EntityKind, Individual, Ontology, PropertyKind};
use crate::vocab;

/// Ordered answer to one query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResult {
    /// Matching individual slugs: most recent `lastUpdate` first, then by
    /// label, then by slug.
    pub matches: Vec<String>,
    /// Canonical (lowercased) text of the evaluated expression.
    pub expression: String,
    /// Size of the universe that `not` complements against.
    pub universe_size: usize,
}

/// Closed-world evaluator over one ontology.
///
/// Sub-expressions denote sets of individuals. `not` complements within the
/// universe (the instances of `tool` when that class exists, otherwise every
/// individual), and the final answer is intersected with the universe.
pub struct Evaluator<'a> {
    ontology: &'a Ontology,
    universe: BTreeSet<String>,
}

impl<'a> Evaluator<'a> {
    pub fn new(ontology: &'a Ontology) -> Self {
        let universe = ontology
            .instances_of(vocab::TOOL)
            .unwrap_or_else(|_| ontology.individuals().map(|i| i.id.clone()).collect());
        Evaluator { ontology, universe }
    }

    /// Evaluator whose universe is the instances of `class`.
    pub fn with_universe(ontology: &'a Ontology, class: &str) -> Result<Self, QueryError> {
        let class = resolve_class(ontology, class)?;
        let universe = ontology.instances_of(&class).expect("resolved");
        Ok(Evaluator { ontology, universe })
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    pub fn evaluate(&self, expr: &ClassExpression) -> Result<QueryResult, QueryError> {
        let set = self.denote(expr)?;
        let mut matches: Vec<&Individual> = set
            .intersection(&self.universe)
            .filter_map(|id| self.ontology.individual(id))
            .collect();
        matches.sort_by(|a, b| result_order(a, b));
        Ok(QueryResult {
            matches: matches.into_iter().map(|i| i.id.clone()).collect(),
            expression: expr.canonical().to_string(),
            universe_size: self.universe.len(),
        })
    }

    /// The set of individuals an expression denotes, before restriction to
    /// the universe.
    pub fn denote(&self, expr: &ClassExpression) -> Result<BTreeSet<String>, QueryError> {
        let o = self.ontology;
        match expr {
            ClassExpression::Named(name) => {
                let class = resolve_class(o, name)?;
                Ok(o.instances_of(&class).expect("resolved"))
            }
            ClassExpression::And(ops) => {
                let mut iter = ops.iter();
                let mut acc = match iter.next() {
                    Some(first) => self.denote(first)?,
                    None => return Ok(self.universe.clone()),
                };
                for op in iter {
                    let next = self.denote(op)?;
                    acc.retain(|x| next.contains(x));
                }
                Ok(acc)
            }
            ClassExpression::Or(ops) => {
                let mut acc = BTreeSet::new();
                for op in ops {
                    acc.extend(self.denote(op)?);
                }
                Ok(acc)
            }
            ClassExpression::Not(inner) => {
                let inner = self.denote(inner)?;
                Ok(self.universe.difference(&inner).cloned().collect())
            }
            ClassExpression::HasValue { property, value } => {
                let props = self.object_property(property)?;
                let target = resolve_individual(o, value)?;
                Ok(o
                    .individuals()
                    .filter(|ind| {
                        props.iter().any(|p| {
                            ind.individual_values(p).any(|t| t == target)
                                && !is_negated(ind, &props, &target)
                        })
                    })
                    .map(|ind| ind.id.clone())
                    .collect())
            }
            ClassExpression::Some { property, filler } => {
                let props = self.object_property(property)?;
                let fillers = self.denote(filler)?;
                Ok(o
                    .individuals()
                    .filter(|ind| {
                        props.iter().any(|p| {
                            ind.individual_values(p)
                                .any(|t| fillers.contains(t) && !is_negated(ind, &props, t))
                        })
                    })
                    .map(|ind| ind.id.clone())
                    .collect())
            }
            ClassExpression::Compare { property, op, value } => {
                let props = self.property_of_kind(property, PropertyKind::Integer)?;
                Ok(o
                    .individuals()
                    .filter(|ind| {
                        props
                            .iter()
                            .any(|p| ind.integer_values(p).any(|v| op.test(v, *value)))
                    })
                    .map(|ind| ind.id.clone())
                    .collect())
            }
        }
    }

    fn object_property(&self, name: &str) -> Result<BTreeSet<String>, QueryError> {
        self.property_of_kind(name, PropertyKind::Object)
    }

    /// The resolved property and all of its sub-properties.
    fn property_of_kind(&self, name: &str, kind: PropertyKind) -> Result<BTreeSet<String>, QueryError> {
        let id = name.to_ascii_lowercase();
        let def = self.ontology.property(&id).ok_or_else(|| QueryError::UnknownName {
            kind: EntityKind::Property,
            name: name.to_string(),
        })?;
        if def.kind != kind {
            return Err(QueryError::TypeMismatch { property: def.id.clone(), expected: kind });
        }
        Ok(self.ontology.sub_properties(&id).expect("resolved"))
    }
}

fn is_negated(ind: &Individual, props: &BTreeSet<String>, target: &str) -> bool {
    ind.negative_assertions
        .iter()
        .any(|n| n.target == target && props.contains(&n.property))
}

fn resolve_class(o: &Ontology, name: &str) -> Result<String, QueryError> {
    let id = name.to_ascii_lowercase();
    if o.class(&id).is_some() {
        Ok(id)
    } else {
        Err(QueryError::UnknownName { kind: EntityKind::Class, name: name.to_string() })
    }
}

fn resolve_individual(o: &Ontology, name: &str) -> Result<String, QueryError> {
    let id = name.to_ascii_lowercase();
    if o.individual(&id).is_some() {
        Ok(id)
    } else {
        Err(QueryError::UnknownName { kind: EntityKind::Individual, name: name.to_string() })
    }
}

fn last_update(ind: &Individual) -> Option<i64> {
    ind.integer_values(vocab::LAST_UPDATE).max()
}

/// Result ordering shared by queries and tool listings.
pub fn result_order(a: &Individual, b: &Individual) -> Ordering {
    // `None` sorts after every year.
    let year = |i: &Individual| Reverse(last_update(i).map_or(i64::MIN, |y| y));
    year(a)
        .cmp(&year(b))
        .then_with(|| a.label.to_lowercase().cmp(&b.label.to_lowercase()))
        .then_with(|| a.id.cmp(&b.id))
}

/// Evaluates with the default tool universe.
pub fn evaluate(expr: &ClassExpression, ontology: &Ontology) -> Result<QueryResult, QueryError> {
    Evaluator::new(ontology).evaluate(expr)
}
