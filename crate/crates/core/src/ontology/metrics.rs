use serde::{Deserialize, Serialize};

use super::{Ontology, PropertyKind, Value, ROOT};

/// Axiom and entity counts in the shape of an ontology editor's metrics view.
///
/// Declarations count one axiom per class (excluding the root), property and
/// individual. Integer-valued assertions and domains are data-property axioms
/// and are not part of any object-property line item.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub axiom_count: usize,
    pub logical_axiom_count: usize,
    pub declaration_axiom_count: usize,
    pub class_count: usize,
    pub property_count: usize,
    pub individual_count: usize,
    pub subclassof_count: usize,
    pub disjointclasses_count: usize,
    pub subobjectpropertyof_count: usize,
    pub objectpropertydomain_count: usize,
    pub objectpropertyrange_count: usize,
    pub classassertion_count: usize,
    pub objectpropertyassertion_count: usize,
    pub negativeobjectpropertyassertion_count: usize,
}

impl MetricsReport {
    /// Sum of the per-category logical axiom counters.
    pub fn logical_sum(&self) -> usize {
        self.subclassof_count
            + self.disjointclasses_count
            + self.subobjectpropertyof_count
            + self.objectpropertydomain_count
            + self.objectpropertyrange_count
            + self.classassertion_count
            + self.objectpropertyassertion_count
            + self.negativeobjectpropertyassertion_count
    }

    /// Checks the three additive identities between the counters.
    pub fn is_additive(&self) -> bool {
        self.axiom_count == self.logical_axiom_count + self.declaration_axiom_count
            && self.logical_axiom_count == self.logical_sum()
            && self.declaration_axiom_count
                == self.class_count + self.property_count + self.individual_count
    }
}

pub(super) fn compute(o: &Ontology) -> MetricsReport {
    let classes = o.classes.values().filter(|c| c.id != ROOT);
    let object_props = || o.properties.values().filter(|p| p.kind == PropertyKind::Object);

    let mut m = MetricsReport {
        class_count: classes.clone().count(),
        property_count: o.properties.len(),
        individual_count: o.individuals.len(),
        subclassof_count: classes
            .map(|c| c.parents.iter().filter(|p| *p != ROOT).count())
            .sum(),
        disjointclasses_count: o.disjoint_groups.len(),
        subobjectpropertyof_count: object_props().filter(|p| p.super_property.is_some()).count(),
        objectpropertydomain_count: object_props().filter(|p| p.domain.is_some()).count(),
        objectpropertyrange_count: object_props().filter(|p| p.range.is_some()).count(),
        ..MetricsReport::default()
    };
    for ind in o.individuals.values() {
        m.classassertion_count += ind.asserted_classes.len();
        m.objectpropertyassertion_count += ind
            .property_assertions
            .iter()
            .filter(|a| matches!(a.target, Value::Individual(_)))
            .count();
        m.negativeobjectpropertyassertion_count += ind.negative_assertions.len();
    }
    m.declaration_axiom_count = m.class_count + m.property_count + m.individual_count;
    m.logical_axiom_count = m.logical_sum();
    m.axiom_count = m.logical_axiom_count + m.declaration_axiom_count;
    m
}
