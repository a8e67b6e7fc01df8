//! In-memory ontology: class hierarchy, properties, individuals and their
//! assertions.
//!
//! Every mutation validates its references and rejects changes that would
//! break the structural invariants (unique ids, acyclic class and property
//! hierarchies, symmetric disjointness). An ontology deserialized from a
//! snapshot is *not* re-validated; run [`Ontology::check_consistency`] on it.
//!
//! The universal root class [`ROOT`] always exists and is an ancestor of every
//! other class. Top-level classes store an empty parent set.

mod consistency;
mod metrics;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::slug::is_valid_slug;

pub use consistency::{ConsistencyReport, Violation, ViolationKind};
pub use metrics::MetricsReport;

/// Id of the implicit universal root class.
pub const ROOT: &str = "thing";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyKind {
    Object,
    Integer,
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyKind::Object => "object",
            PropertyKind::Integer => "integer",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Class,
    Property,
    Individual,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Class => "class",
            EntityKind::Property => "property",
            EntityKind::Individual => "individual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("invalid identifier `{0}`: expected lowercase ASCII letters, digits and hyphens")]
    InvalidId(String),
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: EntityKind, id: String },
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: EntityKind, id: String },
    #[error("making `{parent}` a parent of `{child}` would create a cycle")]
    WouldCreateCycle { child: String, parent: String },
    #[error("class `{0}` cannot be disjoint with itself")]
    SelfDisjoint(String),
    #[error("super-property `{super_property}` of `{property}` would create a cycle")]
    PropertyCycle { property: String, super_property: String },
    #[error("property `{property}` is {expected}-valued")]
    KindMismatch { property: String, expected: PropertyKind },
    #[error("negative assertions require an object-valued property, `{0}` is integer-valued")]
    NegativeOnInteger(String),
}

pub type Result<T, E = OntologyError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDef {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub parents: BTreeSet<String>,
    #[serde(default)]
    pub disjoint_with: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyDef {
    pub id: String,
    pub label: String,
    pub kind: PropertyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub super_property: Option<String>,
}

/// Target of a property assertion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Individual(String),
    Integer(i64),
}

impl Value {
    pub fn individual(id: impl Into<String>) -> Self {
        Value::Individual(id.into())
    }

    pub fn as_individual(&self) -> Option<&str> {
        match self {
            Value::Individual(id) => Some(id),
            Value::Integer(_) => None,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Value::Integer(n) => Some(*n),
            Value::Individual(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Individual(id) => f.write_str(id),
            Value::Integer(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PropertyAssertion {
    pub property: String,
    pub target: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NegativeAssertion {
    pub property: String,
    pub target: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Individual {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub asserted_classes: BTreeSet<String>,
    #[serde(default)]
    pub property_assertions: BTreeSet<PropertyAssertion>,
    #[serde(default)]
    pub negative_assertions: BTreeSet<NegativeAssertion>,
    /// Non-logical metadata such as a tool's URL or concern text.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub annotations: BTreeMap<String, String>,
}

impl Individual {
    /// Positive targets asserted for `property` (no sub-property expansion).
    pub fn values<'a>(&'a self, property: &'a str) -> impl Iterator<Item = &'a Value> + 'a {
        self.property_assertions
            .iter()
            .filter(move |a| a.property == property)
            .map(|a| &a.target)
    }

    pub fn integer_values<'a>(&'a self, property: &'a str) -> impl Iterator<Item = i64> + 'a {
        self.values(property).filter_map(Value::as_integer)
    }

    pub fn individual_values<'a>(&'a self, property: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.values(property).filter_map(Value::as_individual)
    }

    pub fn annotation(&self, key: &str) -> Option<&str> {
        self.annotations.get(key).map(String::as_str)
    }
}

/// Serialized form; keeps snapshot JSON as plain lists.
#[derive(Serialize, Deserialize)]
struct OntologyDocument {
    classes: Vec<ClassDef>,
    properties: Vec<PropertyDef>,
    individuals: Vec<Individual>,
    disjoint_groups: Vec<BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "OntologyDocument", try_from = "OntologyDocument")]
pub struct Ontology {
    classes: BTreeMap<String, ClassDef>,
    properties: BTreeMap<String, PropertyDef>,
    individuals: BTreeMap<String, Individual>,
    disjoint_groups: BTreeSet<BTreeSet<String>>,
}

impl From<Ontology> for OntologyDocument {
    fn from(o: Ontology) -> Self {
        OntologyDocument {
            classes: o.classes.into_values().collect(),
            properties: o.properties.into_values().collect(),
            individuals: o.individuals.into_values().collect(),
            disjoint_groups: o.disjoint_groups.into_iter().collect(),
        }
    }
}

impl TryFrom<OntologyDocument> for Ontology {
    type Error = OntologyError;

    fn try_from(doc: OntologyDocument) -> Result<Self> {
        let mut o = Ontology {
            classes: BTreeMap::new(),
            properties: BTreeMap::new(),
            individuals: BTreeMap::new(),
            disjoint_groups: doc.disjoint_groups.into_iter().collect(),
        };
        for c in doc.classes {
            if o.classes.contains_key(&c.id) {
                return Err(OntologyError::DuplicateId { kind: EntityKind::Class, id: c.id });
            }
            o.classes.insert(c.id.clone(), c);
        }
        o.classes.entry(ROOT.to_string()).or_insert_with(root_class);
        for p in doc.properties {
            if o.properties.contains_key(&p.id) {
                return Err(OntologyError::DuplicateId { kind: EntityKind::Property, id: p.id });
            }
            o.properties.insert(p.id.clone(), p);
        }
        for i in doc.individuals {
            if o.individuals.contains_key(&i.id) {
                return Err(OntologyError::DuplicateId { kind: EntityKind::Individual, id: i.id });
            }
            o.individuals.insert(i.id.clone(), i);
        }
        Ok(o)
    }
}

fn root_class() -> ClassDef {
    ClassDef {
        id: ROOT.to_string(),
        label: "Thing".to_string(),
        parents: BTreeSet::new(),
        disjoint_with: BTreeSet::new(),
    }
}

impl Default for Ontology {
    fn default() -> Self {
        Self::new()
    }
}

impl Ontology {
    /// An ontology holding only the root class.
    pub fn new() -> Self {
        let mut classes = BTreeMap::new();
        classes.insert(ROOT.to_string(), root_class());
        Ontology {
            classes,
            properties: BTreeMap::new(),
            individuals: BTreeMap::new(),
            disjoint_groups: BTreeSet::new(),
        }
    }

    // ---- lookups ---------------------------------------------------------

    pub fn class(&self, id: &str) -> Option<&ClassDef> {
        self.classes.get(id)
    }

    pub fn property(&self, id: &str) -> Option<&PropertyDef> {
        self.properties.get(id)
    }

    pub fn individual(&self, id: &str) -> Option<&Individual> {
        self.individuals.get(id)
    }

    /// All classes including the root, ordered by id.
    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDef> {
        self.properties.values()
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Individual> {
        self.individuals.values()
    }

    pub fn disjoint_groups(&self) -> impl Iterator<Item = &BTreeSet<String>> {
        self.disjoint_groups.iter()
    }

    fn require_class(&self, id: &str) -> Result<&ClassDef> {
        self.classes.get(id).ok_or_else(|| unknown(EntityKind::Class, id))
    }

    fn require_property(&self, id: &str) -> Result<&PropertyDef> {
        self.properties.get(id).ok_or_else(|| unknown(EntityKind::Property, id))
    }

    fn require_individual(&self, id: &str) -> Result<&Individual> {
        self.individuals.get(id).ok_or_else(|| unknown(EntityKind::Individual, id))
    }

    // ---- class hierarchy -------------------------------------------------

    /// Declares a class. An empty parent set, or one naming only the root,
    /// makes it a top-level class.
    pub fn declare_class<'a, I>(&mut self, id: &str, label: &str, parents: I) -> Result<&ClassDef>
    where
        I: IntoIterator<Item = &'a str>,
    {
        check_slug(id)?;
        if self.classes.contains_key(id) {
            return Err(OntologyError::DuplicateId { kind: EntityKind::Class, id: id.to_string() });
        }
        let mut parent_set = BTreeSet::new();
        for p in parents {
            self.require_class(p)?;
            if p != ROOT {
                parent_set.insert(p.to_string());
            }
        }
        let def = ClassDef {
            id: id.to_string(),
            label: label.to_string(),
            parents: parent_set,
            disjoint_with: BTreeSet::new(),
        };
        Ok(self.classes.entry(id.to_string()).or_insert(def))
    }

    /// Adds a subclass edge `child ⊑ parent`, rejecting edges that would
    /// close a cycle. Returns `false` when the edge already existed.
    pub fn add_parent(&mut self, child: &str, parent: &str) -> Result<bool> {
        self.require_class(child)?;
        self.require_class(parent)?;
        let cycle = || OntologyError::WouldCreateCycle {
            child: child.to_string(),
            parent: parent.to_string(),
        };
        if child == ROOT || child == parent {
            return Err(cycle());
        }
        if parent == ROOT {
            return Ok(false);
        }
        if self.ancestors(parent)?.contains(child) {
            return Err(cycle());
        }
        let def = self.classes.get_mut(child).expect("checked above");
        Ok(def.parents.insert(parent.to_string()))
    }

    /// Strict ancestors of `class`: the transitive closure of its parent
    /// links, always containing the root for non-root classes.
    pub fn ancestors(&self, class: &str) -> Result<BTreeSet<String>> {
        self.require_class(class)?;
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<&str> = VecDeque::from([class]);
        while let Some(c) = queue.pop_front() {
            let Some(def) = self.classes.get(c) else { continue };
            for p in &def.parents {
                if seen.insert(p.clone()) {
                    queue.push_back(p);
                }
            }
        }
        if class != ROOT {
            seen.insert(ROOT.to_string());
        }
        seen.remove(class);
        Ok(seen)
    }

    /// Strict descendants of `class`.
    pub fn descendants(&self, class: &str) -> Result<BTreeSet<String>> {
        self.require_class(class)?;
        if class == ROOT {
            return Ok(self.classes.keys().filter(|k| *k != ROOT).cloned().collect());
        }
        let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for def in self.classes.values() {
            for p in &def.parents {
                children.entry(p.as_str()).or_default().push(def.id.as_str());
            }
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([class]);
        while let Some(c) = queue.pop_front() {
            for &child in children.get(c).into_iter().flatten() {
                if seen.insert(child.to_string()) {
                    queue.push_back(child);
                }
            }
        }
        seen.remove(class);
        Ok(seen)
    }

    /// Direct subclasses; top-level classes are the children of the root.
    pub fn children(&self, class: &str) -> Result<BTreeSet<String>> {
        self.require_class(class)?;
        Ok(self
            .classes
            .values()
            .filter(|d| d.id != ROOT)
            .filter(|d| {
                if class == ROOT {
                    d.parents.is_empty()
                } else {
                    d.parents.contains(class)
                }
            })
            .map(|d| d.id.clone())
            .collect())
    }

    /// Asserted classes of an individual together with all their ancestors.
    pub fn types_of(&self, individual: &str) -> Result<BTreeSet<String>> {
        let ind = self.require_individual(individual)?;
        let mut out = BTreeSet::new();
        out.insert(ROOT.to_string());
        for c in &ind.asserted_classes {
            if self.classes.contains_key(c) {
                out.extend(self.ancestors(c)?);
                out.insert(c.clone());
            }
        }
        Ok(out)
    }

    /// Individuals asserted into `class` or any of its descendants.
    pub fn instances_of(&self, class: &str) -> Result<BTreeSet<String>> {
        if class == ROOT {
            self.require_class(class)?;
            return Ok(self.individuals.keys().cloned().collect());
        }
        let mut targets = self.descendants(class)?;
        targets.insert(class.to_string());
        Ok(self
            .individuals
            .values()
            .filter(|i| i.asserted_classes.iter().any(|c| targets.contains(c)))
            .map(|i| i.id.clone())
            .collect())
    }

    // ---- disjointness ----------------------------------------------------

    pub fn assert_disjoint(&mut self, a: &str, b: &str) -> Result<bool> {
        self.assert_disjoint_group([a, b])
    }

    /// Records one DisjointClasses axiom over `members`, expanded pairwise.
    /// Returns `false` when the identical group was already declared.
    pub fn assert_disjoint_group<'a, I>(&mut self, members: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let members: Vec<&str> = members.into_iter().collect();
        let mut group = BTreeSet::new();
        for m in &members {
            self.require_class(m)?;
            if !group.insert(m.to_string()) {
                return Err(OntologyError::SelfDisjoint(m.to_string()));
            }
        }
        if group.len() < 2 {
            let only = members.first().copied().unwrap_or_default();
            return Err(OntologyError::SelfDisjoint(only.to_string()));
        }
        for a in &group {
            for b in &group {
                if a != b {
                    self.classes.get_mut(a).expect("checked").disjoint_with.insert(b.clone());
                }
            }
        }
        Ok(self.disjoint_groups.insert(group))
    }

    /// `true` when `a` and `b` are declared disjoint (pairwise or by group).
    pub fn are_disjoint(&self, a: &str, b: &str) -> bool {
        self.classes.get(a).is_some_and(|d| d.disjoint_with.contains(b))
            || self.classes.get(b).is_some_and(|d| d.disjoint_with.contains(a))
            || self
                .disjoint_groups
                .iter()
                .any(|g| a != b && g.contains(a) && g.contains(b))
    }

    // ---- properties ------------------------------------------------------

    pub fn declare_property(
        &mut self,
        id: &str,
        label: &str,
        kind: PropertyKind,
        domain: Option<&str>,
        range: Option<&str>,
        super_property: Option<&str>,
    ) -> Result<&PropertyDef> {
        check_slug(id)?;
        if self.properties.contains_key(id) {
            return Err(OntologyError::DuplicateId { kind: EntityKind::Property, id: id.to_string() });
        }
        if let Some(sup) = super_property {
            if sup == id {
                return Err(OntologyError::PropertyCycle {
                    property: id.to_string(),
                    super_property: sup.to_string(),
                });
            }
            let sup_def = self.require_property(sup)?;
            if sup_def.kind != kind {
                return Err(OntologyError::KindMismatch { property: sup.to_string(), expected: kind });
            }
        }
        if let Some(d) = domain {
            self.require_class(d)?;
        }
        if let Some(r) = range {
            if kind == PropertyKind::Integer {
                return Err(OntologyError::KindMismatch {
                    property: id.to_string(),
                    expected: PropertyKind::Object,
                });
            }
            self.require_class(r)?;
        }
        let def = PropertyDef {
            id: id.to_string(),
            label: label.to_string(),
            kind,
            domain: domain.map(str::to_string),
            range: range.map(str::to_string),
            super_property: super_property.map(str::to_string),
        };
        Ok(self.properties.entry(id.to_string()).or_insert(def))
    }

    /// Sets or replaces the super-property of an existing property.
    pub fn set_super_property(&mut self, property: &str, super_property: &str) -> Result<()> {
        let kind = self.require_property(property)?.kind;
        let sup_kind = self.require_property(super_property)?.kind;
        if kind != sup_kind {
            return Err(OntologyError::KindMismatch {
                property: super_property.to_string(),
                expected: kind,
            });
        }
        let cycle = self
            .super_chain(super_property)
            .iter()
            .any(|p| p == property);
        if cycle {
            return Err(OntologyError::PropertyCycle {
                property: property.to_string(),
                super_property: super_property.to_string(),
            });
        }
        self.properties.get_mut(property).expect("checked").super_property =
            Some(super_property.to_string());
        Ok(())
    }

    /// `property` followed by its super-properties; stops on a repeat.
    fn super_chain(&self, property: &str) -> Vec<String> {
        let mut chain = vec![property.to_string()];
        let mut cur = self.properties.get(property).and_then(|p| p.super_property.clone());
        while let Some(p) = cur {
            if chain.contains(&p) {
                break;
            }
            cur = self.properties.get(&p).and_then(|d| d.super_property.clone());
            chain.push(p);
        }
        chain
    }

    /// `property` and every property whose super-property chain reaches it.
    pub fn sub_properties(&self, property: &str) -> Result<BTreeSet<String>> {
        self.require_property(property)?;
        Ok(self
            .properties
            .keys()
            .filter(|p| self.super_chain(p).iter().any(|s| s == property))
            .cloned()
            .collect())
    }

    // ---- individuals -----------------------------------------------------

    pub fn declare_individual(&mut self, id: &str, label: &str) -> Result<&Individual> {
        check_slug(id)?;
        if self.individuals.contains_key(id) {
            return Err(OntologyError::DuplicateId {
                kind: EntityKind::Individual,
                id: id.to_string(),
            });
        }
        let ind = Individual {
            id: id.to_string(),
            label: label.to_string(),
            asserted_classes: BTreeSet::new(),
            property_assertions: BTreeSet::new(),
            negative_assertions: BTreeSet::new(),
            annotations: BTreeMap::new(),
        };
        Ok(self.individuals.entry(id.to_string()).or_insert(ind))
    }

    /// Returns `false` when the assertion already existed.
    pub fn assert_membership(&mut self, individual: &str, class: &str) -> Result<bool> {
        self.require_class(class)?;
        self.require_individual(individual)?;
        let ind = self.individuals.get_mut(individual).expect("checked");
        Ok(ind.asserted_classes.insert(class.to_string()))
    }

    /// Stores a positive or negative property assertion. A contradiction
    /// with an existing assertion of opposite polarity is stored as well and
    /// surfaces in [`Ontology::check_consistency`].
    pub fn assert_property_value(
        &mut self,
        individual: &str,
        property: &str,
        target: Value,
        polarity: Polarity,
    ) -> Result<bool> {
        self.require_individual(individual)?;
        let kind = self.require_property(property)?.kind;
        match (&target, kind) {
            (Value::Individual(t), PropertyKind::Object) => {
                self.require_individual(t)?;
            }
            (Value::Integer(_), PropertyKind::Integer) => {
                if polarity == Polarity::Negative {
                    return Err(OntologyError::NegativeOnInteger(property.to_string()));
                }
            }
            (_, expected) => {
                return Err(OntologyError::KindMismatch { property: property.to_string(), expected })
            }
        }
        let ind = self.individuals.get_mut(individual).expect("checked");
        let inserted = match polarity {
            Polarity::Positive => ind.property_assertions.insert(PropertyAssertion {
                property: property.to_string(),
                target,
            }),
            Polarity::Negative => {
                let Value::Individual(t) = target else { unreachable!("checked above") };
                ind.negative_assertions.insert(NegativeAssertion { property: property.to_string(), target: t })
            }
        };
        Ok(inserted)
    }

    /// Attaches a non-logical annotation (overwrites an existing key).
    pub fn annotate(&mut self, individual: &str, key: &str, value: &str) -> Result<()> {
        self.require_individual(individual)?;
        let ind = self.individuals.get_mut(individual).expect("checked");
        ind.annotations.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn check_consistency(&self) -> ConsistencyReport {
        consistency::check(self)
    }

    pub fn compute_metrics(&self) -> MetricsReport {
        metrics::compute(self)
    }
}

fn unknown(kind: EntityKind, id: &str) -> OntologyError {
    OntologyError::Unknown { kind, id: id.to_string() }
}

fn check_slug(id: &str) -> Result<()> {
    if is_valid_slug(id) {
        Ok(())
    } else {
        Err(OntologyError::InvalidId(id.to_string()))
    }
}
