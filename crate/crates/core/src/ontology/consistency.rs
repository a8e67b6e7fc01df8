use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EntityKind, Ontology, PropertyKind, Value, ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    HierarchyCycle,
    DisjointnessConflict,
    AssertionContradiction,
    DomainViolation,
    RangeViolation,
    DanglingReference,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::HierarchyCycle => "hierarchy-cycle",
            ViolationKind::DisjointnessConflict => "disjointness-conflict",
            ViolationKind::AssertionContradiction => "assertion-contradiction",
            ViolationKind::DomainViolation => "domain-violation",
            ViolationKind::RangeViolation => "range-violation",
            ViolationKind::DanglingReference => "dangling-reference",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subjects: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub violations: Vec<Violation>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

struct Collector(BTreeSet<Violation>);

impl Collector {
    fn push(&mut self, kind: ViolationKind, subjects: Vec<String>, message: String) {
        self.0.insert(Violation { kind, subjects, message });
    }

    fn dangling(&mut self, owner: &str, kind: EntityKind, target: &str, role: &str) {
        self.push(
            ViolationKind::DanglingReference,
            vec![owner.to_string(), target.to_string()],
            format!("`{owner}` references unknown {kind} `{target}` as {role}"),
        );
    }
}

pub(super) fn check(o: &Ontology) -> ConsistencyReport {
    let mut out = Collector(BTreeSet::new());
    dangling_references(o, &mut out);
    hierarchy_cycles(o, &mut out);
    disjointness(o, &mut out);
    assertions(o, &mut out);
    ConsistencyReport { violations: out.0.into_iter().collect() }
}

fn dangling_references(o: &Ontology, out: &mut Collector) {
    for c in o.classes.values() {
        for p in &c.parents {
            if !o.classes.contains_key(p) {
                out.dangling(&c.id, EntityKind::Class, p, "parent");
            }
        }
        for d in &c.disjoint_with {
            if !o.classes.contains_key(d) {
                out.dangling(&c.id, EntityKind::Class, d, "disjoint class");
            }
        }
    }
    for g in &o.disjoint_groups {
        for m in g {
            if !o.classes.contains_key(m) {
                out.dangling("disjoint-group", EntityKind::Class, m, "group member");
            }
        }
    }
    for p in o.properties.values() {
        for (role, target) in [("domain", &p.domain), ("range", &p.range)] {
            if let Some(t) = target {
                if !o.classes.contains_key(t) {
                    out.dangling(&p.id, EntityKind::Class, t, role);
                }
            }
        }
        if let Some(s) = &p.super_property {
            if !o.properties.contains_key(s) {
                out.dangling(&p.id, EntityKind::Property, s, "super-property");
            }
        }
    }
    for ind in o.individuals.values() {
        for c in &ind.asserted_classes {
            if !o.classes.contains_key(c) {
                out.dangling(&ind.id, EntityKind::Class, c, "asserted class");
            }
        }
        for a in &ind.property_assertions {
            if !o.properties.contains_key(&a.property) {
                out.dangling(&ind.id, EntityKind::Property, &a.property, "asserted property");
            }
            if let Value::Individual(t) = &a.target {
                if !o.individuals.contains_key(t) {
                    out.dangling(&ind.id, EntityKind::Individual, t, "assertion target");
                }
            }
        }
        for n in &ind.negative_assertions {
            if !o.properties.contains_key(&n.property) {
                out.dangling(&ind.id, EntityKind::Property, &n.property, "negated property");
            }
            if !o.individuals.contains_key(&n.target) {
                out.dangling(&ind.id, EntityKind::Individual, &n.target, "negated target");
            }
        }
    }
}

/// Strongly connected components with more than one node, plus self loops.
fn cycles<'a>(edges: &BTreeMap<&'a str, Vec<&'a str>>) -> BTreeSet<BTreeSet<&'a str>> {
    let reach = |start: &'a str| {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&str> = edges.get(start).cloned().unwrap_or_default();
        while let Some(n) = stack.pop() {
            if seen.insert(n) {
                stack.extend(edges.get(n).into_iter().flatten().copied());
            }
        }
        seen
    };
    let reachable: BTreeMap<&str, BTreeSet<&str>> = edges.keys().map(|&n| (n, reach(n))).collect();
    let mut found = BTreeSet::new();
    for (&n, r) in &reachable {
        if !r.contains(n) {
            continue;
        }
        let component: BTreeSet<&str> = r
            .iter()
            .copied()
            .filter(|m| reachable.get(m).is_some_and(|rm| rm.contains(n)))
            .collect();
        found.insert(component);
    }
    found
}

fn hierarchy_cycles(o: &Ontology, out: &mut Collector) {
    let class_edges: BTreeMap<&str, Vec<&str>> = o
        .classes
        .values()
        .map(|c| (c.id.as_str(), c.parents.iter().map(String::as_str).collect()))
        .collect();
    for comp in cycles(&class_edges) {
        let ids: Vec<String> = comp.iter().map(|s| s.to_string()).collect();
        let message = format!("subclass cycle through {}", ids.join(" -> "));
        out.push(ViolationKind::HierarchyCycle, ids, message);
    }
    let prop_edges: BTreeMap<&str, Vec<&str>> = o
        .properties
        .values()
        .map(|p| (p.id.as_str(), p.super_property.iter().map(String::as_str).collect()))
        .collect();
    for comp in cycles(&prop_edges) {
        let ids: Vec<String> = comp.iter().map(|s| s.to_string()).collect();
        let message = format!("super-property cycle through {}", ids.join(" -> "));
        out.push(ViolationKind::HierarchyCycle, ids, message);
    }
}

fn disjointness(o: &Ontology, out: &mut Collector) {
    for c in o.classes.values() {
        for d in &c.disjoint_with {
            if d == &c.id {
                out.push(
                    ViolationKind::DisjointnessConflict,
                    vec![c.id.clone()],
                    format!("class `{}` is declared disjoint with itself", c.id),
                );
            } else if o.classes.get(d).is_some_and(|other| !other.disjoint_with.contains(&c.id)) {
                let mut pair = vec![c.id.clone(), d.clone()];
                pair.sort();
                let message = format!("disjointness between `{}` and `{}` is not symmetric", pair[0], pair[1]);
                out.push(ViolationKind::DisjointnessConflict, pair, message);
            }
        }
    }
    for ind in o.individuals.values() {
        let Ok(types) = o.types_of(&ind.id) else { continue };
        let types: Vec<&String> = types.iter().filter(|t| *t != ROOT).collect();
        for (i, a) in types.iter().enumerate() {
            for b in &types[i + 1..] {
                if o.are_disjoint(a, b) {
                    out.push(
                        ViolationKind::DisjointnessConflict,
                        vec![ind.id.clone(), a.to_string(), b.to_string()],
                        format!("`{}` is a member of disjoint classes `{a}` and `{b}`", ind.id),
                    );
                }
            }
        }
    }
}

fn assertions(o: &Ontology, out: &mut Collector) {
    for ind in o.individuals.values() {
        for n in &ind.negative_assertions {
            let positive = ind
                .property_assertions
                .iter()
                .any(|a| a.property == n.property && a.target.as_individual() == Some(n.target.as_str()));
            if positive {
                out.push(
                    ViolationKind::AssertionContradiction,
                    vec![ind.id.clone(), n.property.clone(), n.target.clone()],
                    format!(
                        "`{} {} {}` is asserted both positively and negatively",
                        ind.id, n.property, n.target
                    ),
                );
            }
        }

        let types = o.types_of(&ind.id).unwrap_or_default();
        let mut domain_checked = BTreeSet::new();
        for a in &ind.property_assertions {
            let Some(prop) = o.properties.get(&a.property) else { continue };
            if let Some(domain) = &prop.domain {
                if o.classes.contains_key(domain)
                    && !types.contains(domain)
                    && domain_checked.insert(prop.id.as_str())
                {
                    out.push(
                        ViolationKind::DomainViolation,
                        vec![ind.id.clone(), prop.id.clone()],
                        format!("`{}` uses `{}` but is not a member of its domain `{domain}`", ind.id, prop.id),
                    );
                }
            }
            match (&a.target, prop.kind) {
                (Value::Individual(t), PropertyKind::Object) => {
                    let Some(range) = &prop.range else { continue };
                    if !o.classes.contains_key(range) || !o.individuals.contains_key(t) {
                        continue;
                    }
                    if !o.types_of(t).unwrap_or_default().contains(range) {
                        out.push(
                            ViolationKind::RangeViolation,
                            vec![ind.id.clone(), prop.id.clone(), t.clone()],
                            format!("target `{t}` of `{}` is not a member of range `{range}`", prop.id),
                        );
                    }
                }
                (Value::Integer(_), PropertyKind::Integer) => {}
                (target, kind) => out.push(
                    ViolationKind::RangeViolation,
                    vec![ind.id.clone(), prop.id.clone(), target.to_string()],
                    format!("{kind}-valued property `{}` has target `{target}` of the wrong kind", prop.id),
                ),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Polarity, Value};

    fn base() -> Ontology {
        let mut o = Ontology::new();
        o.declare_class("tool", "Tool", []).unwrap();
        o.declare_class("medium", "Medium", []).unwrap();
        o.declare_class("behavior-tool", "Behavior tool", ["tool"]).unwrap();
        o.declare_class("structure-tool", "Structure tool", ["tool"]).unwrap();
        o.assert_disjoint("behavior-tool", "structure-tool").unwrap();
        o.declare_property("hasmedium", "hasMedium", PropertyKind::Object, Some("tool"), Some("medium"), None)
            .unwrap();
        o.declare_individual("gzoltar", "Gzoltar").unwrap();
        o.declare_individual("scs", "SCS").unwrap();
        o.assert_membership("gzoltar", "behavior-tool").unwrap();
        o.assert_membership("scs", "medium").unwrap();
        o.assert_property_value("gzoltar", "hasmedium", Value::individual("scs"), Polarity::Positive)
            .unwrap();
        o
    }

    #[test]
    fn clean_ontology_is_consistent() {
        assert!(base().check_consistency().is_consistent());
    }

    #[test]
    fn dual_membership_in_disjoint_classes() {
        let mut o = base();
        o.assert_membership("gzoltar", "structure-tool").unwrap();
        let r = o.check_consistency();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::DisjointnessConflict);
        assert_eq!(r.violations[0].subjects, ["gzoltar", "behavior-tool", "structure-tool"]);
    }

    #[test]
    fn brute_force_pairwise_scan_agrees() {
        let mut o = base();
        o.declare_class("combined", "Combined", ["tool"]).unwrap();
        o.assert_disjoint_group(["behavior-tool", "structure-tool", "combined"]).unwrap();
        o.declare_individual("x", "x").unwrap();
        for c in ["behavior-tool", "structure-tool", "combined"] {
            o.assert_membership("x", c).unwrap();
        }
        // Every unordered pair of x's asserted classes is disjoint.
        let ind = o.individual("x").unwrap();
        let asserted: Vec<_> = ind.asserted_classes.iter().collect();
        let mut expected = 0;
        for i in 0..asserted.len() {
            for j in i + 1..asserted.len() {
                if o.are_disjoint(asserted[i], asserted[j]) {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 3);
        assert_eq!(o.check_consistency().count(ViolationKind::DisjointnessConflict), expected);
    }

    #[test]
    fn contradiction_reported_once() {
        let mut o = base();
        o.assert_property_value("gzoltar", "hasmedium", Value::individual("scs"), Polarity::Negative)
            .unwrap();
        let r = o.check_consistency();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::AssertionContradiction);
    }

    #[test]
    fn cycle_injected_at_load_is_named() {
        let o = base();
        let mut doc = serde_json::to_value(&o).unwrap();
        for c in doc["classes"].as_array_mut().unwrap() {
            if c["id"] == "tool" {
                c["parents"] = serde_json::json!(["behavior-tool"]);
            }
        }
        let loaded: Ontology = serde_json::from_value(doc).unwrap();
        let r = loaded.check_consistency();
        assert_eq!(r.count(ViolationKind::HierarchyCycle), 1);
        let cycle = r.violations.iter().find(|v| v.kind == ViolationKind::HierarchyCycle).unwrap();
        assert_eq!(cycle.subjects, ["behavior-tool", "tool"]);
    }

    #[test]
    fn domain_range_and_dangling() {
        let mut o = base();
        o.declare_individual("stray", "stray").unwrap();
        o.assert_property_value("stray", "hasmedium", Value::individual("gzoltar"), Polarity::Positive)
            .unwrap();
        let r = o.check_consistency();
        assert_eq!(r.count(ViolationKind::DomainViolation), 1);
        assert_eq!(r.count(ViolationKind::RangeViolation), 1);

        let mut doc = serde_json::to_value(base()).unwrap();
        doc["individuals"][0]["asserted_classes"] = serde_json::json!(["ghost"]);
        let loaded: Ontology = serde_json::from_value(doc).unwrap();
        let r = loaded.check_consistency();
        assert_eq!(r.count(ViolationKind::DanglingReference), 1);
    }

    #[test]
    fn asymmetric_disjointness_detected() {
        let mut doc = serde_json::to_value(base()).unwrap();
        for c in doc["classes"].as_array_mut().unwrap() {
            if c["id"] == "structure-tool" {
                c["disjoint_with"] = serde_json::json!([]);
            }
        }
        let loaded: Ontology = serde_json::from_value(doc).unwrap();
        let r = loaded.check_consistency();
        assert_eq!(r.count(ViolationKind::DisjointnessConflict), 1);
    }
}
