use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::ontology::{Ontology, OntologyError, ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Class,
    Individual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Subclass,
    Instance,
    Property,
}

/// Classes and individuals live in separate namespaces (`structure` is both
/// an aspect class and a concern keyword), so node ids carry a kind prefix:
/// `class:tool`, `individual:gzoltar`. `name` is the bare entity id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: String,
    pub name: String,
    pub label: String,
    pub kind: NodeKind,
}

/// Subclass edges run from subclass to superclass, instance edges from
/// individual to class, property edges from subject to object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub property: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub root: String,
    pub depth: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl GraphExport {
    /// Every edge endpoint names a node.
    pub fn is_closed(&self) -> bool {
        let ids: BTreeSet<&str> = self.nodes.iter().map(|n| n.id.as_str()).collect();
        self.edges.iter().all(|e| ids.contains(e.from.as_str()) && ids.contains(e.to.as_str()))
    }

    pub fn count_edges(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }
}

fn node_id(kind: NodeKind, name: &str) -> String {
    match kind {
        NodeKind::Class => format!("class:{name}"),
        NodeKind::Individual => format!("individual:{name}"),
    }
}

/// Breadth-limited neighborhood of `root`. From a class the walk steps to
/// its direct subclasses and direct instances; from an individual it steps
/// to the objects of its property assertions. Depth 0 is the root alone.
///
/// Edges are every subclass, instance and property relation between two
/// collected nodes, so the export is closed by construction.
pub fn export_graph(o: &Ontology, root: &str, depth: usize) -> Result<GraphExport, OntologyError> {
    o.children(root)?;
    let mut dist: BTreeMap<(NodeKind, String), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    dist.insert((NodeKind::Class, root.to_string()), 0);
    queue.push_back((NodeKind::Class, root.to_string()));

    while let Some(key) = queue.pop_front() {
        let d = dist[&key];
        if d == depth {
            continue;
        }
        let (kind, name) = &key;
        let next: Vec<(NodeKind, String)> = match kind {
            NodeKind::Class => {
                let mut n: Vec<_> =
                    o.children(name)?.into_iter().map(|c| (NodeKind::Class, c)).collect();
                n.extend(
                    o.individuals()
                        .filter(|i| i.asserted_classes.contains(name))
                        .map(|i| (NodeKind::Individual, i.id.clone())),
                );
                n
            }
            NodeKind::Individual => o
                .individual(name)
                .map(|i| {
                    i.property_assertions
                        .iter()
                        .filter_map(|a| a.target.as_individual())
                        .filter(|t| o.individual(t).is_some())
                        .map(|t| (NodeKind::Individual, t.to_string()))
                        .collect()
                })
                .unwrap_or_default(),
        };
        for k in next {
            if !dist.contains_key(&k) {
                dist.insert(k.clone(), d + 1);
                queue.push_back(k);
            }
        }
    }

    let mut nodes = Vec::with_capacity(dist.len());
    let mut edges = Vec::new();
    let has = |kind: NodeKind, name: &str| dist.contains_key(&(kind, name.to_string()));
    for (kind, name) in dist.keys() {
        match kind {
            NodeKind::Class => {
                let def = o.class(name).expect("collected from ontology");
                nodes.push(GraphNode {
                    id: node_id(NodeKind::Class, name),
                    name: name.clone(),
                    label: def.label.clone(),
                    kind: NodeKind::Class,
                });
                let parents: Vec<&str> = if def.parents.is_empty() && name != ROOT {
                    vec![ROOT]
                } else {
                    def.parents.iter().map(String::as_str).collect()
                };
                for p in parents.into_iter().filter(|p| has(NodeKind::Class, p)) {
                    edges.push(GraphEdge {
                        from: node_id(NodeKind::Class, name),
                        to: node_id(NodeKind::Class, p),
                        kind: EdgeKind::Subclass,
                        property: None,
                    });
                }
            }
            NodeKind::Individual => {
                let ind = o.individual(name).expect("collected from ontology");
                nodes.push(GraphNode {
                    id: node_id(NodeKind::Individual, name),
                    name: name.clone(),
                    label: ind.label.clone(),
                    kind: NodeKind::Individual,
                });
                for c in ind.asserted_classes.iter().filter(|c| has(NodeKind::Class, c)) {
                    edges.push(GraphEdge {
                        from: node_id(NodeKind::Individual, name),
                        to: node_id(NodeKind::Class, c),
                        kind: EdgeKind::Instance,
                        property: None,
                    });
                }
                for a in &ind.property_assertions {
                    let Some(t) = a.target.as_individual() else { continue };
                    if has(NodeKind::Individual, t) {
                        edges.push(GraphEdge {
                            from: node_id(NodeKind::Individual, name),
                            to: node_id(NodeKind::Individual, t),
                            kind: EdgeKind::Property,
                            property: Some(a.property.clone()),
                        });
                    }
                }
            }
        }
    }
    edges.sort();
    edges.dedup();
    Ok(GraphExport { root: root.to_string(), depth, nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{Polarity, Value};

    fn fixture() -> Ontology {
        let mut o = Ontology::new();
        o.declare_class("tool", "Tool", []).unwrap();
        o.declare_class("behavior-tool", "Behavior tool", ["tool"]).unwrap();
        o.declare_class("medium", "Medium", []).unwrap();
        o.declare_property("hasmedium", "hasMedium", crate::ontology::PropertyKind::Object, None, None, None)
            .unwrap();
        o.declare_individual("scs", "SCS").unwrap();
        o.assert_membership("scs", "medium").unwrap();
        for t in ["a", "b"] {
            o.declare_individual(t, t).unwrap();
            o.assert_membership(t, "behavior-tool").unwrap();
            o.assert_property_value(t, "hasmedium", Value::individual("scs"), Polarity::Positive).unwrap();
        }
        o
    }

    #[test]
    fn root_depth_one_is_top_level_classes() {
        let o = fixture();
        let g = export_graph(&o, ROOT, 1).unwrap();
        let names: Vec<_> = g.nodes.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(names, ["medium", "thing", "tool"]);
        assert!(g.nodes.iter().all(|n| n.kind == NodeKind::Class));
        assert_eq!(g.count_edges(EdgeKind::Subclass), 2);
        assert!(g.is_closed());
    }

    #[test]
    fn depth_zero_and_instances() {
        let o = fixture();
        let g = export_graph(&o, "tool", 0).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        let g = export_graph(&o, "behavior-tool", 1).unwrap();
        assert_eq!(g.count_edges(EdgeKind::Instance), 2);
        let g = export_graph(&o, "behavior-tool", 2).unwrap();
        assert_eq!(g.count_edges(EdgeKind::Property), 2);
        assert!(g.nodes.iter().any(|n| n.id == "individual:scs"));
        assert!(g.is_closed());
    }

    #[test]
    fn unknown_root() {
        assert!(matches!(
            export_graph(&fixture(), "nope", 1),
            Err(OntologyError::Unknown { .. })
        ));
    }
}
