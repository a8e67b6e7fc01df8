use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::ToolRecord;

pub const STAGES: [&str; 4] = ["year", "aspect", "evaluation", "tool"];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SankeyNode {
    /// `<stage>:<value>`, e.g. `year:2017` or `tool:gzoltar`.
    pub id: String,
    pub stage: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SankeyLink {
    pub source: String,
    pub target: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SankeyExport {
    pub stages: Vec<String>,
    pub nodes: Vec<SankeyNode>,
    pub links: Vec<SankeyLink>,
}

/// A tool with several evaluation strategies flows through one combined
/// node ("Experiment + Survey") so each tool carries weight 1 end to end.
pub fn evaluation_label(r: &ToolRecord) -> String {
    if r.evaluations.is_empty() {
        return "Unspecified".to_string();
    }
    r.evaluations.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(" + ")
}

pub fn export_sankey(records: &[ToolRecord]) -> SankeyExport {
    let mut nodes = BTreeMap::new();
    let mut links: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut node = |stage: &str, key: &str, label: &str| {
        let id = format!("{stage}:{key}");
        nodes.entry(id.clone()).or_insert_with(|| SankeyNode {
            id: id.clone(),
            stage: stage.to_string(),
            label: label.to_string(),
        });
        id
    };
    for r in records {
        let year = r.year.to_string();
        let eval = evaluation_label(r);
        let chain = [
            node("year", &year, &year),
            node("aspect", r.aspect.as_str(), r.aspect.as_str()),
            node("evaluation", &eval, &eval),
            node("tool", &r.slug, &r.name),
        ];
        for pair in chain.windows(2) {
            *links.entry((pair[0].clone(), pair[1].clone())).or_default() += 1;
        }
    }
    SankeyExport {
        stages: STAGES.iter().map(|s| s.to_string()).collect(),
        nodes: nodes.into_values().collect(),
        links: links
            .into_iter()
            .map(|((source, target), weight)| SankeyLink { source, target, weight })
            .collect(),
    }
}

impl SankeyExport {
    pub fn link_weight(&self, source: &str, target: &str) -> u64 {
        self.links
            .iter()
            .find(|l| l.source == source && l.target == target)
            .map_or(0, |l| l.weight)
    }

    /// Total weight leaving the nodes of `stage`.
    pub fn outflow(&self, stage: &str) -> u64 {
        let prefix = format!("{stage}:");
        self.links.iter().filter(|l| l.source.starts_with(&prefix)).map(|l| l.weight).sum()
    }

    /// Intermediate nodes whose inbound and outbound weights differ, as
    /// `(id, inbound, outbound)`.
    pub fn imbalances(&self) -> Vec<(String, u64, u64)> {
        let first = format!("{}:", STAGES[0]);
        let last = format!("{}:", STAGES[STAGES.len() - 1]);
        let mut flow: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
        for l in &self.links {
            flow.entry(&l.target).or_default().0 += l.weight;
            flow.entry(&l.source).or_default().1 += l.weight;
        }
        flow.into_iter()
            .filter(|(id, _)| !id.starts_with(&first) && !id.starts_with(&last))
            .filter(|(_, (i, o))| i != o)
            .map(|(id, (i, o))| (id.to_string(), i, o))
            .collect()
    }
}
