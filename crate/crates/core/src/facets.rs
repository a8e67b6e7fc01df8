//! Facet inventory: distinct values per dimension with tool counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::ToolRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCount {
    pub value: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetDimension {
    pub name: String,
    /// Count descending, then value ascending.
    pub values: Vec<FacetCount>,
}

impl FacetDimension {
    pub fn count(&self, value: &str) -> Option<usize> {
        self.values.iter().find(|v| v.value == value).map(|v| v.count)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetInventory {
    pub dimensions: Vec<FacetDimension>,
}

impl FacetInventory {
    pub fn dimension(&self, name: &str) -> Option<&FacetDimension> {
        self.dimensions.iter().find(|d| d.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.dimensions.is_empty()
    }
}

pub const DIMENSIONS: [&str; 8] =
    ["aspect", "year", "medium", "technique", "environment", "evaluation", "concern_keyword", "license"];

fn values_of(r: &ToolRecord, dimension: &str) -> Vec<String> {
    match dimension {
        "aspect" => vec![r.aspect.to_string()],
        "year" => vec![r.year.to_string()],
        "medium" => r.media.iter().map(ToString::to_string).collect(),
        "technique" => r.techniques.iter().cloned().collect(),
        "environment" => r.environments.iter().cloned().collect(),
        "evaluation" => r.evaluations.iter().map(ToString::to_string).collect(),
        "concern_keyword" => r.concern_keywords.iter().cloned().collect(),
        "license" => r.license.iter().map(ToString::to_string).collect(),
        _ => Vec::new(),
    }
}

/// A tool counts once per distinct value it carries, so a multi-valued
/// facet can sum to more than the number of tools. Dimensions with no
/// values are omitted.
pub fn facet_inventory(records: &[ToolRecord]) -> FacetInventory {
    let dimensions = DIMENSIONS
        .iter()
        .filter_map(|&name| {
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for r in records {
                for v in values_of(r, name) {
                    *counts.entry(v).or_default() += 1;
                }
            }
            if counts.is_empty() {
                return None;
            }
            let mut values: Vec<FacetCount> =
                counts.into_iter().map(|(value, count)| FacetCount { value, count }).collect();
            values.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.value.cmp(&b.value)));
            Some(FacetDimension { name: name.to_string(), values })
        })
        .collect();
    FacetInventory { dimensions }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_catalog_has_no_dimensions() {
        assert!(facet_inventory(&[]).is_empty());
    }

    #[test]
    fn sorted_by_count_then_name() {
        let ing = crate::catalog::ingest_seed().unwrap();
        let inv = facet_inventory(&ing.records);
        let aspect = inv.dimension("aspect").unwrap();
        let pairs: Vec<_> = aspect.values.iter().map(|v| (v.value.as_str(), v.count)).collect();
        assert_eq!(pairs, [("Behavior", 28), ("Structure", 22), ("Evolution", 12), ("Combined", 8)]);
        for d in &inv.dimensions {
            for w in d.values.windows(2) {
                assert!(w[0].count > w[1].count || (w[0].count == w[1].count && w[0].value < w[1].value));
            }
        }
        assert!(inv.dimension("license").is_none());
    }
}
