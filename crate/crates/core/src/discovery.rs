//! Read-only views over a frozen ontology, shared by the command line and
//! the HTTP service so both produce identical JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{export_records, ToolRecord};
use crate::export::{export_graph, export_sankey, GraphExport, SankeyExport};
use crate::facets::{facet_inventory, FacetInventory};
use crate::ontology::{ConsistencyReport, Individual, MetricsReport, Ontology, OntologyError};
use crate::query::{parse_query, result_order, Evaluator, QueryError};
use crate::vocab;

pub const SNAPSHOT_FORMAT: &str = "vison-snapshot/1";

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotDoc {
    format: String,
    ontology: Ontology,
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported snapshot format `{found}` (expected `{SNAPSHOT_FORMAT}`)")]
    Format { found: String },
}

/// Serializes `o` as a versioned, self-contained JSON document. Output is
/// byte-identical for equal ontologies.
pub fn snapshot_to_json(o: &Ontology) -> String {
    let doc = SnapshotDoc { format: SNAPSHOT_FORMAT.to_string(), ontology: o.clone() };
    let mut out = serde_json::to_string_pretty(&doc).expect("ontology serializes");
    out.push('\n');
    out
}

pub fn snapshot_from_json(text: &str) -> Result<Ontology, SnapshotError> {
    #[derive(Deserialize)]
    struct Tag {
        format: Option<String>,
    }
    let tag: Tag = serde_json::from_str(text)?;
    match tag.format.as_deref() {
        Some(SNAPSHOT_FORMAT) => {}
        other => return Err(SnapshotError::Format { found: other.unwrap_or_default().to_string() }),
    }
    let doc: SnapshotDoc = serde_json::from_str(text)?;
    Ok(doc.ontology)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolSummary {
    pub slug: String,
    pub name: String,
    pub year: Option<i64>,
    pub aspect: Option<String>,
    pub media: Vec<String>,
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolDetail {
    #[serde(flatten)]
    pub record: ToolRecord,
    pub data_sources: Vec<String>,
    /// Asserted and inferred classes, excluding the root.
    pub types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub query: String,
    pub expression: String,
    pub count: usize,
    pub universe_size: usize,
    pub results: Vec<ToolSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    BadRequest,
    NotFound,
    Internal,
}

/// Error with a machine-readable code, rendered as [`ErrorBody`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ApiError {
    pub class: ErrorClass,
    pub code: String,
    pub message: String,
    pub position: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub code: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<usize>,
}

impl ApiError {
    pub fn new(class: ErrorClass, code: &str, message: impl Into<String>) -> Self {
        ApiError { class, code: code.to_string(), message: message.into(), position: None }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { error: self.message.clone(), code: self.code.clone(), position: self.position }
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        ApiError {
            class: ErrorClass::BadRequest,
            code: e.code().to_string(),
            position: e.position(),
            message: e.to_string(),
        }
    }
}

/// A frozen ontology plus the catalog records recovered from it.
#[derive(Debug, Clone)]
pub struct Discovery {
    ontology: Ontology,
    records: Vec<ToolRecord>,
}

impl Discovery {
    pub fn new(ontology: Ontology) -> Self {
        let records = export_records(&ontology);
        Discovery { ontology, records }
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn records(&self) -> &[ToolRecord] {
        &self.records
    }

    fn summary(&self, ind: &Individual) -> ToolSummary {
        let aspect = ind
            .asserted_classes
            .iter()
            .find_map(|c| crate::catalog::Aspect::from_slug(c))
            .map(|a| a.to_string());
        ToolSummary {
            slug: ind.id.clone(),
            name: ind.label.clone(),
            year: ind.integer_values(vocab::LAST_UPDATE).max(),
            aspect,
            media: ind
                .individual_values(vocab::HAS_MEDIUM)
                .filter_map(|m| self.ontology.individual(m))
                .map(|m| m.label.clone())
                .collect(),
            url: ind.annotation(vocab::URL).map(str::to_string),
        }
    }

    /// Every tool, in query result order.
    pub fn tools(&self) -> Vec<ToolSummary> {
        let ev = Evaluator::new(&self.ontology);
        let mut inds: Vec<&Individual> =
            ev.universe().iter().filter_map(|id| self.ontology.individual(id)).collect();
        inds.sort_by(|a, b| result_order(a, b));
        inds.into_iter().map(|i| self.summary(i)).collect()
    }

    pub fn tool(&self, slug: &str) -> Result<ToolDetail, ApiError> {
        let slug = slug.to_ascii_lowercase();
        let record = self
            .records
            .iter()
            .find(|r| r.slug == slug)
            .ok_or_else(|| ApiError::new(ErrorClass::NotFound, "not-found", format!("no tool `{slug}`")))?;
        let ind = self.ontology.individual(&slug).expect("records come from the ontology");
        let types = self
            .ontology
            .types_of(&slug)
            .expect("individual exists")
            .into_iter()
            .filter(|c| c != crate::ontology::ROOT)
            .collect();
        Ok(ToolDetail {
            record: record.clone(),
            data_sources: ind.individual_values(vocab::HAS_DATA_SOURCE).map(str::to_string).collect(),
            types,
        })
    }

    pub fn query(&self, text: &str) -> Result<QueryResponse, ApiError> {
        let expr = parse_query(text)?;
        let result = Evaluator::new(&self.ontology).evaluate(&expr)?;
        let results: Vec<ToolSummary> = result
            .matches
            .iter()
            .filter_map(|id| self.ontology.individual(id))
            .map(|i| self.summary(i))
            .collect();
        Ok(QueryResponse {
            query: text.to_string(),
            expression: result.expression,
            count: results.len(),
            universe_size: result.universe_size,
            results,
        })
    }

    pub fn facets(&self) -> FacetInventory {
        facet_inventory(&self.records)
    }

    pub fn metrics(&self) -> MetricsReport {
        self.ontology.compute_metrics()
    }

    pub fn consistency(&self) -> ConsistencyReport {
        self.ontology.check_consistency()
    }

    pub fn graph(&self, root: &str, depth: usize) -> Result<GraphExport, ApiError> {
        let root = root.to_ascii_lowercase();
        export_graph(&self.ontology, &root, depth).map_err(|e| match e {
            OntologyError::Unknown { .. } => {
                ApiError::new(ErrorClass::NotFound, "unknown-root", format!("no class `{root}`"))
            }
            other => ApiError::new(ErrorClass::Internal, "internal", other.to_string()),
        })
    }

    pub fn sankey(&self) -> SankeyExport {
        export_sankey(&self.records)
    }
}
