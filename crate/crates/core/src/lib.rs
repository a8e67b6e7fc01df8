//! Ontology-backed catalog of software visualization tools: concept model,
//! class-expression queries, catalog ingestion and discovery views.

pub mod catalog;
pub mod discovery;
pub mod export;
pub mod facets;
pub mod ontology;
pub mod query;
pub mod slug;
pub mod vocab;

pub use catalog::{ingest, ingest_seed, CatalogError, CatalogIssue, Ingested, ToolRecord};
pub use ontology::{ConsistencyReport, MetricsReport, Ontology, OntologyError};
pub use query::{parse_query, run_query, ClassExpression, QueryError, QueryResult};
pub use discovery::{Discovery, SNAPSHOT_FORMAT};
