//! Well-known ids of the bundled schema.

pub const TOOL: &str = "tool";
pub const ASPECT_CLASSIFIED_TOOL: &str = "aspect-classified-tool";
pub const BEHAVIOR_TOOL: &str = "behavior-tool";
pub const STRUCTURE_TOOL: &str = "structure-tool";
pub const EVOLUTION_TOOL: &str = "evolution-tool";
pub const COMBINED_ASPECT_TOOL: &str = "combined-aspect-tool";

pub const MEDIUM: &str = "medium";
pub const TECHNIQUE: &str = "technique";
pub const ENVIRONMENT: &str = "environment";
pub const EVALUATION: &str = "evaluation";
pub const CONCERN_KEYWORD: &str = "concern-keyword";
pub const LICENSE: &str = "license";

pub const HAS_MEDIUM: &str = "hasmedium";
pub const USES_TECHNIQUE: &str = "usestechnique";
pub const RUNS_IN: &str = "runsin";
pub const EVALUATED_BY: &str = "evaluatedby";
pub const ADDRESSES_CONCERN_KEYWORD: &str = "addressesconcernkeyword";
pub const HAS_DATA_SOURCE: &str = "hasdatasource";
pub const HAS_LICENSE: &str = "haslicense";
pub const LAST_UPDATE: &str = "lastupdate";
pub const DIMENSIONALITY: &str = "dimensionality";

pub const RUNTIME: &str = "runtime";
pub const SOURCE_CODE: &str = "source-code";
pub const VERSION_HISTORY: &str = "version-history";

/// Annotation keys on tool individuals.
pub const URL: &str = "url";
pub const CONCERN: &str = "concern";
