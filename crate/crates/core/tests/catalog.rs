mod common;

use std::collections::BTreeSet;

use vison_core::catalog::{ingest, CatalogError, Evaluation, Schema, Stopwords, SEED_CATALOG};
use vison_core::discovery::snapshot_to_json;
use vison_core::export::{export_graph, EdgeKind, NodeKind};
use vison_core::query::run_query;
use vison_core::Discovery;

use common::{seed_ontology, seed_rows};

const HEADER: &str = "name,aspect,year,concern,environment,technique,medium,evaluation,url\n";

fn ingest_text(text: &str) -> Result<vison_core::Ingested, CatalogError> {
    ingest(text.as_bytes(), &Schema::bundled().unwrap(), &Stopwords::bundled(), 2026)
}

fn labels(slugs: &[String]) -> BTreeSet<String> {
    let o = seed_ontology();
    slugs.iter().map(|s| o.individual(s).unwrap().label.clone()).collect()
}

#[test]
fn blank_url_is_rejected_citing_availability() {
    let text = format!("{HEADER}Foo,Behavior,2017,Traces,Java,Pixel,SCS,Experiment,\n");
    match ingest_text(&text) {
        Err(CatalogError::Invalid(issues)) => {
            assert!(issues.iter().any(|i| i.is_error() && i.row == 1 && i.message.contains("publicly available")));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn header_only_catalog_is_empty_and_consistent() {
    let ing = ingest_text(HEADER).unwrap();
    assert!(ing.records.is_empty());
    assert!(ing.ontology.check_consistency().is_consistent());
    assert!(Discovery::new(ing.ontology).facets().is_empty());
}

#[test]
fn wrong_field_count_reports_line() {
    let text = format!("{HEADER}Foo,Behavior,2017\n");
    assert!(matches!(ingest_text(&text), Err(CatalogError::MalformedCsv { line: 2, .. })));
}

#[test]
fn ingest_is_deterministic() {
    let a = snapshot_to_json(&ingest_text(SEED_CATALOG).unwrap().ontology);
    let b = snapshot_to_json(&ingest_text(SEED_CATALOG).unwrap().ontology);
    assert_eq!(a, b);
}

#[test]
fn seed_corner_cases() {
    let ing = ingest_text(SEED_CATALOG).unwrap();
    let by_slug = |s: &str| ing.records.iter().find(|r| r.slug == s).unwrap();
    assert_eq!(by_slug("jive-2016").year, 2016);
    assert_eq!(by_slug("jive-2007").year, 2007);
    assert!(by_slug("cityvr").environments.contains("U."));
    assert_eq!(by_slug("jgrasp").evaluations, [Evaluation::Experiment, Evaluation::Survey].into());
    assert!(ing.records.iter().any(|r| r.environments.contains("Various")));
    let warnings: Vec<_> = ing.issues.iter().map(|i| i.message.as_str()).collect();
    assert_eq!(warnings.len(), 1, "{warnings:?}");
}

#[test]
fn worked_query_examples() {
    let o = seed_ontology();
    let recent: BTreeSet<String> = seed_rows()
        .into_iter()
        .filter(|r| r["year"].parse::<i64>().unwrap() >= 2018)
        .map(|r| r["name"].clone())
        .collect();
    let expected: BTreeSet<String> =
        ["Clack", "ToonTalk", "PhysVis", "SpartanRefactoring", "Mondrian", "Getaviz", "CodeBubbles"]
            .map(String::from)
            .into();
    assert_eq!(recent, expected);
    assert_eq!(labels(&run_query("Tool and lastUpdate >= 2018", o).unwrap().matches), expected);

    assert!(run_query("hasLicense value free", o).unwrap().matches.is_empty());

    let flask = run_query(
        "addressesConcernKeyword value performance and hasDataSource value version-history",
        o,
    )
    .unwrap();
    assert!(labels(&flask.matches).contains("FlaskDashboard"));
}

#[test]
fn results_are_ordered_by_year_then_label() {
    let r = run_query("behavior-tool", seed_ontology()).unwrap();
    let o = seed_ontology();
    let keys: Vec<(i64, String)> = r
        .matches
        .iter()
        .map(|s| {
            let i = o.individual(s).unwrap();
            (i.integer_values("lastupdate").max().unwrap(), i.label.to_lowercase())
        })
        .collect();
    for w in keys.windows(2) {
        assert!(w[0].0 > w[1].0 || (w[0].0 == w[1].0 && w[0].1 <= w[1].1), "{w:?}");
    }
}

#[test]
fn graph_examples() {
    let o = seed_ontology();
    let top = export_graph(o, "thing", 1).unwrap();
    assert!(top.nodes.iter().all(|n| n.kind == NodeKind::Class));
    assert_eq!(top.count_edges(EdgeKind::Instance), 0);
    assert!(top.nodes.iter().any(|n| n.name == "tool"));
    assert!(!top.nodes.iter().any(|n| n.name == "behavior-tool"));

    let behavior = export_graph(o, "behavior-tool", 1).unwrap();
    assert_eq!(behavior.count_edges(EdgeKind::Instance), 28);
    assert!(behavior.is_closed());
}

#[test]
fn facet_examples() {
    let d = Discovery::new(seed_ontology().clone());
    let inv = d.facets();
    assert_eq!(inv.dimension("medium").unwrap().count("I3D"), Some(4));
    let aspect = inv.dimension("aspect").unwrap();
    assert_eq!(
        [aspect.count("Behavior"), aspect.count("Structure"), aspect.count("Evolution"), aspect.count("Combined")],
        [Some(28), Some(22), Some(12), Some(8)]
    );
}

#[test]
fn seed_metrics_model_disjointness() {
    let m = seed_ontology().compute_metrics();
    assert!(m.disjointclasses_count >= 1);
    assert!(m.is_additive());
    assert_eq!(m.individual_count, seed_ontology().individuals().count());
}
