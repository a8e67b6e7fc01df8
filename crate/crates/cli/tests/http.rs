use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use vison_cli::server::{router, AppState};
use vison_core::catalog::{ingest, ingest_seed, Schema, Stopwords};
use vison_core::discovery::snapshot_to_json;
use vison_core::Discovery;

fn seed_state() -> AppState {
    AppState::new(Discovery::new(ingest_seed().unwrap().ontology), None)
}

async fn call(state: &AppState, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = router(state.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn get(state: &AppState, uri: &str) -> (StatusCode, Value) {
    call(state, Method::GET, uri, None).await
}

async fn post_query(state: &AppState, query: &str) -> (StatusCode, Value) {
    call(state, Method::POST, "/api/query", Some(&json!({ "query": query }).to_string())).await
}

#[tokio::test]
async fn tools_listing_matches_default_query_order() {
    let s = seed_state();
    let (status, tools) = get(&s, "/api/tools").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(tools.as_array().unwrap().len(), 70);
    let (_, q) = post_query(&s, "tool").await;
    assert_eq!(q["results"], tools);
}

#[tokio::test]
async fn tool_detail() {
    let s = seed_state();
    let (status, t) = get(&s, "/api/tools/gzoltar").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(t["year"], 2017);
    assert_eq!(t["evaluations"], json!(["Experiment"]));
    assert_eq!(t["name"], "Gzoltar");

    let (status, err) = get(&s, "/api/tools/no-such-tool").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["code"], "not-found");
    assert!(err["error"].is_string());
}

#[tokio::test]
async fn query_errors() {
    let s = seed_state();
    let (status, err) = post_query(&s, "tool and (").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["code"], "syntax-error");
    assert_eq!(err["position"], 10);

    let (status, err) = post_query(&s, "hasMedium value hologram").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["code"], "unknown-name");

    let (status, err) = call(&s, Method::POST, "/api/query", Some("{\"q\": 1")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(err["code"], "bad-request");
}

#[tokio::test]
async fn immersive_query() {
    let s = seed_state();
    let (status, r) = post_query(&s, "hasMedium value I3D").await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = r["results"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["Getaviz", "PhysVis", "CityVR", "ExplorViz"]);
    assert_eq!(r["count"], 4);
}

#[tokio::test]
async fn graph_endpoint() {
    let s = seed_state();
    let (status, g) = get(&s, "/api/graph?root=behavior-tool&depth=1").await;
    assert_eq!(status, StatusCode::OK);
    let instances = g["edges"].as_array().unwrap().iter().filter(|e| e["kind"] == "instance").count();
    assert_eq!(instances, 28);

    let (status, g) = get(&s, "/api/graph").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(g["root"], "thing");

    let (status, err) = get(&s, "/api/graph?root=unicorn").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["code"], "unknown-root");

    let (status, _) = get(&s, "/api/graph?depth=-1").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn metrics_facets_health() {
    let s = seed_state();
    let (_, m) = get(&s, "/api/metrics").await;
    let n = |k: &str| m[k].as_u64().unwrap();
    assert_eq!(n("axiom_count"), n("logical_axiom_count") + n("declaration_axiom_count"));
    assert!(n("disjointclasses_count") >= 1);

    let (_, f) = get(&s, "/api/facets").await;
    assert_eq!(f["dimensions"][0]["name"], "aspect");
    assert_eq!(f["dimensions"][0]["values"][0], json!({"value": "Behavior", "count": 28}));

    let (status, h) = get(&s, "/api/health").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(h, json!({"status": "ok", "tools": 70}));

    let (status, err) = get(&s, "/api/nothing-here").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(err["code"], "not-found");
}

#[tokio::test]
async fn repeated_requests_are_identical() {
    let s = seed_state();
    for uri in ["/api/tools", "/api/facets", "/api/metrics", "/api/graph?root=tool&depth=2", "/api/sankey"] {
        let a = get(&s, uri).await;
        let b = get(&s, uri).await;
        assert_eq!(a, b, "{uri}");
    }
    let a = post_query(&s, "not behavior-tool").await;
    assert_eq!(a, post_query(&s, "not behavior-tool").await);
}

#[tokio::test]
async fn reload_swaps_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snap.json");
    std::fs::write(&path, snapshot_to_json(&ingest_seed().unwrap().ontology)).unwrap();
    let s = AppState::new(Discovery::new(vison_cli::load_snapshot(&path).unwrap()), Some(path.clone()));
    assert_eq!(get(&s, "/api/health").await.1["tools"], 70);

    let small = "name,aspect,year,concern,environment,technique,medium,evaluation,url\n\
                 Solo,Behavior,2017,Traces,Java,Pixel,SCS,Experiment,https://example.org\n";
    let o = ingest(small.as_bytes(), &Schema::bundled().unwrap(), &Stopwords::bundled(), 2026)
        .unwrap()
        .ontology;
    std::fs::write(&path, snapshot_to_json(&o)).unwrap();
    assert_eq!(s.reload(), Ok(1));
    assert_eq!(get(&s, "/api/health").await.1["tools"], 1);

    std::fs::write(&path, "not json").unwrap();
    assert!(s.reload().is_err());
    assert_eq!(get(&s, "/api/health").await.1["tools"], 1);
}
