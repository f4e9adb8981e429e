//! HTTP service over an in-memory session store.
//!
//! | method | path | body |
//! |---|---|---|
//! | POST | `/instances` | instance JSON |
//! | GET | `/instances/{id}` | |
//! | POST | `/observations?instance_id=` | observation CSV |
//! | GET | `/observations/{id}/stats?percentiles=` | |
//! | POST | `/solve` | [`SolveRequest`] |
//! | POST | `/frontier` | [`FrontierRequest`] |
//! | POST | `/infer-cost` | [`InferCostRequest`] |
//!
//! `/solve` answers with the same bytes `invlearn solve` prints; the id of
//! the stored solution is in the `x-solution-id` header.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use invlearn_core::model::validate_instance;
use invlearn_core::{ForwardInstance, ObservationSet, SolverConfig, ENGINE_VERSION};
use serde::{Deserialize, Serialize};

use crate::formats::{parse_observations, to_json, InstanceDoc};
use crate::pipeline::{parse_percentiles, run_frontier, run_infer_cost, run_solve, run_stats, Failure, ModeArg, SolveParams};

pub const SOLUTION_ID_HEADER: &str = "x-solution-id";

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct StoredObservations {
    instance_id: String,
    rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct StoredSolution {
    instance_id: String,
    z: Vec<f64>,
}

/// On-disk form of the store.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Snapshot {
    next_id: u64,
    instances: BTreeMap<String, InstanceDoc>,
    observations: BTreeMap<String, StoredObservations>,
    solutions: BTreeMap<String, StoredSolution>,
}

#[derive(Default)]
struct Store {
    next_id: u64,
    instances: BTreeMap<String, ForwardInstance>,
    observations: BTreeMap<String, (String, ObservationSet)>,
    solutions: BTreeMap<String, StoredSolution>,
}

impl Store {
    fn fresh(&mut self, prefix: &str) -> String {
        self.next_id += 1;
        format!("{prefix}-{}", self.next_id)
    }
}

pub struct AppState {
    store: RwLock<Store>,
    cfg: SolverConfig,
    snapshot_path: Option<PathBuf>,
}

impl AppState {
    pub fn new(cfg: SolverConfig) -> Self {
        Self { store: RwLock::new(Store::default()), cfg, snapshot_path: None }
    }

    /// Loads `path` when it exists and writes the store back on [`AppState::save`].
    pub fn with_snapshot(cfg: SolverConfig, path: PathBuf) -> Result<Self, Failure> {
        let mut state = Self::new(cfg);
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::Internal(e.to_string()))?;
            let snap: Snapshot = serde_json::from_str(&text).map_err(|e| Failure::invalid(e.to_string()))?;
            state.restore(snap)?;
        }
        state.snapshot_path = Some(path);
        Ok(state)
    }

    fn restore(&mut self, snap: Snapshot) -> Result<(), Failure> {
        let store = self.store.get_mut().expect("store lock");
        store.next_id = snap.next_id;
        for (id, doc) in snap.instances {
            store.instances.insert(id, doc.to_instance()?);
        }
        for (id, o) in snap.observations {
            let n = store.instances.get(&o.instance_id).map(|i| i.dim()).unwrap_or(0);
            store.observations.insert(id, (o.instance_id, ObservationSet::new(n, o.rows)?));
        }
        store.solutions = snap.solutions;
        Ok(())
    }

    pub fn snapshot(&self) -> Snapshot {
        let s = self.store.read().expect("store lock");
        Snapshot {
            next_id: s.next_id,
            instances: s.instances.iter().map(|(k, v)| (k.clone(), InstanceDoc::from_instance(v))).collect(),
            observations: s
                .observations
                .iter()
                .map(|(k, (i, o))| (k.clone(), StoredObservations { instance_id: i.clone(), rows: o.rows().to_vec() }))
                .collect(),
            solutions: s.solutions.clone(),
        }
    }

    pub fn save(&self) -> std::io::Result<()> {
        match &self.snapshot_path {
            Some(p) => std::fs::write(p, to_json(&self.snapshot())),
            None => Ok(()),
        }
    }

    fn instance(&self, id: &str) -> Result<ForwardInstance, Failure> {
        let s = self.store.read().expect("store lock");
        s.instances.get(id).cloned().ok_or_else(|| Failure::NotFound(format!("unknown instance `{id}`")))
    }

    fn observations(&self, id: &str, instance_id: &str) -> Result<ObservationSet, Failure> {
        let s = self.store.read().expect("store lock");
        let (owner, obs) = s.observations.get(id).ok_or_else(|| Failure::NotFound(format!("unknown observations `{id}`")))?;
        if owner != instance_id {
            return Err(Failure::invalid(format!("observations `{id}` belong to instance `{owner}`")));
        }
        Ok(obs.clone())
    }
}

struct ApiError(Failure);

impl From<Failure> for ApiError {
    fn from(f: Failure) -> Self {
        ApiError(f)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let code = match &self.0 {
            Failure::Invalid { .. } => StatusCode::BAD_REQUEST,
            Failure::Solver { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            Failure::NotFound(_) => StatusCode::NOT_FOUND,
            Failure::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        json_response(code, to_json(&self.0.doc()))
    }
}

fn json_response(code: StatusCode, body: String) -> Response {
    (code, [(header::CONTENT_TYPE, HeaderValue::from_static("application/json"))], body).into_response()
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, Failure> {
    serde_json::from_slice(body).map_err(|e| Failure::invalid(format!("invalid JSON: {e}")))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, Failure> + Send + 'static) -> Result<T, Failure> {
    tokio::task::spawn_blocking(f).await.map_err(|e| Failure::Internal(e.to_string()))?
}

#[derive(Serialize)]
struct Created<'a> {
    engine_version: &'static str,
    id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    warnings: Option<&'a [String]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<usize>,
}

async fn post_instance(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let doc: InstanceDoc = parse_body(&body)?;
    let inst = doc.to_instance().map_err(Failure::from)?;
    let cfg = st.cfg;
    let (inst, report) = blocking(move || {
        let r = validate_instance(&inst, &cfg)?;
        Ok((inst, r))
    })
    .await?;
    let id = {
        let mut s = st.store.write().expect("store lock");
        let id = s.fresh("inst");
        s.instances.insert(id.clone(), inst);
        id
    };
    Ok(json_response(StatusCode::CREATED, to_json(&Created { engine_version: ENGINE_VERSION, id, warnings: Some(&report.warnings), count: None })))
}

async fn get_instance(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let inst = st.instance(&id)?;
    let doc = StoredInstance { engine_version: ENGINE_VERSION, doc: InstanceDoc::from_instance(&inst) };
    Ok(json_response(StatusCode::OK, to_json(&doc)))
}

#[derive(Serialize)]
struct StoredInstance {
    engine_version: &'static str,
    #[serde(flatten)]
    doc: InstanceDoc,
}

#[derive(Deserialize)]
struct ObsQuery {
    instance_id: String,
}

async fn post_observations(
    State(st): State<Arc<AppState>>,
    Query(q): Query<ObsQuery>,
    body: String,
) -> Result<Response, ApiError> {
    let inst = st.instance(&q.instance_id)?;
    let (_, obs) = parse_observations(&body, Some(inst.variables())).map_err(Failure::from)?;
    let count = obs.len();
    let id = {
        let mut s = st.store.write().expect("store lock");
        let id = s.fresh("obs");
        s.observations.insert(id.clone(), (q.instance_id, obs));
        id
    };
    Ok(json_response(StatusCode::CREATED, to_json(&Created { engine_version: ENGINE_VERSION, id, warnings: None, count: Some(count) })))
}

#[derive(Deserialize)]
struct StatsQuery {
    percentiles: Option<String>,
}

async fn get_stats(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<StatsQuery>,
) -> Result<Response, ApiError> {
    let (owner, obs) = {
        let s = st.store.read().expect("store lock");
        s.observations.get(&id).cloned().ok_or_else(|| Failure::NotFound(format!("unknown observations `{id}`")))?
    };
    let inst = st.instance(&owner)?;
    let percentiles = parse_percentiles(q.percentiles.as_deref().unwrap_or("10,25,50,75,90"))?;
    Ok(json_response(StatusCode::OK, to_json(&run_stats(inst.variables(), &obs, &percentiles)?)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveRequest {
    pub instance_id: String,
    pub observations_id: String,
    #[serde(flatten)]
    pub params: SolveParams,
}

async fn post_solve(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: SolveRequest = parse_body(&body)?;
    let inst = st.instance(&req.instance_id)?;
    let obs = st.observations(&req.observations_id, &req.instance_id)?;
    let cfg = st.cfg;
    let params = req.params.clone();
    let doc = blocking(move || run_solve(&inst, &obs, &params, &cfg)).await?;
    let id = {
        let mut s = st.store.write().expect("store lock");
        let id = s.fresh("sol");
        s.solutions.insert(id.clone(), StoredSolution { instance_id: req.instance_id, z: doc.z.clone() });
        id
    };
    let mut resp = json_response(StatusCode::OK, to_json(&doc));
    resp.headers_mut().insert(SOLUTION_ID_HEADER, HeaderValue::from_str(&id).expect("ascii id"));
    Ok(resp)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrontierRequest {
    pub instance_id: String,
    pub observations_id: String,
    pub p_min: usize,
    pub p_max: usize,
    #[serde(default)]
    pub mode: ModeArg,
    #[serde(flatten)]
    pub params: SolveParams,
}

async fn post_frontier(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: FrontierRequest = parse_body(&body)?;
    let inst = st.instance(&req.instance_id)?;
    let obs = st.observations(&req.observations_id, &req.instance_id)?;
    let cfg = st.cfg;
    let doc = blocking(move || run_frontier(&inst, &obs, &req.params, req.p_min, req.p_max, req.mode, &cfg)).await?;
    Ok(json_response(StatusCode::OK, to_json(&doc)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InferCostRequest {
    pub instance_id: String,
    pub observations_id: String,
    #[serde(default)]
    pub solution_id: Option<String>,
    #[serde(default)]
    pub z: Option<Vec<f64>>,
}

async fn post_infer_cost(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: InferCostRequest = parse_body(&body)?;
    let inst = st.instance(&req.instance_id)?;
    let obs = st.observations(&req.observations_id, &req.instance_id)?;
    let z = match (&req.solution_id, &req.z) {
        (Some(id), None) => {
            let s = st.store.read().expect("store lock");
            let sol = s.solutions.get(id).ok_or_else(|| Failure::NotFound(format!("unknown solution `{id}`")))?;
            if sol.instance_id != req.instance_id {
                return Err(Failure::invalid(format!("solution `{id}` belongs to instance `{}`", sol.instance_id)).into());
            }
            sol.z.clone()
        }
        (None, Some(z)) => z.clone(),
        _ => return Err(Failure::invalid("give exactly one of `solution_id` and `z`").into()),
    };
    let cfg = st.cfg;
    let doc = blocking(move || run_infer_cost(&inst, &obs, &z, &cfg)).await?;
    Ok(json_response(StatusCode::OK, to_json(&doc)))
}

async fn health() -> Response {
    json_response(StatusCode::OK, format!("{{\"status\":\"ok\",\"engine_version\":\"{ENGINE_VERSION}\"}}\n"))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/instances", post(post_instance))
        .route("/instances/{id}", get(get_instance))
        .route("/observations", post(post_observations))
        .route("/observations/{id}/stats", get(get_stats))
        .route("/solve", post(post_solve))
        .route("/frontier", post(post_frontier))
        .route("/infer-cost", post(post_infer_cost))
        .with_state(state)
}

/// Serves until Ctrl-C, then writes the snapshot if one is configured.
pub async fn serve(addr: std::net::SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    state.save()
}
