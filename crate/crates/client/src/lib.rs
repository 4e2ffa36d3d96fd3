//! Thin async client for the analogy evaluation service.

use analogy_proto::*;
use reqwest::{Method, StatusCode};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("request to {url} failed: {source}")]
    Http {
        url: String,
        #[source]
        source: reqwest::Error,
    },
    /// The server answered with a non-success status.
    #[error("{message}")]
    Api { status: StatusCode, message: String },
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the server root, e.g. `http://127.0.0.1:7878`.
    pub fn new(base: impl Into<String>) -> Self {
        let base = base.into().trim_end_matches('/').to_owned();
        Self {
            base,
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    async fn send<B: Serialize, R: DeserializeOwned>(&self, method: Method, path: &str, body: Option<&B>) -> Result<R> {
        let url = format!("{}{}", self.base, path);
        let http_err = |source| ClientError::Http {
            url: url.clone(),
            source,
        };
        let mut req = self.http.request(method, &url);
        if let Some(body) = body {
            req = req.json(body);
        }
        let resp = req.send().await.map_err(http_err)?;
        let status = resp.status();
        if status.is_success() {
            return resp.json().await.map_err(http_err);
        }
        let text = resp.text().await.map_err(http_err)?;
        let message = match serde_json::from_str::<ErrorBody>(&text) {
            Ok(body) => body.error,
            Err(_) if text.is_empty() => status.to_string(),
            Err(_) => text,
        };
        Err(ClientError::Api { status, message })
    }

    pub async fn health(&self) -> Result<Health> {
        self.send(Method::GET, "/health", None::<&()>).await
    }

    pub async fn list_indices(&self) -> Result<Vec<IndexInfo>> {
        self.send(Method::GET, "/v1/indices", None::<&()>).await
    }

    pub async fn load_index(&self, req: &LoadIndexRequest) -> Result<IndexInfo> {
        self.send(Method::POST, "/v1/indices", Some(req)).await
    }

    pub async fn get_index(&self, id: &str) -> Result<IndexInfo> {
        self.send(Method::GET, &format!("/v1/indices/{id}"), None::<&()>).await
    }

    pub async fn delete_index(&self, id: &str) -> Result<IndexInfo> {
        self.send(Method::DELETE, &format!("/v1/indices/{id}"), None::<&()>)
            .await
    }

    pub async fn normalize(&self, term: &str) -> Result<Vec<String>> {
        let req = NormalizeRequest { term: term.to_owned() };
        let resp: NormalizeResponse = self.send(Method::POST, "/v1/normalize", Some(&req)).await?;
        Ok(resp.tokens)
    }

    pub async fn query(&self, req: &QueryRequest) -> Result<QueryResponse> {
        self.send(Method::POST, "/v1/query", Some(req)).await
    }

    pub async fn evaluate(&self, req: &EvaluateRequest) -> Result<EvaluateResponse> {
        self.send(Method::POST, "/v1/evaluate", Some(req)).await
    }

    pub async fn report(&self, outcomes: String) -> Result<ReportResponse> {
        self.send(Method::POST, "/v1/report", Some(&ReportRequest { outcomes }))
            .await
    }

    pub async fn generate(&self, req: &GenerateRequest) -> Result<GenerateResponse> {
        self.send(Method::POST, "/v1/generate", Some(req)).await
    }
}
