//! On-disk formats: graph files, branch-decomposition files and the run
//! header carried by every output document.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId, VertexSet};
use crate::groups::{CayleyBall, GroupError, GroupSpec, DEFAULT_BALL_CAP};
use crate::minors::{BranchDecomposition, PatternGraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("decomposition was made for host {expected}, this host hashes to {actual}")]
    HashMismatch { expected: String, actual: String },
    #[error("no host given and the decomposition does not name one")]
    NoHost,
}

pub const TOOL: &str = "cayminor";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance of an output document. Holds no timestamps so that equal
/// inputs give byte-identical files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    pub seed: u64,
    #[serde(default)]
    pub config: serde_json::Value,
}

impl Header {
    pub fn new(command: &str, seed: u64, config: serde_json::Value) -> Self {
        Header {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            spec: None,
            seed,
            config,
        }
    }

    pub fn with_spec(mut self, spec: &GroupSpec) -> Self {
        self.spec = Some(spec.to_string());
        self
    }
}

/// A body with an optional header in front of its fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<Header>,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Document<T> {
    pub fn new(header: Header, body: T) -> Self {
        Document {
            header: Some(header),
            body,
        }
    }

    pub fn bare(body: T) -> Self {
        Document { header: None, body }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// `{"vertices":[{"id":0,"label":"..."}],"edges":[[0,1],...]}` with each
/// edge written `[min, max]` and the edge list sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            vertices: g
                .vertices()
                .map(|id| VertexRecord {
                    id,
                    label: g.label(id).map(str::to_owned),
                })
                .collect(),
            edges: g.edges().to_vec(),
        }
    }

    /// Vertex records may come in any order but their ids must be exactly
    /// `0..n`.
    pub fn to_graph(&self) -> Result<Graph, IoError> {
        let n = self.vertices.len();
        let mut labels: Vec<Option<Option<String>>> = vec![None; n];
        for r in &self.vertices {
            if r.id >= n || labels[r.id].is_some() {
                return Err(GraphError::NonDenseIds(r.id).into());
            }
            labels[r.id] = Some(r.label.clone());
        }
        let labels = labels.into_iter().map(Option::flatten).collect();
        Ok(Graph::from_parts(labels, self.edges.iter().copied())?)
    }
}

/// SHA-256 of the canonical graph JSON, hex encoded.
pub fn host_hash(g: &Graph) -> String {
    let bytes = serde_json::to_vec(&GraphFile::from_graph(g)).expect("graph JSON always serializes");
    hex::encode(Sha256::digest(bytes))
}

/// A Cayley ball that a decomposition refers to. With `enlarged` set, the
/// ball keeps its word-metric vertices but carries the edges of
/// `S ∪ SS ∪ SSS`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostRef {
    pub spec: String,
    pub radius: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub enlarged: bool,
}

impl HostRef {
    pub fn build(&self) -> Result<CayleyBall, IoError> {
        let spec: GroupSpec = self.spec.parse()?;
        let ball = if self.enlarged {
            CayleyBall::with_edge_gens(&spec, self.radius, spec.enlarged().gens(), DEFAULT_BALL_CAP)?
        } else {
            CayleyBall::new(&spec, self.radius)?
        };
        Ok(ball)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub pattern: PatternGraph,
    pub sets: Vec<VertexSet>,
    pub host_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host: Option<HostRef>,
}

impl DecompositionFile {
    pub fn new(bd: &BranchDecomposition, host: &Graph, host_ref: Option<HostRef>) -> Self {
        DecompositionFile {
            pattern: bd.pattern.clone(),
            sets: bd.sets.clone(),
            host_hash: host_hash(host),
            host: host_ref,
        }
    }

    pub fn decomposition(&self) -> BranchDecomposition {
        BranchDecomposition::new(self.pattern.clone(), self.sets.clone())
    }

    /// Errors unless `host` is the graph this file was written for.
    pub fn check_host(&self, host: &Graph) -> Result<(), IoError> {
        let actual = host_hash(host);
        if actual != self.host_hash {
            return Err(IoError::HashMismatch {
                expected: self.host_hash.clone(),
                actual,
            });
        }
        Ok(())
    }

    /// Rebuilds the host named in the file and checks its hash.
    pub fn rebuild_host(&self) -> Result<CayleyBall, IoError> {
        let ball = self.host.as_ref().ok_or(IoError::NoHost)?.build()?;
        self.check_host(ball.graph())?;
        Ok(ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{construct_z2_s2_minor, verify_minor, z2_s2_spec};

    #[test]
    fn graph_file_round_trip() {
        let spec: GroupSpec = "Z^2 | gens=(1,0),(0,1),sym".parse().unwrap();
        let ball = CayleyBall::new(&spec, 2).unwrap();
        let text = serde_json::to_string(&GraphFile::from_graph(ball.graph())).unwrap();
        assert!(text.starts_with(r#"{"vertices":[{"id":0,"label":"(0,0)"}"#));
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        assert_eq!(&back.to_graph().unwrap(), ball.graph());
        assert!(back.edges.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unlabeled_and_shuffled_vertices() {
        let text = r#"{"vertices":[{"id":1},{"id":0}],"edges":[[1,0]]}"#;
        let g = serde_json::from_str::<GraphFile>(text).unwrap().to_graph().unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        let gap = r#"{"vertices":[{"id":0},{"id":2}],"edges":[]}"#;
        assert!(serde_json::from_str::<GraphFile>(gap).unwrap().to_graph().is_err());
    }

    #[test]
    fn decomposition_file_names_its_host() {
        let c = construct_z2_s2_minor(3).unwrap();
        let host_ref = HostRef {
            spec: z2_s2_spec().to_string(),
            radius: c.ball.radius(),
            enlarged: false,
        };
        let file = DecompositionFile::new(&c.bd, c.ball.graph(), Some(host_ref));
        let doc = Document::new(Header::new("test", 0, serde_json::Value::Null), file);
        let text = serde_json::to_string(&doc).unwrap();
        let back: Document<DecompositionFile> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let host = back.body.rebuild_host().unwrap();
        assert!(verify_minor(host.graph(), &back.body.decomposition()).pass);

        let other = Graph::path(3);
        assert!(matches!(
            back.body.check_host(&other),
            Err(IoError::HashMismatch { .. })
        ));
        let bare: Document<DecompositionFile> =
            serde_json::from_str(&serde_json::to_string(&back.body).unwrap()).unwrap();
        assert!(bare.header.is_none());
    }
}
