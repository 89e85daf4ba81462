use serde::{Deserialize, Serialize};

use super::{Graph, SetSystem};
use crate::error::{Error, Result};

/// JSON form of a graph: `{"n": 5, "edges": [[0, 1], ...], "label": "C_5"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        GraphFile {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            label: g.label().map(str::to_string),
        }
    }
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::new(file.n, &edges)?;
        Ok(match file.label {
            Some(l) => g.with_label(l),
            None => g,
        })
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphFile::from(self)).expect("graph serializes")
    }

    /// Parses either the JSON form or a plain edge list (`u v` per line,
    /// 0-indexed, `#` comments allowed).
    pub fn parse(text: &str) -> Result<Graph> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            let file: GraphFile = serde_json::from_str(trimmed)?;
            return Graph::try_from(file);
        }
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<usize> {
                parts
                    .next()
                    .ok_or_else(|| Error::Malformed(format!("line {}: expected `u v`", lineno + 1)))?
                    .parse()
                    .map_err(|e| Error::Malformed(format!("line {}: {e}", lineno + 1)))
            };
            let (u, v) = (next()?, next()?);
            if parts.next().is_some() {
                return Err(Error::Malformed(format!("line {}: trailing tokens", lineno + 1)));
            }
            n = n.max(u + 1).max(v + 1);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::Malformed("edge list is empty".into()));
        }
        Graph::new(n, &edges)
    }
}

/// JSON form of a set system with 1-based element lists.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SetSystemFile {
    pub d: usize,
    pub sets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&SetSystem> for SetSystemFile {
    fn from(f: &SetSystem) -> Self {
        SetSystemFile {
            d: f.d(),
            sets: f.lists(),
            label: f.label().map(str::to_string),
        }
    }
}

impl From<SetSystem> for SetSystemFile {
    fn from(f: SetSystem) -> Self {
        SetSystemFile::from(&f)
    }
}

impl TryFrom<SetSystemFile> for SetSystem {
    type Error = Error;

    fn try_from(file: SetSystemFile) -> Result<SetSystem> {
        let f = SetSystem::from_lists(file.d, &file.sets)?;
        Ok(match file.label {
            Some(l) => f.with_label(l),
            None => f,
        })
    }
}
