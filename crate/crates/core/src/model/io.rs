//! JSON encodings of games, trees and subsidies, plus DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::games::{BroadcastGame, Game, GeneralGame};
use super::graph::{EdgeId, Graph};
use super::subsidy::SubsidyAssignment;
use super::tree::SpanningTree;
use super::ModelError;
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: String,
    pub v: String,
    pub w: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GameFile {
    pub nodes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TreeFile {
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubsidyFile {
    pub integral: bool,
    pub b: BTreeMap<EdgeId, String>,
}

fn build_graph(file: &GameFile) -> Result<Graph, ModelError> {
    let mut graph = Graph::with_capacity(file.nodes.len(), file.edges.len());
    for label in &file.nodes {
        graph.add_node(label.clone())?;
    }
    let mut slots: Vec<Option<&EdgeRecord>> = vec![None; file.edges.len()];
    for rec in &file.edges {
        match slots.get_mut(rec.id) {
            None => return Err(ModelError::UnknownEdge(rec.id)),
            Some(Some(_)) => return Err(ModelError::DuplicateEdgeId(rec.id)),
            Some(slot) => *slot = Some(rec),
        }
    }
    let lookup = |label: &str| graph.node(label).ok_or_else(|| ModelError::UnknownNode(label.to_string()));
    let mut resolved = Vec::with_capacity(slots.len());
    for rec in slots.into_iter().flatten() {
        resolved.push((lookup(&rec.u)?, lookup(&rec.v)?, parse_rational(&rec.w)?));
    }
    for (u, v, w) in resolved {
        graph.add_edge(u, v, w)?;
    }
    Ok(graph)
}

pub fn load_game(bytes: &[u8]) -> Result<Game, ModelError> {
    let file: GameFile = serde_json::from_slice(bytes)?;
    game_from_file(&file)
}

pub fn game_from_file(file: &GameFile) -> Result<Game, ModelError> {
    let graph = build_graph(file)?;
    match (&file.root, &file.pairs) {
        (Some(root), None) => {
            let r = graph.node(root).ok_or_else(|| ModelError::UnknownNode(root.clone()))?;
            Ok(Game::Broadcast(BroadcastGame::new(graph, r)?))
        }
        (None, Some(pairs)) => {
            let mut ids = Vec::with_capacity(pairs.len());
            for (s, t) in pairs {
                let s = graph.node(s).ok_or_else(|| ModelError::UnknownNode(s.clone()))?;
                let t = graph.node(t).ok_or_else(|| ModelError::UnknownNode(t.clone()))?;
                ids.push((s, t));
            }
            Ok(Game::General(GeneralGame::new(graph, ids)?))
        }
        _ => Err(ModelError::AmbiguousGame),
    }
}

fn edge_records(graph: &Graph) -> Vec<EdgeRecord> {
    graph
        .edges()
        .iter()
        .map(|e| EdgeRecord {
            id: e.id,
            u: graph.label(e.u).to_string(),
            v: graph.label(e.v).to_string(),
            w: format_rational(&e.weight),
        })
        .collect()
}

pub fn game_to_file(game: &Game) -> GameFile {
    let graph = game.graph();
    let (root, pairs) = match game {
        Game::Broadcast(b) => (Some(graph.label(b.root()).to_string()), None),
        Game::General(g) => (
            None,
            Some(
                g.pairs()
                    .iter()
                    .map(|&(s, t)| (graph.label(s).to_string(), graph.label(t).to_string()))
                    .collect(),
            ),
        ),
    };
    GameFile {
        nodes: graph.labels().to_vec(),
        root,
        edges: edge_records(graph),
        pairs,
    }
}

pub fn save_game(game: &Game) -> String {
    to_json_line(&game_to_file(game))
}

pub fn load_tree(bytes: &[u8], graph: &Graph, root: usize) -> Result<SpanningTree, ModelError> {
    let file: TreeFile = serde_json::from_slice(bytes)?;
    SpanningTree::new(graph, root, file.edges)
}

pub fn save_tree(tree: &SpanningTree) -> String {
    to_json_line(&TreeFile {
        edges: tree.edges().to_vec(),
    })
}

pub fn load_subsidies(bytes: &[u8], graph: &Graph) -> Result<SubsidyAssignment, ModelError> {
    let file: SubsidyFile = serde_json::from_slice(bytes)?;
    let mut values = Vec::with_capacity(file.b.len());
    for (edge, text) in &file.b {
        values.push((*edge, parse_rational(text)?));
    }
    let b = SubsidyAssignment::new(values, file.integral);
    b.validate(graph)?;
    Ok(b)
}

pub fn subsidies_to_file(b: &SubsidyAssignment) -> SubsidyFile {
    SubsidyFile {
        integral: b.is_integral(),
        b: b.iter().map(|(e, v)| (e, format_rational(v))).collect(),
    }
}

pub fn save_subsidies(b: &SubsidyAssignment) -> String {
    to_json_line(&subsidies_to_file(b))
}

/// Compact JSON followed by a newline.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("plain data serializes");
    text.push('\n');
    text
}

/// Graphviz rendering: tree edges bold, subsidized edges annotated with b.
pub fn to_dot(graph: &Graph, tree: Option<&SpanningTree>, subsidies: Option<&SubsidyAssignment>) -> String {
    let mut out = String::from("graph G {\n");
    for label in graph.labels() {
        let _ = writeln!(out, "  {label:?};");
    }
    for e in graph.edges() {
        let mut text = format!("e{} w={}", e.id, format_rational(&e.weight));
        if let Some(b) = subsidies.and_then(|s| s.get_ref(e.id)) {
            let _ = write!(text, " b={}", format_rational(b));
        }
        let style = if tree.is_some_and(|t| t.contains(e.id)) {
            ", penwidth=3"
        } else {
            ", style=dashed"
        };
        let _ = writeln!(
            out,
            "  {:?} -- {:?} [label={:?}{}];",
            graph.label(e.u),
            graph.label(e.v),
            text,
            style
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const CYCLE: &str = r#"{"nodes":["r","a","b","c"],"root":"r","edges":[{"id":0,"u":"r","v":"a","w":"1"},{"id":1,"u":"a","v":"b","w":"5/6"},{"id":2,"u":"b","v":"c","w":"1"},{"id":3,"u":"c","v":"r","w":"1"}]}"#;

    #[test]
    fn round_trip() {
        let game = load_game(CYCLE.as_bytes()).unwrap();
        assert_eq!(game.graph().edge_count(), 4);
        assert_eq!(game.graph().weight(1), &ratio(5, 6));
        assert_eq!(save_game(&game), format!("{CYCLE}\n"));
    }

    #[test]
    fn rejects_negative_weight() {
        let text = CYCLE.replace("\"5/6\"", "\"-1\"");
        let err = load_game(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("negative weight"));
    }

    #[test]
    fn subsidy_round_trip() {
        let game = load_game(CYCLE.as_bytes()).unwrap();
        let text = r#"{"integral":false,"b":{"1":"1/2","0":"1"}}"#;
        let b = load_subsidies(text.as_bytes(), game.graph()).unwrap();
        assert_eq!(save_subsidies(&b), "{\"integral\":false,\"b\":{\"0\":\"1\",\"1\":\"1/2\"}}\n");
        assert!(to_dot(game.graph(), None, Some(&b)).contains("b=1/2"));
    }
}
