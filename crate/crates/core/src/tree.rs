//! Diffusion tree construction and export.
//!
//! Every adopter gets exactly one parent: the earliest-adopting coauthor
//! whose adoption is strictly earlier than theirs (ties by smaller id), or
//! the innovation root when no such coauthor exists.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adoption::AdopterProfile;

/// Spelling of the root in edge lists and DOT output.
pub const ROOT: &str = "ROOT";

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("node `{0}` appears more than once")]
    DuplicateNode(String),
    #[error("node `{child}` references unknown parent `{parent}`")]
    UnknownParent { child: String, parent: String },
    #[error("node `{0}`: channel, parent and layer disagree")]
    ChannelMismatch(String),
    #[error("node `{child}`: layer {layer} is not one below its parent")]
    LayerMismatch { child: String, layer: usize },
    #[error("node `{0}` does not adopt strictly after its parent")]
    NotLater(String),
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Broadcasting,
    Virality,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Broadcasting => "broadcasting",
            Channel::Virality => "virality",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Channel {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "broadcasting" => Ok(Channel::Broadcasting),
            "virality" => Ok(Channel::Virality),
            other => Err(TreeError::UnknownChannel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionNode {
    pub author_id: String,
    /// `None` is the innovation root.
    pub parent: Option<String>,
    pub channel: Channel,
    /// 1 for direct children of the root.
    pub layer: usize,
    pub t_adopt: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionTree {
    root: String,
    nodes: BTreeMap<String, DiffusionNode>,
}

impl DiffusionTree {
    /// Assembles a tree from explicit nodes, checking every structural
    /// invariant.
    pub fn from_nodes<I>(root: impl Into<String>, nodes: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = DiffusionNode>,
    {
        let mut map = BTreeMap::new();
        for node in nodes {
            if map.contains_key(&node.author_id) {
                return Err(TreeError::DuplicateNode(node.author_id));
            }
            map.insert(node.author_id.clone(), node);
        }
        let tree = Self {
            root: root.into(),
            nodes: map,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        for node in self.nodes.values() {
            let id = &node.author_id;
            match &node.parent {
                None => {
                    if node.channel != Channel::Broadcasting || node.layer != 1 {
                        return Err(TreeError::ChannelMismatch(id.clone()));
                    }
                }
                Some(parent_id) => {
                    let parent = self.nodes.get(parent_id).ok_or_else(|| TreeError::UnknownParent {
                        child: id.clone(),
                        parent: parent_id.clone(),
                    })?;
                    if node.channel != Channel::Virality || node.layer == 1 {
                        return Err(TreeError::ChannelMismatch(id.clone()));
                    }
                    if node.layer != parent.layer + 1 {
                        return Err(TreeError::LayerMismatch {
                            child: id.clone(),
                            layer: node.layer,
                        });
                    }
                    if node.t_adopt <= parent.t_adopt {
                        return Err(TreeError::NotLater(id.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, author_id: &str) -> Option<&DiffusionNode> {
        self.nodes.get(author_id)
    }

    /// Nodes in ascending author id order.
    pub fn nodes(&self) -> impl Iterator<Item = &DiffusionNode> {
        self.nodes.values()
    }

    /// Nodes sorted by `(layer, author_id)`; parents always precede their
    /// children.
    pub fn nodes_by_layer(&self) -> Vec<&DiffusionNode> {
        let mut nodes: Vec<_> = self.nodes.values().collect();
        nodes.sort_by(|a, b| (a.layer, &a.author_id).cmp(&(b.layer, &b.author_id)));
        nodes
    }

    pub fn depth(&self) -> usize {
        self.nodes.values().map(|n| n.layer).max().unwrap_or(0)
    }

    /// Entry `i` is the size of layer `i + 1`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.depth()];
        for node in self.nodes.values() {
            sizes[node.layer - 1] += 1;
        }
        sizes
    }

    /// Number of children per adopter (adopters without children absent).
    pub fn child_counts(&self) -> HashMap<&str, usize> {
        let mut counts = HashMap::new();
        for node in self.nodes.values() {
            if let Some(parent) = &node.parent {
                *counts.entry(parent.as_str()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Parent-index view: index 0 is the root, the rest follow
    /// [`Self::nodes_by_layer`].
    pub(crate) fn topology(&self) -> Vec<Option<usize>> {
        let ordered = self.nodes_by_layer();
        let index: HashMap<&str, usize> = ordered
            .iter()
            .enumerate()
            .map(|(i, n)| (n.author_id.as_str(), i + 1))
            .collect();
        std::iter::once(None)
            .chain(ordered.iter().map(|n| {
                Some(n.parent.as_deref().map_or(0, |p| index[p]))
            }))
            .collect()
    }
}

/// Builds the diffusion tree. The result does not depend on the order of
/// `profiles`.
pub fn build_tree(profiles: &[AdopterProfile], innovation_id: &str) -> DiffusionTree {
    let adopt: HashMap<&str, NaiveDate> = profiles
        .iter()
        .map(|p| (p.author_id.as_str(), p.t_first_adopt))
        .collect();

    let parents: HashMap<&str, Option<&str>> = profiles
        .iter()
        .map(|p| {
            let parent = p
                .coauthors
                .iter()
                .filter_map(|c| adopt.get(c.as_str()).map(|t| (*t, c.as_str())))
                .filter(|(t, _)| *t < p.t_first_adopt)
                .min()
                .map(|(_, id)| id);
            (p.author_id.as_str(), parent)
        })
        .collect();

    // Parents adopt strictly earlier, so date order visits them first.
    let mut order: Vec<&AdopterProfile> = profiles.iter().collect();
    order.sort_by(|a, b| (a.t_first_adopt, &a.author_id).cmp(&(b.t_first_adopt, &b.author_id)));
    let mut nodes: BTreeMap<String, DiffusionNode> = BTreeMap::new();
    for p in order {
        let parent = parents[p.author_id.as_str()];
        let (channel, layer) = match parent {
            None => (Channel::Broadcasting, 1),
            Some(parent_id) => (Channel::Virality, nodes[parent_id].layer + 1),
        };
        nodes.insert(
            p.author_id.clone(),
            DiffusionNode {
                author_id: p.author_id.clone(),
                parent: parent.map(str::to_string),
                channel,
                layer,
                t_adopt: p.t_first_adopt,
            },
        );
    }
    DiffusionTree {
        root: innovation_id.to_string(),
        nodes,
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT rendering: nodes sorted by `(layer, author_id)`, one
/// edge per adopter from its parent.
pub fn export_dot(tree: &DiffusionTree) -> String {
    let mut out = String::new();
    let ordered = tree.nodes_by_layer();
    writeln!(out, "digraph diffusion {{").unwrap();
    writeln!(
        out,
        "  {} [channel=\"root\", layer=0, label={}];",
        dot_quote(ROOT),
        dot_quote(tree.root())
    )
    .unwrap();
    for node in &ordered {
        writeln!(
            out,
            "  {} [channel=\"{}\", layer={}, t_adopt=\"{}\"];",
            dot_quote(&node.author_id),
            node.channel,
            node.layer,
            node.t_adopt
        )
        .unwrap();
    }
    for node in &ordered {
        let parent = node.parent.as_deref().unwrap_or(ROOT);
        writeln!(out, "  {} -> {};", dot_quote(parent), dot_quote(&node.author_id)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRow {
    child_id: String,
    parent_id: String,
    channel: Channel,
    layer: usize,
    t_adopt: NaiveDate,
}

/// Edge list `child_id,parent_id,channel,layer,t_adopt`, sorted by
/// `(layer, child_id)`, root spelled `ROOT`.
pub fn write_edges_csv<W: Write>(tree: &DiffusionTree, writer: W) -> Result<(), TreeError> {
    let mut wtr = csv::Writer::from_writer(writer);
    if tree.is_empty() {
        wtr.write_record(["child_id", "parent_id", "channel", "layer", "t_adopt"])?;
    }
    for node in tree.nodes_by_layer() {
        wtr.serialize(EdgeRow {
            child_id: node.author_id.clone(),
            parent_id: node.parent.clone().unwrap_or_else(|| ROOT.to_string()),
            channel: node.channel,
            layer: node.layer,
            t_adopt: node.t_adopt,
        })?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_edges_csv<R: Read>(reader: R, root: &str) -> Result<DiffusionTree, TreeError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut nodes = Vec::new();
    for row in rdr.deserialize::<EdgeRow>() {
        let row = row?;
        nodes.push(DiffusionNode {
            parent: (row.parent_id != ROOT).then_some(row.parent_id),
            author_id: row.child_id,
            channel: row.channel,
            layer: row.layer,
            t_adopt: row.t_adopt,
        });
    }
    DiffusionTree::from_nodes(root, nodes)
}
