//! Brute-force distance oracles, independent of the library's subtree
//! accumulation.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use difftree::{DiffusionTree, ROOT};

/// Undirected adjacency over `ROOT` plus every adopter.
fn adjacency(tree: &DiffusionTree) -> HashMap<String, Vec<String>> {
    let mut adj: HashMap<String, Vec<String>> = HashMap::new();
    adj.entry(ROOT.to_string()).or_default();
    for node in tree.nodes() {
        let parent = node.parent.clone().unwrap_or_else(|| ROOT.to_string());
        adj.entry(parent.clone()).or_default().push(node.author_id.clone());
        adj.entry(node.author_id.clone()).or_default().push(parent);
    }
    adj
}

fn bfs(adj: &HashMap<String, Vec<String>>, from: &str) -> HashMap<String, usize> {
    let mut dist = HashMap::from([(from.to_string(), 0usize)]);
    let mut queue = VecDeque::from([from.to_string()]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for w in &adj[&v] {
            if !dist.contains_key(w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w.clone());
            }
        }
    }
    dist
}

/// Sum and count of shortest-path distances over unordered node pairs.
pub fn pairwise_distances(tree: &DiffusionTree) -> (f64, f64) {
    let adj = adjacency(tree);
    let mut names: Vec<&String> = adj.keys().collect();
    names.sort();
    let mut total = 0usize;
    let mut pairs = 0usize;
    for (i, a) in names.iter().enumerate() {
        let dist = bfs(&adj, a);
        for b in &names[i + 1..] {
            total += dist[*b];
            pairs += 1;
        }
    }
    (total as f64, pairs as f64)
}

pub fn structural_virality_mean(tree: &DiffusionTree) -> Option<f64> {
    let (total, pairs) = pairwise_distances(tree);
    (pairs > 0.0).then(|| total / pairs)
}

/// For each node, walk the directed subtree below it and average the
/// depths reached; sum those averages.
pub fn cascade_virality(tree: &DiffusionTree) -> f64 {
    let mut children: HashMap<String, Vec<String>> = HashMap::new();
    for node in tree.nodes() {
        let parent = node.parent.clone().unwrap_or_else(|| ROOT.to_string());
        children.entry(parent).or_default().push(node.author_id.clone());
    }
    let mut all: Vec<String> = vec![ROOT.to_string()];
    all.extend(tree.nodes().map(|n| n.author_id.clone()));
    let mut sum = 0.0;
    for v in &all {
        let mut stack = vec![(v.clone(), 0usize)];
        let (mut total, mut count) = (0usize, 0usize);
        while let Some((u, d)) = stack.pop() {
            if d > 0 {
                total += d;
                count += 1;
            }
            for c in children.get(&u).into_iter().flatten() {
                stack.push((c.clone(), d + 1));
            }
        }
        if count > 0 {
            sum += total as f64 / count as f64;
        }
    }
    sum
}
