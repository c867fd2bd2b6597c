//! Scale, depth and speed metrics over a diffusion tree, plus the two
//! virality indices.
//!
//! Everything here is generic over [`Scalar`]; use `f64` for reports and
//! [`crate::Exact`] where identities must hold without rounding.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use chrono::Datelike;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adoption::{AdopterProfile, UNKNOWN_DOMAIN};
use crate::scalar::{mean, median, ratio, Scalar};
use crate::tree::{Channel, DiffusionTree};

pub const DAYS_PER_YEAR: i64 = 365;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("negative interval time {0} days")]
    NegativeInterval(i64),
    #[error("adopter `{0}` is not in the tree")]
    NotInTree(String),
    #[error("no profile for tree node `{0}`")]
    MissingProfile(String),
    #[error("sampling fraction {0} outside (0, 1]")]
    InvalidFraction(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("min_pubs must be at least 1")]
    InvalidMinPubs,
    #[error("unknown structural virality variant `{0}` (expected mean or sum)")]
    UnknownVariant(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How pairwise distances are aggregated into structural virality.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SvVariant {
    /// Mean distance over all unordered node pairs.
    #[default]
    Mean,
    /// Sum of distances over all unordered node pairs (Wiener index).
    Sum,
}

impl fmt::Display for SvVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SvVariant::Mean => "mean",
            SvVariant::Sum => "sum",
        })
    }
}

impl FromStr for SvVariant {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(SvVariant::Mean),
            "sum" => Ok(SvVariant::Sum),
            other => Err(MetricsError::UnknownVariant(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelCount {
    pub broadcasting: usize,
    pub virality: usize,
}

impl ChannelCount {
    pub fn total(&self) -> usize {
        self.broadcasting + self.virality
    }
}

pub fn channel_counts_by_year(tree: &DiffusionTree) -> BTreeMap<i32, ChannelCount> {
    let mut counts: BTreeMap<i32, ChannelCount> = BTreeMap::new();
    for node in tree.nodes() {
        let entry = counts.entry(node.t_adopt.year()).or_default();
        match node.channel {
            Channel::Broadcasting => entry.broadcasting += 1,
            Channel::Virality => entry.virality += 1,
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivationGrowth<T> {
    /// Active members per layer (those with at least one child).
    pub active: Vec<usize>,
    pub activation_rate: Vec<T>,
    /// `None` at layer 1 and wherever the previous layer has no active
    /// members.
    pub growth_rate: Vec<Option<T>>,
}

pub fn activation_growth<T: Scalar>(tree: &DiffusionTree) -> ActivationGrowth<T> {
    let sizes = tree.layer_sizes();
    let children = tree.child_counts();
    let mut active = vec![0usize; sizes.len()];
    for node in tree.nodes() {
        if children.contains_key(node.author_id.as_str()) {
            active[node.layer - 1] += 1;
        }
    }
    let activation_rate = sizes
        .iter()
        .zip(&active)
        .map(|(&size, &act)| ratio(act, size))
        .collect();
    let growth_rate = (0..sizes.len())
        .map(|i| match i.checked_sub(1).map(|prev| active[prev]) {
            Some(prev_active) if prev_active > 0 => Some(ratio(sizes[i], prev_active)),
            _ => None,
        })
        .collect();
    ActivationGrowth {
        active,
        activation_rate,
        growth_rate,
    }
}

/// Interval time of one adopter, clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalTime {
    pub days: i64,
    /// The raw value was negative and has been clamped to 0.
    pub clamped: bool,
}

/// Days between adoption and the later of career start and the moment the
/// adopter's source became available (the innovation or cited paper for
/// broadcasting members, the parent's adoption for virality members).
pub fn interval_time(x: &AdopterProfile, tree: &DiffusionTree) -> Result<IntervalTime, MetricsError> {
    let node = tree
        .get(&x.author_id)
        .ok_or_else(|| MetricsError::NotInTree(x.author_id.clone()))?;
    let source = match &node.parent {
        None => x.t_source,
        Some(parent) => {
            tree.get(parent)
                .ok_or_else(|| MetricsError::NotInTree(parent.clone()))?
                .t_adopt
        }
    };
    let start = x.t_first_paper.max(source);
    let raw = (x.t_first_adopt - start).num_days();
    Ok(IntervalTime {
        days: raw.max(0),
        clamped: raw < 0,
    })
}

/// `1 / (days / 365 + 1)`, in `(0, 1]`.
pub fn diffusion_speed<T: Scalar>(days: i64) -> Result<T, MetricsError> {
    if days < 0 {
        return Err(MetricsError::NegativeInterval(days));
    }
    let year = T::from_days(DAYS_PER_YEAR);
    Ok(year.clone() / (T::from_days(days) + year))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSpeed<T> {
    pub layer: usize,
    pub count: usize,
    pub mean_speed: Option<T>,
    pub median_speed: Option<T>,
    pub mean_interval_days: Option<T>,
    pub median_interval_days: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedByLayer<T> {
    pub layers: Vec<LayerSpeed<T>>,
    /// Per-node `(author_id, interval, speed)` in `(layer, author_id)` order.
    pub nodes: Vec<(String, IntervalTime, T)>,
    pub anomalies: usize,
}

fn profile_index(profiles: &[AdopterProfile]) -> HashMap<&str, &AdopterProfile> {
    profiles.iter().map(|p| (p.author_id.as_str(), p)).collect()
}

pub fn speed_by_layer<T: Scalar>(
    tree: &DiffusionTree,
    profiles: &[AdopterProfile],
) -> Result<SpeedByLayer<T>, MetricsError> {
    let index = profile_index(profiles);
    let depth = tree.depth();
    let mut speeds: Vec<Vec<T>> = vec![Vec::new(); depth];
    let mut days: Vec<Vec<T>> = vec![Vec::new(); depth];
    let mut nodes = Vec::with_capacity(tree.len());
    let mut anomalies = 0;
    for node in tree.nodes_by_layer() {
        let profile = index
            .get(node.author_id.as_str())
            .ok_or_else(|| MetricsError::MissingProfile(node.author_id.clone()))?;
        let it = interval_time(profile, tree)?;
        anomalies += usize::from(it.clamped);
        let ds: T = diffusion_speed(it.days)?;
        speeds[node.layer - 1].push(ds.clone());
        days[node.layer - 1].push(T::from_days(it.days));
        nodes.push((node.author_id.clone(), it, ds));
    }
    let layers = speeds
        .iter()
        .zip(&days)
        .enumerate()
        .map(|(i, (s, d))| LayerSpeed {
            layer: i + 1,
            count: s.len(),
            mean_speed: mean(s),
            median_speed: median(s),
            mean_interval_days: mean(d),
            median_interval_days: median(d),
        })
        .collect();
    Ok(SpeedByLayer {
        layers,
        nodes,
        anomalies,
    })
}

/// Subtree sizes over the parent-index view (root included).
fn subtree_sizes(parents: &[Option<usize>]) -> Vec<u64> {
    let mut size = vec![1u64; parents.len()];
    for v in (1..parents.len()).rev() {
        if let Some(p) = parents[v] {
            size[p] += size[v];
        }
    }
    size
}

/// Sum of distances over all unordered node pairs, root included.
pub fn wiener_index(tree: &DiffusionTree) -> u64 {
    let parents = tree.topology();
    let n = parents.len() as u64;
    let size = subtree_sizes(&parents);
    // Each edge is crossed by size * (n - size) shortest paths.
    (1..parents.len()).map(|v| size[v] * (n - size[v])).sum()
}

/// Structural virality over the undirected tree including the root;
/// `None` with fewer than two nodes.
pub fn structural_virality<T: Scalar>(tree: &DiffusionTree, variant: SvVariant) -> Option<T> {
    let n = tree.len() + 1;
    if n < 2 {
        return None;
    }
    let wiener = T::from_u64(wiener_index(tree)).expect("distance sum representable");
    Some(match variant {
        SvVariant::Sum => wiener,
        SvVariant::Mean => {
            let pairs = T::from_u64((n as u64) * (n as u64 - 1) / 2).expect("pair count representable");
            wiener / pairs
        }
    })
}

/// Sum over every node with descendants (root included) of its mean
/// distance to those descendants.
pub fn cascade_virality<T: Scalar>(tree: &DiffusionTree) -> T {
    let parents = tree.topology();
    let size = subtree_sizes(&parents);
    let mut depth_sum = vec![0u64; parents.len()];
    for v in (1..parents.len()).rev() {
        if let Some(p) = parents[v] {
            depth_sum[p] += depth_sum[v] + size[v];
        }
    }
    (0..parents.len())
        .filter(|&v| size[v] > 1)
        .fold(T::zero(), |acc, v| {
            let total = T::from_u64(depth_sum[v]).expect("distance sum representable");
            let count = T::from_u64(size[v] - 1).expect("count representable");
            acc + total / count
        })
}

/// Adopters per `(layer, domain)`.
pub fn domain_by_layer(
    tree: &DiffusionTree,
    profiles: &[AdopterProfile],
) -> BTreeMap<usize, BTreeMap<String, usize>> {
    let index = profile_index(profiles);
    let mut counts: BTreeMap<usize, BTreeMap<String, usize>> = BTreeMap::new();
    for node in tree.nodes() {
        let domain = index
            .get(node.author_id.as_str())
            .map_or(UNKNOWN_DOMAIN, |p| p.domain.as_str());
        *counts
            .entry(node.layer)
            .or_default()
            .entry(domain.to_string())
            .or_default() += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelRatios<T> {
    pub ratios: Vec<T>,
    pub mean: Option<T>,
    pub median: Option<T>,
}

impl<T: Scalar> ChannelRatios<T> {
    fn from_ratios(ratios: Vec<T>) -> Self {
        Self {
            mean: mean(&ratios),
            median: median(&ratios),
            ratios,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatAdoption<T> {
    pub min_pubs: usize,
    pub broadcasting: ChannelRatios<T>,
    pub virality: ChannelRatios<T>,
}

/// Share of direct innovation citations among the publications of every
/// adopter with more than `min_pubs` papers, split by channel. Ratios are
/// listed in ascending author id order.
pub fn repeat_adoption<T: Scalar>(
    profiles: &[AdopterProfile],
    tree: &DiffusionTree,
    min_pubs: usize,
) -> Result<RepeatAdoption<T>, MetricsError> {
    if min_pubs < 1 {
        return Err(MetricsError::InvalidMinPubs);
    }
    let mut sorted: Vec<&AdopterProfile> = profiles.iter().collect();
    sorted.sort_by(|a, b| a.author_id.cmp(&b.author_id));
    let mut broadcasting = Vec::new();
    let mut virality = Vec::new();
    for p in sorted.into_iter().filter(|p| p.n_publications > min_pubs) {
        let Some(node) = tree.get(&p.author_id) else {
            continue;
        };
        let r = ratio(p.n_direct_citations, p.n_publications);
        match node.channel {
            Channel::Broadcasting => broadcasting.push(r),
            Channel::Virality => virality.push(r),
        }
    }
    Ok(RepeatAdoption {
        min_pubs,
        broadcasting: ChannelRatios::from_ratios(broadcasting),
        virality: ChannelRatios::from_ratios(virality),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub min_pubs: usize,
    pub sv_variant: SvVariant,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            min_pubs: 1,
            sv_variant: SvVariant::Mean,
        }
    }
}

/// Every metric for one tree. Serializes with a fixed key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport<T> {
    pub root: String,
    pub node_count: usize,
    pub layer_sizes: Vec<usize>,
    pub depth: usize,
    pub broadcast_share: Option<T>,
    pub channel_by_year: BTreeMap<i32, ChannelCount>,
    pub active_members: Vec<usize>,
    pub activation_rate: Vec<T>,
    pub growth_rate: Vec<Option<T>>,
    pub speed_by_layer: Vec<LayerSpeed<T>>,
    pub structural_virality_variant: SvVariant,
    pub structural_virality: Option<T>,
    pub cascade_virality: T,
    pub domain_by_layer: BTreeMap<usize, BTreeMap<String, usize>>,
    pub repeat_adoption: RepeatAdoption<T>,
    /// Interval times clamped from negative values.
    pub anomalies: usize,
}

pub fn compute_report<T: Scalar>(
    tree: &DiffusionTree,
    profiles: &[AdopterProfile],
    options: &ReportOptions,
) -> Result<MetricsReport<T>, MetricsError> {
    let layer_sizes = tree.layer_sizes();
    let growth = activation_growth::<T>(tree);
    let speed = speed_by_layer::<T>(tree, profiles)?;
    Ok(MetricsReport {
        root: tree.root().to_string(),
        node_count: tree.len(),
        depth: layer_sizes.len(),
        broadcast_share: layer_sizes.first().map(|&l1| ratio(l1, tree.len())),
        layer_sizes,
        channel_by_year: channel_counts_by_year(tree),
        active_members: growth.active,
        activation_rate: growth.activation_rate,
        growth_rate: growth.growth_rate,
        speed_by_layer: speed.layers,
        structural_virality_variant: options.sv_variant,
        structural_virality: structural_virality(tree, options.sv_variant),
        cascade_virality: cascade_virality(tree),
        domain_by_layer: domain_by_layer(tree, profiles),
        repeat_adoption: repeat_adoption(profiles, tree, options.min_pubs)?,
        anomalies: speed.anomalies,
    })
}

fn opt_f64<T: Scalar>(v: &Option<T>) -> Option<f64> {
    v.as_ref().map(Scalar::to_f64_lossy)
}

/// `layer,size,active,activation_rate,growth_rate,speed_count,speed_mean,
/// speed_median,interval_mean_days,interval_median_days`; absent values are
/// empty cells.
pub fn write_layers_csv<T: Scalar, W: Write>(report: &MetricsReport<T>, writer: W) -> Result<(), MetricsError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "layer",
        "size",
        "active",
        "activation_rate",
        "growth_rate",
        "speed_count",
        "speed_mean",
        "speed_median",
        "interval_mean_days",
        "interval_median_days",
    ])?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (i, size) in report.layer_sizes.iter().enumerate() {
        let speed = &report.speed_by_layer[i];
        wtr.write_record([
            (i + 1).to_string(),
            size.to_string(),
            report.active_members[i].to_string(),
            report.activation_rate[i].to_f64_lossy().to_string(),
            cell(opt_f64(&report.growth_rate[i])),
            speed.count.to_string(),
            cell(opt_f64(&speed.mean_speed)),
            cell(opt_f64(&speed.median_speed)),
            cell(opt_f64(&speed.mean_interval_days)),
            cell(opt_f64(&speed.median_interval_days)),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// `year,broadcasting,virality`.
pub fn write_years_csv<T, W: Write>(report: &MetricsReport<T>, writer: W) -> Result<(), MetricsError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["year", "broadcasting", "virality"])?;
    for (year, c) in &report.channel_by_year {
        wtr.write_record([year.to_string(), c.broadcasting.to_string(), c.virality.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// `layer,domain,count`.
pub fn write_domains_csv<T, W: Write>(report: &MetricsReport<T>, writer: W) -> Result<(), MetricsError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["layer", "domain", "count"])?;
    for (layer, domains) in &report.domain_by_layer {
        for (domain, count) in domains {
            wtr.write_record([layer.to_string(), domain.clone(), count.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}
