//! Agent societies: categorical attributes, numeric feature vectors,
//! and partitions into classes.
//!
//! A [`Society`] is an ordered collection of [`Agent`]s that all share
//! the same attribute names and the same feature dimensionality. The
//! entropy metrics consume class [`Partition`]s and their proportion
//! [`Distribution`]s; the taxonomy metrics consume the feature vectors.
//! Everything is an immutable value after construction, so societies
//! can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tolerance on `sum(proportions) == 1` when validating a distribution.
pub const PROPORTION_SUM_TOLERANCE: f64 = 1e-12;

/// Opaque identifier of an agent, unique within a society.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(id: impl Into<String>) -> Self {
        AgentId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId(s.to_owned())
    }
}

/// One member of a society: categorical attributes plus a dense
/// feature vector positioning the agent in classification space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Agent {
    pub id: AgentId,
    #[serde(default)]
    pub attributes: BTreeMap<String, String>,
    #[serde(default)]
    pub features: Vec<f64>,
}

impl Agent {
    pub fn new(
        id: impl Into<String>,
        attributes: impl IntoIterator<Item = (impl Into<String>, impl Into<String>)>,
        features: impl Into<Vec<f64>>,
    ) -> Self {
        Agent {
            id: AgentId::new(id),
            attributes: attributes
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
            features: features.into(),
        }
    }
}

/// An ordered agent society with a fixed feature schema.
///
/// Invariants enforced at construction: agent ids are pairwise
/// distinct, every agent carries the same attribute names, feature
/// vectors all have `dimension_names.len()` finite entries. Agent
/// order is preserved from input so that derived output is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Society {
    dimension_names: Vec<String>,
    agents: Vec<Agent>,
}

/// Raw mirror of the society file format, validated into [`Society`].
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SocietyFile {
    #[serde(default)]
    dimension_names: Vec<String>,
    agents: Vec<Agent>,
}

impl Society {
    pub fn new(
        dimension_names: impl Into<Vec<String>>,
        agents: impl Into<Vec<Agent>>,
    ) -> Result<Self> {
        let dimension_names = dimension_names.into();
        let agents = agents.into();

        let mut seen = HashSet::new();
        let schema: Option<BTreeSet<&String>> =
            agents.first().map(|a| a.attributes.keys().collect());
        for agent in &agents {
            if !seen.insert(agent.id.clone()) {
                return Err(Error::DuplicateAgentId(agent.id.to_string()));
            }
            if agent.features.len() != dimension_names.len() {
                return Err(Error::FeatureLengthMismatch {
                    agent: agent.id.to_string(),
                    expected: dimension_names.len(),
                    found: agent.features.len(),
                });
            }
            if agent.features.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteFeature(agent.id.to_string()));
            }
            let keys: BTreeSet<&String> = agent.attributes.keys().collect();
            if Some(&keys) != schema.as_ref() {
                let expected: Vec<_> = schema
                    .as_ref()
                    .map(|s| s.iter().map(|k| k.as_str()).collect())
                    .unwrap_or_default();
                return Err(Error::AttributeSchemaMismatch {
                    agent: agent.id.to_string(),
                    detail: format!("expected attributes {:?}", expected),
                });
            }
        }

        Ok(Society {
            dimension_names,
            agents,
        })
    }

    pub fn dimension_names(&self) -> &[String] {
        &self.dimension_names
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn agent(&self, id: &AgentId) -> Option<&Agent> {
        self.agents.iter().find(|a| &a.id == id)
    }

    /// Attribute names shared by every agent (empty for an empty society).
    pub fn attribute_names(&self) -> Vec<&str> {
        self.agents
            .first()
            .map(|a| a.attributes.keys().map(|k| k.as_str()).collect())
            .unwrap_or_default()
    }

    /// Parse and strictly validate a society document (JSON syntax).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: SocietyFile = serde_json::from_str(text)?;
        Society::new(raw.dimension_names, raw.agents)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Society::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("society serializes")
    }
}

/// A partition of a society's agents into non-empty, disjoint blocks
/// whose union is the whole agent set. Blocks may carry class labels
/// (e.g. the attribute value that formed them).
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<Vec<AgentId>>,
    labels: Option<Vec<String>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<AgentId>>) -> Result<Self> {
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        let mut seen = HashSet::new();
        for id in blocks.iter().flatten() {
            if !seen.insert(id) {
                return Err(Error::InvalidPartition(format!(
                    "agent `{id}` appears in more than one block"
                )));
            }
        }
        Ok(Partition {
            blocks,
            labels: None,
        })
    }

    pub fn with_labels(blocks: Vec<Vec<AgentId>>, labels: Vec<String>) -> Result<Self> {
        if blocks.len() != labels.len() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks but {} labels",
                blocks.len(),
                labels.len()
            )));
        }
        let mut p = Partition::new(blocks)?;
        p.labels = Some(labels);
        Ok(p)
    }

    pub fn blocks(&self) -> &[Vec<AgentId>] {
        &self.blocks
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Check that the partition covers exactly the society's agent set.
    pub fn validate_over(&self, society: &Society) -> Result<()> {
        let covered: HashSet<&AgentId> = self.blocks.iter().flatten().collect();
        if covered.len() != society.len() || !society.agents().iter().all(|a| covered.contains(&a.id))
        {
            return Err(Error::InvalidPartition(
                "blocks do not cover exactly the society's agents".into(),
            ));
        }
        Ok(())
    }

    /// The agents of `society` restricted to block `index`, preserving
    /// society order.
    pub fn block_society(&self, society: &Society, index: usize) -> Result<Society> {
        let members: HashSet<&AgentId> = self.blocks[index].iter().collect();
        let agents: Vec<Agent> = society
            .agents()
            .iter()
            .filter(|a| members.contains(&a.id))
            .cloned()
            .collect();
        Society::new(society.dimension_names().to_vec(), agents)
    }
}

/// A normalized proportion vector over classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    proportions: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Distribution {
    /// Validate proportions: non-negative and summing to 1 within
    /// [`PROPORTION_SUM_TOLERANCE`].
    pub fn new(proportions: Vec<f64>) -> Result<Self> {
        if proportions.is_empty() {
            return Err(Error::InvalidDistribution("no classes".into()));
        }
        if let Some(p) = proportions.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "proportion {p} is negative or non-finite"
            )));
        }
        let sum: f64 = proportions.iter().sum();
        if (sum - 1.0).abs() > PROPORTION_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "proportions sum to {sum}, expected 1"
            )));
        }
        Ok(Distribution {
            proportions,
            labels: None,
        })
    }

    pub fn with_labels(proportions: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if proportions.len() != labels.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} proportions but {} labels",
                proportions.len(),
                labels.len()
            )));
        }
        let mut d = Distribution::new(proportions)?;
        d.labels = Some(labels);
        Ok(d)
    }

    /// Build proportions `count_i / total` from positive class counts.
    pub fn from_counts(counts: &[usize]) -> Result<Self> {
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("all class counts are zero".into()));
        }
        Distribution::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    pub fn proportions(&self) -> &[f64] {
        &self.proportions
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// Group agents into blocks by the exact value of one categorical
/// attribute. Block order follows the first appearance of each value
/// in society order, so the result is deterministic.
pub fn partition_by_attribute(society: &Society, attribute: &str) -> Result<Partition> {
    if society.is_empty() {
        return Err(Error::EmptySociety);
    }
    let mut order: Vec<String> = Vec::new();
    let mut blocks: HashMap<String, Vec<AgentId>> = HashMap::new();
    for agent in society.agents() {
        let value = agent
            .attributes
            .get(attribute)
            .ok_or_else(|| Error::UnknownAttribute(attribute.to_owned()))?;
        if !blocks.contains_key(value) {
            order.push(value.clone());
        }
        blocks
            .entry(value.clone())
            .or_default()
            .push(agent.id.clone());
    }
    let labels = order.clone();
    let blocks = order
        .into_iter()
        .map(|v| blocks.remove(&v).expect("value recorded"))
        .collect();
    Partition::with_labels(blocks, labels)
}

/// Turn a partition into the distribution of block-size proportions,
/// `p_i = |block_i| / |society|`, in block order.
pub fn partition_to_distribution(partition: &Partition, society: &Society) -> Result<Distribution> {
    if society.is_empty() {
        return Err(Error::EmptySociety);
    }
    partition.validate_over(society)?;
    let n = society.len() as f64;
    let proportions = partition
        .blocks()
        .iter()
        .map(|b| b.len() as f64 / n)
        .collect();
    match partition.labels() {
        Some(labels) => Distribution::with_labels(proportions, labels.to_vec()),
        None => Distribution::new(proportions),
    }
}
