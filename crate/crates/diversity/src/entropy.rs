//! Social entropy metrics over categorical classes.
//!
//! [`shannon_entropy`] is the base-2 information entropy of a class
//! distribution; [`simple_social_entropy`] applies it to the classes
//! formed by one categorical attribute. [`grouping_decomposition`]
//! splits the entropy of a society built from sub-societies into a
//! between-block term plus size-weighted within-block terms — the
//! recursive composition that the probability-of-difference index
//! ([`usa_today_index`]) provably lacks ([`usa_today_recursion_gap`]
//! demonstrates the gap).

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::society::{
    partition_by_attribute, partition_to_distribution, Distribution, Partition, Society,
};
use crate::{Error, Result};

/// Base-2 entropy of a class distribution, in bits.
///
/// Bounded by `0 <= bits <= log2(k)` for `k` classes.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub fn bits(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::fmt::sig9(self.0))
    }
}

/// Probability that two members drawn at random with replacement
/// differ along at least one of the chosen dimensions. Zero exactly
/// when every member is identical on every dimension.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DiversityIndex(f64);

impl DiversityIndex {
    pub fn probability(self) -> f64 {
        self.0
    }
}

/// `H = -Σ p_i · log2(p_i)`, with `0·log 0` taken as 0.
///
/// The distribution is valid by construction, so this cannot fail;
/// proportion validation lives in [`Distribution::new`].
pub fn shannon_entropy(dist: &Distribution) -> EntropyValue {
    let bits = -dist
        .proportions()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>();
    // -0.0 from a single-class distribution; normalize.
    EntropyValue(bits + 0.0)
}

/// Shannon entropy of the class proportions formed by one attribute.
pub fn simple_social_entropy(society: &Society, attribute: &str) -> Result<EntropyValue> {
    let partition = partition_by_attribute(society, attribute)?;
    let dist = partition_to_distribution(&partition, society)?;
    Ok(shannon_entropy(&dist))
}

/// Result of decomposing a society's entropy over a grouping into
/// sub-societies: the entropy between blocks plus, per block, its
/// size weight and within-block entropy.
#[derive(Debug, Clone)]
pub struct GroupingDecomposition {
    pub between: EntropyValue,
    pub within: Vec<(f64, EntropyValue)>,
}

impl GroupingDecomposition {
    /// `between + Σ w_i · within_i` — equals the whole society's
    /// simple social entropy whenever every attribute class lies
    /// entirely inside one block.
    pub fn recomposed(&self) -> f64 {
        self.between.bits()
            + self
                .within
                .iter()
                .map(|(w, h)| w * h.bits())
                .sum::<f64>()
    }
}

/// Decompose the society's entropy for `attribute` over `partition`.
pub fn grouping_decomposition(
    society: &Society,
    partition: &Partition,
    attribute: &str,
) -> Result<GroupingDecomposition> {
    if society.is_empty() {
        return Err(Error::EmptySociety);
    }
    partition.validate_over(society)?;
    let between = shannon_entropy(&partition_to_distribution(partition, society)?);
    let n = society.len() as f64;
    let mut within = Vec::with_capacity(partition.block_count());
    for index in 0..partition.block_count() {
        let block = partition.block_society(society, index)?;
        let weight = block.len() as f64 / n;
        within.push((weight, simple_social_entropy(&block, attribute)?));
    }
    Ok(GroupingDecomposition { between, within })
}

/// Joint-class key of an agent over the named attribute dimensions.
fn joint_class(agent: &crate::society::Agent, dimensions: &[&str]) -> Result<Vec<String>> {
    dimensions
        .iter()
        .map(|d| {
            agent
                .attributes
                .get(*d)
                .cloned()
                .ok_or_else(|| Error::UnknownAttribute((*d).to_owned()))
        })
        .collect()
}

/// Probability-of-difference index over the named dimensions:
/// `1 - Σ_c q_c²`, where `q_c` is the proportion of agents whose
/// values match on **all** named dimensions (joint class `c`).
/// Differing "along at least one dimension" is the complement of
/// matching on all of them.
pub fn usa_today_index(society: &Society, dimensions: &[&str]) -> Result<DiversityIndex> {
    if dimensions.is_empty() {
        return Err(Error::EmptyDimensionList);
    }
    if society.is_empty() {
        return Err(Error::EmptySociety);
    }
    let mut counts: HashMap<Vec<String>, usize> = HashMap::new();
    for agent in society.agents() {
        *counts.entry(joint_class(agent, dimensions)?).or_insert(0) += 1;
    }
    let n = society.len() as f64;
    let same: f64 = counts.values().map(|&c| (c as f64 / n).powi(2)).sum();
    Ok(DiversityIndex(1.0 - same))
}

/// The combined index of concatenated sub-societies next to the
/// size-weighted sum of their individual indices. The two differ in
/// general — the index does not compose recursively.
#[derive(Debug, Clone, Copy)]
pub struct RecursionGap {
    pub combined: DiversityIndex,
    pub weighted_sum: f64,
}

impl RecursionGap {
    pub fn gap(&self) -> f64 {
        self.combined.probability() - self.weighted_sum
    }
}

/// Evaluate both sides of the recursive-composition criterion for the
/// probability-of-difference index.
///
/// Sub-societies must share the attribute schema and feature
/// dimensions. The concatenated society re-prefixes agent ids with
/// the sub-society index so that identical inputs stay distinct.
pub fn usa_today_recursion_gap(
    sub_societies: &[&Society],
    dimensions: &[&str],
) -> Result<RecursionGap> {
    if sub_societies.is_empty() || sub_societies.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySociety);
    }
    let schema = sub_societies[0].attribute_names();
    let dims = sub_societies[0].dimension_names();
    for (i, sub) in sub_societies.iter().enumerate() {
        if sub.attribute_names() != schema || sub.dimension_names() != dims {
            return Err(Error::SchemaMismatch(format!(
                "sub-society {i} differs from sub-society 0"
            )));
        }
    }

    let mut agents = Vec::new();
    for (i, sub) in sub_societies.iter().enumerate() {
        for agent in sub.agents() {
            let mut merged = agent.clone();
            merged.id = crate::society::AgentId::new(format!("s{i}/{}", agent.id));
            agents.push(merged);
        }
    }
    let combined_society = Society::new(dims.to_vec(), agents)?;
    let combined = usa_today_index(&combined_society, dimensions)?;

    let total: f64 = sub_societies.iter().map(|s| s.len() as f64).sum();
    let weighted_sum = sub_societies
        .iter()
        .map(|s| {
            usa_today_index(s, dimensions).map(|ix| s.len() as f64 / total * ix.probability())
        })
        .sum::<Result<f64>>()?;

    Ok(RecursionGap {
        combined,
        weighted_sum,
    })
}
