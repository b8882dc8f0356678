//! Taxonomic distance, level clustering, and hierarchic social entropy.
//!
//! Agents live in a classification space (their feature vectors);
//! [`taxonomic_distance`] is the Euclidean distance there. Sweeping a
//! clustering level `h` from 0 upward, agents start as singletons and
//! merge until a single cluster remains; the simple social entropy of
//! the cluster sizes traces a non-increasing step function of `h`
//! ([`EntropyCurve`]), and the hierarchic social entropy is the area
//! under that curve ([`hierarchic_entropy`]).
//!
//! Clustering is agglomerative with complete linkage: two clusters may
//! merge at level `h` only if their maximum inter-point distance is at
//! most `h`. Complete linkage is deterministic, has monotone merge
//! heights (so cutting the dendrogram at `h` is well defined), and
//! needs no tuning. Ties on merge height are broken by the
//! lexicographically smallest pair of cluster ids, where a cluster's
//! id is the lowest agent index it contains.

use std::io::Write;

use crate::entropy::shannon_entropy;
use crate::society::{AgentId, Distribution, Partition, Society};
use crate::{Error, Result};

/// Euclidean distance between two feature vectors.
pub fn taxonomic_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Symmetric pairwise-distance matrix over a society's agents, with
/// zero diagonal and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    ids: Vec<AgentId>,
    n: usize,
    d: Vec<f64>, // row-major n×n
}

impl DistanceMatrix {
    /// Build from explicit entries (row-major, length `n²`).
    pub fn new(ids: Vec<AgentId>, entries: Vec<f64>) -> Result<Self> {
        let n = ids.len();
        if entries.len() != n * n {
            return Err(Error::InvalidDistanceMatrix(format!(
                "expected {} entries for {n} agents, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "entry ({i},{j}) = {v} is negative or non-finite"
                    )));
                }
                if v != entries[j * n + i] {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "asymmetric at ({i},{j})"
                    )));
                }
            }
            if entries[i * n + i] != 0.0 {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "non-zero diagonal at {i}"
                )));
            }
        }
        Ok(DistanceMatrix { ids, n, d: entries })
    }

    /// Pairwise taxonomic distances of a society's feature vectors.
    pub fn from_society(society: &Society) -> Result<Self> {
        if society.is_empty() {
            return Err(Error::EmptySociety);
        }
        if society.dimension_names().is_empty() {
            return Err(Error::ZeroDimensions);
        }
        let n = society.len();
        let agents = society.agents();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = taxonomic_distance(&agents[i].features, &agents[j].features)?;
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        let ids = agents.iter().map(|a| a.id.clone()).collect();
        Ok(DistanceMatrix { ids, n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ids(&self) -> &[AgentId] {
        &self.ids
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Largest pairwise distance (0 for a single agent).
    pub fn max_distance(&self) -> f64 {
        self.d.iter().cloned().fold(0.0, f64::max)
    }

    /// Rescale so the largest pairwise distance becomes 1, putting the
    /// whole clustering sweep on `h ∈ [0, 1]`. A matrix with no
    /// positive distances is returned unchanged — there is nothing to
    /// scale.
    pub fn normalized(&self) -> DistanceMatrix {
        let max = self.max_distance();
        if max == 0.0 {
            return self.clone();
        }
        DistanceMatrix {
            ids: self.ids.clone(),
            n: self.n,
            d: self.d.iter().map(|v| v / max).collect(),
        }
    }
}

/// Convenience wrapper: [`DistanceMatrix::from_society`].
pub fn distance_matrix(society: &Society) -> Result<DistanceMatrix> {
    DistanceMatrix::from_society(society)
}

/// One agglomerative merge. Cluster ids follow the stepwise
/// convention: ids `0..n` are the original agents, and merge `k`
/// creates cluster `n + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub height: f64,
    pub left: usize,
    pub right: usize,
}

/// Complete-linkage dendrogram of a distance matrix. Merge heights
/// are non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    /// Agglomerate with complete linkage (Lance–Williams max update).
    pub fn build(dm: &DistanceMatrix) -> Dendrogram {
        let n = dm.n;
        struct Active {
            id: usize,        // stepwise cluster id
            min_agent: usize, // lowest original index, for tie-breaking
        }
        let mut active: Vec<Active> = (0..n).map(|i| Active { id: i, min_agent: i }).collect();
        // Working copy of linkage distances between active clusters,
        // indexed by position in `active`.
        let mut link: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| dm.get(i, j)).collect())
            .collect();
        let mut merges = Vec::with_capacity(n.saturating_sub(1));

        while active.len() > 1 {
            // Best pair: minimal linkage, ties by (min agent, max agent)
            // of the two clusters' lowest original indices.
            let mut best: Option<(f64, usize, usize, (usize, usize))> = None;
            for a in 0..active.len() {
                for b in (a + 1)..active.len() {
                    let d = link[a][b];
                    let lo = active[a].min_agent.min(active[b].min_agent);
                    let hi = active[a].min_agent.max(active[b].min_agent);
                    let better = match &best {
                        None => true,
                        Some((bd, .., bkey)) => d < *bd || (d == *bd && (lo, hi) < *bkey),
                    };
                    if better {
                        best = Some((d, a, b, (lo, hi)));
                    }
                }
            }
            let (height, a, b, _) = best.expect("at least one pair");
            let new_id = n + merges.len();
            merges.push(Merge {
                height,
                left: active[a].id,
                right: active[b].id,
            });

            // Merge b into a: complete linkage takes the max distance.
            #[allow(clippy::needless_range_loop)] // k indexes three rows at once
            for k in 0..active.len() {
                if k != a && k != b {
                    let d = link[a][k].max(link[b][k]);
                    link[a][k] = d;
                    link[k][a] = d;
                }
            }
            active[a] = Active {
                id: new_id,
                min_agent: active[a].min_agent.min(active[b].min_agent),
            };
            active.swap_remove(b);
            let last = active.len();
            for row in link.iter_mut() {
                row.swap(b, last);
                row.truncate(last);
            }
            link.swap(b, last);
            link.truncate(last);
        }

        Dendrogram { n, merges }
    }

    pub fn agent_count(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Blocks of original agent indices after applying every merge
    /// with height `<= h`. Blocks are ordered by lowest member index,
    /// members ascending.
    pub fn cut(&self, h: f64) -> Vec<Vec<usize>> {
        let mut members: Vec<Option<Vec<usize>>> =
            (0..self.n).map(|i| Some(vec![i])).collect();
        members.resize(self.n + self.merges.len(), None);
        for (k, merge) in self.merges.iter().enumerate() {
            if merge.height <= h {
                let left = members[merge.left].take().expect("left cluster live");
                let mut right = members[merge.right].take().expect("right cluster live");
                let mut joined = left;
                joined.append(&mut right);
                joined.sort_unstable();
                members[self.n + k] = Some(joined);
            }
        }
        let mut blocks: Vec<Vec<usize>> = members.into_iter().flatten().collect();
        blocks.sort_by_key(|b| b[0]);
        blocks
    }

    /// Export merges as CSV rows `merge_index,height,left_block,right_block`
    /// for external plotting. Block ids use the stepwise convention of
    /// [`Merge`].
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "merge_index,height,left_block,right_block")?;
        for (k, m) in self.merges.iter().enumerate() {
            writeln!(
                w,
                "{k},{},{},{}",
                crate::fmt::sig9(m.height),
                m.left,
                m.right
            )?;
        }
        Ok(())
    }
}

/// Cut the complete-linkage dendrogram of `dm` at level `h`.
pub fn cluster_at_level(dm: &DistanceMatrix, h: f64) -> Result<Partition> {
    if h < 0.0 {
        return Err(Error::InvalidDistanceMatrix(format!(
            "clustering level must be non-negative, got {h}"
        )));
    }
    let dendrogram = Dendrogram::build(dm);
    let blocks = dendrogram
        .cut(h)
        .into_iter()
        .map(|b| b.into_iter().map(|i| dm.ids[i].clone()).collect())
        .collect();
    Partition::new(blocks)
}

/// The entropy of cluster-size proportions as a step function of the
/// clustering level `h`.
///
/// `starts` is strictly increasing and begins at 0; `values[i]` holds
/// on `[starts[i], starts[i+1])` and the final value holds from the
/// last breakpoint on. The curve is non-increasing and ends at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    starts: Vec<f64>,
    values: Vec<f64>,
}

impl EntropyCurve {
    pub fn breakpoints(&self) -> &[f64] {
        &self.starts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Curve value at level `h` (`h >= 0`).
    pub fn value_at(&self, h: f64) -> f64 {
        let idx = self
            .starts
            .iter()
            .rposition(|&s| s <= h)
            .expect("starts begin at 0");
        self.values[idx]
    }

    /// Area under the curve. The final segment has value 0, so the
    /// improper integral reduces to a finite breakpoint sum.
    pub fn integral(&self) -> f64 {
        debug_assert_eq!(*self.values.last().expect("non-empty"), 0.0);
        let mut area = 0.0;
        for i in 0..self.values.len() - 1 {
            area += self.values[i] * (self.starts[i + 1] - self.starts[i]);
        }
        area
    }
}

fn cluster_size_entropy(sizes: &[usize]) -> f64 {
    let dist = Distribution::from_counts(sizes).expect("positive cluster sizes");
    shannon_entropy(&dist).bits()
}

/// Trace the entropy of cluster sizes across the whole merge sweep of
/// the complete-linkage dendrogram.
pub fn entropy_curve(dm: &DistanceMatrix) -> EntropyCurve {
    let dendrogram = Dendrogram::build(dm);
    let n = dm.n;

    // Cluster sizes evolve as merges apply; entropy is re-evaluated
    // after each distinct merge height.
    let mut sizes: Vec<usize> = vec![1; n + dendrogram.merges.len()];
    let mut alive: Vec<bool> = vec![true; n];
    alive.resize(n + dendrogram.merges.len(), false);

    let mut starts = vec![0.0];
    let mut values = vec![cluster_size_entropy(&vec![1; n])];

    let merges = dendrogram.merges();
    let mut k = 0;
    while k < merges.len() {
        let height = merges[k].height;
        // Apply every merge at this height before sampling the entropy.
        while k < merges.len() && merges[k].height == height {
            let m = &merges[k];
            alive[m.left] = false;
            alive[m.right] = false;
            let idx = n + k;
            sizes[idx] = sizes[m.left] + sizes[m.right];
            alive[idx] = true;
            k += 1;
        }
        let live: Vec<usize> = sizes
            .iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|(&s, _)| s)
            .collect();
        let h_val = cluster_size_entropy(&live);
        if height == 0.0 {
            // Zero-distance agents merge immediately; the nominal
            // all-singletons segment [0, 0) is empty.
            starts[0] = 0.0;
            values[0] = h_val;
        } else {
            starts.push(height);
            values.push(h_val);
        }
    }

    EntropyCurve { starts, values }
}

/// Hierarchic social entropy: the integral of the entropy curve over
/// all clustering levels, in bits × feature-distance. Zero exactly
/// when all agents share one feature vector.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HierarchicEntropy(f64);

impl HierarchicEntropy {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn hierarchic_entropy(dm: &DistanceMatrix) -> HierarchicEntropy {
    HierarchicEntropy(entropy_curve(dm).integral())
}
