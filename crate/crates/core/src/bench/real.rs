//! Community recovery on user-supplied graphs with possibly unbalanced
//! ground-truth communities.

use std::path::Path;
use std::time::Instant;

use super::io::{parse_graph, parse_labels, GraphFormat};
use crate::adjacency::SparseAdjacency;
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::eval::align;
use crate::init::random_init;
use crate::ppm::{run, RunConfig, Stopping};
use crate::rng::derive_seed;

#[derive(Debug, Clone)]
pub struct RealGraph {
    pub name: String,
    pub adjacency: SparseAdjacency,
    /// Ground truth; its group sizes are the capacities used for recovery.
    pub labels: Option<Clustering>,
}

impl RealGraph {
    pub fn capacities(&self) -> Option<&[usize]> {
        self.labels.as_ref().map(Clustering::capacities)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub format: GraphFormat,
    pub keep_self_loops: bool,
    /// Vertices in communities smaller than this are removed, along with their
    /// edges. Zero keeps everything.
    pub min_community_size: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            format: GraphFormat::EdgeList,
            keep_self_loops: false,
            min_community_size: 0,
        }
    }
}

/// Builds a [`RealGraph`] from file contents.
pub fn build_graph(
    name: &str,
    graph_text: &str,
    labels_text: Option<&str>,
    options: &LoadOptions,
) -> Result<RealGraph> {
    let raw = parse_graph(graph_text, options.format)?;
    let adjacency = raw.to_adjacency(options.keep_self_loops)?;
    let Some(labels_text) = labels_text else {
        return Ok(RealGraph {
            name: name.to_string(),
            adjacency,
            labels: None,
        });
    };

    let parsed = parse_labels(labels_text)?;
    if parsed.labels.len() != adjacency.n() {
        return Err(Error::dim(format!(
            "label file has {} entries, graph has {} vertices",
            parsed.labels.len(),
            adjacency.n()
        )));
    }
    let labels = Clustering::from_labels(parsed.labels, parsed.k.max(1))?;
    let (adjacency, labels) =
        drop_small_communities(&adjacency, &labels, options.min_community_size)?;
    Ok(RealGraph {
        name: name.to_string(),
        adjacency,
        labels: Some(labels),
    })
}

/// Removes vertices whose community has fewer than `min_size` members and
/// renumbers the surviving communities in order.
pub fn drop_small_communities(
    a: &SparseAdjacency,
    labels: &Clustering,
    min_size: usize,
) -> Result<(SparseAdjacency, Clustering)> {
    let sizes = labels.capacities();
    let mut remap = vec![u32::MAX; sizes.len()];
    let mut next = 0u32;
    for (k, &s) in sizes.iter().enumerate() {
        if s >= min_size && s > 0 {
            remap[k] = next;
            next += 1;
        }
    }
    if next == 0 {
        return Err(Error::Input(format!(
            "no community has at least {min_size} members"
        )));
    }
    let keep: Vec<usize> = (0..labels.n())
        .filter(|&i| remap[labels.label(i)] != u32::MAX)
        .collect();
    let new_labels = keep.iter().map(|&i| remap[labels.label(i)]).collect();
    Ok((
        a.induced(&keep),
        Clustering::from_labels(new_labels, next as usize)?,
    ))
}

/// Reads a graph (and optional label file) from disk.
pub fn load_graph(
    path: &Path,
    labels_path: Option<&Path>,
    options: &LoadOptions,
) -> Result<RealGraph> {
    let graph_text = std::fs::read_to_string(path)?;
    let labels_text = labels_path.map(std::fs::read_to_string).transpose()?;
    let name = path
        .file_stem()
        .map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());
    build_graph(&name, &graph_text, labels_text.as_deref(), options)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealRunOptions {
    pub repeats: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Needed when the graph has no labels.
    pub capacities: Option<Vec<usize>>,
    /// Certify every projection of every run.
    pub verify: bool,
}

impl Default for RealRunOptions {
    fn default() -> Self {
        RealRunOptions {
            repeats: 10,
            seed: 0,
            max_iterations: 1000,
            capacities: None,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealRun {
    pub objective: f64,
    pub iterations: usize,
    pub mismatches: Option<usize>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealSummary {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub capacities: Vec<usize>,
    /// Index into `runs` of the run with the largest objective.
    pub best: usize,
    pub best_clustering: Clustering,
    pub runs: Vec<RealRun>,
    pub total_wall_time: f64,
}

impl RealSummary {
    pub fn best_run(&self) -> &RealRun {
        &self.runs[self.best]
    }
}

/// Runs the method from `repeats` random starts with the graph's community
/// sizes as capacities, keeping the run with the largest `<A H, H>`.
pub fn run_real(graph: &RealGraph, options: &RealRunOptions) -> Result<RealSummary> {
    let capacities: Vec<usize> = match (&options.capacities, graph.capacities()) {
        (Some(c), _) => c.clone(),
        (None, Some(c)) => c.to_vec(),
        (None, None) => {
            return Err(Error::param(
                "graph has no labels; community sizes must be given explicitly",
            ))
        }
    };
    if options.repeats == 0 {
        return Err(Error::param("need at least one repeat"));
    }
    let n = graph.adjacency.n();
    let k = capacities.len();
    let mut config = RunConfig::for_n(n)
        .with_max_iterations(options.max_iterations)
        .with_stopping(Stopping::cycle());
    if options.verify {
        config = config.verified();
    }

    let start = Instant::now();
    let mut runs = Vec::with_capacity(options.repeats);
    let mut best: Option<(usize, Clustering)> = None;
    for r in 0..options.repeats {
        let t0 = Instant::now();
        let h0 = random_init(n, k, &capacities, derive_seed(options.seed, &[r as u64]))?;
        let res = run(&graph.adjacency, &h0, &capacities, &config, None)?;
        let mismatches = graph
            .labels
            .as_ref()
            .map(|t| align(&res.final_clustering, t).map(|a| a.mismatches))
            .transpose()?;
        runs.push(RealRun {
            objective: res.objective,
            iterations: res.iterations_used,
            mismatches,
            wall_time: t0.elapsed().as_secs_f64(),
        });
        let better = best
            .as_ref()
            .is_none_or(|(b, _)| res.objective > runs[*b].objective);
        if better {
            best = Some((r, res.final_clustering));
        }
    }
    let (best, best_clustering) = best.expect("at least one run");
    Ok(RealSummary {
        name: graph.name.clone(),
        n,
        k,
        capacities,
        best,
        best_clustering,
        runs,
        total_wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbm::{block_truth, sample_graph, SbmParams};

    #[test]
    fn loads_and_filters_small_communities() {
        let edges = "1 2\n2 3\n3 1\n4 5\n5 6\n6 4\n6 7\n";
        let labels = "1\n1\n1\n2\n2\n2\n3\n";
        let options = LoadOptions {
            min_community_size: 2,
            ..LoadOptions::default()
        };
        let g = build_graph("toy", edges, Some(labels), &options).unwrap();
        assert_eq!(g.adjacency.n(), 6);
        assert_eq!(g.capacities().unwrap(), &[3, 3]);
        assert_eq!(g.adjacency.nnz(), 12);
    }

    #[test]
    fn label_size_mismatch() {
        assert!(build_graph("x", "1 2\n2 3\n", Some("0\n1\n"), &LoadOptions::default()).is_err());
    }

    #[test]
    fn perfect_blocks_are_recovered() {
        let truth = Clustering::from_labels(vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 2, 2], 3).unwrap();
        let mut edges = Vec::new();
        for i in 0..12 {
            for j in i + 1..12 {
                if truth.label(i) == truth.label(j) {
                    edges.push((i, j));
                }
            }
        }
        let g = RealGraph {
            name: "blocks".into(),
            adjacency: SparseAdjacency::from_edges(12, edges).unwrap(),
            labels: Some(truth),
        };
        let summary = run_real(&g, &RealRunOptions::default()).unwrap();
        assert_eq!(summary.runs.len(), 10);
        assert_eq!(summary.best_run().mismatches, Some(0));
    }

    #[test]
    fn unlabelled_graph_needs_capacities() {
        let truth = block_truth(20, 2).unwrap();
        let params = SbmParams::from_probabilities(20, 2, 0.9, 0.05).unwrap();
        let a = sample_graph(&params, &truth, 1).unwrap();
        let g = RealGraph {
            name: "u".into(),
            adjacency: a,
            labels: None,
        };
        assert!(run_real(&g, &RealRunOptions::default()).is_err());
        let options = RealRunOptions {
            capacities: Some(vec![10, 10]),
            repeats: 3,
            ..RealRunOptions::default()
        };
        let summary = run_real(&g, &options).unwrap();
        assert!(summary.runs.iter().all(|r| r.mismatches.is_none()));
    }
}
