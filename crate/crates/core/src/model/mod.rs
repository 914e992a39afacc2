//! The planted model: latent hypergraph, its projection, the noisy
//! observation and the Erdős–Rényi null.

mod graph;
mod hypergraph;
pub mod io;
mod params;
mod sample;

pub use graph::{Edge, Graph};
pub use hypergraph::{Hyperedge, Hypergraph};
pub use params::{resolve_rates, ModelParams, NoiseOrder, Prefactors, MAX_ARITY};
pub use sample::{
    apply_noise, edge_multiplicity_histogram, project, sample_hypergraph, sample_null,
    MAX_SAMPLED_HYPEREDGES,
};

/// One draw `(H, P(H), A)` from the planted model.
#[derive(Debug, Clone)]
pub struct PlantedSample {
    pub hypergraph: Hypergraph,
    pub projection: Graph,
    pub observation: Graph,
}

/// Samples `H` from `hypergraph_seed` and the channel noise from `noise_seed`.
pub fn sample_planted(
    params: &ModelParams,
    hypergraph_seed: u64,
    noise_seed: u64,
) -> crate::Result<PlantedSample> {
    let hypergraph = sample_hypergraph(params, hypergraph_seed)?;
    let projection = project(&hypergraph);
    let observation = apply_noise(&projection, params.p, params.q, noise_seed);
    Ok(PlantedSample {
        hypergraph,
        projection,
        observation,
    })
}
