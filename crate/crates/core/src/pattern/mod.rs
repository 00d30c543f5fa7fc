//! Ordered containment, monotone paths, interval chromatic number and `H_k`.

mod containment;
mod hk;
mod monotone;

pub use containment::{
    contains_ordered, contains_ordered_through, embeddings_through, for_each_embedding, validate_witness,
    EmbeddingWitness,
};
pub use hk::{build_hk, classify_vanishing, embed_into_hk, hk_label, hk_vertex, pi_ordered, Vanishing};
pub use monotone::{find_monotone_p3, has_monotone_p3, interval_chromatic, monotone_profile, MonotoneProfile};
