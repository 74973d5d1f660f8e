//! Explicit constructions: the silver-ratio family of isolated points and the
//! equivalent-representative transform with its parameter search.

mod family;
mod transform;

pub use family::{silver_family, SilverInstance};
pub use transform::{
    equivalent_transform, search_isolation_params, SearchGrid, SearchHit, TransformInstance, TAIL_LIMIT,
};
