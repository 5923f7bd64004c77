//! Combinatorics of groups acting on CAT(0) cube complexes.
//!
//! Complexes are handled through their median 1-skeletons. Finite complexes
//! are [`CubeComplexGraph`]s; regular trees, lines of copies of a finite
//! complex and their products are generated lazily (see [`families`]) and every
//! question asked of them carries an explicit radius budget.

pub mod actions;
pub mod amplify;
pub mod build;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod families;
pub mod format;
pub mod girth;
pub mod groups;
pub mod halfspaces;
pub mod iso;
pub mod pingpong;
pub mod space;
pub mod word;

pub use complex::{Cube, CubeComplexGraph, EdgeId, Generation, GraphBuilder, MedianReport, VertexId};
pub use error::{Error, Result};
pub use halfspaces::engine::Half;
pub use space::MedianSpace;
pub use word::{Letter, Word};
