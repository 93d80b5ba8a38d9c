//! Combinatorics of iterated chromatic subdivisions, standard matchings on
//! their flip graphs, and a 3-round weak symmetry breaking protocol for six
//! processes together with the one-round impossibility adversary.

pub mod error;
pub mod flip;
pub mod matching;
pub mod osp;
pub mod protocol;
pub mod subdivision;
pub mod wsb6;

pub use error::{Error, Result};
pub use osp::{Color, ColorSet, Osp, PartialOsp};
pub use subdivision::{SimplexIndex, Vertex};
