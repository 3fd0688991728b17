pub mod canon;
pub mod enumerate;
pub mod error;
pub mod geometry;
pub mod landmarks;
pub mod metrics;
pub mod piece;
pub mod placement;
pub mod sat;
pub mod search;
pub mod state;
pub mod zoo;

pub use canon::{canonicalize, CanonicalKey, CanonicalSolution};
pub use enumerate::{enumerate_all_solutions, Enumeration};
pub use error::{Error, Result};
pub use geometry::{Cell, CellSet};
pub use piece::{generate_orientations, Orientation, Piece, PieceId, PieceSet};
pub use placement::{enumerate_placements, Catalog, Placement, PlacementId};
pub use state::PuzzleState;
