//! Exact computations in groups of vertex-oriented unitrivalent diagrams.
//!
//! The crate covers four layers:
//!
//! * [`diagram`] and [`canonical`]: unitrivalent graphs with cyclic vertex
//!   orientations, their degrees, and antisymmetry (AS) canonical forms.
//! * [`element`], [`spaces`] and [`linalg`]: integer linear combinations of
//!   canonical diagrams, IHX relators, ranks and torsion.
//! * [`skeleton`]: trees attached at ordered sites of a skeleton and the
//!   pull-off map to labeled diagrams.
//! * [`grope`], [`witness`] and [`tower`]: combinatorial grope cobordisms and
//!   Whitney towers with the maps into the diagram groups.
//!
//! [`notation`] and [`io`] hold the text and JSON formats used by the `jdc`
//! command line tool.

pub mod canonical;
pub mod diagram;
pub mod element;
pub mod error;
pub mod grope;
pub mod io;
pub mod limits;
pub mod linalg;
pub mod notation;
pub mod samples;
pub mod selfcheck;
pub mod skeleton;
pub mod spaces;
pub mod tower;
pub mod tree;
pub mod witness;

pub use canonical::{canonicalize, CanonicalDiagram, Parity};
pub use diagram::{Diagram, GeometricForest, HalfEdge, Label, Sign};
pub use element::{AttachedElement, Element, Generator, LinearCombination};
pub use error::{Error, Result};
pub use grope::{GropeEncoding, GropeTree, LinkTable};
pub use skeleton::{AttachedTree, CanonicalAttached, Skeleton};
pub use spaces::{Grading, LabelMode, RelationSet, SpaceReport};
pub use tower::{Bracket, TowerEncoding, UnpairedPoint};
pub use tree::RootedTree;
