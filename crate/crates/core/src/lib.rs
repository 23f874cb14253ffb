//! Exclusivity graphs of correlation experiments and the three bounds on a
//! positive combination of event probabilities: the weighted independence
//! number (classical), the Lovász number (quantum) and the fractional packing
//! number (exclusivity principle), together with membership tests for the
//! corresponding bodies STAB(G) ⊆ TH(G) ⊆ QSTAB(G).

pub mod bounds;
pub mod error;
pub mod exec;
pub mod graph;
pub mod lp;
pub mod ortho;
pub mod rational;
pub mod scenario;
pub mod sdp;
pub mod sets;
pub mod settings;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{Graph, VertexSet};
pub use rational::Rational;
pub use settings::{Limits, Settings};
