//! Exact inversive geometry on ℝⁿ ∪ {∞}.

pub mod exactnum;
pub mod geom;
pub mod moebius;
pub mod colorings;
pub mod chromatic;
pub mod euclid;
pub mod wcp;
pub mod json;
