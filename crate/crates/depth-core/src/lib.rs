pub mod approx;
pub mod dataset;
pub mod depth;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod local;
pub mod lp;
pub mod matrix;
pub mod notion;
pub mod regions;
pub mod rng;
pub mod scatter;
