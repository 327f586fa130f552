//! Cluster expansions for tagged arcs via loop graphs.

pub mod corpus;
pub mod dot;
pub mod expansion;
pub mod laurent;
pub mod loopgraph;
pub mod mswcheck;
pub mod mutation;
pub mod poset;
pub mod snakegraph;
pub mod surface;
