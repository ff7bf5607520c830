//! The eight recursive towers: catalog, fibers of the correspondence,
//! chains, complete sets and reductions mod p.

mod catalog;
mod chain;
mod complete;
mod fiber;
mod point;
mod reduce;

pub use catalog::{catalog, tower, BaseKind, Involution, ModularLabel, RelationKind, TowerSpec};
pub use chain::{
    chain_count, chain_counts, chain_is_valid, chain_project, chain_reverse, enumerate_chains, Chain, NeighborTable,
};
pub use complete::{complete_set, complete_set_from, CompleteSet};
pub use fiber::{
    apply_involution, apply_w, fiber_form, level_value, neighbors, preimages, relation_fiber, tau, value_index, Fiber,
};
pub use point::{base_points, elliptic, on_curve, validate, BasePoint};
pub use reduce::{reduce_mod_p, ModpRelation, Substitution};
