//! The towerlab guide, one module per chapter, so every snippet runs as a
//! doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/qseries.md")]
pub mod qseries {}

#[doc = include_str!("../../../book/src/towers.md")]
pub mod towers {}

#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}

#[doc = include_str!("../../../book/src/optimality.md")]
pub mod optimality {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
