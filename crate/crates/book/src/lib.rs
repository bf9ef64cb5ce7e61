//! Runs the code samples of the guide in `book/` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/cones-and-polytopes.md")]
pub mod cones_and_polytopes {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/solving.md")]
pub mod solving {}

#[doc = include_str!("../../../book/src/monge-ampere.md")]
pub mod monge_ampere {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
