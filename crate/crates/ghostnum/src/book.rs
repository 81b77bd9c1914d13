//! The user guide, compiled.
//!
//! Each submodule's documentation is one chapter of the mdbook guide under
//! `book/`, included verbatim with `include_str!`. Building the docs renders
//! the guide, and — more importantly — `cargo test --doc` runs every code
//! snippet in the book, so the guide cannot silently drift away from the
//! library it documents. The chapters, in reading order:

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/nilpotency.md")]
pub mod nilpotency {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/stable-category.md")]
pub mod stable_category {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
