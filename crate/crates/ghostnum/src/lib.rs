//! Exact computations around the modular representation theory of finite
//! p-groups: multiplication-table groups, a catalog of standard families,
//! the Jennings dimension series, an independent radical-filtration oracle,
//! certified upper/lower bounds for ghost numbers of group algebras, and a
//! stable module category calculator for cyclic p-groups.
//!
//! Everything is computed over prime fields with exhaustive, deterministic
//! algorithms — no floating point, no randomness, no external solvers — so
//! every reported number is either checked against an independent oracle or
//! carried by an explicit certificate.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`] — validated multiplication tables and structural subgroups.
//! * [`catalog`] — a small grammar (`"C(8)xEA(2,2)"`, `"ES(3,1,+)"`, ...)
//!   for building the standard families, and order-indexed catalogs.
//! * [`jennings`] — the dimension series and the nilpotency index `t(G)` of
//!   the Jacobson radical of `kG`, plus closed-form special cases.
//! * [`radical`] — the same index computed a second way, by powering the
//!   augmentation ideal inside the group algebra with exact linear algebra.
//! * [`bounds`] — classification flags, ghost-number bounds with provenance,
//!   exact values for the known families, and a theorem verifier.
//! * [`stmod`] — Jordan modules over `k[x]/(x^m)`, Tate cohomology, ghost
//!   detection, and certified ghost chains for cyclic groups.
//! * [`report`] — deterministic JSON/CSV/Markdown rendering for the CLI.

pub mod book;
pub mod bounds;
pub mod catalog;
pub mod group;
pub mod jennings;
pub mod radical;
pub mod report;
pub mod stmod;
