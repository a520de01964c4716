//! Symbolic tensor calculus for four-dimensional Riemannian geometry, with
//! almost-hermitian structures and the Przanowski/Gibbons-Hawking
//! constructions of a Ricci-flat almost-Kähler metric.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constructions;
pub mod domain;
pub mod geometry;
pub mod hermitian;
pub mod report;
pub mod sym;
