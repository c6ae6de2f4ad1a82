//! Holonomy, transgression and cup products of Deligne classes given by
//! discrete local data on triangulated spaces.
//!
//! The pipeline is: build a [`complex::SimplicialComplex`], attach a
//! combinatorial cover ([`cover::CoveredComplex`]), put a
//! [`cochain::DeligneCochain`] on it (by hand, from a file, or by
//! discretizing an [`analytic`] fixture), validate it, then evaluate
//! [`holonomy`] or [`transgression`] functionals.

pub mod analytic;
pub mod cli;
pub mod cochain;
pub mod complex;
pub mod cover;
pub mod holonomy;
pub mod json;
pub mod scalar;
pub mod transgression;
