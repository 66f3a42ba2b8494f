//! Motivic Ext computations for kq over R and C.

pub mod algebra;
pub mod chart;
pub mod classes;
pub mod cobar;
pub mod comod;
pub mod dual;
pub mod ext;
pub mod ground;
pub mod hopf;
pub mod linalg;
pub mod resolution;
pub mod sseq;
pub mod suites;
pub mod torsion;
pub mod zoo;
