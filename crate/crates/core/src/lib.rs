//! Linear saddle invariants of links: braid families, diagrams and saddle moves,
//! Seifert matrices, signatures, and orbit-closure knots of volume-preserving flows.

pub mod asymptotics;
pub mod braid;
pub mod diagram;
pub mod flow;
pub mod invariants;
pub mod matrix;
pub mod seifert;
