//! Concrete forward models: the damped driven oscillator, the SIR
//! changepoint case-count model, and a five-store rainfall-runoff model.

pub mod hydro;
pub mod oscillator;
pub mod sir;
