//! Spectral and statistical evaluation of point sets.

pub mod converge;
pub mod net;
pub mod quality;
pub mod spectrum;
pub mod zoneplate;
