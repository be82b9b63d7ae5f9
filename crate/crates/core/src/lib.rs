//! Exact diagonalization of the finite Kitaev chain and correlation-network
//! analysis of its ground state.

pub mod cli;
pub mod error;
pub mod freefermion;
pub mod io;
pub mod measures;
pub mod model;
pub mod network;
pub mod oracle;
pub mod rdm;
pub mod scan;
pub mod solver;
pub mod theory;

pub use error::{Error, Result};
