pub mod cli;
pub mod colluding;
pub mod config;
pub mod error;
pub mod fading;
pub mod foxh;
pub mod mellin;
pub mod montecarlo;
pub mod quadrature;
pub mod secrecy;
pub mod special;
pub mod table2;

pub use error::{Error, Result};
