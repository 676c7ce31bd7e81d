pub mod aig;
pub mod aiger;
pub mod bench;
pub mod cec;
pub mod error;
pub mod gen;
pub mod lock;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
