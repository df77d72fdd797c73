pub mod cli;
pub mod clustering;
pub mod coordination;
pub mod dynamics;
pub mod error;
pub mod fpca;
pub mod io;
pub mod kinematics;
pub mod pipeline;

pub use error::{Error, Result};
