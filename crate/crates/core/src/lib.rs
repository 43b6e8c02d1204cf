pub mod cli;
pub mod convergence;
pub mod error;
pub mod fluctuations;
pub mod gravity;
pub mod hpicture;
pub mod onsager;
pub mod opcore;
pub mod spicture;
pub mod units;

pub use error::{Error, Result};
pub use units::{Constants, Unit};
