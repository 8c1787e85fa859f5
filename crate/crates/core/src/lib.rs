pub mod cli;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod newton;
pub mod poly;
pub mod ratmap;
pub mod render;

pub use error::{Error, Result};
pub use num_complex::Complex64;
