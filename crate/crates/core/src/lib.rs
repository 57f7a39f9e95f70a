pub mod algebra;
pub mod bratteli;
pub mod error;
pub mod k0;
pub mod grig;
pub mod limits;
pub mod primspace;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
pub use limits::Limits;
