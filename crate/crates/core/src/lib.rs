pub mod error;
pub mod symplectic;
pub mod dicke;
pub mod estimation;
pub mod fock;
pub mod discrimination;
pub mod sweep;
mod plot;

pub use error::{Error, Result};
