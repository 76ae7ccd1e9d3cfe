//! Weight enumerators of binary linear codes at eighth roots of unity, and
//! the reductions that tie them to Clifford+T amplitudes and counting gaps.

pub mod amplify;
pub mod circuits;
pub mod codes;
pub mod cyclotomic;
pub mod error;
pub mod gapred;
pub mod gf2;
pub mod pathsum;

pub use error::{Error, Result};
