pub mod error;
pub mod gf;
pub mod poly;
pub mod combin;
pub mod mat;
pub mod classify;
pub mod grp;
pub mod center;
pub mod fh_symmetric;
pub mod selftest;
pub mod cli;

pub use error::{Error, Result};
