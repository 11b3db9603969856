//! Vologodsky integrals of meromorphic 1-forms on hyperelliptic curves at
//! odd primes of bad reduction, computed from Berkovich-Coleman integrals on
//! a semistable covering together with a tropical correction.

pub mod error;
pub mod padic;
pub mod polyring;
pub mod curve;
pub mod covering;
pub mod tropical;
pub mod wideopen;
pub mod vologodsky;

pub use error::{Error, Result};
