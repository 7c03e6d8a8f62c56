//! Exact intersection calculus and a queryable classification atlas for
//! smooth Fano threefolds, with bounded searches that regenerate the
//! elementary-transform tables from first principles.
//!
//! Everything is checked 64-bit integer arithmetic. The three pillars:
//!
//! ```
//! use fano3::numring::{seed_space, CurveData};
//!
//! // divisor lattices with their trilinear forms
//! let p3 = seed_space("P3")?;
//! assert_eq!(p3.anticanonical_degree(), 64);
//!
//! // blowing up a line drops the degree to 54
//! let x = p3.blowup_ring(&CurveData::new(0, vec![1]))?;
//! assert_eq!(x.anticanonical_degree(), 54);
//! # Ok::<(), fano3::Error>(())
//! ```
//!
//! ```
//! use fano3::atlas::Atlas;
//!
//! // the database knows that threefold as family 2-33
//! let atlas = Atlas::get();
//! assert_eq!(atlas.lookup("2-33")?.degree, 54);
//! assert!(atlas.verify_all().all_pass());
//! # Ok::<(), fano3::Error>(())
//! ```
//!
//! ```
//! use fano3::enumerate::{enumerate_p2, DEFAULT_CAP};
//!
//! // the searches rebuild the classification tables
//! assert_eq!(enumerate_p2(DEFAULT_CAP)?.len(), 21);
//! # Ok::<(), fano3::Error>(())
//! ```

pub mod atlas;
pub mod blowup;
pub mod enumerate;
pub mod error;
pub mod numring;
pub mod surfaces;
pub mod transform;

pub use error::{Error, Result};
