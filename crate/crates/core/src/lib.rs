//! Exact lower bounds on the redundancy of Huffman codes when only some of the
//! symbol probabilities of a source are known.
//!
//! Every value produced here is a closed-form number (a rational plus a
//! rational combination of base-2 logarithms of primes, see
//! [`exactnum::ClosedForm`]), so bounds are compared and reported without any
//! floating-point rounding.
//!
//! The main entry points are:
//!
//! * [`prune::r_min_star`] — the bound over sources of any size, computed by
//!   extended-state enumeration with exact feasibility pruning;
//! * [`optimize::r_min_n`], [`optimize::r_min_upto`] and
//!   [`optimize::r_min_star_oracle`] — exhaustive counterparts used as oracles;
//! * [`v2v`] — redundancy of variable-to-variable codes and search-pruning bounds;
//! * [`conjecture`] — the closed form candidate for two known probabilities;
//! * [`map`] — redundancy-map sweeps over grids of known probabilities.

pub mod conjecture;
pub mod enumerate;
mod error;
pub mod exactnum;
pub mod exec;
pub mod feasibility;
pub mod huffman;
pub mod map;
pub mod optimize;
pub mod prune;
pub mod source;
pub mod tree;
pub mod v2v;

pub use error::{Error, Result};
pub use exactnum::{ClosedForm, Rational};
pub use exec::Exec;
pub use optimize::BoundResult;
pub use source::{Source, SubSource, Symbol};
pub use tree::CodeTree;
