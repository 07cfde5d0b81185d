//! Exact computations with rank-2 instanton bundles on the flag threefold
//! F = {x0y0 + x1y1 + x2y2 = 0} ⊂ P² × P², presented as cohomology of
//! monads of line bundles.

pub mod chow;
pub mod cli;
pub mod cohom;
pub mod curves;
pub mod error;
pub mod field;
pub mod jump;
pub mod linalg;
pub mod monad;
pub mod restrict;
pub mod ring;

pub use error::{Error, Result};
pub use field::{Field, Fp, Scalar};
pub use ring::{BiPoly, Bidegree};
