//! Character formulas for theta lifts from U(1) to U(p,q) and on to
//! U(n, n+1), with contour-integral oracles to check them.

pub mod cartan;
pub mod characters;
pub mod cli;
pub mod error;
pub mod oracles;
pub mod rootsys;

pub use cartan::{CartanLabel, CoveredTorusPoint};
pub use characters::{CharacterKind, CharacterSpec, LiftConstants, Normalization, NormalizedValue};
pub use error::{Error, Result};
pub use oracles::{QuadratureParams, VerificationReport};
pub use rootsys::{build_root_datum, RootDatum};
