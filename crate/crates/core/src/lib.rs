//! Exact cocycle twists of finitely presented connected graded algebras
//! under finite abelian group actions.

pub mod action;
pub mod crossed;
pub mod cyclo;
pub mod error;
pub mod expr;
pub mod freealg;
pub mod gbasis;
pub mod grp;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod presets;
pub mod twist;

pub use action::{GGrading, GradedAction, HomogBasis};
pub use cyclo::CycNum;
pub use error::{Error, Result};
pub use freealg::{GenMap, NcPoly, Presentation, Word};
pub use gbasis::{HilbertPrefix, TruncGB};
pub use grp::{AbGroup, Cocycle, Duality, GroupAut, GroupElem};
pub use linalg::Matrix;
pub use twist::TwistSpec;
