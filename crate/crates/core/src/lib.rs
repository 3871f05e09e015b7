//! Bounds on 3-isogeny and 3-Selmer groups of the curves
//! y^2 = x^3 + a(x - b)^2 over K = Q(zeta_3), computed from 3-ranks of
//! S-class groups of L = K(sqrt a).

pub mod descent;
pub mod eisenstein;
pub mod error;
pub mod families;
pub mod formclass;
pub mod intbase;
pub mod sclass;
pub mod table;

pub use descent::{analyze, CurveParams, RankInput, SSets, SelmerReport};
pub use eisenstein::{KPrime, KPrimeKind};
pub use error::{Error, Result};
pub use formclass::{ClassGroup, QuadForm};

/// Forms at the working precision of the class group engine.
pub type Form = QuadForm<i64>;
/// Forms with room for unreduced intermediate products.
pub type WideForm = QuadForm<i128>;
