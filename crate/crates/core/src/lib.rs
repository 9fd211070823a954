//! Exact local symbols over artinian coefficient rings.

pub mod algebra;
pub mod curve;
pub mod error;
pub mod factor;
pub mod field;
pub mod laurent;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod symbols;
pub mod verify;
pub mod witt;

pub use algebra::{Algebra, RingElement};
pub use curve::{
    hilbert_reciprocity, local_expand, local_symbol, local_symbol_with_precision, reciprocity_product, support, ClosedPoint, RationalFunction,
};
pub use error::{Error, Result};
pub use factor::{factor, is_irreducible, Factorization};
pub use field::FieldDescriptor;
pub use laurent::{cc_decompose, cc_recompose, cc_recompose_exact, required_precision, CCDecomposition, LaurentSeries};
pub use poly::Polynomial;
pub use scalar::{ModP, PrimeField, Rationals};
pub use symbols::{
    cc_symbol, cc_symbol_residue, hilbert_symbol, norm_symbol, phi_symbol, tame_symbol, Character, SymbolValue,
};
pub use witt::{BigWittVector, TruncUnitSeries, WittVector};

/// Elements over a prime-characteristic base.
pub type FpElement = RingElement<ModP>;
/// Elements over `Q`.
pub type QElement = RingElement<Rationals>;
pub type FpAlgebra = Algebra<ModP>;
pub type QAlgebra = Algebra<Rationals>;
pub type FpSeries = LaurentSeries<ModP>;
pub type QSeries = LaurentSeries<Rationals>;
