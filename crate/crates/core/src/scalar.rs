//! Coefficient scalars.
//!
//! Every algebraic structure in this crate is generic over a coefficient
//! field `K`. The blanket trait below collects the `num-traits` bounds the
//! engine actually needs: exact field operations, signs, embedding of small
//! integers, and printable values. `BigRational` is the canonical instance
//! (see the crate-root aliases); any other scalar satisfying the bounds,
//! such as `f64`, compiles too, but the certificate checks are only
//! meaningful when arithmetic is exact.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Signed};

/// Field of coefficients: exact +, -, *, /, signs, and `u32` embedding.
pub trait Field: Signed + Clone + FromPrimitive + Debug + Display {}

impl<T: Signed + Clone + FromPrimitive + Debug + Display> Field for T {}

/// Embed a small nonnegative integer into the field.
pub(crate) fn from_u32<K: Field>(v: u32) -> K {
    K::from_u32(v).expect("coefficient field must embed u32 values")
}
