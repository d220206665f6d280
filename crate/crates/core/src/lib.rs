//! Half-area polygons and the envelopes of their bisecting lines.
//!
//! A convex polygon with `2n` vertices is *half-area* when each chord
//! joining opposite vertices `γ(i)` and `γ(i + n)` splits its area in two
//! equal parts. Any convex polygon becomes one after inserting the far
//! endpoints of the bisecting chords through its vertices
//! ([`polygon::augment_to_half_area`]).
//!
//! For a half-area polygon this crate computes the midpoint envelope `M`,
//! the discrete envelope `E` and the hyperbolic envelope `H` of its
//! bisecting lines ([`envelope`]), locates the cusps, generates example
//! families ([`generators`]) and builds the one-parameter family of polygons
//! sharing `E` and `M` ([`inverse`]).

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod envelope;
pub mod error;
pub mod generators;
pub mod geom;
pub mod halfarea;
pub mod inverse;
pub mod io;
pub mod polygon;
pub mod svg;
pub mod verify;

pub use envelope::EnvelopeSet;
pub use error::{Error, Result};
pub use geom::{AffineMap, Line, Point, Tolerance, Vec2};
pub use halfarea::HalfAreaPolygon;
pub use polygon::Polygon;
