//! Exact-arithmetic calculus of quiver-dimension vector pairs.
//!
//! The crate covers the bilinear forms of a quiver, fundamental-set
//! membership and its structural analysis, the contraction `tau_u` of a large
//! vertex and the reflection `sigma_u` at a small source or sink (with weight
//! transport), a stability oracle for dimension vectors, bounded
//! minimality search and enumeration of fundamental-set pairs.
//!
//! All arithmetic is integral; there is no floating point anywhere.

pub mod affine;
pub mod bounds;
pub mod canon;
pub mod classification;
pub mod enumerate;
pub mod error;
pub mod forms;
pub mod io;
pub mod oracle;
pub mod quiver;
pub mod reductions;
pub mod search;
pub mod stability;

pub use canon::{canonical_key, CanonicalKey};
pub use classification::{analyze_fundamental, classify_graph, GraphClass};
pub use error::{QuiverError, Result};
pub use forms::{cartan_form, cartan_matrix, in_fundamental_set, ringel_form, tits_form};
pub use quiver::{Arrow, DimVector, Quiver, QuiverPair, Weight};
pub use reductions::{apply_sigma, apply_tau, ReductionStep};
pub use search::{is_tau_sigma_minimal, ClassPredicate, SearchReport};
pub use stability::{generically_embeds, moduli_dimension, stability_verdict, StabilityVerdict, VerdictTag};
