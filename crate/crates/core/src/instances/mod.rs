//! Finite test targets: lattice quotients with closed-form projections and
//! deck maps, and the two-copy example with its quotients `K(l,k)`.

mod example;
mod lattice;
mod quotient;

pub use example::{
    check_k_ball_claim, example_cover_formula, is_vertex_transitive, make_example_g_patch,
    make_example_k, ExampleG, ExampleK,
};
pub use lattice::{develop_euclidean, Affine, Development, Lattice, Linear, Point};
pub use quotient::{make_quotient, Quotient, QuotientKind, QuotientSpec};
