//! Polynomials, projective points, morphisms of `P^N` and their local data.

mod local;
mod morphism;
mod pgl;
mod point;
mod poly;

pub use local::{chart_of, jacobian_at, jacobian_by_composition, taylor_expand, TruncatedSeries};
pub use morphism::{reduce_morphism, AffineMap, Morphism, ReducedMorphism, DEFAULT_DEGREE_CAP};
pub use pgl::{
    check_move_to_chart, conjugate, count_hyperplanes, count_hyperplanes_through_point, move_to_chart, PGLMatrix,
};
pub use point::{count_projective_points, normalize, reduce_point, ProjPointFq, ProjPointQ};
pub(crate) use point::primitive;
pub use poly::{default_var_names, HomogPoly, Monomial, Poly};
