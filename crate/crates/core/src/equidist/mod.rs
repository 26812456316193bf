//! Equidistribution of U_n(F_p) modulo u: the residue graph G_u, exact
//! powers of its adjacency matrix, δ_{n,p}(d) and its bounds.

mod delta;
mod graph;
mod lemmas;
mod matrix;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use delta::{bound_large, bound_large_exact, bound_small, delta_exact, DeltaReport};
pub use graph::{adjacency, adjacency_counts, build_graph, divisible_count_via_paths, path_count, ResidueGraph, StochMatrix};
pub use lemmas::{lemma_checks, random_doubly_stochastic, LemmaCheck, LemmaReport, RANDOM_SAMPLES};
pub use matrix::Matrix;

pub type ExactMatrix = Matrix<BigRational>;
pub type CountMatrix = Matrix<BigInt>;
pub type FloatMatrix = Matrix<f64>;
