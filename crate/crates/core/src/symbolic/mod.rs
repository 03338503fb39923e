//! Exact polynomial algebra for the encoded error.
//!
//! Each entry of `W_B = M^dagger (W_0 (x) ... (x) W_4) M` is a polynomial in
//! the 20 real variables `A_u, B_u, C_u, D_u` with exact complex rational
//! coefficients. From it come the generator polynomials `a_s, b_s, c_s, d_s`,
//! their structural properties, expectations under a density of the first
//! angle, and sign-flip sets found over GF(2).

pub mod gf2;
pub mod structure;
pub mod poly;
pub mod reference;
pub mod verify;
pub mod vars;
pub mod wb;

pub use gf2::{find_flip_set, FlipConstraints, Violation};
pub use structure::{a_count_table, expected_p, expectation, verify_shape, ShapeFailure};
pub use poly::{Coeff, Monomial, PolyParseError, Polynomial};
pub use vars::{FlipSet, VarId, VarKind, NUM_VARS, QUBITS};
pub use verify::{run_verification, Check, VerificationReport};
pub use wb::{extract_generators, symbolic_w, symbolic_wb, Generators, SymbolicMatrix};
