//! Exact arithmetic: integer matrices with Smith forms, rational matrices and
//! polynomials over ℚ.

mod int;
pub mod poly;
pub mod rat;

pub use int::{
    cokernel_invariants, hnf_mod, kernel_mod, normalize_invariants, quotient_invariants_mod,
    smith_mod, smith_normal_form, solve_mod, IntMatrix, Smith, SmithMod,
};
pub use rat::{parse_q, q, q_frac, q_to_f64, rank_of, serialize_q_rows, span_basis, RatMatrix, Q};
