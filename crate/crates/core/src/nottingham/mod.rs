//! Finite quotients of the Nottingham group over `F_p`, `p` odd.
//!
//! Elements are normalised series `t + Σ a_i t^i` and the product is
//! substitution, `f · g = f(g(t))`.

mod formulas;
mod named;
mod quotient;
mod series;
mod verdict;

pub use formulas::{
    all_elements_suite, closed_form_suite, commutator_formula_suite, order_p_suite, pm_power_closed_form,
    power_formula_suite, product_law_suite, run_all, transfer_matrix, transfer_matrix_power, Law, SuiteResult,
};
pub use named::{a_series, b_series, depth_one_pair, distinguished_level, e_alpha, f_lambda, gamma_index, zm};
pub use quotient::{NottinghamQuotient, QuotientSpec};
pub use series::TruncSeries;
pub use verdict::{
    base_level, find_uncovered_witness, lift_structure, named_generators, nottingham_verdict, realize_quotient,
    standard_structure, uncovered_structure,
};
