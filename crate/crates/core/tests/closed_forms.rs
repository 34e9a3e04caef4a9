//! Low-order expansion coefficients from the generic recursion against the
//! explicit integral formulas.

#[path = "common/closed_form_oracle.rs"]
mod oracle;

const TOL: f64 = 1e-7;

fn check(errors: Vec<(String, f64)>) {
    for (name, e) in errors {
        assert!(e < TOL, "{name} error {e:.3e}");
    }
}

#[test]
fn x_side_at_infinity() {
    check(oracle::x_side_at_infinity());
}

#[test]
fn x_side_at_zero() {
    check(oracle::x_side_at_zero());
}

#[test]
fn t_side_at_infinity() {
    check(oracle::t_side_at_infinity());
}

#[test]
fn t_side_at_zero() {
    check(oracle::t_side_at_zero());
}
