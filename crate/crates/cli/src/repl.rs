use wickrep::multiindex::QMatrix;
use wickrep::rewrite::{normal_order, parse_generators, Monomial};
use wickrep::C64;

/// `x` rounded to 15 significant digits, printed in shortest form.
fn sig15(x: f64) -> String {
    let r: f64 = format!("{x:.14e}").parse().expect("round trip");
    if r == 0.0 {
        // also catches -0
        "0".into()
    } else if r.abs() < 1e-5 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// `0.5`, `-2`, or `(0.5+0.4i)` when the imaginary part survives rounding.
pub fn format_coeff(z: C64) -> String {
    let (re, im) = (sig15(z.re), sig15(z.im));
    if im == "0" {
        re
    } else if im.starts_with('-') {
        format!("({re}{im}i)")
    } else {
        format!("({re}+{im}i)")
    }
}

/// `coeff * body`, e.g. `0.5 * s_2 s_1*`; the zero monomial prints as `0 * I`.
pub fn format_monomial(m: &Monomial<f64>) -> String {
    if m.is_zero() {
        return "0 * I".into();
    }
    format!("{} * {}", format_coeff(m.coeff), m.body())
}

/// Parses a generator word such as `1* 2 1 2*` and prints its normal form.
pub fn normal_order_repl(text: &str, q: &QMatrix<f64>) -> wickrep::Result<String> {
    let word = parse_generators(text, Some(q.d()))?;
    Ok(format_monomial(&normal_order(&word, q)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients() {
        assert_eq!(format_coeff(C64::new(1.0, 0.0)), "1");
        assert_eq!(format_coeff(C64::new(0.1 + 0.2, 0.0)), "0.3");
        assert_eq!(format_coeff(C64::new(0.5, -0.4)), "(0.5-0.4i)");
        assert_eq!(format_coeff(C64::new(-0.0, 1e-300)), "(0+1e-300i)");
        assert_eq!(format_coeff(C64::new(-1.25, -0.0)), "-1.25");
    }
}
