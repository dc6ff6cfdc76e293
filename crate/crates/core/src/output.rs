//! Text renderings of results. Numbers use `.` as the decimal separator and
//! 12 significant digits, independent of locale.

use std::fmt::Write as _;

use crate::irrep::Census;
use crate::su2::{GsDistribution, WidthTable};

/// Formats like C's `%.12g`: fixed notation for exponents in `[-5, 12)`,
/// scientific otherwise, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".into() } else { t.to_string() }
    } else {
        s
    }
}

pub const CENSUS_HEADER: &str =
    "irrep_label,copies,block_dim,predicted_variance_factor,gs_fraction,dimensional_fraction";

pub fn census_csv(c: &Census) -> String {
    let mut out = String::new();
    writeln!(out, "{CENSUS_HEADER}").unwrap();
    for ((irrep, f), d) in c.irreps.iter().zip(c.fractions()).zip(c.dimensional_fractions()) {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            irrep.label,
            irrep.copies,
            c.block_dim,
            fmt_sig(irrep.variance_factor),
            fmt_sig(f),
            fmt_sig(d)
        )
        .unwrap();
    }
    out
}

pub fn widths_csv(t: &WidthTable) -> String {
    let mut out = String::from("twoJ,sigmaJ_sq\n");
    for e in &t.entries {
        writeln!(out, "{},{}", e.two_j, fmt_sig(e.sigma_j_sq)).unwrap();
    }
    out
}

pub fn gs_distribution_csv(d: &GsDistribution) -> String {
    let mut out = String::from("twoJ,f_space,f_RM\n");
    for e in &d.entries {
        writeln!(out, "{},{},{}", e.two_j, fmt_sig(e.f_space), fmt_sig(e.f_rm)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(std::f64::consts::FRAC_PI_2), "1.57079632679");
        assert_eq!(fmt_sig(std::f64::consts::PI / 8.0), "0.392699081699");
        assert_eq!(fmt_sig(0.0001234), "0.0001234");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-07");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(10.0), "10");
        assert_eq!(fmt_sig(0.5), "0.5");
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn keeps_twelve_significant_digits(x in -1e20f64..1e20) {
            let back: f64 = fmt_sig(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
        }
    }
}
