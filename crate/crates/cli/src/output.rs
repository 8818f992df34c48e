//! Text and CSV rendering.

use std::fmt::Write;

use telegame::analysis::SweepRow;

pub const SWEEP_HEADER: &str = "alpha,f_tr,f_ab,f_ac,f_coop";

/// Fixed-point rendering with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn sweep_csv(rows: &[SweepRow<f64>]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig12(r.alpha),
            sig12(r.f_tr),
            sig12(r.f_ab),
            sig12(r.f_ac),
            sig12(r.f_coop)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(12.0), "12.0000000000");
        assert_eq!(sig12(0.5), "0.500000000000");
        assert_eq!(sig12(0.0123456789012345), "0.0123456789012");
    }

    #[test]
    fn csv_layout() {
        let rows = telegame::analysis::sweep(0.5, 12.0, 3).unwrap();
        let csv = sweep_csv(&rows);
        let lines: Vec<_> = csv.split('\n').collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "");
        assert!(!csv.contains('\r'));
        assert!(lines[1].starts_with("0.500000000000,0.444444444444,"));
    }
}
