use serde::Serialize;

use qtm_core::linalg::Matrix;
use qtm_core::qstates::BasisTag;

/// Formats `x` with 12 significant digits and trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", x + 0.0);
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{:.*}", decimals, x);
    // Rounding can carry into a new leading digit (9.99... -> 10.0); one digit too
    // many after the point is harmless once zeros are trimmed.
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

#[derive(Serialize)]
pub struct MatrixDump<'a> {
    pub dim: usize,
    pub basis: &'a str,
    pub entries: Vec<[f64; 2]>,
}

impl<'a> MatrixDump<'a> {
    pub fn new(m: &Matrix<f64>, basis: BasisTag) -> Self {
        Self {
            dim: m.dim(),
            basis: basis.name(),
            // Adding 0.0 turns -0.0 into 0.0 so dumps do not depend on rounding signs.
            entries: m.entries().iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect(),
        }
    }
}

pub fn matrix_pretty(m: &Matrix<f64>, basis: BasisTag) -> String {
    let mut out = format!("{}x{} matrix, {} basis\n", m.dim(), m.dim(), basis);
    for k in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|l| {
                let z = m[(k, l)];
                format!("{:>10.6}{:+.6}i", z.re + 0.0, z.im + 0.0)
            })
            .collect();
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}

pub fn matrix_csv(m: &Matrix<f64>) -> String {
    let mut out = String::from("row,col,re,im\n");
    for k in 0..m.dim() {
        for l in 0..m.dim() {
            let z = m[(k, l)];
            out.push_str(&format!("{k},{l},{},{}\n", sig12(z.re), sig12(z.im)));
        }
    }
    out
}
