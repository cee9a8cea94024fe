//! The norm table and its CSV form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::numerics::format_g;

pub const HEADER: &str = "experiment,case,s,p,q,J,besov_f,tl_f,besov_Tf,tl_Tf,oracle_tl_Tf_lo,oracle_tl_Tf_hi,K_emp,boundary_ok";

/// Significant digits for every floating-point CSV cell.
pub const DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct NormRow {
    pub experiment: String,
    pub case: String,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub atoms: usize,
    pub besov_f: f64,
    pub tl_f: f64,
    pub besov_tf: f64,
    pub tl_tf: f64,
    pub oracle_tl_tf_lo: f64,
    pub oracle_tl_tf_hi: f64,
    pub k_emp: Option<usize>,
    pub boundary_ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormTable {
    pub rows: Vec<NormRow>,
}

/// A float rendered for CSV output.
pub fn num(x: f64) -> String {
    format_g(x, DIGITS)
}

impl NormTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(HEADER);
        out.push('\n');
        for r in &self.rows {
            let k = r.k_emp.map(|k| k.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.experiment,
                r.case,
                num(r.s),
                num(r.p),
                num(r.q),
                r.atoms,
                num(r.besov_f),
                num(r.tl_f),
                num(r.besov_tf),
                num(r.tl_tf),
                num(r.oracle_tl_tf_lo),
                num(r.oracle_tl_tf_hi),
                k,
                r.boundary_ok,
            );
        }
        out
    }
}

/// Writes the table as CSV.
pub fn emit(table: &NormTable, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv())?;
    Ok(())
}

/// Header plus rows of preformatted cells.
pub fn plain_csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
