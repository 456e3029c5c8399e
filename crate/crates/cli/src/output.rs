//! Report serialization: the fixed CSV schema and a JSON mirror.
//!
//! CSV columns: experiment, alpha, dim, quantity, value, stderr, lower,
//! upper, verdict, seed, n, h, h_s. Reals use 17 significant digits with a
//! '.' decimal point; absent fields are empty. Lines before the header
//! (prefixed '#') carry the resolved configuration and version string, so a
//! rerun with the same config is byte-identical.

use stable_torsion::analytic::ExtReal;
use stable_torsion::suite::SuiteRow;

pub const CSV_HEADER: &str = "experiment,alpha,dim,quantity,value,stderr,lower,upper,verdict,seed,n,h,h_s";

/// 17 significant digits, locale-independent.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt_real(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

fn fmt_ext(v: Option<ExtReal>) -> String {
    match v {
        None => String::new(),
        Some(ExtReal::PosInf) => "inf".to_string(),
        Some(ExtReal::Finite(x)) => fmt_real(x),
    }
}

pub fn csv_row(row: &SuiteRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        row.experiment,
        fmt_opt_real(row.alpha),
        row.dim.map(|d| d.to_string()).unwrap_or_default(),
        row.quantity,
        fmt_real(row.value),
        fmt_opt_real(row.stderr),
        fmt_ext(row.lower),
        fmt_ext(row.upper),
        row.verdict.map(|v| v.as_str().to_string()).unwrap_or_default(),
        row.seed.map(|s| s.to_string()).unwrap_or_default(),
        row.n.map(|n| n.to_string()).unwrap_or_default(),
        fmt_opt_real(row.h),
        fmt_opt_real(row.h_s),
    )
}

/// Full CSV report: version + resolved config as comments, header, rows.
pub fn csv_report(rows: &[SuiteRow], config: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# version={}\n", env!("CARGO_PKG_VERSION")));
    for (k, v) in config {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&csv_row(row));
        out.push('\n');
    }
    out
}

/// JSON mirror of the CSV report.
pub fn json_report(rows: &[SuiteRow], config: &[(String, String)]) -> String {
    let config: serde_json::Map<String, serde_json::Value> = config
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting_17_digits() {
        assert_eq!(fmt_real(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_real(2.0 / std::f64::consts::PI), "6.3661977236758138e-1");
    }

    #[test]
    fn header_matches_schema() {
        assert_eq!(CSV_HEADER.split(',').count(), 13);
    }
}
