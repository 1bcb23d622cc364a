//! CSV rows for plotting.
//!
//! Reals are written like C's `%.12g`; missing or not-applicable values are
//! the literal `NA`.

use std::io::Write;

use tripartite_core::relations::{Relation, RelationReport};
use tripartite_core::{Pair, ResourceRecord};

use crate::error::Result;

pub const NA: &str = "NA";

/// Significant digits of every real column.
pub const SIGNIFICANT_DIGITS: usize = 12;

const MEASURE_COLUMNS: [&str; 24] = [
    "id", "kind", "parameter", "rank", "seed", "N_tri", "N_A_BC", "N_B_AC", "N_C_AB", "G", "D", "D_A", "D_B",
    "D_C", "S_AB", "S_AC", "S_BC", "S_max", "S_argmax", "M_AB", "M_AC", "M_BC", "B_max", "B_argmax",
];

/// The fixed header: measure columns, then one residual column per relation.
pub fn header() -> Vec<&'static str> {
    MEASURE_COLUMNS.iter().copied().chain(Relation::ALL.iter().map(|r| r.name())).collect()
}

/// `%.{digits}g` formatting.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return NA.to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn real(x: f64) -> String {
    format_g(x, SIGNIFICANT_DIGITS)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| NA.to_string(), |v| v.to_string())
}

/// One CSV row for a measured state.
pub fn row(id: u64, record: &ResourceRecord, report: &RelationReport) -> Vec<String> {
    let p = &record.provenance;
    let mut out = Vec::with_capacity(MEASURE_COLUMNS.len() + report.entries.len());
    out.push(id.to_string());
    out.push(p.kind.to_string());
    out.push(p.parameter.map_or_else(|| NA.to_string(), real));
    out.push(opt(p.rank));
    out.push(opt(p.seed));
    out.push(real(record.negativity_tri));
    out.extend(record.negativity_bi.iter().map(|&x| real(x)));
    out.push(record.gbc.map_or_else(|| NA.to_string(), real));
    out.push(real(record.coherence));
    out.extend(record.coherence_sub.iter().map(|&x| real(x)));
    out.extend(record.steering_pair.iter().map(|&x| real(x)));
    out.push(real(record.steering_max));
    out.push(record.steering_argmax.name().to_string());
    out.extend(record.bell_m_pair.iter().map(|&x| real(x)));
    out.push(real(record.bell_violation_max));
    out.push(record.bell_argmax.map_or(NA, Pair::name).to_string());
    out.extend(report.entries.iter().map(|e| if e.applicable { real(e.residual) } else { NA.to_string() }));
    out
}

/// Writes rows with the fixed header.
pub struct RowWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RowWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        inner.write_record(header())?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, id: u64, record: &ResourceRecord, report: &RelationReport) -> Result<()> {
        self.inner.write_record(row(id, record, report))?;
        Ok(())
    }

    pub fn write_raw<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.inner.flush().map_err(|e| crate::error::Error::Sink(e.to_string()))?;
        self.inner.into_inner().map_err(|e| crate::error::Error::Sink(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tripartite_core::relations::assess;
    use tripartite_core::states::{canonical, Canonical};
    use tripartite_core::StateProvenance;

    #[test]
    fn g_format_matches_c() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0f64.sqrt() * 2.0 / 3.0, "0.942809041582"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5e-16, "-2.5e-16"),
            (9.9999999999995, "10"),
            (-1.0, "-1"),
            (1e100, "1e+100"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g(x, 12), want, "{x}");
        }
        assert_eq!(format_g(f64::NAN, 12), "NA");
    }

    #[test]
    fn header_is_stable() {
        let h = header();
        assert_eq!(h.len(), 24 + 14);
        assert_eq!(&h[..5], &["id", "kind", "parameter", "rank", "seed"]);
        assert_eq!(h[23], "B_argmax");
        assert_eq!(h[24], "thm1_n_eq_g");
        assert_eq!(h[37], "chsh_coh_BC");
    }

    #[test]
    fn ghz_row() {
        let (rec, rep) = assess(&canonical(Canonical::Ghz).density(), StateProvenance::canonical()).unwrap();
        let r = row(0, &rec, &rep);
        let h = header();
        let get = |name: &str| r[h.iter().position(|c| *c == name).unwrap()].as_str();
        let num = |name: &str| get(name).parse::<f64>().unwrap();
        assert!((num("N_tri") - 1.0).abs() < 1e-12);
        assert_eq!(get("D"), "0");
        assert!(num("S_max").abs() < 1e-12);
        assert_eq!(get("B_max"), "0");
        assert_eq!(get("B_argmax"), "NA");
        assert_eq!(get("parameter"), "NA");
        assert_eq!(get("kind"), "canonical");
        assert_eq!(r.len(), h.len());
    }
}
