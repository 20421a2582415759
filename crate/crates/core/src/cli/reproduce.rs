//! The `reproduce` command: recompute the reference tables and diff them
//! against the expected values shipped in `data/`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{sre_average_bound, Context, Report};
use crate::bounds::{hierarchy_bound_xi1, hs_bound, sv_bound, u_single_row, xi2_bound, SearchOptions};
use crate::code::golay_extended;
use crate::combin::{binomial, ratio_f64};
use crate::decoder::Decoder;
use crate::error::{invalid, Result};
use crate::estimator::upper_confidence_count;
use crate::stopping::{spectrum_exhaustive, undecodable_profile, ProfileMode};

const EXPECTED: &str = include_str!("../../data/expected.csv");
const SAMPLE_MEANS: &str = include_str!("../../data/golay_sample_means.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
pub enum Table {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "IV")]
    IV,
    #[value(name = "V")]
    V,
}

impl Table {
    fn label(self) -> &'static str {
        match self {
            Table::I => "I",
            Table::II => "II",
            Table::IV => "IV",
            Table::V => "V",
        }
    }
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Tables to recompute.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "I,II,IV,V")]
    pub tables: Vec<Table>,
    /// Include cells that take minutes (the length-155 hierarchy bound).
    #[arg(long)]
    pub full: bool,
    /// Expected values to diff against instead of the shipped file.
    #[arg(long)]
    pub expected: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
struct ExpectedRow {
    table: String,
    cell: String,
    expected: String,
    tolerance: String,
    #[serde(default)]
    note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellResult {
    pub table: String,
    pub cell: String,
    pub expected: String,
    pub computed: Option<String>,
    pub tolerance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproduceReport {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cells: Vec<CellResult>,
}

impl Report for ReproduceReport {
    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["table", "cell", "expected", "computed", "tolerance", "status", "note"])?;
        for c in &self.cells {
            w.write_record([
                c.table.as_str(),
                &c.cell,
                &c.expected,
                c.computed.as_deref().unwrap_or(""),
                &c.tolerance,
                match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skip => "skip",
                },
                c.note.as_deref().unwrap_or(""),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    fn text(&self) -> Option<String> {
        let mut s = String::new();
        for c in &self.cells {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = write!(
                s,
                "{tag} {:<3} {:<18} expected {:<12} computed {}",
                c.table,
                c.cell,
                c.expected,
                c.computed.as_deref().unwrap_or("-")
            );
            match &c.note {
                Some(note) => {
                    let _ = writeln!(s, " ({note})");
                }
                None => s.push('\n'),
            }
        }
        let _ = writeln!(s, "{} passed, {} failed, {} skipped", self.passed, self.failed, self.skipped);
        Some(s)
    }
}

/// A computed cell: exact decimal text when available, and a real value.
#[derive(Clone, Debug)]
struct Value {
    text: String,
    real: f64,
}

impl From<&BigUint> for Value {
    fn from(v: &BigUint) -> Self {
        Value {
            text: v.to_string(),
            real: ratio_f64(v, &BigUint::from(1u32)),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value {
            text: x.to_string(),
            real: x,
        }
    }
}

fn matches(tolerance: &str, expected: &str, got: &Value) -> Result<bool> {
    if tolerance == "exact" {
        return Ok(got.text == expected);
    }
    let e: f64 = expected
        .parse()
        .map_err(|_| invalid(format!("expected value {expected:?} is not a number")))?;
    let c = got.real;
    let bad = || invalid(format!("unknown tolerance {tolerance:?}"));
    Ok(match tolerance.split_once(':') {
        None if tolerance == "floor" => c.floor() == e,
        Some(("abs", x)) => (c - e).abs() < x.parse::<f64>().map_err(|_| bad())?,
        Some(("rel", x)) => (c - e).abs() <= x.parse::<f64>().map_err(|_| bad())? * e.abs(),
        _ => return Err(bad()),
    })
}

fn compute_table(table: Table, ctx: &Context, full: bool, out: &mut BTreeMap<String, Value>) -> Result<()> {
    let opts = SearchOptions::default();
    let golay = golay_extended();
    match table {
        Table::I => {
            for (name, r, d) in [("golay", 12, 8), ("qr48", 24, 12), ("tanner", 91, 20)] {
                out.insert(format!("sv/{name}"), (&sv_bound(r, d)).into());
            }
            for (name, n, d, r) in [("golay", 24, 8, 12), ("qr48", 48, 12, 24), ("tanner", 155, 20, 91)] {
                let v = hs_bound(n, d, r)?.value;
                out.insert(format!("hs/{name}"), Value { text: v.to_string(), real: v.as_f64() });
            }
            let u1 = u_single_row(24, 8, 7)?;
            let v = hierarchy_bound_xi1(&u1, 12, 1, 1, 7, &opts)?.value;
            out.insert("xi1_tau1/golay".into(), Value { text: v.to_string(), real: v.as_f64() });
            let u = spectrum_exhaustive(golay.parity_check(), 7, true, ctx.subset_budget)?;
            let v = hierarchy_bound_xi1(&u, 12, 12, 12, 7, &opts)?.value;
            out.insert("xi1_taum/golay".into(), Value { text: v.to_string(), real: v.as_f64() });
            if full {
                eprintln!("length-155 hierarchy bound (takes minutes)");
                let u = u_single_row(155, 5, 19)?;
                for (key, rank_param) in [("xi1_tau1/tanner", 91), ("xi1_tau1_m/tanner", 93)] {
                    let v = hierarchy_bound_xi1(&u, rank_param, 1, 1, 19, &opts)?.value;
                    out.insert(key.into(), Value { text: v.to_string(), real: v.as_f64() });
                }
            }
        }
        Table::II => {
            let u = spectrum_exhaustive(golay.parity_check(), 12, true, ctx.subset_budget)?;
            for ell in 1..=12 {
                out.insert(format!("u/{ell}"), u.u(ell).into());
                let v = hierarchy_bound_xi1(&u, 12, 12, 12, ell, &opts)?.value;
                out.insert(format!("xi1/{ell}"), Value { text: v.to_string(), real: v.as_f64() });
                let v = xi2_bound(&u, 12, ell, &opts)?.value;
                out.insert(format!("xi2/{ell}"), Value { text: v.to_string(), real: v.as_f64() });
            }
            let mut rdr = csv::Reader::from_reader(SAMPLE_MEANS.as_bytes());
            for row in rdr.deserialize() {
                let (samples, i, x_bar): (u64, usize, f64) = row?;
                let u_hat = upper_confidence_count(x_bar, samples, 0.001, &binomial(24, i))?;
                let block = if samples == 1000 { "1e3" } else { "1e6" };
                out.insert(format!("u_hat_{block}/{i}"), (&u_hat).into());
            }
        }
        Table::IV => {
            for (decoder, key) in [(Decoder::Iterative, "psi_h"), (Decoder::Ml, "psi_ml")] {
                let p = undecodable_profile(golay.parity_check(), decoder, 24, ProfileMode::exhaustive(), ctx.subset_budget)?;
                for e in &p.entries {
                    out.insert(format!("{key}/{}", e.w), (&e.count).into());
                }
            }
        }
        Table::V => {
            for n in (6..=54).step_by(6) {
                for (rate, m) in [("1/3", n - n / 3), ("1/2", n - n / 2), ("2/3", n - 2 * n / 3)] {
                    let (_, bound) = sre_average_bound(n, m, m)?;
                    out.insert(format!("rho/{n}/{rate}"), bound.value.as_f64().into());
                }
            }
        }
    }
    Ok(())
}

pub fn cmd_reproduce(ctx: &Context, args: &ReproduceArgs) -> Result<ReproduceReport> {
    let text = match &args.expected {
        Some(path) => std::fs::read_to_string(path)?,
        None => EXPECTED.to_string(),
    };
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let expected: Vec<ExpectedRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;

    let mut tables = args.tables.clone();
    tables.sort();
    tables.dedup();
    let mut cells = Vec::new();
    for table in tables {
        let start = Instant::now();
        eprintln!("table {}", table.label());
        let mut computed = BTreeMap::new();
        compute_table(table, ctx, args.full, &mut computed)?;
        eprintln!("table {} done in {:.1}s", table.label(), start.elapsed().as_secs_f64());
        for row in expected.iter().filter(|r| r.table == table.label()) {
            let got = computed.get(&row.cell);
            let status = match got {
                None => Status::Skip,
                Some(v) if matches(&row.tolerance, &row.expected, v)? => Status::Pass,
                Some(_) => Status::Fail,
            };
            cells.push(CellResult {
                table: row.table.clone(),
                cell: row.cell.clone(),
                expected: row.expected.clone(),
                computed: got.map(|v| v.text.clone()),
                tolerance: row.tolerance.clone(),
                status,
                note: (!row.note.is_empty()).then(|| row.note.clone()),
            });
        }
    }
    let count = |s| cells.iter().filter(|c| c.status == s).count();
    Ok(ReproduceReport {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_rules() {
        let v = |x: f64| Value::from(x);
        assert!(matches("abs:0.01", "34.75", &v(34.754)).unwrap());
        assert!(!matches("abs:0.01", "34.75", &v(34.77)).unwrap());
        assert!(matches("rel:5e-4", "1.7926e10", &v(17926269603.0)).unwrap());
        assert!(matches("floor", "3", &v(3.703)).unwrap());
        assert!(matches("exact", "110", &(&BigUint::from(110u32)).into()).unwrap());
        assert!(matches("bogus", "1", &v(1.0)).is_err());
    }

    #[test]
    fn shipped_files_parse() {
        let mut rdr = csv::Reader::from_reader(EXPECTED.as_bytes());
        let rows: Vec<ExpectedRow> = rdr.deserialize().collect::<std::result::Result<_, _>>().unwrap();
        assert!(rows.len() > 100);
        assert!(rows.iter().all(|r| ["I", "II", "IV", "V"].contains(&r.table.as_str())));
    }
}
