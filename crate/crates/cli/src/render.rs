use std::io::Write;

use anyhow::Result;
use mhbesov::verify::SuiteReport;
use serde::Serialize;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    // + 0.0 turns −0 into +0
    let v = v + 0.0;
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// One `# suite:` header line per suite naming what it verifies, then a
/// single table of all checks.
pub fn write_suites_csv(out: &mut dyn Write, reports: &[SuiteReport]) -> Result<()> {
    for r in reports {
        writeln!(out, "# suite: {} | verifies: {}", r.suite, r.anchor)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["suite", "check", "parameters", "lhs", "rhs", "metric", "tolerance", "pass"])?;
    for r in reports {
        for c in &r.checks {
            w.write_record([
                r.suite.to_string(),
                c.check.clone(),
                c.parameters.clone(),
                opt(c.lhs),
                opt(c.rhs),
                num(c.metric),
                num(c.tolerance),
                c.pass.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
