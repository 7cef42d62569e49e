//! Report emission. JSON output keeps rationals as "num/den" strings with
//! sorted keys, so identical inputs always produce identical bytes; text
//! output is an aligned table.

use serde_json::{json, Map, Value};

use crate::surgery::InvariantReport;

use super::suites::SuiteReport;

/// Output format shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Render a single invariant report.
pub fn render_report(report: &InvariantReport, format: Format) -> String {
    match format {
        Format::Text => render_report_text(report),
        Format::Json => render_report_json(report),
    }
}

fn render_report_text(report: &InvariantReport) -> String {
    let mut out = String::new();
    out.push_str(&report.title);
    out.push('\n');
    if !report.inputs.is_empty() {
        out.push_str("inputs:\n");
        let width = report
            .inputs
            .iter()
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0);
        for (k, v) in &report.inputs {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
    }
    if !report.values.is_empty() {
        out.push_str("values:\n");
        let width = report
            .values
            .iter()
            .map(|v| v.name.len())
            .max()
            .unwrap_or(0);
        let vwidth = report
            .values
            .iter()
            .map(|v| v.value.to_string().len())
            .max()
            .unwrap_or(0);
        for v in &report.values {
            let tail = if v.checked_by.is_empty() {
                String::new()
            } else {
                format!("  [checks: {}]", v.checked_by.join(", "))
            };
            let value = v.value.to_string();
            if tail.is_empty() {
                out.push_str(&format!("  {:<width$}  {value}\n", v.name));
            } else {
                out.push_str(&format!("  {:<width$}  {value:<vwidth$}{tail}\n", v.name));
            }
        }
    }
    if !report.sequences.is_empty() {
        out.push_str("per-spinc:\n");
        for (name, values) in &report.sequences {
            let rendered: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("  {name} = [{}]\n", rendered.join(", ")));
        }
    }
    if !report.checks.is_empty() {
        out.push_str("checks:\n");
        let width = report
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0);
        for c in &report.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  {verdict}  {:<width$}  residual = {}\n",
                c.name, c.residual
            ));
        }
        out.push_str(&format!(
            "result: {}\n",
            if report.all_pass() { "PASS" } else { "FAIL" }
        ));
    }
    out
}

fn render_report_json(report: &InvariantReport) -> String {
    let mut root = Map::new();
    root.insert("title".to_string(), json!(report.title));

    let mut inputs = Map::new();
    for (k, v) in &report.inputs {
        inputs.insert(k.clone(), json!(v));
    }
    root.insert("inputs".to_string(), Value::Object(inputs));

    let mut values = Map::new();
    let mut checked_by = Map::new();
    for v in &report.values {
        values.insert(v.name.clone(), json!(v.value.to_string()));
        if !v.checked_by.is_empty() {
            checked_by.insert(v.name.clone(), json!(v.checked_by));
        }
    }
    root.insert("values".to_string(), Value::Object(values));
    if !checked_by.is_empty() {
        root.insert("checked_by".to_string(), Value::Object(checked_by));
    }

    if !report.sequences.is_empty() {
        let mut sequences = Map::new();
        for (name, vals) in &report.sequences {
            let rendered: Vec<Value> = vals.iter().map(|v| json!(v.to_string())).collect();
            sequences.insert(name.clone(), Value::Array(rendered));
        }
        root.insert("sequences".to_string(), Value::Object(sequences));
    }

    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "pass": c.pass,
                "residual": c.residual.to_string(),
            })
        })
        .collect();
    root.insert("checks".to_string(), Value::Array(checks));
    root.insert("pass".to_string(), json!(report.all_pass()));

    serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes")
}

/// Render the outcome of one or more verification suites.
pub fn render_suites(reports: &[SuiteReport], format: Format, verbose: bool) -> String {
    match format {
        Format::Text => render_suites_text(reports, verbose),
        Format::Json => render_suites_json(reports),
    }
}

fn render_suites_text(reports: &[SuiteReport], verbose: bool) -> String {
    let mut out = String::new();
    let mut all_pass = true;
    for report in reports {
        let failures: Vec<_> = report.failures().collect();
        all_pass &= failures.is_empty();
        let scope = if report.pmax > 0 {
            format!(" (pmax {})", report.pmax)
        } else {
            String::new()
        };
        out.push_str(&format!(
            "suite {}{}: {} cases, {} failures\n",
            report.suite,
            scope,
            report.total(),
            failures.len()
        ));
        if verbose {
            for case in &report.cases {
                let verdict = if case.pass { "PASS" } else { "FAIL" };
                out.push_str(&format!(
                    "  {verdict}  {}  residual = {}\n",
                    case.id, case.residual
                ));
            }
        } else {
            // smallest counterexample first; order is already lexicographic
            for case in failures.iter().take(10) {
                out.push_str(&format!(
                    "  FAIL  {}  residual = {}\n",
                    case.id, case.residual
                ));
            }
            let extra = failures.len().saturating_sub(10);
            if extra > 0 {
                out.push_str(&format!("  ... and {extra} more failures\n"));
            }
        }
    }
    out.push_str(&format!(
        "result: {}\n",
        if all_pass { "PASS" } else { "FAIL" }
    ));
    out
}

fn render_suites_json(reports: &[SuiteReport]) -> String {
    let all_pass = reports.iter().all(|r| r.passed());
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| {
            let cases: Vec<Value> = r
                .cases
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "pass": c.pass,
                        "residual": c.residual.to_string(),
                    })
                })
                .collect();
            json!({
                "cases": cases,
                "failures": r.failures().count(),
                "pmax": r.pmax,
                "suite": r.suite,
                "total": r.total(),
            })
        })
        .collect();
    let root = json!({
        "pass": all_pass,
        "suites": suites,
    });
    serde_json::to_string_pretty(&root).expect("suite report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::surgery::{IdentityCheck, InvariantReport};

    #[test]
    fn empty_report_renders_header_only() {
        let report = InvariantReport::new("empty report");
        assert_eq!(render_report(&report, Format::Text), "empty report\n");
    }

    #[test]
    fn json_report_is_byte_stable_and_sorted() {
        let mut report = InvariantReport::new("stability");
        report.push_input("p", 2);
        report.push_value("lambda", Rational::zero(), &["lens-lambda"]);
        report.push_value("alpha", Rational::new(1, 3).unwrap(), &[]);
        report.push_check(IdentityCheck::from_residual(
            "lens-lambda",
            Rational::zero(),
        ));
        let a = render_report(&report, Format::Json);
        let b = render_report(&report, Format::Json);
        assert_eq!(a, b);
        assert!(a.contains("\"lambda\": \"0/1\""));
        // keys inside the values object come out sorted
        assert!(a.find("\"alpha\": \"1/3\"").unwrap() < a.find("\"lambda\": \"0/1\"").unwrap());
    }

    #[test]
    fn failed_check_flips_result() {
        let mut report = InvariantReport::new("failing");
        report.push_check(IdentityCheck::from_residual(
            "broken",
            Rational::new(1, 2).unwrap(),
        ));
        let text = render_report(&report, Format::Text);
        assert!(text.contains("FAIL"));
        assert!(text.contains("result: FAIL"));
        assert!(!report.all_pass());
    }
}
