//! CSV and JSON emission with 9 significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::amplitude::CorrelationTrace;
use crate::model::OracleScenario;
use crate::schmidt::SchmidtSnapshot;
use crate::search::VerifyRow;
use crate::sweep::SweepRow;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// `x` rounded to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest text that reproduces the rounded value.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    if r == 0.0 {
        return "0".into();
    }
    let m = r.abs();
    if (1e-4..1e9).contains(&m) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "unreachable".into(), fmt_num)
}

/// Rounds every float in a JSON tree.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match (n.is_f64(), n.as_f64()) {
            (true, Some(f)) => {
                serde_json::Number::from_f64(round_sig(f)).map_or(Value::Null, Value::Number)
            }
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded floats, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = round_json(serde_json::to_value(value).expect("serializable report"));
    let mut out = serde_json::to_string_pretty(&v).expect("valid JSON");
    out.push('\n');
    out
}

pub const TRACE_HEADER: &str = "t,re_D,im_D,abs_D,re_z,im_z";

/// One trace as CSV. With `pair_label`, a leading `pair` column is added.
pub fn trace_csv(trace: &CorrelationTrace, pair_label: Option<&str>, header: bool) -> String {
    let mut out = String::new();
    if header {
        if pair_label.is_some() {
            out.push_str("pair,");
        }
        out.push_str(TRACE_HEADER);
        out.push('\n');
    }
    for ((t, d), z) in trace.times.iter().zip(&trace.values).zip(&trace.zvalues) {
        if let Some(label) = pair_label {
            out.push_str(label);
            out.push(',');
        }
        let cells = [*t, d.re, d.im, d.norm(), z.re, z.im].map(fmt_num);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn verify_csv(s: &OracleScenario, rows: &[VerifyRow]) -> String {
    let mut out = String::from("pair,tau_pair,adjusted_bound,tau_hat,ok\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.pair_label(row.pair),
            fmt_opt(row.tau_pair),
            fmt_opt(row.adjusted_bound),
            fmt_opt(row.tau_hat),
            row.ok
        ));
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = SweepRow::COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = SweepRow::COLUMNS
            .iter()
            .map(|c| fmt_opt(row.column(c)))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `t,lambda1,…,lambdaK,entropy_bits`.
pub fn snapshot_csv(snapshots: &[SchmidtSnapshot]) -> String {
    let k = snapshots
        .iter()
        .map(|s| s.coefficients.len())
        .max()
        .unwrap_or(0);
    let mut out = String::from("t");
    for j in 1..=k {
        out.push_str(&format!(",lambda{j}"));
    }
    out.push_str(",entropy_bits\n");
    for snap in snapshots {
        out.push_str(&fmt_num(snap.t));
        for j in 0..k {
            out.push(',');
            out.push_str(&fmt_num(snap.coefficients.get(j).copied().unwrap_or(0.0)));
        }
        out.push(',');
        out.push_str(&fmt_num(snap.entropy));
        out.push('\n');
    }
    out
}
