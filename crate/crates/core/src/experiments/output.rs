//! Serialization of experiment reports.

use crate::lfunc::{LValueRecord, CSV_HEADER};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema: u32,
    kind: &'a str,
    report: &'a T,
}

/// Pretty JSON wrapped as `{"schema": 1, "kind": ..., "report": ...}`.
pub fn to_json<T: Serialize>(kind: &str, report: &T) -> String {
    let v = Versioned {
        schema: SCHEMA_VERSION,
        kind,
        report,
    };
    serde_json::to_string_pretty(&v).expect("reports contain no non-string map keys")
}

/// Header plus one row per record.
pub fn top_k_csv(records: &[LValueRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

/// Two-column `x\ty` data, each series introduced by a `# name` line.
pub fn tsv_series(series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let mut out = String::new();
    for (name, pts) in series {
        out.push_str("# ");
        out.push_str(name);
        out.push('\n');
        for (x, y) in pts {
            out.push_str(&format!("{x:?}\t{y:?}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunc::Method;

    #[test]
    fn formats() {
        let r = LValueRecord::new(5, 1.0, 0.4375, Method::EulerTrunc, 0.0).unwrap();
        assert_eq!(top_k_csv(&[r]), "d,sigma,value,method,err_estimate\n5,1.0,0.4375,euler_trunc,0.0\n");
        let j: serde_json::Value = serde_json::from_str(&to_json("lvalue", &r)).unwrap();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["report"]["method"], "euler_trunc");
        assert_eq!(tsv_series(&[("a", vec![(1.0, 2.5)])]), "# a\n1.0\t2.5\n");
    }
}
