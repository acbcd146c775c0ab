//! Rendering payloads as CSV, TSV or JSON.

use serde::Serialize;
use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        other => other.to_string(),
    }
}

/// Delimited table with one row per serialized object; nested values are
/// written as compact JSON in a single cell.
pub fn table<T: Serialize>(rows: &[T], delimiter: u8) -> String {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(Vec::new());
    let mut header_done = false;
    for row in rows {
        let v = serde_json::to_value(row).expect("payload types serialize to JSON");
        let Value::Object(map) = v else {
            panic!("table rows must serialize as objects");
        };
        if !header_done {
            w.write_record(map.keys()).expect("writing to memory");
            header_done = true;
        }
        w.write_record(map.values().map(cell)).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV output is UTF-8")
}

pub fn single<T: Serialize>(row: &T, delimiter: u8) -> String {
    table(std::slice::from_ref(row), delimiter)
}
