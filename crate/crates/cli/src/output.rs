//! Output documents. Floats are written with 17 significant digits so
//! values round-trip exactly.

use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::Value;

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FixedDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Run metadata written at the top of every document.
pub struct Header {
    pub command: &'static str,
    pub config: Value,
    pub timestamp: Option<u64>,
}

impl Header {
    pub fn new(command: &'static str, config: Value, deterministic: bool) -> Self {
        let timestamp = (!deterministic).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            command,
            config,
            timestamp,
        }
    }

    pub fn json_document<T: Serialize>(&self, result: &T) -> Result<String, serde_json::Error> {
        #[derive(Serialize)]
        struct Doc<'a, T: Serialize> {
            command: &'a str,
            config: &'a Value,
            #[serde(skip_serializing_if = "Option::is_none")]
            timestamp_unix: Option<u64>,
            result: &'a T,
        }
        let mut s = to_json(&Doc {
            command: self.command,
            config: &self.config,
            timestamp_unix: self.timestamp,
            result,
        })?;
        s.push('\n');
        Ok(s)
    }

    /// CSV body preceded by `#` comment lines carrying the header, with
    /// optional trailing comment lines.
    pub fn csv_document(
        &self,
        columns: &[&str],
        rows: &[Vec<String>],
        trailer: &[String],
    ) -> Result<String, csv::Error> {
        let mut out = Vec::new();
        writeln!(out, "# command: {}", self.command)?;
        writeln!(
            out,
            "# config: {}",
            to_json(&self.config).map_err(io::Error::other)?
        )?;
        if let Some(t) = self.timestamp {
            writeln!(out, "# timestamp_unix: {t}")?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(columns)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        for line in trailer {
            writeln!(out, "# {line}")?;
        }
        Ok(String::from_utf8(out).expect("CSV of UTF-8 fields"))
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(509.0 / 4199.0), "1.2121933793760419e-1");
        assert_eq!(
            to_json(&vec![1.0f64, 0.1]).unwrap(),
            "[1.0000000000000000e0,1.0000000000000001e-1]"
        );
        let parsed: Vec<f64> =
            serde_json::from_str(&to_json(&vec![0.1f64, 1.0 / 3.0]).unwrap()).unwrap();
        assert_eq!(parsed, vec![0.1, 1.0 / 3.0]);
    }

    #[test]
    fn csv_header_lines() {
        let h = Header::new("mc-purity", serde_json::json!({"seed": 7}), true);
        let doc = h
            .csv_document(
                &["a", "b"],
                &[vec!["1".into(), "2".into()]],
                &["done".into()],
            )
            .unwrap();
        assert_eq!(
            doc,
            "# command: mc-purity\n# config: {\"seed\":7}\na,b\n1,2\n# done\n"
        );
    }
}
