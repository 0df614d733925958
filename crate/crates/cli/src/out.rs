//! CSV assembly and number formatting.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Twelve significant digits, plain notation for moderate exponents.
pub fn g12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim(mant));
    }
    let (sign, body) = match mant.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mant),
    };
    let digits: String = body.chars().filter(|c| *c != '.').collect();
    let plain = if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{}", trim(&plain))
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Csv { writer }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.writer.write_record(fields).expect("in-memory write");
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn emit(self, path: Option<&Path>) -> io::Result<()> {
        let bytes = self.writer.into_inner().map_err(|e| e.into_error())?;
        match path {
            Some(p) => fs::write(p, bytes),
            None => {
                let mut lock = io::stdout().lock();
                lock.write_all(&bytes)?;
                lock.flush()
            }
        }
    }
}
