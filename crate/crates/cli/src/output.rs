use std::fs;
use std::io::Write;
use std::path::Path;

use crate::Failure;

/// Shortest decimal that carries `x` to 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn round12(x: f64) -> f64 {
    sig12(x).parse().expect("formatted float parses")
}

pub fn csv<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(0.1), "0.1");
        assert_eq!(sig12(0.7316453758934567), "0.731645375893");
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(-0.25), "-0.25");
    }

    #[test]
    fn round_trip_is_stable() {
        for x in [0.123456789012345, 1e-5 / 3.0, 0.999999999999999] {
            let once = round12(x);
            assert_eq!(sig12(once), sig12(x));
            assert!((once - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn csv_layout() {
        let rows = [["1".to_string(), "2".to_string()]];
        assert_eq!(csv(["a", "b"], &rows), "a,b\n1,2\n");
    }
}
