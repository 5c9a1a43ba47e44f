//! Number formatting, CSV/JSON rendering and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// C-style `%.9g`: nine significant digits, trailing zeros dropped,
/// exponent form outside [1e-4, 1e9).
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `# {json}` line describing the run.
pub fn config_header<T: Serialize>(config: &T) -> String {
    format!("# {}\n", serde_json::to_string(config).expect("config serializes"))
}

pub fn csv_rows<'a>(header: &str, rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_g(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("result serializes");
    s.push('\n');
    s
}

/// Write to `path` through a temporary file in the same directory and a
/// rename, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(contents.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            }
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => std::path::PathBuf::from("."),
            };
            let name = path
                .file_name()
                .ok_or_else(|| CliError::Io(format!("{} is not a file path", path.display())))?;
            let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
            let result = std::fs::File::create(&tmp)
                .and_then(|mut f| {
                    f.write_all(contents.as_bytes())?;
                    f.sync_all()
                })
                .and_then(|_| std::fs::rename(&tmp, path));
            if let Err(e) = result {
                let _ = std::fs::remove_file(&tmp);
                return Err(CliError::Io(format!("writing {}: {e}", path.display())));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (2.5, "2.5"),
            (-2.5, "-2.5"),
            (0.811278124459, "0.811278124"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1e-300, "1e-300"),
            (11.0775, "11.0775"),
            (9.9999999999, "10"),
            (f64::NAN, "nan"),
        ];
        for (x, expected) in cases {
            assert_eq!(fmt_g(x), expected, "{x}");
        }
    }

    #[test]
    fn csv_layout() {
        let rows = [[0.0, 1.5], [0.5, -2.0]];
        let text = csv_rows("t,x", rows.iter().map(|r| &r[..]));
        assert_eq!(text, "t,x\n0,1.5\n0.5,-2\n");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit(Some(&path), "first\n").unwrap();
        emit(Some(&path), "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
