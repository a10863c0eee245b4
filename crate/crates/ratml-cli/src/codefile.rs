//! Code arguments: built-in names and generator matrix files.
//!
//! Matrix files hold a "k n" header line and then k rows of n characters
//! over {0, 1}, one line each.

use std::fs;
use std::path::Path;

use ratml::algebra::BitMatrix;
use ratml::channel_sim::CodeInstance;
use ratml::code::{self, LinearCode};

use crate::error::CliError;

pub const BUILTIN_NAMES: [&str; 4] = ["rep3", "hamming7_4", "hermitian16", "bch63_7"];

pub fn builtin(name: &str) -> Option<CodeInstance> {
    match name {
        "rep3" => Some(CodeInstance::Plain(code::repetition(3))),
        "hamming7_4" => Some(CodeInstance::Plain(code::hamming_7_4())),
        "hermitian16" => Some(CodeInstance::Plain(code::hermitian_16())),
        "bch63_7" => Some(CodeInstance::Bch(code::bch_63_7())),
        _ => None,
    }
}

/// Resolves a code argument: an exact built-in name wins, anything else is
/// read as a matrix file (use a ./ prefix to force a clashing file name).
pub fn load(arg: &str) -> Result<CodeInstance, CliError> {
    if let Some(instance) = builtin(arg) {
        return Ok(instance);
    }
    let path = Path::new(arg);
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    let code = parse_matrix(&stem, &text)
        .map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))?;
    Ok(CodeInstance::Plain(code))
}

pub fn matrix_to_text(code: &LinearCode) -> String {
    let g = code.generator();
    let mut out = format!("{} {}\n", code.k(), code.n());
    for r in 0..g.rows() {
        for c in 0..g.cols() {
            out.push(if g.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Strict matrix parse; messages carry 1-based line numbers.
pub fn parse_matrix(name: &str, text: &str) -> Result<LinearCode, String> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err("line 1: empty file".to_string());
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [k, n] = fields.as_slice() else {
        return Err("line 1: header must be 'k n'".to_string());
    };
    let k: usize = k.parse().map_err(|_| "line 1: k must be an integer".to_string())?;
    let n: usize = n.parse().map_err(|_| "line 1: n must be an integer".to_string())?;
    let mut rows = Vec::with_capacity(k);
    for (i, row) in lines {
        let line = i + 1;
        if rows.len() == k {
            if row.trim().is_empty() {
                continue;
            }
            return Err(format!("line {line}: expected {k} rows, found more"));
        }
        if row.len() != n || row.bytes().any(|b| b != b'0' && b != b'1') {
            return Err(format!("line {line}: need exactly {n} characters over 0/1"));
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(format!("expected {} rows, found {}", k, rows.len()));
    }
    let g = BitMatrix::from_strings(&rows).map_err(|e| e.to_string())?;
    LinearCode::from_generator(name, g).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_text_roundtrip() {
        for name in BUILTIN_NAMES {
            let instance = builtin(name).unwrap();
            let code = instance.linear();
            let text = matrix_to_text(code);
            let back = parse_matrix(code.name(), &text).unwrap();
            assert_eq!(back.generator(), code.generator(), "{name}");
            assert_eq!(back.name(), code.name());
        }
    }

    #[test]
    fn header_matches_dimensions() {
        let code = code::hermitian_16();
        let text = matrix_to_text(&code);
        assert!(text.starts_with("8 16\n"));
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn parse_rejections_carry_line_numbers() {
        let cases = [
            ("", "line 1"),
            ("8\n", "line 1"),
            ("2 3\n101\n01\n", "line 3"),
            ("2 3\n101\n012\n", "line 3"),
            ("1 3\n101\n110\n", "line 3"),
            ("3 3\n101\n110\n", "expected 3 rows"),
        ];
        for (text, needle) in cases {
            let err = parse_matrix("x", text).err().expect("should fail");
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn trailing_blank_lines_are_fine() {
        let code = parse_matrix("x", "1 3\n111\n\n\n").unwrap();
        assert_eq!((code.k(), code.n()), (1, 3));
    }

    #[test]
    fn unknown_builtin_is_none() {
        assert!(builtin("rep4").is_none());
        assert!(builtin("").is_none());
    }
}
