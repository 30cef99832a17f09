//! Code files: a header `n=<len>`, optionally followed by ` complete=1`,
//! then one codeword per line as a binary string, coordinate 0 first,
//! in ascending order.

use std::io::{BufRead, Write};

use crate::codeset::CodeSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub code: CodeSet,
    /// The header claims the file holds a whole extended perfect or perfect
    /// code of its length.
    pub complete: bool,
}

/// Cardinality of an extended perfect code (length 2^m) or of a perfect
/// code (length 2^m - 1); `None` for other lengths.
pub fn complete_cardinality(len: u32) -> Option<u64> {
    if len >= 4 && len.is_power_of_two() {
        Some(1 << (len - len.trailing_zeros() - 1))
    } else if len >= 3 && (len + 1).is_power_of_two() {
        Some(1 << (len - (len + 1).trailing_zeros()))
    } else {
        None
    }
}

impl CodeFile {
    pub fn new(code: CodeSet, complete: bool) -> Self {
        CodeFile { code, complete }
    }

    /// Whether the line count agrees with a `complete=1` header.
    pub fn check_complete(&self) -> Result<()> {
        if !self.complete {
            return Ok(());
        }
        let expected = complete_cardinality(self.code.length());
        if expected != Some(self.code.cardinality()) {
            return Err(Error::parse(
                1,
                header_prefix(self.code.length()).len() + 2,
                format!(
                    "header declares a complete code of {} words, file has {}",
                    expected.map_or("no".to_string(), |e| e.to_string()),
                    self.code.cardinality()
                ),
            ));
        }
        Ok(())
    }

    pub fn write(&self, out: impl Write) -> Result<()> {
        write_code(&self.code, self.complete, out)
    }

    pub fn read(input: impl BufRead) -> Result<CodeFile> {
        read_code(input)
    }

    pub fn serialize(&self) -> String {
        let mut out = Vec::new();
        self.write(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ASCII output")
    }
}

impl std::str::FromStr for CodeFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        read_code(s.as_bytes())
    }
}

fn header_prefix(len: u32) -> String {
    format!("n={len}")
}

pub fn write_code(code: &CodeSet, complete: bool, out: impl Write) -> Result<()> {
    let mut out = std::io::BufWriter::with_capacity(1 << 16, out);
    let len = code.length() as usize;
    out.write_all(header_prefix(code.length()).as_bytes())?;
    if complete {
        out.write_all(b" complete=1")?;
    }
    out.write_all(b"\n")?;
    let mut line = vec![b'0'; len + 1];
    line[len] = b'\n';
    for w in code.iter() {
        for (k, c) in line[..len].iter_mut().enumerate() {
            *c = b'0' + ((w >> (len - 1 - k)) & 1) as u8;
        }
        out.write_all(&line)?;
    }
    out.flush()?;
    Ok(())
}

fn parse_header(text: &str) -> Result<(u32, bool)> {
    let mut parts = text.split(' ');
    let first = parts.next().unwrap_or("");
    let value = first
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(1, 1, "expected `n=<length>`"))?;
    let len: u32 = value
        .parse()
        .ok()
        .filter(|l| (1..=64).contains(l))
        .ok_or_else(|| Error::parse(1, 3, "length must be an integer in 1..=64"))?;
    let mut complete = false;
    let mut column = first.len() + 2;
    for part in parts {
        if part != "complete=1" || complete {
            return Err(Error::parse(
                1,
                column,
                format!("unexpected header field {part:?}"),
            ));
        }
        complete = true;
        column += part.len() + 1;
    }
    Ok((len, complete))
}

/// Parses a code file, checking syntax, duplicates and order. A
/// `complete=1` count mismatch is left to [`CodeFile::check_complete`].
pub fn read_code(mut input: impl BufRead) -> Result<CodeFile> {
    let mut buf = String::new();
    if input.read_line(&mut buf)? == 0 {
        return Err(Error::parse(1, 1, "empty file"));
    }
    let (len, complete) = parse_header(buf.trim_end_matches(['\n', '\r']))?;
    let mut words = Vec::new();
    let mut line = 1;
    loop {
        buf.clear();
        if input.read_line(&mut buf)? == 0 {
            break;
        }
        line += 1;
        let text = buf.trim_end_matches(['\n', '\r']).as_bytes();
        let mut w = 0u64;
        for (k, &c) in text.iter().enumerate() {
            if k as u32 >= len {
                return Err(Error::parse(line, k + 1, format!("word longer than {len}")));
            }
            w = match c {
                b'0' => w << 1,
                b'1' => (w << 1) | 1,
                _ => {
                    return Err(Error::parse(
                        line,
                        k + 1,
                        format!("unexpected character {:?}", c as char),
                    ))
                }
            };
        }
        if (text.len() as u32) < len {
            return Err(Error::parse(
                line,
                text.len() + 1,
                format!("word shorter than {len}"),
            ));
        }
        if let Some(&prev) = words.last() {
            if w == prev {
                return Err(Error::parse(line, 1, "duplicate word"));
            }
            if w < prev {
                return Err(Error::parse(line, 1, "words are not in ascending order"));
            }
        }
        words.push(w);
    }
    Ok(CodeFile {
        code: CodeSet::from_raw_words(len, words),
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaffold::hamming_code;
    use crate::word::Space;

    fn parse_err(text: &str) -> (usize, usize) {
        match text.parse::<CodeFile>() {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn complete_sizes() {
        assert_eq!(complete_cardinality(16), Some(2048));
        assert_eq!(complete_cardinality(15), Some(2048));
        assert_eq!(complete_cardinality(8), Some(16));
        assert_eq!(complete_cardinality(7), Some(16));
        assert_eq!(complete_cardinality(32), Some(1 << 26));
        assert_eq!(complete_cardinality(12), None);
    }

    #[test]
    fn small_file_text() {
        let code = CodeSet::from_raw_words(4, [0b1111, 0b0000]);
        let file = CodeFile::new(code, false);
        assert_eq!(file.serialize(), "n=4\n0000\n1111\n");
        let h = CodeFile::new(hamming_code(&Space::new(8).unwrap()).unwrap(), true);
        let text = h.serialize();
        assert!(text.starts_with("n=8 complete=1\n00000000\n"));
        assert_eq!(text.lines().count(), 17);
    }

    #[test]
    fn round_trip() {
        let h = hamming_code(&Space::new(16).unwrap()).unwrap();
        for complete in [false, true] {
            let file = CodeFile::new(h.clone(), complete);
            let text = file.serialize();
            let back: CodeFile = text.parse().unwrap();
            assert_eq!(back, file);
            assert_eq!(back.serialize(), text);
            back.check_complete().unwrap();
        }
    }

    #[test]
    fn missing_trailing_newline_and_crlf() {
        let back: CodeFile = "n=4\r\n0000\r\n1111".parse().unwrap();
        assert_eq!(back.code.iter().collect::<Vec<_>>(), vec![0, 15]);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_err(""), (1, 1));
        assert_eq!(parse_err("m=4\n"), (1, 1));
        assert_eq!(parse_err("n=x\n"), (1, 3));
        assert_eq!(parse_err("n=0\n"), (1, 3));
        assert_eq!(parse_err("n=4 full=1\n"), (1, 5));
        assert_eq!(parse_err("n=4 complete=1 complete=1\n"), (1, 16));
        assert_eq!(parse_err("n=4\n0000\n0120\n"), (3, 3));
        assert_eq!(parse_err("n=4\n000\n"), (2, 4));
        assert_eq!(parse_err("n=4\n00000\n"), (2, 5));
        assert_eq!(parse_err("n=4\n0011\n0011\n"), (3, 1));
        assert_eq!(parse_err("n=4\n0011\n0000\n"), (3, 1));
        assert_eq!(parse_err("n=4\n0011\n\n"), (3, 1));
    }

    #[test]
    fn truncated_complete_file() {
        let h = hamming_code(&Space::new(8).unwrap()).unwrap();
        let text = CodeFile::new(h, true).serialize();
        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        let file: CodeFile = truncated.parse().unwrap();
        assert!(file.complete);
        assert!(matches!(
            file.check_complete(),
            Err(Error::Parse {
                line: 1,
                column: 5,
                ..
            })
        ));
    }
}
