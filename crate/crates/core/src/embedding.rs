//! Dense word-embedding matrices and the text/binary formats they are stored in.
//!
//! Text files carry an optional `<count> <dim>` header followed by one
//! `<token> <f1> ... <fdim>` line per token. Binary files use the word2vec
//! layout: the same header line, then for each token the token bytes, a
//! single space, and `dim` little-endian `f32` values. A newline may follow
//! each vector.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use byteorder::{ByteOrder, LittleEndian, WriteBytesExt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingFormat {
    /// Text with a `<count> <dim>` header. Files without one are detected
    /// and read as headerless text.
    Text,
    /// Text without a header (GloVe output).
    TextNoheader,
    /// word2vec binary.
    Binary,
}

impl FromStr for EmbeddingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(EmbeddingFormat::Text),
            "text-noheader" => Ok(EmbeddingFormat::TextNoheader),
            "binary" => Ok(EmbeddingFormat::Binary),
            other => Err(Error::Config(format!(
                "unknown embedding format {other:?} (expected text, text-noheader or binary)"
            ))),
        }
    }
}

impl fmt::Display for EmbeddingFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingFormat::Text => "text",
            EmbeddingFormat::TextNoheader => "text-noheader",
            EmbeddingFormat::Binary => "binary",
        })
    }
}

/// Token vocabulary with one dense `f32` vector per token, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    tokens: Vec<String>,
    dim: usize,
    values: Vec<f32>,
    rows: HashMap<String, usize>,
}

impl EmbeddingMatrix {
    /// Builds a matrix from a token list and a row-major value buffer.
    ///
    /// Rejects duplicate tokens, non-finite values and all-zero rows.
    pub fn new(tokens: Vec<String>, dim: usize, values: Vec<f32>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        if values.len() != tokens.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: tokens.len() * dim,
                found: values.len(),
            });
        }
        let mut rows = HashMap::with_capacity(tokens.len());
        for (i, token) in tokens.iter().enumerate() {
            if rows.insert(token.clone(), i).is_some() {
                return Err(Error::DuplicateToken {
                    token: token.clone(),
                    location: format!("row {}", i + 1),
                });
            }
            let row = &values[i * dim..(i + 1) * dim];
            check_row(row).map_err(|msg| Error::parse("<memory>", format!("row {}", i + 1), msg))?;
        }
        Ok(EmbeddingMatrix {
            tokens,
            dim,
            values,
            rows,
        })
    }

    pub fn from_rows<I, S>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut tokens = Vec::new();
        let mut values = Vec::new();
        let mut dim = None;
        for (token, row) in rows {
            let expected = *dim.get_or_insert(row.len());
            if row.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: row.len(),
                });
            }
            tokens.push(token.into());
            values.extend_from_slice(&row);
        }
        Self::new(tokens, dim.unwrap_or(0), values)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.rows.get(token).copied()
    }

    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.index_of(token).map(|i| self.row(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.values.chunks_exact(self.dim))
    }

    /// Returns a copy with every row scaled to unit L2 norm.
    pub fn normalized(&self) -> Self {
        let mut values = self.values.clone();
        for row in values.chunks_exact_mut(self.dim) {
            let norm = row.iter().map(|&x| f64::from(x) * f64::from(x)).sum::<f64>().sqrt();
            for x in row.iter_mut() {
                *x = (f64::from(*x) / norm) as f32;
            }
        }
        EmbeddingMatrix { values, ..self.clone() }
    }

    pub fn load(path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let origin = path.display().to_string();
        match format {
            EmbeddingFormat::Binary => Self::read_binary(&bytes, &origin),
            EmbeddingFormat::Text | EmbeddingFormat::TextNoheader => {
                let text =
                    String::from_utf8(bytes).map_err(|e| Error::parse(&origin, "0", format!("invalid UTF-8: {e}")))?;
                Self::read_text(&text, &origin, format == EmbeddingFormat::Text)
            }
        }
    }

    /// Parses the text format. With `detect_header`, a first line made of
    /// exactly two non-negative integers is taken as the `<count> <dim>`
    /// header; otherwise every line is a vector row.
    pub fn read_text(text: &str, origin: &str, detect_header: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty())
            .peekable();

        let header = match lines.peek() {
            Some(&(_, first)) if detect_header => parse_header(first),
            _ => None,
        };
        if header.is_some() {
            lines.next();
        }

        let mut tokens = Vec::with_capacity(header.map_or(0, |h| h.0));
        let mut values = Vec::new();
        let mut dim = header.map(|h| h.1);
        let mut rows: HashMap<String, usize> = HashMap::new();

        for (lineno, line) in lines {
            let mut fields = line.split_ascii_whitespace();
            let token = fields.next().unwrap_or_default();
            let start = values.len();
            for field in fields {
                let v: f32 = field
                    .parse()
                    .map_err(|_| Error::parse(origin, lineno, format!("cannot parse {field:?} as a float")))?;
                values.push(v);
            }
            let found = values.len() - start;
            let expected = *dim.get_or_insert(found);
            if found != expected {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected {expected} values for {token:?}, found {found}"),
                ));
            }
            if expected == 0 {
                return Err(Error::parse(origin, lineno, "row has no values"));
            }
            check_row(&values[start..]).map_err(|msg| Error::parse(origin, lineno, msg))?;
            if rows.insert(token.to_owned(), tokens.len()).is_some() {
                return Err(Error::DuplicateToken {
                    token: token.to_owned(),
                    location: format!("{origin}:{lineno}"),
                });
            }
            tokens.push(token.to_owned());
        }

        if let Some((count, _)) = header {
            if tokens.len() != count {
                return Err(Error::parse(
                    origin,
                    1,
                    format!("header declares {count} tokens, file has {}", tokens.len()),
                ));
            }
        }
        let dim = dim.ok_or_else(|| Error::parse(origin, 1, "no embedding rows"))?;
        Ok(EmbeddingMatrix {
            tokens,
            dim,
            values,
            rows,
        })
    }

    pub fn read_binary(bytes: &[u8], origin: &str) -> Result<Self> {
        let newline = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::parse(origin, "byte 0", "missing header line"))?;
        let header = std::str::from_utf8(&bytes[..newline])
            .ok()
            .and_then(|h| parse_header(h.trim()))
            .ok_or_else(|| Error::parse(origin, "byte 0", "malformed \"<count> <dim>\" header"))?;
        let (count, dim) = header;
        if dim == 0 {
            return Err(Error::parse(origin, "byte 0", "dimension must be positive"));
        }

        let mut pos = newline + 1;
        let mut tokens = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count * dim);
        let mut rows = HashMap::with_capacity(count);
        for _ in 0..count {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            let space = bytes[start..]
                .iter()
                .position(|&b| b == b' ')
                .ok_or_else(|| Error::parse(origin, format!("byte {start}"), "unterminated token"))?;
            let token = std::str::from_utf8(&bytes[start..start + space])
                .map_err(|_| Error::parse(origin, format!("byte {start}"), "token is not UTF-8"))?
                .to_owned();
            pos = start + space + 1;

            let end = pos + dim * 4;
            if end > bytes.len() {
                return Err(Error::parse(
                    origin,
                    format!("byte {pos}"),
                    format!("truncated vector for {token:?}: expected {dim} floats"),
                ));
            }
            let row_start = values.len();
            values.resize(row_start + dim, 0.0);
            LittleEndian::read_f32_into(&bytes[pos..end], &mut values[row_start..]);
            check_row(&values[row_start..]).map_err(|msg| Error::parse(origin, format!("byte {pos}"), msg))?;
            if rows.insert(token.clone(), tokens.len()).is_some() {
                return Err(Error::DuplicateToken {
                    token,
                    location: format!("{origin}:byte {start}"),
                });
            }
            tokens.push(token);
            pos = end;
        }
        Ok(EmbeddingMatrix {
            tokens,
            dim,
            values,
            rows,
        })
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {}", self.len(), self.dim)?;
        for (token, row) in self.iter() {
            w.write_all(token.as_bytes())?;
            for v in row {
                write!(w, " {v}")?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {}", self.len(), self.dim)?;
        for (token, row) in self.iter() {
            w.write_all(token.as_bytes())?;
            w.write_all(b" ")?;
            for &v in row {
                w.write_f32::<LittleEndian>(v)?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        match format {
            EmbeddingFormat::Binary => self.write_binary(&mut w),
            EmbeddingFormat::Text => self.write_text(&mut w),
            EmbeddingFormat::TextNoheader => self.iter().try_for_each(|(token, row)| {
                w.write_all(token.as_bytes())?;
                for v in row {
                    write!(w, " {v}")?;
                }
                w.write_all(b"\n")
            }),
        }
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut fields = line.split_ascii_whitespace();
    let count = fields.next()?.parse().ok()?;
    let dim = fields.next()?.parse().ok()?;
    fields.next().is_none().then_some((count, dim))
}

fn check_row(row: &[f32]) -> std::result::Result<(), String> {
    if let Some(v) = row.iter().find(|v| !v.is_finite()) {
        return Err(format!("non-finite value {v}"));
    }
    if row.iter().all(|&v| v == 0.0) {
        return Err("zero vector".into());
    }
    Ok(())
}
