//! Plain-text portfolio instance format.
//!
//! UTF-8, whitespace-separated tokens, `#` starts a comment running to the
//! end of the line. Layout:
//!
//! ```text
//!   portfolio 1                      # format name and version
//!   n <int> alpha <float> rho <float>
//!   <mean: n floats>
//!   <u: n floats>
//!   <row 0 of the lower triangle of Q: 1 float>
//!   <row 1: 2 floats>
//!   ...
//!   <row n−1: n floats>
//! ```
//!
//! Only the lower triangle of `Q` is stored; reading expands it into the
//! full symmetric matrix. Writing uses the shortest decimal that round-trips
//! each `f64`, so a write/read cycle reproduces the instance exactly.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::mat::Mat;
use crate::problems::portfolio::PortfolioInstance;

#[derive(Debug, Error)]
pub enum PortfolioFileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed header: {message}")]
    MalformedHeader { line: usize, message: String },
    #[error("line {line}, column {col}: expected a number, found `{token}`")]
    NonNumericToken {
        line: usize,
        col: usize,
        token: String,
    },
    #[error("line {line}: {message}")]
    DimensionMismatch { line: usize, message: String },
    #[error("unexpected end of file: {message}")]
    UnexpectedEof { message: String },
}

struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(content: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (lineno, raw) in content.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut col = 0usize;
        for piece in line.split_whitespace() {
            let at = line[col..].find(piece).map(|p| col + p).unwrap_or(col);
            tokens.push(Token {
                text: piece.to_string(),
                line: lineno + 1,
                col: at + 1,
            });
            col = at + piece.len();
        }
    }
    tokens
}

struct Reader {
    tokens: Vec<Token>,
    pos: usize,
}

impl Reader {
    fn next(&mut self, what: &str) -> Result<&Token, PortfolioFileError> {
        let t = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| PortfolioFileError::UnexpectedEof {
                message: format!("expected {what}"),
            })?;
        self.pos += 1;
        Ok(t)
    }

    fn number(&mut self, what: &str) -> Result<(f64, usize), PortfolioFileError> {
        let t = self.next(what)?;
        let parsed = t
            .text
            .parse::<f64>()
            .map_err(|_| PortfolioFileError::NonNumericToken {
                line: t.line,
                col: t.col,
                token: t.text.clone(),
            })?;
        Ok((parsed, t.line))
    }
}

/// Parses an instance from a file.
pub fn read_portfolio_file(
    path: impl AsRef<Path>,
) -> Result<PortfolioInstance, PortfolioFileError> {
    let content = std::fs::read_to_string(path)?;
    parse_portfolio(&content)
}

/// Parses an instance from its text form.
pub fn parse_portfolio(content: &str) -> Result<PortfolioInstance, PortfolioFileError> {
    let mut r = Reader {
        tokens: tokenize(content),
        pos: 0,
    };

    let magic = r.next("format name")?;
    if magic.text != "portfolio" {
        return Err(PortfolioFileError::MalformedHeader {
            line: magic.line,
            message: format!("expected `portfolio`, found `{}`", magic.text),
        });
    }
    let version = r.next("format version")?;
    if version.text != "1" {
        return Err(PortfolioFileError::MalformedHeader {
            line: version.line,
            message: format!("unsupported version `{}`", version.text),
        });
    }

    let expect_key = |r: &mut Reader, key: &str| -> Result<(), PortfolioFileError> {
        let t = r.next(key)?;
        if t.text != key {
            return Err(PortfolioFileError::MalformedHeader {
                line: t.line,
                message: format!("expected `{key}`, found `{}`", t.text),
            });
        }
        Ok(())
    };
    expect_key(&mut r, "n")?;
    let (n_raw, n_line) = r.number("asset count")?;
    let n = n_raw as usize;
    if n < 2 || n_raw.fract() != 0.0 {
        return Err(PortfolioFileError::MalformedHeader {
            line: n_line,
            message: format!("asset count must be an integer ≥ 2, found {n_raw}"),
        });
    }
    expect_key(&mut r, "alpha")?;
    let (alpha, _) = r.number("alpha")?;
    expect_key(&mut r, "rho")?;
    let (rho, _) = r.number("rho")?;

    // Every vector lives on one line, so a short line is a dimension error
    // at that line rather than a misparse of whatever follows.
    let mut read_line_vec = |what: &str, len: usize| -> Result<Vec<f64>, PortfolioFileError> {
        let mut v = Vec::with_capacity(len);
        let mut first_line = 0usize;
        for i in 0..len {
            let (x, line) = r.number(what)?;
            if i == 0 {
                first_line = line;
            } else if line != first_line {
                return Err(PortfolioFileError::DimensionMismatch {
                    line: first_line,
                    message: format!("expected {len} {what} values on one line, found {i}"),
                });
            }
            v.push(x);
        }
        if let Some(extra) = r.tokens.get(r.pos) {
            if extra.line == first_line {
                return Err(PortfolioFileError::DimensionMismatch {
                    line: first_line,
                    message: format!(
                        "expected {len} {what} values, found more (`{}`)",
                        extra.text
                    ),
                });
            }
        }
        Ok(v)
    };
    let mean = read_line_vec("mean", n)?;
    let u = read_line_vec("bound", n)?;

    let mut q = Mat::zeros(n, n);
    for i in 0..n {
        let row = read_line_vec("covariance", i + 1)?;
        for (j, &x) in row.iter().enumerate() {
            q.set(i, j, x);
            q.set(j, i, x);
        }
    }

    if let Some(extra) = r.tokens.get(r.pos) {
        return Err(PortfolioFileError::DimensionMismatch {
            line: extra.line,
            message: format!(
                "trailing token `{}` after the covariance triangle; \
                 header declares n = {n}",
                extra.text
            ),
        });
    }

    Ok(PortfolioInstance {
        n,
        q,
        mean,
        rho,
        u,
        alpha,
    })
}

/// Serializes an instance to its text form.
pub fn portfolio_to_string(inst: &PortfolioInstance) -> String {
    let mut out = String::new();
    out.push_str("portfolio 1\n");
    let _ = writeln!(out, "n {} alpha {} rho {}", inst.n, inst.alpha, inst.rho);
    let join = |v: &[f64]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&join(&inst.mean));
    out.push('\n');
    out.push_str(&join(&inst.u));
    out.push('\n');
    for i in 0..inst.n {
        let row: Vec<f64> = (0..=i).map(|j| inst.q.get(i, j)).collect();
        out.push_str(&join(&row));
        out.push('\n');
    }
    out
}

/// Writes an instance to a file.
pub fn write_portfolio_file(
    inst: &PortfolioInstance,
    path: impl AsRef<Path>,
) -> Result<(), PortfolioFileError> {
    std::fs::write(path, portfolio_to_string(inst))?;
    Ok(())
}
