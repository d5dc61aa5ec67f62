use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use dtgame::Tournament;

/// Board scheme given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum BoardSpec {
    Parity(usize),
    Transitive(usize),
    Random { n: usize, p: f64, seed: u64 },
    File(String),
}

impl FromStr for BoardSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |v: &str, what: &str| v.parse::<usize>().map_err(|e| format!("bad {what} {v:?}: {e}"));
        match parts.as_slice() {
            ["parity", n] => Ok(Self::Parity(num(n, "size")?)),
            ["transitive", n] => Ok(Self::Transitive(num(n, "size")?)),
            ["random", n, p, seed] => Ok(Self::Random {
                n: num(n, "size")?,
                p: p.parse().map_err(|e| format!("bad probability {p:?}: {e}"))?,
                seed: seed.parse().map_err(|e| format!("bad seed {seed:?}: {e}"))?,
            }),
            ["file", ..] => Ok(Self::File(s["file:".len()..].to_string())),
            _ => Err(format!("unknown board {s:?}; expected parity:N, transitive:N, random:N:P:SEED or file:PATH")),
        }
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parity(n) => write!(f, "parity:{n}"),
            Self::Transitive(n) => write!(f, "transitive:{n}"),
            Self::Random { n, p, seed } => write!(f, "random:{n}:{p}:{seed}"),
            Self::File(path) => write!(f, "file:{path}"),
        }
    }
}

impl BoardSpec {
    pub fn load(&self) -> anyhow::Result<Tournament> {
        Ok(match self {
            Self::Parity(n) => Tournament::parity(*n)?,
            Self::Transitive(n) => Tournament::transitive(*n)?,
            Self::Random { n, p, seed } => Tournament::random(*n, *p, *seed)?,
            Self::File(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
                parse_board_text(&text)?
            }
        })
    }
}

/// Parses a tournament file, skipping `#` comment lines.
pub fn parse_board_text(text: &str) -> anyhow::Result<Tournament> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    Ok(Tournament::from_text(&body)?)
}

/// Bias `a:b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bias(pub u32, pub u32);

impl FromStr for Bias {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let Some((a, b)) = s.split_once(':') else {
            return Err(format!("bias must look like A:B, got {s:?}"));
        };
        let a: u32 = a.parse().map_err(|e| format!("bad Maker bias: {e}"))?;
        let b: u32 = b.parse().map_err(|e| format!("bad Breaker bias: {e}"))?;
        if a == 0 || b == 0 {
            return Err("biases must be positive".into());
        }
        Ok(Self(a, b))
    }
}

pub fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let Some((lo, hi)) = s.split_once(':') else { bail!("range must look like LO:HI, got {s:?}") };
    let (lo, hi) = (lo.parse()?, hi.parse()?);
    if lo > hi {
        bail!("empty range {s}");
    }
    Ok((lo, hi))
}
