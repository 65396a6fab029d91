//! Line-oriented text format.
//!
//! ```text
//! # comment
//! poset diamond
//! elements: a b c d
//! relations: a<b a<c b<d c<d
//! ```
//!
//! `elements:` and `relations:` lines may repeat; relations are generating
//! pairs and may be chained (`a<b<c`).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::poset::{Poset, PosetBuilder};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    pub allow_disconnected: bool,
}

pub fn parse(text: &str) -> Result<Poset> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, opts: ParseOptions) -> Result<Poset> {
    let mut b = PosetBuilder::new().allow_disconnected(opts.allow_disconnected);
    let mut seen_content = false;
    let mut relations: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |reason: String| Error::Parse {
            line: line_no,
            reason,
        };
        if let Some(rest) = line.strip_prefix("elements:") {
            for tok in rest.split_whitespace() {
                b.element(tok).map_err(|e| perr(e.to_string()))?;
            }
        } else if let Some(rest) = line.strip_prefix("relations:") {
            for tok in rest.split_whitespace() {
                let parts: Vec<&str> = tok.split('<').collect();
                if parts.len() < 2 || parts.iter().any(|p| p.is_empty()) {
                    return Err(perr(format!("malformed relation `{tok}`")));
                }
                for w in parts.windows(2) {
                    relations.push((line_no, w[0].to_string(), w[1].to_string()));
                }
            }
        } else if let Some(rest) = line.strip_prefix("poset") {
            if seen_content {
                return Err(perr("`poset` header must come first".into()));
            }
            let name = rest.trim();
            if !rest.starts_with(char::is_whitespace) || name.is_empty() {
                return Err(perr("`poset` header needs a name".into()));
            }
            b.set_name(name);
        } else {
            return Err(perr(format!("unrecognised line `{line}`")));
        }
        seen_content = true;
    }

    for (line, lo, hi) in relations {
        b.relation(&lo, &hi).map_err(|e| Error::Parse {
            line,
            reason: e.to_string(),
        })?;
    }
    b.build()
}

/// Serialises elements in declaration order and the Hasse diagram as relations.
pub fn write(p: &Poset) -> String {
    let mut out = String::new();
    if let Some(name) = p.name() {
        let _ = writeln!(out, "poset {name}");
    }
    let _ = writeln!(out, "elements: {}", p.names().join(" "));
    // keep lines short enough to read
    for chunk in p.covers().chunks(8) {
        let pairs: Vec<String> = chunk
            .iter()
            .map(|&(a, b)| format!("{}<{}", p.name_of(a), p.name_of(b)))
            .collect();
        let _ = writeln!(out, "relations: {}", pairs.join(" "));
    }
    out
}
