//! Loaders for command arguments: inline literals, inline JSON, or `@path`.

use std::collections::BTreeSet;
use std::fs;

use justinf_core::algebra::AlgebraElement;
use justinf_core::bratteli::{BratteliDiagram, DiagramIdeal};
use justinf_core::grig::GroupElement;
use justinf_core::k0::K0Element;
use justinf_core::primspace::FiniteT0Space;
use justinf_core::Error;
use serde::de::DeserializeOwned;

/// Reads `@path` from disk, `-` from stdin, anything else verbatim.
pub fn read_arg(arg: &str) -> Result<String, Error> {
    if arg == "-" {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| Error::Malformed(format!("stdin: {e}")));
    }
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("{what} JSON: {e}")))
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('[' | '{' | '"'))
}

pub fn word(arg: &str) -> Result<GroupElement, Error> {
    let text = read_arg(arg)?;
    if looks_like_json(&text) {
        return json(&text, "word");
    }
    text.trim().parse()
}

/// An algebra element written as an expression such as `(1-d)a(1-d)` or as JSON terms.
pub fn element(arg: &str) -> Result<AlgebraElement, Error> {
    let text = read_arg(arg)?;
    if looks_like_json(&text) {
        return json(&text, "element");
    }
    text.trim().parse()
}

pub fn diagram(arg: &str) -> Result<BratteliDiagram, Error> {
    json(&read_arg(arg)?, "diagram")
}

pub fn ideal(arg: &str) -> Result<DiagramIdeal, Error> {
    json(&read_arg(arg)?, "ideal")
}

/// A K0 element as `{level, vector}` JSON or a comma-separated vector.
pub fn k0(arg: &str) -> Result<K0Element, Error> {
    let text = read_arg(arg)?;
    if looks_like_json(&text) {
        return json(&text, "k0 element");
    }
    let vector = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| Error::Malformed(format!("k0 coordinate {s:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    K0Element::new(vector)
}

pub fn space(arg: &str) -> Result<FiniteT0Space, Error> {
    json(&read_arg(arg)?, "space")
}

/// A comma-separated list of positive integers, e.g. `1,3`. Empty means none.
pub fn index_set(text: &str) -> Result<BTreeSet<usize>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| Error::Malformed(format!("index {s:?}: {e}")))
        })
        .collect()
}
