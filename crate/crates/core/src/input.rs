//! Germ input: `germ { p1; p2; p3 }`, optionally followed by
//! `branches { d1; d2; … }` and
//! `pairing { sigma: (1 2)(3); vsharp: "t"; v: { {1,2}: 0, {3}: 0 } }`,
//! or the same data as JSON.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::arith::{parse_poly, MultiPoly};
use crate::boundary::{BoundaryError, PairingData, PairingSource, VerticalData};
use crate::germ::{source_vars, GermError, MapGerm};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Pairing(#[from] BoundaryError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn syntax(msg: impl Into<String>) -> InputError {
    InputError::Syntax(msg.into())
}

#[derive(Clone, Debug)]
pub struct GermInput {
    pub germ: MapGerm,
    pub branches: Option<Vec<MultiPoly>>,
    pub pairing: Option<PairingData>,
}

/// Parse either the block format or JSON.
pub fn parse_germ_input(text: &str) -> Result<GermInput, InputError> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with('[') {
        return parse_json(t);
    }
    let blocks = blocks(t)?;
    let mut germ = None;
    let mut branches = None;
    let mut pairing = None;
    for (name, body) in blocks {
        match name.as_str() {
            "germ" => germ = Some(MapGerm::parse(&body)?),
            "branches" => branches = Some(parse_branches(split_top(&body, ';').iter().map(String::as_str))?),
            "pairing" => pairing = Some(parse_pairing_body(&body)?),
            other => return Err(syntax(format!("unknown block `{other}`"))),
        }
    }
    let germ = germ.ok_or_else(|| syntax("missing `germ { … }` block"))?;
    Ok(GermInput { germ, branches, pairing })
}

/// `name { body }` blocks at top level; a bare `p1; p2; p3` is a germ.
fn blocks(text: &str) -> Result<Vec<(String, String)>, InputError> {
    if !text.contains('{') {
        return Ok(vec![("germ".into(), text.into())]);
    }
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.find('{').ok_or_else(|| syntax(format!("expected a block, found `{rest}`")))?;
        let name = rest[..open].trim().to_string();
        let close = matching(rest, open)?;
        out.push((name, rest[open + 1..close].to_string()));
        rest = rest[close + 1..].trim();
    }
    Ok(out)
}

fn matching(s: &str, open: usize) -> Result<usize, InputError> {
    let mut depth = 0;
    for (i, c) in s.char_indices().skip_while(|(i, _)| *i < open) {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(syntax("unbalanced braces"))
}

/// Split at `sep` outside braces and quotes.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let (mut depth, mut quoted) = (0i32, false);
    for c in s.chars() {
        match c {
            '"' => quoted = !quoted,
            '{' if !quoted => depth += 1,
            '}' if !quoted => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 && !quoted {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

pub fn parse_branches<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Vec<MultiPoly>, InputError> {
    items
        .into_iter()
        .map(|b| parse_poly(b.trim(), &source_vars()).map_err(|e| syntax(format!("branch `{b}`: {e}"))))
        .collect()
}

/// Cycle notation, 1-based: `(1 2)(3)` → σ = [1, 0, 2].
pub fn parse_cycles(text: &str) -> Result<Vec<usize>, InputError> {
    let mut pairs: Vec<Vec<usize>> = Vec::new();
    for chunk in text.split('(').map(str::trim).filter(|c| !c.is_empty()) {
        let inner = chunk.strip_suffix(')').ok_or_else(|| syntax(format!("bad cycle `({chunk}`")))?;
        let members = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|m| !m.is_empty())
            .map(|m| m.parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| syntax(format!("bad cycle `({chunk}`")))?;
        if members.is_empty() || members.len() > 2 {
            return Err(syntax(format!("cycle `({chunk}` must have one or two members")));
        }
        pairs.push(members);
    }
    let n = pairs.iter().flatten().max().map_or(0, |m| m + 1);
    let mut sigma: Vec<Option<usize>> = vec![None; n];
    for c in &pairs {
        let (a, b) = (c[0], *c.last().unwrap());
        if sigma[a].is_some() || sigma[b].is_some() {
            return Err(syntax(format!("branch listed twice in `{text}`")));
        }
        sigma[a] = Some(b);
        sigma[b] = Some(a);
    }
    sigma
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| syntax(format!("branch {} missing from `{text}`", i + 1))))
        .collect()
}

/// `{ {1,2}: 0, {3}: -4 }` → class key (smallest 0-based member) → value.
fn parse_class_map(text: &str, sigma: &[usize]) -> Result<BTreeMap<usize, i64>, InputError> {
    let body = text.trim().strip_prefix('{').and_then(|b| b.strip_suffix('}')).ok_or_else(|| syntax(format!("bad map `{text}`")))?;
    let mut out = BTreeMap::new();
    for item in split_top(body, ',') {
        let (key, val) = item.rsplit_once(':').ok_or_else(|| syntax(format!("bad entry `{item}`")))?;
        let key = key.trim().trim_start_matches('{').trim_end_matches('}');
        let members = key
            .split(',')
            .map(|m| m.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| syntax(format!("bad class `{key}`")))?;
        let val: i64 = val.trim().parse().map_err(|_| syntax(format!("bad value in `{item}`")))?;
        insert_class(&mut out, &members, val, sigma)?;
    }
    Ok(out)
}

fn insert_class(out: &mut BTreeMap<usize, i64>, members: &[usize], val: i64, sigma: &[usize]) -> Result<(), InputError> {
    let &first = members.first().ok_or_else(|| syntax("empty class"))?;
    if first >= sigma.len() {
        return Err(syntax(format!("class {{{}}} is outside σ", first + 1)));
    }
    let mut class = vec![first, sigma[first]];
    class.sort();
    class.dedup();
    let mut given = members.to_vec();
    given.sort();
    given.dedup();
    if given != class {
        let show = |c: &[usize]| c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        return Err(syntax(format!("{{{}}} is not a σ-class (expected {{{}}})", show(&given), show(&class))));
    }
    out.insert(class[0], val);
    Ok(())
}

/// Body of a `pairing { … }` block.
pub fn parse_pairing_body(body: &str) -> Result<PairingData, InputError> {
    let mut fields = BTreeMap::new();
    for item in split_top(body, ';') {
        let (k, v) = item.split_once(':').ok_or_else(|| syntax(format!("bad pairing field `{item}`")))?;
        fields.insert(k.trim().to_string(), v.trim().to_string());
    }
    let sigma = parse_cycles(fields.get("sigma").ok_or_else(|| syntax("pairing needs `sigma`"))?)?;
    let vertical = match (fields.get("vsharp"), fields.get("v"), fields.get("vi")) {
        (Some(vs), Some(v), None) => {
            let d_sharp = parse_poly(vs.trim_matches('"'), &source_vars()).map_err(|e| syntax(format!("vsharp: {e}")))?;
            VerticalData::Sectional { d_sharp, v: parse_class_map(v, &sigma)? }
        }
        (None, None, Some(vi)) => VerticalData::Aggregate { vi: parse_class_map(vi, &sigma)? },
        _ => return Err(syntax("pairing needs either `vsharp` and `v`, or `vi`")),
    };
    Ok(PairingData::new(sigma, vertical, PairingSource::UserSupplied)?)
}

/// A file holding a `pairing { … }` block (or just its body).
pub fn parse_pairing(text: &str) -> Result<PairingData, InputError> {
    let t = text.trim();
    if t.starts_with('{') {
        return pairing_from_json(&serde_json::from_str(t)?);
    }
    match t.strip_prefix("pairing") {
        Some(rest) => {
            let rest = rest.trim();
            let close = matching(rest, 0)?;
            parse_pairing_body(&rest[1..close])
        }
        None => parse_pairing_body(t),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonGerm {
    List(Vec<String>),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPairing {
    sigma: String,
    vsharp: Option<String>,
    v: Option<BTreeMap<String, i64>>,
    vi: Option<BTreeMap<String, i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInput {
    germ: JsonGerm,
    branches: Option<Vec<String>>,
    pairing: Option<JsonPairing>,
}

fn json_class_map(m: &BTreeMap<String, i64>, sigma: &[usize]) -> Result<BTreeMap<usize, i64>, InputError> {
    let mut out = BTreeMap::new();
    for (k, &v) in m {
        let members = k
            .trim_matches(|c| c == '{' || c == '}')
            .split(',')
            .map(|m| m.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| syntax(format!("bad class `{k}`")))?;
        insert_class(&mut out, &members, v, sigma)?;
    }
    Ok(out)
}

fn pairing_from_json(p: &JsonPairing) -> Result<PairingData, InputError> {
    let sigma = parse_cycles(&p.sigma)?;
    let vertical = match (&p.vsharp, &p.v, &p.vi) {
        (Some(vs), Some(v), None) => VerticalData::Sectional {
            d_sharp: parse_poly(vs, &source_vars()).map_err(|e| syntax(format!("vsharp: {e}")))?,
            v: json_class_map(v, &sigma)?,
        },
        (None, None, Some(vi)) => VerticalData::Aggregate { vi: json_class_map(vi, &sigma)? },
        _ => return Err(syntax("pairing needs either `vsharp` and `v`, or `vi`")),
    };
    Ok(PairingData::new(sigma, vertical, PairingSource::UserSupplied)?)
}

fn parse_json(text: &str) -> Result<GermInput, InputError> {
    let input: JsonInput = match serde_json::from_str::<Vec<String>>(text) {
        Ok(list) => JsonInput { germ: JsonGerm::List(list), branches: None, pairing: None },
        Err(_) => serde_json::from_str(text)?,
    };
    let germ = match input.germ {
        JsonGerm::List(parts) if parts.len() == 3 => MapGerm::parse(&parts.join(";"))?,
        JsonGerm::List(parts) => return Err(GermError::Arity(parts.len()).into()),
        JsonGerm::Text(t) => MapGerm::parse(&t)?,
    };
    let branches = input.branches.as_ref().map(|b| parse_branches(b.iter().map(String::as_str))).transpose()?;
    let pairing = input.pairing.as_ref().map(pairing_from_json).transpose()?;
    Ok(GermInput { germ, branches, pairing })
}
