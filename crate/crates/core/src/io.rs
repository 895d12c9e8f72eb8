//! Text and JSON forms of the crate's values.
//!
//! A class is written `d;m1,...,mn` or as the object
//! `{"n":4,"d":6,"m":[3,3,3,3]}`; the `n` field is optional on input and
//! must agree with the length of `m` when present. A local type is
//! written `a/b`. A word is a JSON array of strings, `"r:i,j,k"` for a
//! reflection and `"p:t1,...,tn"` for a relabelling sending slot `i` to
//! `tᵢ`; indices are 1-based on the wire and 0-based in memory.
//!
//! Parse errors carry the byte offset of the offending token. Integers
//! of any size are accepted; JSON numbers are read from their literal
//! text, so nothing is ever routed through floating point.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::Value;

use crate::cremona::{Generator, Permutation};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;
use crate::resolution::{LocalType, ResolutionChain};

/// Reads a class from either wire form, chosen by the first non-space
/// byte.
pub fn parse_class(text: &str) -> Result<DivisorClass> {
    let lead = text.len() - text.trim_start().len();
    match text[lead..].chars().next() {
        None => Err(Error::parse(lead, "empty input, expected a class")),
        Some('{') => parse_class_json(text),
        Some(_) => parse_class_text(text),
    }
}

fn parse_int_at(text: &str, start: usize, end: usize) -> Result<BigInt> {
    let slice = &text[start..end];
    let token = slice.trim();
    let pos = start + (slice.len() - slice.trim_start().len());
    if token.is_empty() {
        return Err(Error::parse(pos, "expected an integer"));
    }
    BigInt::from_str(token)
        .map_err(|_| Error::parse(pos, format!("invalid integer '{token}'")))
}

fn parse_class_text(text: &str) -> Result<DivisorClass> {
    let semi = text.find(';').ok_or_else(|| {
        Error::parse(text.len(), "expected ';' between degree and multiplicities")
    })?;
    let d = parse_int_at(text, 0, semi)?;
    let mut m = Vec::new();
    let mut start = semi + 1;
    loop {
        let end = text[start..].find(',').map(|i| start + i).unwrap_or(text.len());
        m.push(parse_int_at(text, start, end)?);
        if end == text.len() {
            break;
        }
        start = end + 1;
    }
    Ok(DivisorClass::new(d, m))
}

/// Byte offset of a 1-based (line, column) pair, for relaying positions
/// out of the JSON parser.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut remaining = line.saturating_sub(1);
    let mut offset = 0;
    for (i, b) in text.bytes().enumerate() {
        if remaining == 0 {
            break;
        }
        if b == b'\n' {
            remaining -= 1;
            offset = i + 1;
        }
    }
    (offset + column.saturating_sub(1)).min(text.len())
}

fn number_to_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(num) => BigInt::from_str(&num.to_string())
            .map_err(|_| Error::parse(0, format!("{what} must be an integer, got {num}"))),
        other => Err(Error::parse(0, format!("{what} must be an integer, got {other}"))),
    }
}

fn parse_class_json(text: &str) -> Result<DivisorClass> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(byte_offset(text, e.line(), e.column()), e.to_string())
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse(0, "expected an object with 'd' and 'm'"))?;
    for key in obj.keys() {
        if key != "n" && key != "d" && key != "m" {
            return Err(Error::parse(0, format!("unknown field '{key}'")));
        }
    }
    let d = number_to_bigint(
        obj.get("d")
            .ok_or_else(|| Error::parse(0, "missing field 'd'"))?,
        "field 'd'",
    )?;
    let m_value = obj
        .get("m")
        .ok_or_else(|| Error::parse(0, "missing field 'm'"))?;
    let arr = m_value
        .as_array()
        .ok_or_else(|| Error::parse(0, "field 'm' must be an array"))?;
    if arr.is_empty() {
        return Err(Error::parse(0, "field 'm' must not be empty"));
    }
    let mut m = Vec::with_capacity(arr.len());
    for (i, entry) in arr.iter().enumerate() {
        m.push(number_to_bigint(entry, &format!("m[{i}]"))?);
    }
    if let Some(n_value) = obj.get("n") {
        let n = number_to_bigint(n_value, "field 'n'")?;
        if n != BigInt::from(m.len()) {
            return Err(Error::parse(
                0,
                format!("field 'n' is {n} but 'm' has {} entries", m.len()),
            ));
        }
    }
    Ok(DivisorClass::new(d, m))
}

/// `d;m1,...,mn`, no spaces.
pub fn emit_class_text(x: &DivisorClass) -> String {
    x.to_string()
}

/// `{"n":…,"d":…,"m":[…]}` on one line.
pub fn emit_class_json(x: &DivisorClass) -> String {
    let m: Vec<String> = x.mults().iter().map(|v| v.to_string()).collect();
    format!(
        "{{\"n\":{},\"d\":{},\"m\":[{}]}}",
        x.n(),
        x.degree(),
        m.join(",")
    )
}

/// Reads `a/b` into a local type.
pub fn parse_local_type(text: &str) -> Result<LocalType> {
    let slash = text
        .find('/')
        .ok_or_else(|| Error::parse(text.len(), "expected 'a/b'"))?;
    let parse_side = |start: usize, end: usize| -> Result<u64> {
        let slice = &text[start..end];
        let token = slice.trim();
        let pos = start + (slice.len() - slice.trim_start().len());
        if token.is_empty() {
            return Err(Error::parse(pos, "expected an exponent"));
        }
        token
            .parse::<u64>()
            .map_err(|_| Error::parse(pos, format!("invalid exponent '{token}'")))
    };
    let a = parse_side(0, slash)?;
    let b = parse_side(slash + 1, text.len())?;
    LocalType::new(a, b)
}

pub fn emit_local_type(t: &LocalType) -> String {
    t.to_string()
}

/// `mults=[2,1,1] length=3`.
pub fn emit_chain_text(chain: &ResolutionChain) -> String {
    let mults: Vec<String> = chain.multiplicities().iter().map(|v| v.to_string()).collect();
    format!("mults=[{}] length={}", mults.join(","), chain.len())
}

/// `{"mults":[…],"satellite":[…],"length":…}` on one line.
pub fn emit_chain_json(chain: &ResolutionChain) -> String {
    let mults: Vec<String> = chain.multiplicities().iter().map(|v| v.to_string()).collect();
    let flags: Vec<&str> = chain
        .satellite_flags()
        .iter()
        .map(|&s| if s { "true" } else { "false" })
        .collect();
    format!(
        "{{\"mults\":[{}],\"satellite\":[{}],\"length\":{}}}",
        mults.join(","),
        flags.join(","),
        chain.len()
    )
}

/// Serializes a word as a JSON array of generator strings, 1-based.
pub fn emit_word(word: &[Generator]) -> String {
    let items: Vec<String> = word
        .iter()
        .map(|g| match g {
            Generator::Reflect(i, j, k) => {
                format!("\"r:{},{},{}\"", i + 1, j + 1, k + 1)
            }
            Generator::Permute(p) => {
                let targets: Vec<String> =
                    p.map().iter().map(|t| (t + 1).to_string()).collect();
                format!("\"p:{}\"", targets.join(","))
            }
        })
        .collect();
    format!("[{}]", items.join(","))
}

fn parse_indices(body: &str, what: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for piece in body.split(',') {
        let token = piece.trim();
        let value: usize = token
            .parse()
            .map_err(|_| Error::parse(0, format!("invalid index '{token}' in {what}")))?;
        if value == 0 {
            return Err(Error::parse(0, format!("{what} indices are 1-based")));
        }
        out.push(value - 1);
    }
    Ok(out)
}

/// Reads a word back from its JSON array form.
pub fn parse_word(text: &str) -> Result<Vec<Generator>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(byte_offset(text, e.line(), e.column()), e.to_string())
    })?;
    let arr = value
        .as_array()
        .ok_or_else(|| Error::parse(0, "expected a JSON array of generator strings"))?;
    let mut word = Vec::with_capacity(arr.len());
    for entry in arr {
        let s = entry
            .as_str()
            .ok_or_else(|| Error::parse(0, format!("expected a string, got {entry}")))?;
        if let Some(body) = s.strip_prefix("r:") {
            let idx = parse_indices(body, "reflection")?;
            if idx.len() != 3 {
                return Err(Error::parse(
                    0,
                    format!("reflection needs exactly 3 indices, got {}", idx.len()),
                ));
            }
            word.push(Generator::Reflect(idx[0], idx[1], idx[2]));
        } else if let Some(body) = s.strip_prefix("p:") {
            let idx = parse_indices(body, "permutation")?;
            word.push(Generator::Permute(Permutation::new(idx)?));
        } else {
            return Err(Error::parse(
                0,
                format!("generator '{s}' must start with 'r:' or 'p:'"),
            ));
        }
    }
    Ok(word)
}

/// Integer when the denominator is 1, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
