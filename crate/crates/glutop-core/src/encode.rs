//! Canonical string encodings for derived elements.
//!
//! Limit tuples, pullback pairs, and sections are all encoded as escaped
//! `|`-joined component lists, so equality of derived elements is string
//! equality and every construction is reproducible byte-for-byte.

use alloc::string::String;
use alloc::vec::Vec;

/// Escapes one component: `\` -> `\\`, `|` -> `\|`.
fn escape_into(out: &mut String, part: &str) {
    for ch in part.chars() {
        if ch == '\\' || ch == '|' {
            out.push('\\');
        }
        out.push(ch);
    }
}

/// Joins components into one canonical tag. Injective for a fixed arity;
/// the empty tuple encodes as `()`.
pub fn encode_tuple<S: AsRef<str>>(parts: &[S]) -> String {
    if parts.is_empty() {
        return String::from("()");
    }
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k > 0 {
            out.push('|');
        }
        escape_into(&mut out, p.as_ref());
    }
    out
}

/// Encodes an ordered pair; used for pullback and product elements.
pub fn encode_pair(left: &str, right: &str) -> String {
    encode_tuple(&[left, right])
}

/// Splits a tag produced by [`encode_tuple`] back into components.
pub fn decode_tuple(tag: &str) -> Vec<String> {
    if tag == "()" {
        return Vec::new();
    }
    let mut parts = Vec::new();
    let mut cur = String::new();
    let mut chars = tag.chars();
    while let Some(ch) = chars.next() {
        match ch {
            '\\' => {
                if let Some(next) = chars.next() {
                    cur.push(next);
                }
            }
            '|' => {
                parts.push(core::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}
