use std::fmt;

use super::OwlError;

/// An absolute IRI.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(s: impl Into<String>) -> Result<Self, OwlError> {
        let s = s.into();
        let scheme_ok = s
            .split_once(':')
            .map(|(scheme, rest)| {
                !rest.is_empty()
                    && scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && scheme
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
            })
            .unwrap_or(false);
        if !scheme_ok || s.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"')) {
            return Err(OwlError::RelativeIri(s));
        }
        Ok(Iri(s))
    }

    /// `<namespace><encoded local>`; `namespace` is taken as already valid.
    pub fn with_local(namespace: &str, local: &str) -> Self {
        Iri(format!("{namespace}{}", encode_local(local)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_unreserved(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'~' | b'-')
}

/// Percent-encodes every byte outside `[A-Za-z0-9_.~-]`:
/// `F:7(#11)` becomes `F%3A7%28%2311%29`.
pub fn encode_local(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for &b in text.as_bytes() {
        if is_unreserved(b) {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

/// Inverse of [`encode_local`]. Malformed escapes are kept verbatim.
pub fn decode_local(local: &str) -> String {
    let bytes = local.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            let hex = &bytes[i + 1..i + 3];
            if hex.iter().all(u8::is_ascii_hexdigit) {
                let b = u8::from_str_radix(std::str::from_utf8(hex).unwrap(), 16).unwrap();
                out.push(b);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8(out).unwrap_or_else(|_| local.to_string())
}
