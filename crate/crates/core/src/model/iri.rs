use std::fmt;
use std::sync::Arc;

use super::ModelError;

/// Absolute `http`/`https` IRI in normalized form.
///
/// Normalization percent-encodes every non-ASCII character as UTF-8 bytes and
/// uppercases the hex digits of existing escapes, so equality is byte equality
/// of the normalized text. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

const HEX_UPPER: &[u8; 16] = b"0123456789ABCDEF";

impl Iri {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let fail = |reason: &str| ModelError::InvalidIri {
            text: text.to_string(),
            reason: reason.to_string(),
        };

        let (scheme, rest) = text.split_once("://").ok_or_else(|| fail("missing scheme"))?;
        let scheme = scheme.to_ascii_lowercase();
        if scheme != "http" && scheme != "https" {
            return Err(fail("scheme must be http or https"));
        }
        let authority_end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
        if authority_end == 0 {
            return Err(fail("empty authority"));
        }

        let mut out = String::with_capacity(text.len() + 8);
        out.push_str(&scheme);
        out.push_str("://");
        let mut chars = rest.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                c if c.is_control() || c.is_whitespace() => {
                    return Err(fail("whitespace or control character"))
                }
                '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`' => {
                    return Err(fail("character not allowed in an IRI"))
                }
                '%' => {
                    let hi = chars.next().filter(char::is_ascii_hexdigit);
                    let lo = chars.next().filter(char::is_ascii_hexdigit);
                    match (hi, lo) {
                        (Some(hi), Some(lo)) => {
                            out.push('%');
                            out.push(hi.to_ascii_uppercase());
                            out.push(lo.to_ascii_uppercase());
                        }
                        _ => return Err(fail("malformed percent escape")),
                    }
                }
                c if c.is_ascii() => out.push(c),
                c => {
                    let mut buf = [0u8; 4];
                    for b in c.encode_utf8(&mut buf).bytes() {
                        out.push('%');
                        out.push(HEX_UPPER[(b >> 4) as usize] as char);
                        out.push(HEX_UPPER[(b & 0xF) as usize] as char);
                    }
                }
            }
        }
        Ok(Iri(out.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Appends already-encoded path text after a `/` separator.
    pub fn join(&self, path: &str) -> Result<Self, ModelError> {
        let base = self.as_str().trim_end_matches('/');
        Iri::parse(&format!("{base}/{path}"))
    }

    /// Appends text directly, for `#`-terminated namespaces.
    pub fn append(&self, suffix: &str) -> Result<Self, ModelError> {
        Iri::parse(&format!("{}{suffix}", self.as_str()))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl std::str::FromStr for Iri {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::parse(s)
    }
}
