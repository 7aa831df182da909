use std::fmt;

use super::{ModelError, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    Integer,
    Year,
    Date,
}

impl Datatype {
    pub fn name(&self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Integer => "integer",
            Datatype::Year => "year",
            Datatype::Date => "date",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "string" => Datatype::String,
            "integer" => Datatype::Integer,
            "year" => Datatype::Year,
            "date" => Datatype::Date,
            _ => return None,
        })
    }

    /// XML Schema datatype IRI used in quad files.
    pub fn xsd_iri(&self) -> &'static str {
        match self {
            Datatype::String => "http://www.w3.org/2001/XMLSchema#string",
            Datatype::Integer => "http://www.w3.org/2001/XMLSchema#integer",
            Datatype::Year => "http://www.w3.org/2001/XMLSchema#gYear",
            Datatype::Date => "http://www.w3.org/2001/XMLSchema#date",
        }
    }

    pub fn from_xsd_iri(iri: &str) -> Option<Self> {
        [Datatype::String, Datatype::Integer, Datatype::Year, Datatype::Date]
            .into_iter()
            .find(|d| d.xsd_iri() == iri)
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Typed literal value. Language tags are only allowed on strings and are
/// stored lowercase.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
    language: Option<String>,
}

impl Literal {
    pub fn new(lexical: &str, datatype: Datatype, language: Option<&str>) -> Result<Self, ModelError> {
        let invalid = |reason: &str| ModelError::InvalidLiteral {
            lexical: lexical.to_string(),
            datatype: datatype.name(),
            reason: reason.to_string(),
        };
        if language.is_some() && datatype != Datatype::String {
            return Err(invalid("language tags apply to strings only"));
        }
        match datatype {
            Datatype::String => {}
            Datatype::Integer => {
                let value: i64 = lexical.parse().map_err(|_| invalid("not an integer"))?;
                if value.to_string() != lexical {
                    return Err(invalid("not in canonical form"));
                }
            }
            Datatype::Year => {
                if lexical.len() != 4 || !lexical.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(invalid("expected four digits"));
                }
                TimePoint::year(lexical.parse().unwrap()).map_err(|_| invalid("year out of range"))?;
            }
            Datatype::Date => {
                let p: TimePoint = lexical.parse().map_err(|_| invalid("expected YYYY-MM-DD"))?;
                if p.day_value().is_none() {
                    return Err(invalid("expected YYYY-MM-DD"));
                }
            }
        }
        let language = match language {
            None => None,
            Some(tag) => {
                let ok = !tag.is_empty()
                    && tag.split('-').enumerate().all(|(i, part)| {
                        (1..=8).contains(&part.len())
                            && if i == 0 {
                                part.bytes().all(|b| b.is_ascii_alphabetic())
                            } else {
                                part.bytes().all(|b| b.is_ascii_alphanumeric())
                            }
                    });
                if !ok {
                    return Err(invalid("malformed language tag"));
                }
                Some(tag.to_ascii_lowercase())
            }
        };
        Ok(Literal {
            lexical: lexical.to_string(),
            datatype,
            language,
        })
    }

    pub fn string(text: &str) -> Self {
        Literal {
            lexical: text.to_string(),
            datatype: Datatype::String,
            language: None,
        }
    }

    pub fn year(year: i32) -> Result<Self, ModelError> {
        Literal::new(&format!("{year:04}"), Datatype::Year, None)
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Datatype::Integer,
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// Year value of a `year` or `date` literal.
    pub fn as_time_point(&self) -> Option<TimePoint> {
        match self.datatype {
            Datatype::Year | Datatype::Date => self.lexical.parse().ok(),
            _ => None,
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.lexical)?;
        match (&self.language, self.datatype) {
            (Some(lang), _) => write!(f, "@{lang}"),
            (None, Datatype::String) => Ok(()),
            (None, dt) => write!(f, "^^{dt}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typed_literals_validate() {
        assert!(Literal::new("1963", Datatype::Year, None).is_ok());
        assert!(Literal::new("963", Datatype::Year, None).is_err());
        assert!(Literal::new("0963", Datatype::Year, None).is_ok());
        assert!(Literal::new("12", Datatype::Integer, None).is_ok());
        assert!(Literal::new("012", Datatype::Integer, None).is_err());
        assert!(Literal::new("2000-02-29", Datatype::Date, None).is_ok());
        assert!(Literal::new("2001-02-29", Datatype::Date, None).is_err());
        assert!(Literal::new("2001-02", Datatype::Date, None).is_err());
        assert!(Literal::new("x", Datatype::Integer, Some("en")).is_err());
        assert_eq!(
            Literal::new("Athens", Datatype::String, Some("EN-gb")).unwrap().language(),
            Some("en-gb")
        );
        assert!(Literal::new("Athens", Datatype::String, Some("e n")).is_err());
    }
}
