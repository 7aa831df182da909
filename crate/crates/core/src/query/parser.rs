//! Recursive-descent parser for the query language.
//!
//! ```text
//! query  := "SELECT" var+ "WHERE" "{" clause+ "}"
//! clause := term term term [ "@" time ] "."
//! time   := point | "[" point? ".." point? "]"
//! term   := ?var | prefix:local | <iri> | kind/localId | "lit" [@lang | ^^type]
//! ```

use super::ast::{Clause, QueryAst, QueryTerm, TimeSpec};
use super::QueryError;
use crate::model::{Datatype, Iri, Literal, TimeInterval, TimePoint};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Iri(String),
    Str { text: String, suffix: Option<String> },
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Dot,
    At,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("{w:?}"),
            Tok::Var(v) => format!("?{v}"),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::Str { .. } => "string literal".into(),
            Tok::LBrace => "\"{\"".into(),
            Tok::RBrace => "\"}\"".into(),
            Tok::LBracket => "\"[\"".into(),
            Tok::RBracket => "\"]\"".into(),
            Tok::Dot => "\".\"".into(),
            Tok::At => "\"@\"".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, '{' | '}' | '[' | ']' | '<' | '>' | '"' | '@')
}

fn lex(text: &str) -> Result<Vec<Spanned>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, expected: &str, found: String| QueryError::Parse {
        line,
        column,
        expected: vec![expected.to_string()],
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col, start) = (line, col, i);
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '@' => Tok::At,
            '<' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '>' && !chars[j].is_whitespace() {
                    j += 1;
                }
                if chars.get(j) != Some(&'>') {
                    return Err(err(line, col, "\">\"", "unterminated IRI".into()));
                }
                let iri: String = chars[i + 1..j].iter().collect();
                i = j;
                Tok::Iri(iri)
            }
            '"' => {
                let mut text = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => return Err(err(line, col, "closing quote", "end of line".into())),
                        Some('"') => break,
                        Some('\\') => {
                            let e = chars.get(j + 1).copied();
                            match e {
                                Some('\\') => text.push('\\'),
                                Some('"') => text.push('"'),
                                Some('n') => text.push('\n'),
                                Some('r') => text.push('\r'),
                                Some('t') => text.push('\t'),
                                Some('u') => {
                                    let hex: String = chars.get(j + 2..j + 6).unwrap_or(&[]).iter().collect();
                                    let ch = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                                    match ch {
                                        Some(ch) if hex.len() == 4 => text.push(ch),
                                        _ => return Err(err(line, col + j - i, "\\uXXXX escape", hex)),
                                    }
                                    j += 4;
                                }
                                _ => {
                                    return Err(err(line, col + j - i, "escape sequence", format!("{e:?}")));
                                }
                            }
                            j += 2;
                            continue;
                        }
                        Some(&c) => text.push(c),
                    }
                    j += 1;
                }
                // language tag or datatype glued to the closing quote
                let mut suffix = None;
                let next = chars.get(j + 1).copied();
                let after = chars.get(j + 2).copied();
                if next == Some('@') && after.is_some_and(|c| c.is_ascii_alphabetic()) {
                    let mut k = j + 2;
                    while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '-') {
                        k += 1;
                    }
                    suffix = Some(chars[j + 1..k].iter().collect());
                    j = k - 1;
                } else if next == Some('^') && after == Some('^') {
                    let mut k = j + 3;
                    while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                        k += 1;
                    }
                    suffix = Some(chars[j + 1..k].iter().collect());
                    j = k - 1;
                }
                i = j;
                Tok::Str { text, suffix }
            }
            '?' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let name: String = chars[i + 1..j].iter().collect();
                if !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err(err(line, col, "variable name", format!("?{name}")));
                }
                i = j - 1;
                Tok::Var(name)
            }
            _ => {
                let mut j = i;
                while j < chars.len() && !is_delim(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j - 1;
                if word == "." {
                    Tok::Dot
                } else if let Some(w) = word.strip_suffix('.').filter(|_| !word.contains("..")) {
                    // `term.` closes a clause
                    out.push(Spanned {
                        tok: Tok::Word(w.to_string()),
                        line: start_line,
                        column: start_col,
                    });
                    col += w.chars().count();
                    out.push(Spanned {
                        tok: Tok::Dot,
                        line,
                        column: col,
                    });
                    i += 1;
                    col += 1;
                    continue;
                } else {
                    Tok::Word(word)
                }
            }
        };
        i += 1;
        col += i - start;
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, QueryError> {
        let t = self.peek();
        Err(QueryError::Parse {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        })
    }

    fn keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        match &self.peek().tok {
            Tok::Word(w) if w.eq_ignore_ascii_case(kw) => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[kw]),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), QueryError> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[name])
        }
    }

    fn query(&mut self) -> Result<QueryAst, QueryError> {
        self.keyword("SELECT")?;
        let mut select = Vec::new();
        while let Tok::Var(v) = &self.peek().tok {
            select.push(v.clone());
            self.bump();
        }
        if select.is_empty() {
            return self.fail(&["variable"]);
        }
        self.keyword("WHERE")?;
        self.expect(Tok::LBrace, "\"{\"")?;
        let mut clauses = Vec::new();
        while self.peek().tok != Tok::RBrace {
            clauses.push(self.clause()?);
        }
        if clauses.is_empty() {
            return self.fail(&["term"]);
        }
        self.bump();
        self.expect(Tok::Eof, "end of input")?;
        Ok(QueryAst { select, clauses })
    }

    fn clause(&mut self) -> Result<Clause, QueryError> {
        let subject = self.term()?;
        let property = self.term()?;
        let object = self.term()?;
        let time = if self.peek().tok == Tok::At {
            self.bump();
            Some(self.time()?)
        } else {
            None
        };
        self.expect(Tok::Dot, "\".\"")?;
        Ok(Clause {
            subject,
            property,
            object,
            time,
        })
    }

    fn term(&mut self) -> Result<QueryTerm, QueryError> {
        const EXPECTED: &[&str] = &["variable", "prefix:name", "<iri>", "kind/id", "literal"];
        let here = self.peek().clone();
        let term = match &here.tok {
            Tok::Var(v) => QueryTerm::Var(v.clone()),
            Tok::Iri(text) => QueryTerm::Iri(Iri::parse(text).map_err(|e| self.at_error(&here, "absolute IRI", e.to_string()))?),
            Tok::Str { text, suffix } => QueryTerm::Literal(self.literal(&here, text, suffix.as_deref())?),
            Tok::Word(w) => {
                if let Some((prefix, local)) = w.split_once(':') {
                    if prefix.is_empty() || local.is_empty() || local.contains(':') {
                        return self.fail(EXPECTED);
                    }
                    QueryTerm::Curie {
                        prefix: prefix.to_string(),
                        local: local.to_string(),
                    }
                } else if w.split_once('/').is_some_and(|(k, id)| !k.is_empty() && !id.is_empty()) {
                    QueryTerm::Relative(w.clone())
                } else {
                    return self.fail(EXPECTED);
                }
            }
            _ => return self.fail(EXPECTED),
        };
        self.bump();
        Ok(term)
    }

    fn at_error(&self, at: &Spanned, expected: &str, found: String) -> QueryError {
        QueryError::Parse {
            line: at.line,
            column: at.column,
            expected: vec![expected.to_string()],
            found,
        }
    }

    fn literal(&self, at: &Spanned, text: &str, suffix: Option<&str>) -> Result<Literal, QueryError> {
        let (datatype, language) = match suffix {
            None => (Datatype::String, None),
            Some(s) if s.starts_with('@') => (Datatype::String, Some(&s[1..])),
            Some(s) => {
                let name = &s[2..];
                let dt = Datatype::from_name(name)
                    .ok_or_else(|| self.at_error(at, "string, integer, year or date", name.to_string()))?;
                (dt, None)
            }
        };
        Literal::new(text, datatype, language).map_err(|e| self.at_error(at, "valid literal", e.to_string()))
    }

    fn point(&mut self) -> Result<TimePoint, QueryError> {
        let here = self.peek().clone();
        if let Tok::Word(w) = &here.tok {
            if let Ok(t) = w.parse::<TimePoint>() {
                self.bump();
                return Ok(t);
            }
        }
        self.fail(&["time point"])
    }

    fn time(&mut self) -> Result<TimeSpec, QueryError> {
        if self.peek().tok != Tok::LBracket {
            return Ok(TimeSpec::At(self.point()?));
        }
        let open = self.bump();
        // the lexer keeps `a..b` together as one word
        let here = self.peek().clone();
        let text = match &here.tok {
            Tok::Word(w) if w.contains("..") => {
                self.bump();
                w.clone()
            }
            _ => return self.fail(&["a..b"]),
        };
        let iv: TimeInterval = text
            .parse()
            .map_err(|e: crate::model::ModelError| self.at_error(&here, "interval a..b", e.to_string()))?;
        if !text.contains("..") {
            return Err(self.at_error(&open, "interval a..b", text));
        }
        self.expect(Tok::RBracket, "\"]\"")?;
        Ok(TimeSpec::Span(iv))
    }
}

pub fn parse_query(text: &str) -> Result<QueryAst, QueryError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.query()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> QueryAst {
        parse_query(text).unwrap_or_else(|e| panic!("{text}: {e}"))
    }

    #[test]
    fn professor_at_point() {
        let ast = parse("SELECT ?p WHERE { ?p etd:isProfessorAt body/uy @2009 . }");
        assert_eq!(ast.select, vec!["p"]);
        assert_eq!(ast.clauses.len(), 1);
        let c = &ast.clauses[0];
        assert_eq!(c.subject, QueryTerm::Var("p".into()));
        assert_eq!(
            c.property,
            QueryTerm::Curie {
                prefix: "etd".into(),
                local: "isProfessorAt".into()
            }
        );
        assert_eq!(c.object, QueryTerm::Relative("body/uy".into()));
        assert_eq!(c.time, Some(TimeSpec::At(TimePoint::year(2009).unwrap())));
    }

    #[test]
    fn empty_block_is_an_error() {
        let err = parse_query("SELECT ?x WHERE { }").unwrap_err();
        match err {
            QueryError::Parse { line, column, .. } => assert_eq!((line, column), (1, 19)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spans_literals_and_iris() {
        let ast = parse(
            "select ?w ?n where {\n  ?w etd:label ?n @[1990..] .\n  ?w <http://example.org/etd/vocab#createdBy> person/pA @[..2000-05].\n  ?w etd:label \"Th\\\"esis\"@en .\n ?b etd:establishedIn \"1963\"^^year .\n}",
        );
        assert_eq!(ast.clauses.len(), 4);
        assert_eq!(
            ast.clauses[0].time,
            Some(TimeSpec::Span(TimeInterval::new(Some(TimePoint::year(1990).unwrap()), None).unwrap()))
        );
        assert!(matches!(&ast.clauses[1].property, QueryTerm::Iri(_)));
        assert_eq!(ast.clauses[1].object, QueryTerm::Relative("person/pA".into()));
        let QueryTerm::Literal(l) = &ast.clauses[2].object else { panic!() };
        assert_eq!((l.lexical(), l.language()), ("Th\"esis", Some("en")));
        let QueryTerm::Literal(y) = &ast.clauses[3].object else { panic!() };
        assert_eq!(y.datatype(), Datatype::Year);
    }

    #[test]
    fn unbounded_span() {
        let ast = parse("SELECT ?s WHERE { ?s ?p ?o @[..] . }");
        assert_eq!(ast.clauses[0].time, Some(TimeSpec::Span(TimeInterval::unbounded())));
    }

    #[test]
    fn errors_carry_position() {
        let cases = [
            ("SELECT WHERE { ?a ?b ?c . }", 1, 8),
            ("SELECT ?a WHERE { ?a ?b ?c }", 1, 28),
            ("SELECT ?a WHERE {\n ?a ?b . }", 2, 8),
            ("SELECT ?a WHERE { ?a ?b ?c @nope . }", 1, 29),
            ("SELECT ?a WHERE { ?a ?b \"open . }", 1, 25),
            ("SELECT ?a WHERE { ?a ?b ?c . } extra", 1, 32),
            ("SELECT ?1 WHERE { ?a ?b ?c . }", 1, 8),
        ];
        for (text, line, column) in cases {
            match parse_query(text) {
                Err(QueryError::Parse { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text}")
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let texts = [
            "SELECT ?p WHERE { ?p etd:isProfessorAt body/uy @2009 . }",
            "SELECT ?w ?a WHERE { ?w etd:advisedBy ?a . ?a etd:hasGender gender/female @[1990-02..2001-03-04] . }",
            "SELECT ?x WHERE { ?x etd:label \"tab\\there \\u0001\"@el . ?x ?p \"7\"^^integer @[..] . }",
        ];
        for text in texts {
            let ast = parse(text);
            let printed = ast.to_string();
            assert_eq!(parse(&printed), ast, "{printed}");
        }
    }
}
