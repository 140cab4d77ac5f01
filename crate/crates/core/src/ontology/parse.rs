use std::collections::HashMap;

use log::warn;

use super::{ClassId, IndividualId, Ontology, OntologyBuilder, OntologyError, PropertyId};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Eq,
    Iri(String),
    Name(String),
    Literal,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> OntologyError {
    OntologyError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '<' | '>' | '=' | '"' | '#')
}

fn lex(text: &str) -> Result<Vec<Token>, OntologyError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '(' | ')' | '=' => {
                bump!();
                let tok = match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Eq,
                };
                out.push(Token {
                    tok,
                    line: l,
                    column: col,
                });
            }
            '<' => {
                bump!();
                let mut iri = String::new();
                loop {
                    match bump!() {
                        Some('>') => break,
                        Some(c) if c.is_whitespace() || c == '<' => {
                            return Err(syntax(line, column - 1, "malformed IRI"))
                        }
                        Some(c) => iri.push(c),
                        None => return Err(syntax(l, col, "unterminated IRI")),
                    }
                }
                if iri.is_empty() {
                    return Err(syntax(l, col, "empty IRI"));
                }
                out.push(Token {
                    tok: Tok::Iri(iri),
                    line: l,
                    column: col,
                });
            }
            '"' => {
                bump!();
                loop {
                    match bump!() {
                        Some('"') => break,
                        Some('\\') => {
                            bump!();
                        }
                        Some(_) => {}
                        None => return Err(syntax(l, col, "unterminated literal")),
                    }
                }
                out.push(Token {
                    tok: Tok::Literal,
                    line: l,
                    column: col,
                });
            }
            '>' => return Err(syntax(l, col, "unexpected `>`")),
            _ => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    name.push(c);
                    bump!();
                }
                out.push(Token {
                    tok: Tok::Name(name),
                    line: l,
                    column: col,
                });
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    prefixes: HashMap<String, String>,
    builder: OntologyBuilder,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> OntologyError {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), OntologyError> {
        if self.peek().tok == want {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {what}")))
        }
    }

    fn keyword(&mut self) -> Result<(String, usize, usize), OntologyError> {
        let t = self.next();
        match t.tok {
            Tok::Name(n) if !n.contains(':') => Ok((n, t.line, t.column)),
            _ => Err(syntax(t.line, t.column, "expected a keyword")),
        }
    }

    /// A prefixed name or full IRI, expanded.
    fn entity(&mut self) -> Result<String, OntologyError> {
        let t = self.next();
        match t.tok {
            Tok::Iri(iri) => Ok(iri),
            Tok::Name(n) => {
                let Some(colon) = n.find(':') else {
                    return Err(syntax(t.line, t.column, format!("`{n}` is not a prefixed name")));
                };
                let (pfx, local) = (&n[..colon], &n[colon + 1..]);
                match self.prefixes.get(pfx) {
                    Some(ns) if !local.is_empty() => Ok(format!("{ns}{local}")),
                    Some(_) => Err(syntax(t.line, t.column, "empty local name")),
                    None => Err(syntax(t.line, t.column, format!("unknown prefix `{pfx}:`"))),
                }
            }
            _ => Err(syntax(t.line, t.column, "expected an entity name")),
        }
    }

    fn class(&mut self) -> Result<ClassId, OntologyError> {
        let t = self.peek().clone();
        if t.tok == Tok::Open || matches!(&t.tok, Tok::Name(n) if !n.contains(':')) {
            return Err(syntax(
                t.line,
                t.column,
                "only named classes are supported here",
            ));
        }
        ClassId::new(self.entity()?)
    }

    fn individual(&mut self) -> Result<IndividualId, OntologyError> {
        IndividualId::new(self.entity()?)
    }

    fn property(&mut self) -> Result<PropertyId, OntologyError> {
        PropertyId::new(self.entity()?)
    }

    /// Skips a balanced argument list; the opening paren is already consumed.
    fn skip_args(&mut self) -> Result<(), OntologyError> {
        let mut depth = 1;
        while depth > 0 {
            let t = self.next();
            match t.tok {
                Tok::Open => depth += 1,
                Tok::Close => depth -= 1,
                Tok::Eof => return Err(syntax(t.line, t.column, "unexpected end of input")),
                _ => {}
            }
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> Result<(), OntologyError> {
        self.expect(Tok::Open, "`(`")?;
        let t = self.next();
        let name = match t.tok {
            Tok::Name(n) if n.ends_with(':') && n.matches(':').count() == 1 => {
                n[..n.len() - 1].to_string()
            }
            _ => return Err(syntax(t.line, t.column, "expected a prefix name like `ex:`")),
        };
        self.expect(Tok::Eq, "`=`")?;
        let t = self.next();
        let Tok::Iri(ns) = t.tok else {
            return Err(syntax(t.line, t.column, "expected a namespace IRI"));
        };
        self.expect(Tok::Close, "`)`")?;
        self.prefixes.insert(name.clone(), ns.clone());
        self.builder.prefix(name, ns);
        Ok(())
    }

    fn declaration(&mut self) -> Result<(), OntologyError> {
        self.expect(Tok::Open, "`(`")?;
        let (kind, line, column) = self.keyword()?;
        self.expect(Tok::Open, "`(`")?;
        match kind.as_str() {
            "Class" => {
                let c = ClassId::new(self.entity()?)?;
                self.builder.class(c);
            }
            "ObjectProperty" => {
                let p = self.property()?;
                self.builder.property(p);
            }
            "NamedIndividual" => {
                let i = self.individual()?;
                self.builder.individual(i);
            }
            "DataProperty" => {
                let iri = self.entity()?;
                warn!("{line}:{column}: data property `{iri}` ignored");
            }
            other => {
                return Err(syntax(
                    line,
                    column,
                    format!("unsupported declaration `{other}`"),
                ))
            }
        }
        self.expect(Tok::Close, "`)`")?;
        self.expect(Tok::Close, "`)`")
    }

    fn axiom(&mut self) -> Result<(), OntologyError> {
        let (kw, line, column) = self.keyword()?;
        match kw.as_str() {
            "Declaration" => return self.declaration(),
            "SubClassOf" => {
                self.expect(Tok::Open, "`(`")?;
                let sub = self.class()?;
                let sup = self.class()?;
                self.builder.subclass_of(sub, sup);
            }
            "DisjointClasses" => {
                self.expect(Tok::Open, "`(`")?;
                let mut classes = Vec::new();
                while self.peek().tok != Tok::Close {
                    classes.push(self.class()?);
                }
                if classes.len() < 2 {
                    return Err(syntax(line, column, "DisjointClasses needs at least two classes"));
                }
                self.builder.disjoint(classes);
            }
            "ClassAssertion" => {
                self.expect(Tok::Open, "`(`")?;
                let c = self.class()?;
                let i = self.individual()?;
                self.builder.class_assertion(i, c);
            }
            "ObjectPropertyAssertion" => {
                self.expect(Tok::Open, "`(`")?;
                let p = self.property()?;
                let s = self.individual()?;
                let o = self.individual()?;
                self.builder.property_assertion(s, p, o);
            }
            "DataPropertyAssertion" | "DataPropertyDomain" | "DataPropertyRange" => {
                self.expect(Tok::Open, "`(`")?;
                warn!("{line}:{column}: `{kw}` ignored");
                return self.skip_args();
            }
            other => return Err(syntax(line, column, format!("unsupported axiom `{other}`"))),
        }
        self.expect(Tok::Close, "`)`")
    }

    fn document(mut self) -> Result<Ontology, OntologyError> {
        loop {
            let (kw, line, column) = self.keyword()?;
            match kw.as_str() {
                "Prefix" => self.prefix_decl()?,
                "Ontology" => break,
                other => {
                    return Err(syntax(
                        line,
                        column,
                        format!("expected `Prefix` or `Ontology`, found `{other}`"),
                    ))
                }
            }
        }
        self.expect(Tok::Open, "`(`")?;
        if let Tok::Iri(iri) = &self.peek().tok {
            let iri = iri.clone();
            self.next();
            self.builder.set_iri(iri);
            // optional version IRI
            if let Tok::Iri(_) = self.peek().tok {
                self.next();
            }
        }
        while self.peek().tok != Tok::Close {
            if self.peek().tok == Tok::Eof {
                return Err(self.err_here("unexpected end of input, missing `)`"));
            }
            self.axiom()?;
        }
        self.next();
        if self.peek().tok != Tok::Eof {
            return Err(self.err_here("trailing input after ontology"));
        }
        self.builder.build()
    }
}

/// Parses a document in the supported functional-syntax subset and validates
/// it. Declaration order is irrelevant.
pub fn parse_ontology(text: &str) -> Result<Ontology, OntologyError> {
    let parser = Parser {
        toks: lex(text)?,
        pos: 0,
        prefixes: HashMap::new(),
        builder: OntologyBuilder::new(),
    };
    parser.document()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "Prefix(:=<http://example.org/uni#>)\nOntology(<http://example.org/uni>\n";

    fn doc(body: &str) -> String {
        format!("{HEAD}{body}\n)\n")
    }

    #[test]
    fn minimal_document() {
        let o = parse_ontology(&doc(
            "Declaration(Class(:Student))\nClassAssertion(:Student :p1)\nDeclaration(NamedIndividual(:p1))",
        ))
        .unwrap();
        assert_eq!(o.classes().len(), 1);
        assert_eq!(o.individuals().len(), 1);
        assert_eq!(o.class_assertions().len(), 1);
        let (i, c) = o.class_assertions().iter().next().unwrap();
        assert_eq!(i.iri(), "http://example.org/uni#p1");
        assert_eq!(c.local_name(), "Student");
    }

    #[test]
    fn subclass_cycle_rejected() {
        let err = parse_ontology(&doc(
            "Declaration(Class(:A)) Declaration(Class(:B))\nSubClassOf(:A :B)\nSubClassOf(:B :A)",
        ))
        .unwrap_err();
        assert!(matches!(err, OntologyError::SubclassCycle(_)));
    }

    #[test]
    fn undeclared_entity() {
        let err = parse_ontology(&doc("Declaration(Class(:A))\nSubClassOf(:A :B)")).unwrap_err();
        assert!(matches!(err, OntologyError::Undeclared { .. }), "{err}");
    }

    #[test]
    fn duplicate_declaration() {
        let err = parse_ontology(&doc("Declaration(Class(:A))\nDeclaration(Class(:A))")).unwrap_err();
        assert!(matches!(err, OntologyError::DuplicateDeclaration { .. }));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_ontology(&doc("Declaration(Class(:A))\n  SubClassOf(:A (:B))")).unwrap_err();
        assert_eq!(
            err,
            OntologyError::Syntax {
                line: 4,
                column: 17,
                message: "only named classes are supported here".into()
            }
        );
    }

    #[test]
    fn unknown_prefix() {
        let err = parse_ontology(&doc("Declaration(Class(ex:A))")).unwrap_err();
        assert!(matches!(err, OntologyError::Syntax { line: 3, column: 19, .. }), "{err}");
    }

    #[test]
    fn comments_and_full_iris() {
        let o = parse_ontology(&doc(
            "# a comment\nDeclaration(Class(<http://other.org/x#C>)) # trailing",
        ))
        .unwrap();
        assert_eq!(o.classes().iter().next().unwrap().iri(), "http://other.org/x#C");
    }

    #[test]
    fn data_properties_ignored() {
        let o = parse_ontology(&doc(
            "Declaration(DataProperty(:age))\nDeclaration(NamedIndividual(:p))\nDataPropertyAssertion(:age :p \"42\"^^xsd:integer)",
        ))
        .unwrap();
        assert_eq!(o.individuals().len(), 1);
        assert!(o.properties().is_empty());
    }

    #[test]
    fn truncated_input() {
        let err = parse_ontology("Prefix(:=<http://x#>)\nOntology(\nDeclaration(Class(:A))").unwrap_err();
        assert!(matches!(err, OntologyError::Syntax { .. }));
    }
}
