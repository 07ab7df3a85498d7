//! Just enough of the DOT language to read back what the exporter writes:
//! node, edge, attribute and `key=value` statements, quoted or bare ids.

use std::collections::BTreeMap;

pub type Attrs = BTreeMap<String, String>;

#[derive(Debug, Default)]
pub struct DotGraph {
    pub name: String,
    pub nodes: Vec<(String, Attrs)>,
    pub edges: Vec<(String, String, Attrs)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Arrow,
    Punct(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | '=' | ';' | ',' => {
                chars.next();
                out.push(Tok::Punct(c));
            }
            '-' if {
                let mut look = chars.clone();
                look.next();
                look.peek() == Some(&'>')
            } =>
            {
                chars.next();
                chars.next();
                out.push(Tok::Arrow);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some(other) => {
                                s.push('\\');
                                s.push(other);
                            }
                            None => return Err("unterminated escape".into()),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                out.push(Tok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_alphanumeric() || ch == '_' || ch == '.' || ch == '-' {
                        s.push(ch);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Id(s));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, String> {
        let t = self.toks.get(self.pos).cloned().ok_or("unexpected end of input")?;
        self.pos += 1;
        Ok(t)
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next()? {
            Tok::Id(s) => Ok(s),
            t => Err(format!("expected id, got {t:?}")),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.next()? {
            Tok::Punct(p) if p == c => Ok(()),
            t => Err(format!("expected {c:?}, got {t:?}")),
        }
    }

    fn attrs(&mut self) -> Result<Attrs, String> {
        let mut out = Attrs::new();
        if self.peek() != Some(&Tok::Punct('[')) {
            return Ok(out);
        }
        self.next()?;
        loop {
            if self.peek() == Some(&Tok::Punct(']')) {
                self.next()?;
                return Ok(out);
            }
            let k = self.id()?;
            self.expect('=')?;
            let v = self.id()?;
            if out.insert(k.clone(), v).is_some() {
                return Err(format!("attribute {k} given twice"));
            }
            if self.peek() == Some(&Tok::Punct(',')) {
                self.next()?;
            }
        }
    }
}

pub fn parse(src: &str) -> Result<DotGraph, String> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    if p.id()? != "digraph" {
        return Err("expected `digraph`".into());
    }
    let mut g = DotGraph {
        name: p.id()?,
        ..Default::default()
    };
    p.expect('{')?;
    loop {
        if p.peek() == Some(&Tok::Punct('}')) {
            p.next()?;
            break;
        }
        let first = p.id()?;
        match p.peek() {
            Some(Tok::Arrow) => {
                p.next()?;
                let target = p.id()?;
                let attrs = p.attrs()?;
                g.edges.push((first, target, attrs));
            }
            Some(Tok::Punct('=')) => {
                p.next()?;
                p.id()?;
            }
            _ => {
                let attrs = p.attrs()?;
                if first != "node" && first != "edge" && first != "graph" {
                    g.nodes.push((first, attrs));
                }
            }
        }
        p.expect(';')?;
    }
    if p.pos != p.toks.len() {
        return Err("trailing tokens after the graph".into());
    }
    Ok(g)
}
