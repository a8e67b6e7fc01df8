//! Recursive-descent parser for the query language.
//!
//! ```text
//! expr   := term ("or" term)*
//! term   := factor ("and" factor)*
//! factor := "not" factor | atom
//! atom   := "(" expr ")" | NAME | NAME "value" NAME | NAME "some" atom
//!         | NAME ("=" | ">=" | "<=") INTEGER
//! ```
//!
//! Keywords are case-insensitive. Names follow `[a-zA-Z][a-zA-Z0-9_-]*`; a
//! word that starts with a digit but is not purely numeric (`3d`) is also
//! accepted as a name. Positions in errors are 0-based character offsets.

use super::ast::{ClassExpression, CompareOp};
use super::QueryError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(i64),
    LParen,
    RParen,
    Cmp(CompareOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Cmp(op) => format!("`{}`", op.symbol()),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: [&str; 5] = ["and", "or", "not", "value", "some"];

pub(crate) fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(word))
}

fn syntax(position: usize, message: impl Into<String>) -> QueryError {
    QueryError::Syntax { position, message: message.into() }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '=' => out.push((Tok::Cmp(CompareOp::Eq), start)),
            '>' | '<' => {
                if chars.get(i + 1) != Some(&'=') {
                    return Err(syntax(start, format!("expected `{c}=`")));
                }
                let op = if c == '>' { CompareOp::Ge } else { CompareOp::Le };
                out.push((Tok::Cmp(op), start));
                i += 1;
            }
            c if c.is_ascii_alphanumeric()
                || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) =>
            {
                i += 1;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let digits = word.strip_prefix('-').unwrap_or(&word);
                if digits.bytes().all(|b| b.is_ascii_digit()) {
                    let n = word
                        .parse::<i64>()
                        .map_err(|_| syntax(start, format!("integer `{word}` is out of range")))?;
                    out.push((Tok::Int(n), start));
                } else if word.starts_with('-') {
                    return Err(syntax(start, format!("invalid name `{word}`")));
                } else {
                    out.push((Tok::Word(word), start));
                }
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    out.push((Tok::Eof, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    fn expr(&mut self) -> Result<ClassExpression, QueryError> {
        let mut ops = vec![self.term()?];
        while self.at_keyword("or") {
            self.bump();
            ops.push(self.term()?);
        }
        Ok(if ops.len() == 1 { ops.pop().unwrap() } else { ClassExpression::Or(ops) })
    }

    fn term(&mut self) -> Result<ClassExpression, QueryError> {
        let mut ops = vec![self.factor()?];
        while self.at_keyword("and") {
            self.bump();
            ops.push(self.factor()?);
        }
        Ok(if ops.len() == 1 { ops.pop().unwrap() } else { ClassExpression::And(ops) })
    }

    fn factor(&mut self) -> Result<ClassExpression, QueryError> {
        if self.at_keyword("not") {
            self.bump();
            return Ok(ClassExpression::Not(Box::new(self.factor()?)));
        }
        self.atom()
    }

    fn name(&mut self, what: &str) -> Result<String, QueryError> {
        let at = self.offset();
        match self.bump().0 {
            Tok::Word(w) if !is_keyword(&w) => Ok(w),
            other => Err(syntax(at, format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn atom(&mut self) -> Result<ClassExpression, QueryError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let inner = self.expr()?;
            let at = self.offset();
            return match self.bump().0 {
                Tok::RParen => Ok(inner),
                other => Err(syntax(at, format!("expected `)`, found {}", other.describe()))),
            };
        }
        let name = self.name("a class name, `(` or `not`")?;
        if self.at_keyword("value") {
            self.bump();
            let value = self.name("an individual name after `value`")?;
            return Ok(ClassExpression::HasValue { property: name, value });
        }
        if self.at_keyword("some") {
            self.bump();
            let filler = self.atom()?;
            return Ok(ClassExpression::Some { property: name, filler: Box::new(filler) });
        }
        if let Tok::Cmp(op) = *self.peek() {
            self.bump();
            let at = self.offset();
            return match self.bump().0 {
                Tok::Int(value) => Ok(ClassExpression::Compare { property: name, op, value }),
                other => Err(syntax(at, format!("expected an integer, found {}", other.describe()))),
            };
        }
        Ok(ClassExpression::Named(name))
    }
}

pub fn parse_query(text: &str) -> Result<ClassExpression, QueryError> {
    if text.trim().is_empty() {
        return Err(QueryError::Empty);
    }
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let expr = p.expr()?;
    if *p.peek() != Tok::Eof {
        let at = p.offset();
        return Err(syntax(at, format!("unexpected {}", p.peek().describe())));
    }
    Ok(expr)
}
