//! A minimal s-expression reader shared by every text format.
//!
//! Atoms are maximal runs of characters other than whitespace and
//! parentheses. `;` starts a comment that runs to the end of the line.

use std::fmt;

use crate::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a) => Some(a),
            Sexp::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items) => Some(items),
            Sexp::Atom(_) => None,
        }
    }

    /// The items of a list whose first element is the atom `head`.
    pub fn tagged(&self, head: &str) -> Option<&[Sexp]> {
        match self.list()? {
            [Sexp::Atom(h), rest @ ..] if h == head => Some(rest),
            _ => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'s> {
    chars: std::iter::Peekable<std::str::CharIndices<'s>>,
    line: usize,
}

impl Reader<'_> {
    fn skip_blank(&mut self) {
        while let Some(&(_, c)) = self.chars.peek() {
            if c == ';' {
                while self.chars.next_if(|&(_, c)| c != '\n').is_some() {}
            } else if c.is_whitespace() {
                if c == '\n' {
                    self.line += 1;
                }
                self.chars.next();
            } else {
                break;
            }
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, message)
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_blank();
        match self.chars.next() {
            None => Err(self.error("unexpected end of input")),
            Some((_, ')')) => Err(self.error("unexpected `)`")),
            Some((_, '(')) => {
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return Err(self.error("unclosed `(`")),
                        Some(&(_, ')')) => {
                            self.chars.next();
                            return Ok(Sexp::List(items));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some((_, c)) => {
                let mut atom = String::from(c);
                while let Some((_, c)) = self
                    .chars
                    .next_if(|&(_, c)| !c.is_whitespace() && c != '(' && c != ')' && c != ';')
                {
                    atom.push(c);
                }
                Ok(Sexp::Atom(atom))
            }
        }
    }
}

/// Reads every top-level s-expression of `src`.
pub fn read_all(src: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut r = Reader {
        chars: src.char_indices().peekable(),
        line: 1,
    };
    let mut out = Vec::new();
    loop {
        r.skip_blank();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Reads exactly one s-expression.
pub fn read_one(src: &str) -> Result<Sexp, ParseError> {
    let mut all = read_all(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(ParseError::new("empty input")),
        n => Err(ParseError::new(format!("expected one expression, found {n}"))),
    }
}
