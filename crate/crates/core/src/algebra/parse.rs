use super::field::{Field, Scalar};
use super::polynomial::{Monomial, Polynomial, Var};
use super::AlgebraError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<Token>, AlgebraError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                tokens.push(Token::Number(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token::Name(chars[start..i].iter().collect()));
            }
            other => {
                return Err(AlgebraError::Parse(format!(
                    "unexpected character {other:?} at offset {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    field: Field,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at token {}", self.pos))
    }

    fn polynomial(&mut self) -> Result<Vec<(Monomial, Scalar)>, AlgebraError> {
        let mut terms = Vec::new();
        let mut negate = false;
        loop {
            while let Some(Token::Minus) = self.peek() {
                negate = !negate;
                self.pos += 1;
            }
            let (m, c) = self.term()?;
            terms.push((m, if negate { -&c } else { c }));
            negate = false;
            match self.next() {
                None => break,
                Some(Token::Plus) => {}
                Some(Token::Minus) => negate = true,
                Some(_) => return Err(self.error("expected '+' or '-'")),
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Monomial, Scalar), AlgebraError> {
        let mut coeff = self.field.one();
        let mut pairs = Vec::new();
        loop {
            match self.next() {
                Some(Token::Number(n)) => {
                    coeff = &coeff * &Scalar::parse(&n, self.field)?;
                }
                Some(Token::Name(name)) => {
                    let id = self
                        .names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or(AlgebraError::UnknownVariable(name))?;
                    let mut exp = 1;
                    if let Some(Token::Caret) = self.peek() {
                        self.pos += 1;
                        match self.next() {
                            Some(Token::Number(e)) => {
                                exp = e.parse().map_err(|_| self.error("bad exponent"))?
                            }
                            _ => return Err(self.error("expected exponent")),
                        }
                    }
                    pairs.push((Var(id as u32), exp));
                }
                _ => return Err(self.error("expected coefficient or variable")),
            }
            if let Some(Token::Star) = self.peek() {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_pairs(pairs), coeff))
    }
}

pub(super) fn parse_polynomial(
    text: &str,
    field: Field,
    names: &[String],
) -> Result<Polynomial, AlgebraError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(AlgebraError::Parse("empty polynomial".into()));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        field,
        names,
    };
    let terms = parser.polynomial()?;
    Polynomial::from_terms(field, terms)
}
