use num_bigint::BigInt;
use num_rational::BigRational;

use super::AlgebraElement;
use crate::error::{Error, Result};
use crate::grig::{Generator, GroupElement};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Open,
    Close,
    Number(BigRational),
    Word(GroupElement),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' | '·' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: String = chars[start..i].iter().collect();
                let mut q = BigRational::from_integer(numer.parse::<BigInt>().unwrap());
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(Error::Malformed(format!("missing denominator in {s:?}")));
                    }
                    let denom: String = chars[dstart..i].iter().collect();
                    let denom = denom.parse::<BigInt>().unwrap();
                    if denom == BigInt::from(0) {
                        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
                    }
                    q /= BigRational::from_integer(denom);
                }
                tokens.push(Token::Number(q));
            }
            _ => {
                let start = i;
                let mut letters = Vec::new();
                while i < chars.len() {
                    match Generator::from_char(chars[i]) {
                        Some(g) => letters.push(g),
                        None => break,
                    }
                    i += 1;
                }
                if start == i {
                    return Err(Error::Malformed(format!(
                        "unexpected character {c:?} in {s:?}"
                    )));
                }
                tokens.push(Token::Word(GroupElement::normalize(letters)));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expression(&mut self) -> Result<AlgebraElement> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.product()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Open | Token::Number(_) | Token::Word(_)) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<AlgebraElement> {
        match self.next() {
            Some(Token::Number(q)) => Ok(AlgebraElement::scalar(q)),
            Some(Token::Word(g)) => Ok(AlgebraElement::from_group(g)),
            Some(Token::Open) => {
                let inner = self.expression()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(Error::Malformed("unbalanced parentheses".into())),
                }
            }
            Some(t) => Err(Error::Malformed(format!("unexpected token {t:?}"))),
            None => Err(Error::Malformed("unexpected end of expression".into())),
        }
    }
}

pub(super) fn parse_expression(s: &str) -> Result<AlgebraElement> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Malformed("empty expression".into()));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let x = parser.expression()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Malformed(format!("trailing input in {s:?}")));
    }
    Ok(x)
}
