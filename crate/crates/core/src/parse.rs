//! Shared lexing helpers for the text notations of sets, polynomials and
//! piecewise functions.

use std::fmt;

use crate::scalar::Scalar;

/// A parse failure, annotated with the byte offset where it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
    pub input: String,
}

impl ParseError {
    pub(crate) fn new(message: impl Into<String>, position: usize, input: &str) -> Self {
        ParseError {
            message: message.into(),
            position,
            input: input.to_string(),
        }
    }

    /// The input line with a caret under the offending column.
    pub fn diagnostic(&self) -> String {
        let column = self.input[..self.position.min(self.input.len())].chars().count();
        format!(
            "error: {} at column {}\n  {}\n  {}^",
            self.message,
            column + 1,
            self.input,
            " ".repeat(column)
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

pub(crate) struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(message, self.position(), self.input)
    }

    pub fn error_at(&self, message: impl Into<String>, pos: usize) -> ParseError {
        ParseError::new(message, pos, self.input)
    }

    pub fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.error(format!("expected '{c}', found '{found}'"))),
                None => Err(self.error(format!("expected '{c}', found end of input"))),
            }
        }
    }

    /// Consumes `word` if the remaining input starts with it (after whitespace).
    pub fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }

    /// An unsigned decimal number `123`, `1.25` or `.5`, converted exactly.
    pub fn unsigned_number<T: Scalar>(&mut self) -> Result<T, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let int_len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let mut len = int_len;
        let mut frac_len = 0;
        if rest[len..].starts_with('.') {
            frac_len = rest[len + 1..]
                .chars()
                .take_while(|c| c.is_ascii_digit())
                .count();
            len += 1 + frac_len;
        }
        if int_len == 0 && frac_len == 0 {
            return Err(self.error("expected a number"));
        }
        let text = &rest[..len];
        self.pos += len;
        let digits: String = text.chars().filter(|c| c.is_ascii_digit()).collect();
        let value = digits
            .parse::<T>()
            .map_err(|_| self.error_at("number out of range", start))?;
        let ten = T::from_int(10);
        let mut scale = T::one();
        for _ in 0..frac_len {
            scale = scale * ten.clone();
        }
        Ok(value / scale)
    }

    /// A signed rational literal such as `-3/4`, `2`, or `0.5`.
    pub fn rational<T: Scalar>(&mut self) -> Result<T, ParseError> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let numer: T = self.unsigned_number()?;
        let value = if self.peek() == Some('/') {
            self.bump();
            let at = self.position();
            let denom: T = self.unsigned_number()?;
            if denom.is_zero() {
                return Err(self.error_at("division by zero", at));
            }
            numer / denom
        } else {
            numer
        };
        Ok(if negative { -value } else { value })
    }
}

/// Parses a standalone rational literal.
pub fn parse_rational<T: Scalar>(text: &str) -> Result<T, ParseError> {
    let mut cursor = Cursor::new(text);
    let value = cursor.rational()?;
    cursor.finish()?;
    Ok(value)
}
