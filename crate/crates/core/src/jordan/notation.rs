use super::JordanSignature;
use crate::error::{Error, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected '{}', found '{}'", c as char, got as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a block size".into()));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let value: usize = text.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("block size '{text}' out of range"),
        })?;
        if value == 0 {
            return Err(Error::Parse {
                position: start,
                message: "block sizes must be >= 1".into(),
            });
        }
        Ok(value)
    }

    fn error(&self, message: String) -> Error {
        Error::Parse {
            position: self.pos,
            message,
        }
    }
}

/// Parses bracket notation such as `{ { 2, 1 }, { 1 } }`. Whitespace is
/// optional; group and block order are free.
pub fn parse_signature(text: &str) -> Result<JordanSignature> {
    let mut c = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    c.expect(b'{')?;
    let mut groups = Vec::new();
    loop {
        if c.peek() != Some(b'{') {
            return Err(c.error("expected '{' opening a group".into()));
        }
        c.expect(b'{')?;
        let mut sizes = vec![c.number()?];
        while c.peek() == Some(b',') {
            c.pos += 1;
            sizes.push(c.number()?);
        }
        c.expect(b'}')?;
        groups.push(sizes);
        match c.peek() {
            Some(b',') => c.pos += 1,
            Some(b'}') => {
                c.pos += 1;
                break;
            }
            Some(other) => return Err(c.error(format!("unexpected '{}'", other as char))),
            None => return Err(c.error("unterminated signature".into())),
        }
    }
    if c.peek().is_some() {
        return Err(c.error("trailing characters".into()));
    }
    JordanSignature::new(groups)
}
