//! Parser for state-family specs:
//!
//! ```text
//! pure:lambda0=<f>
//! werner:z=<f>
//! general:a=<f>,<f>,<f>;b=<f>,<f>,<f>;c=<f>,<f>,<f>
//! ```

use std::fmt;

use weak_discord::StateFamily;

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    /// 1-based character column in the spec.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: at + 1,
            message: message.into(),
        })
    }

    fn take_until(&mut self, stops: &[char]) -> (usize, String) {
        let start = self.pos;
        while self.pos < self.chars.len() && !stops.contains(&self.chars[self.pos]) {
            self.pos += 1;
        }
        (start, self.chars[start..self.pos].iter().collect())
    }

    fn expect(&mut self, literal: &str) -> Result<(), ParseError> {
        for want in literal.chars() {
            match self.chars.get(self.pos) {
                Some(&c) if c == want => self.pos += 1,
                Some(&c) => return self.error(self.pos, format!("expected `{literal}`, found `{c}`")),
                None => return self.error(self.pos, format!("expected `{literal}`, found end of input")),
            }
        }
        Ok(())
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let (start, token) = self.take_until(&[',', ';']);
        if token.is_empty() {
            return self.error(start, "expected a number");
        }
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => self.error(start, format!("`{token}` is not a finite number")),
            Err(_) => self.error(start, format!("`{token}` is not a number")),
        }
    }

    fn triple(&mut self) -> Result<[f64; 3], ParseError> {
        let a = self.number()?;
        self.expect(",")?;
        let b = self.number()?;
        self.expect(",")?;
        let c = self.number()?;
        Ok([a, b, c])
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.chars.len() {
            let rest: String = self.chars[self.pos..].iter().collect();
            return self.error(self.pos, format!("unexpected trailing input `{rest}`"));
        }
        Ok(())
    }
}

pub fn parse_family(spec: &str) -> Result<StateFamily, ParseError> {
    let mut cur = Cursor::new(spec);
    let (start, name) = cur.take_until(&[':']);
    if cur.pos == cur.chars.len() {
        return cur.error(cur.pos, format!("expected `:` after family name in `{}`", cur.src));
    }
    cur.pos += 1;
    let family = match name.as_str() {
        "pure" => {
            cur.expect("lambda0=")?;
            StateFamily::PureSchmidt { lambda0: cur.number()? }
        }
        "werner" => {
            cur.expect("z=")?;
            StateFamily::Werner { z: cur.number()? }
        }
        "general" => {
            cur.expect("a=")?;
            let a = cur.triple()?;
            cur.expect(";b=")?;
            let b = cur.triple()?;
            cur.expect(";c=")?;
            let c = cur.triple()?;
            StateFamily::General { a, b, c }
        }
        other => {
            return cur.error(
                start,
                format!("unknown family `{other}` (expected pure, werner or general)"),
            )
        }
    };
    cur.finish()?;
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_family() {
        assert_eq!(
            parse_family("pure:lambda0=0.2").unwrap(),
            StateFamily::PureSchmidt { lambda0: 0.2 }
        );
        assert_eq!(parse_family("werner:z=1").unwrap(), StateFamily::Werner { z: 1.0 });
        assert_eq!(
            parse_family("general:a=0.01,0.1,0.22;b=0.1,0.03,0.5;c=0.1,0.02,0.2").unwrap(),
            StateFamily::General {
                a: [0.01, 0.1, 0.22],
                b: [0.1, 0.03, 0.5],
                c: [0.1, 0.02, 0.2]
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "pure:lambda0=0.05",
            "werner:z=0.25",
            "general:a=0.01,0.1,0.22;b=0.1,0.03,0.5;c=0.1,0.02,-0.2",
        ] {
            assert_eq!(parse_family(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn reports_positions() {
        let col = |s: &str| parse_family(s).unwrap_err().column;
        assert_eq!(col("bell:x=1"), 1);
        assert_eq!(col("pure"), 5);
        assert_eq!(col("pure:lambda=0.2"), 12);
        assert_eq!(col("werner:z=abc"), 10);
        assert_eq!(col("werner:z="), 10);
        assert_eq!(col("werner:z=inf"), 10);
        assert_eq!(col("general:a=1,2;b=1,2,3;c=1,2,3"), 14);
        assert_eq!(col("general:a=1,2,3;b=1,2,3;d=1,2,3"), 25);
        assert_eq!(col("pure:lambda0=0.2,"), 17);
    }
}
