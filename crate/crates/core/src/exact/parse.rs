//! Text grammar for field elements, bit-exact on round trip:
//!
//! ```text
//! scalar := term ( ('+'|'-') term )*
//! term   := coeff ['*' 'sqrt(' int ')']
//! coeff  := rational | rational 'i' | '(' rational ('+'|'-') rational 'i' ')'
//! ```
//!
//! Writer conventions: radicands > 1 ascending, the rational part (z = 1)
//! last; zero prints as `0`.

use super::{gq_rat, ExactError, ExactScalar, Gq, Rat};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Signed, Zero};
use std::fmt;

fn write_rat(r: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom() == &BigInt::from(1) {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_coeff(c: &Gq, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im.is_zero() {
        write_rat(&c.re, f)
    } else if c.re.is_zero() {
        write_rat(&c.im, f)?;
        write!(f, "i")
    } else {
        write!(f, "(")?;
        write_rat(&c.re, f)?;
        if c.im.is_negative() {
            write!(f, "-")?;
            write_rat(&-c.im.clone(), f)?;
        } else {
            write!(f, "+")?;
            write_rat(&c.im, f)?;
        }
        write!(f, "i)")
    }
}

fn write_term(z: u64, c: &Gq, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_coeff(c, f)?;
    if z > 1 {
        write!(f, "*sqrt({z})")?;
    }
    Ok(())
}

/// Sign used to join a non-leading term; the residual coefficient is the
/// term with that sign factored out.
fn term_sign(c: &Gq) -> (bool, Gq) {
    if c.im.is_zero() {
        (c.re.is_negative(), Complex::new(c.re.abs(), Rat::zero()))
    } else if c.re.is_zero() {
        (c.im.is_negative(), Complex::new(Rat::zero(), c.im.abs()))
    } else {
        // Mixed coefficients keep their inner signs and join with '+'.
        (false, c.clone())
    }
}

pub(super) fn write_scalar(s: &ExactScalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if s.is_zero() {
        return write!(f, "0");
    }
    // Radicands ascending, z = 1 last.
    let mut order: Vec<(u64, &Gq)> = s.iter_terms().filter(|(z, _)| *z > 1).collect();
    if let Some(c) = s.iter_terms().find(|(z, _)| *z == 1) {
        order.push(c);
    }
    for (idx, (z, c)) in order.iter().enumerate() {
        if idx == 0 {
            write_term(*z, c, f)?;
        } else {
            let (neg, residue) = term_sign(c);
            write!(f, "{}", if neg { "-" } else { "+" })?;
            write_term(*z, &residue, f)?;
        }
    }
    Ok(())
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }
    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: u8) -> Result<(), ExactError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ExactError::Parse(format!(
                "expected '{}' at byte {}",
                c as char, self.pos
            )))
        }
    }
    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse(format!("{msg} at byte {}", self.pos))
    }
}

fn parse_uint(cur: &mut Cursor) -> Result<BigInt, ExactError> {
    let start = cur.pos;
    while matches!(cur.peek(), Some(b'0'..=b'9')) {
        cur.bump();
    }
    if cur.pos == start {
        return Err(cur.err("expected digits"));
    }
    let text = std::str::from_utf8(&cur.s[start..cur.pos]).unwrap();
    text.parse::<BigInt>()
        .map_err(|e| ExactError::Parse(e.to_string()))
}

fn parse_rational(cur: &mut Cursor) -> Result<Rat, ExactError> {
    let neg = if cur.eat(b'-') {
        true
    } else {
        cur.eat(b'+');
        false
    };
    let num = parse_uint(cur)?;
    let den = if cur.eat(b'/') { parse_uint(cur)? } else { BigInt::from(1) };
    if den.is_zero() {
        return Err(cur.err("zero denominator"));
    }
    let r = Rat::new(num, den);
    Ok(if neg { -r } else { r })
}

fn parse_coeff(cur: &mut Cursor) -> Result<Gq, ExactError> {
    if cur.eat(b'(') {
        let re = parse_rational(cur)?;
        let sign = match cur.bump() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Err(cur.err("expected '+' or '-' in complex coefficient")),
        };
        let im = parse_rational(cur)?;
        cur.expect(b'i')?;
        cur.expect(b')')?;
        let im = if sign < 0 { -im } else { im };
        Ok(Complex::new(re, im))
    } else {
        let r = parse_rational(cur)?;
        if cur.eat(b'i') {
            Ok(Complex::new(Rat::zero(), r))
        } else {
            Ok(gq_rat(r))
        }
    }
}

fn parse_term(cur: &mut Cursor) -> Result<(Gq, i64), ExactError> {
    let coeff = parse_coeff(cur)?;
    if cur.eat(b'*') {
        for c in b"sqrt(" {
            cur.expect(*c)?;
        }
        let z = parse_uint(cur)?;
        cur.expect(b')')?;
        let z = i64::try_from(&z).map_err(|_| cur.err("radicand too large"))?;
        Ok((coeff, z))
    } else {
        Ok((coeff, 1))
    }
}

pub(super) fn parse_scalar(input: &str) -> Result<ExactScalar, ExactError> {
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor { s: cleaned.as_bytes(), pos: 0 };
    let mut raw: Vec<(Gq, i64)> = Vec::new();
    let (c, z) = parse_term(&mut cur)?;
    raw.push((c, z));
    loop {
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.bump();
                let (c, z) = parse_term(&mut cur)?;
                raw.push((c, z));
            }
            Some(b'-') => {
                cur.bump();
                let (c, z) = parse_term(&mut cur)?;
                raw.push((-c, z));
            }
            _ => return Err(cur.err("unexpected trailing input")),
        }
    }
    ExactScalar::normalize(&raw)
}

#[cfg(test)]
mod tests {
    use super::super::{gq_int, ExactScalar};
    use num_complex::Complex;

    #[test]
    fn spec_example_round_trip() {
        let text = "(1/2+3/2i)*sqrt(2)-1/3";
        let v: ExactScalar = text.parse().unwrap();
        assert_eq!(v.to_string(), text);
    }

    #[test]
    fn writer_shapes() {
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!(ExactScalar::from_int(-7).to_string(), "-7");
        assert_eq!(ExactScalar::i().to_string(), "1i");
        let v = ExactScalar::normalize(&[(gq_int(-2), 3), (gq_int(1), 1)]).unwrap();
        assert_eq!(v.to_string(), "-2*sqrt(3)+1");
        let w: ExactScalar = v.to_string().parse().unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn round_trip_battery() {
        let samples = [
            "0",
            "5",
            "-5",
            "2/3",
            "-2/3i",
            "1i",
            "(1/2-3i)",
            "1*sqrt(2)",
            "-1*sqrt(2)+1*sqrt(3)",
            "(-1/2+1/3i)*sqrt(6)+(2+2i)*sqrt(10)-1/7",
            "3i*sqrt(5)-2i",
        ];
        for s in samples {
            let v: ExactScalar = s.parse().unwrap();
            let printed = v.to_string();
            let w: ExactScalar = printed.parse().unwrap();
            assert_eq!(v, w, "value round trip for {s}");
            assert_eq!(printed, w.to_string(), "text fixed point for {s}");
        }
    }

    #[test]
    fn parser_normalizes() {
        let v: ExactScalar = "1*sqrt(8)".parse().unwrap();
        assert_eq!(v.to_string(), "2*sqrt(2)");
        let w: ExactScalar = "1*sqrt(2)-1*sqrt(2)".parse().unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<ExactScalar>().is_err());
        assert!("1*sqrt(-2)".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("1+".parse::<ExactScalar>().is_err());
        assert!("(1+2)".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn mixed_coeff_round_trip() {
        let c = Complex::new(
            num_rational::BigRational::new((-1).into(), 2.into()),
            num_rational::BigRational::new(5.into(), 3.into()),
        );
        let v = ExactScalar::normalize(&[(c, 7)]).unwrap();
        let s = v.to_string();
        assert_eq!(s, "(-1/2+5/3i)*sqrt(7)");
        assert_eq!(s.parse::<ExactScalar>().unwrap(), v);
    }
}
