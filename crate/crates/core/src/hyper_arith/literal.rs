//! Quaternion literals: `2`, `-0.5`, `i`, `3-2i`, `1+2i+3j-4k`, `i+j`.

use std::str::FromStr;

use super::quaternion::Quaternion;
use crate::error::Error;

impl FromStr for Quaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty quaternion literal".into()));
        }
        let bad = || Error::Parse(format!("bad quaternion literal {s:?}"));

        // split into signed terms, keeping exponent signs like 1e-3 attached
        let bytes = text.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            let c = bytes[i];
            let prev = bytes[i - 1];
            if (c == b'+' || c == b'-') && prev != b'e' && prev != b'E' {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);

        let mut q = Quaternion::ZERO;
        let mut seen = [false; 4];
        for term in terms {
            let (slot, body) = match term.chars().last() {
                Some('i') => (1, &term[..term.len() - 1]),
                Some('j') => (2, &term[..term.len() - 1]),
                Some('k') => (3, &term[..term.len() - 1]),
                _ => (0, term),
            };
            if seen[slot] {
                return Err(bad());
            }
            seen[slot] = true;
            let coeff = match body {
                "" | "+" if slot > 0 => 1.0,
                "-" if slot > 0 => -1.0,
                _ => body.parse::<f64>().map_err(|_| bad())?,
            };
            if !coeff.is_finite() {
                return Err(bad());
            }
            match slot {
                0 => q.a = coeff,
                1 => q.b = coeff,
                2 => q.c = coeff,
                _ => q.d = coeff,
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quaternion {
        s.parse().unwrap()
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(q("2"), Quaternion::real(2.0));
        assert_eq!(q("-0.5"), Quaternion::real(-0.5));
        assert_eq!(q("i"), Quaternion::I);
        assert_eq!(q("-i"), -Quaternion::I);
        assert_eq!(q("3-2i"), Quaternion::complex(3.0, -2.0));
        assert_eq!(q("1+2i+3j-4k"), Quaternion::new(1.0, 2.0, 3.0, -4.0));
        assert_eq!(q("i+j"), Quaternion::new(0.0, 1.0, 1.0, 0.0));
        assert_eq!(q(" 1e-3 + 2.5E+1i "), Quaternion::complex(1e-3, 25.0));
    }

    #[test]
    fn rejected_forms() {
        for s in ["", "i+i", "2x", "1++i", "nan", "inf", "1+"] {
            assert!(s.parse::<Quaternion>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn display_parses_back() {
        for v in [
            Quaternion::new(0.25, -3.0, 1.0, 1e-7),
            Quaternion::complex(0.0, -1.0),
            Quaternion::real(42.0),
        ] {
            assert_eq!(v.to_string().parse::<Quaternion>().unwrap(), v);
        }
    }
}
