//! Text format for morphisms and points.
//!
//! ```text
//! # z^2 - 1
//! N=1
//! vars=x,y
//! f0=x^2 - y^2
//! f1=y^2
//! ```
//!
//! `N=` and `vars=` are optional; without them the dimension is the number
//! of `fK=` lines minus one and the variables take their default names.

use goodred::arith::Rational;
use goodred::geom::{default_var_names, HomogPoly, Morphism, Poly, ProjPointQ};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::CliError;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, column, message: message.into() }
}

/// Cursor over one polynomial expression; columns are 1-based in the file.
struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    offset: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize, offset: usize) -> Self {
        Lexer { text: text.as_bytes(), pos: 0, line, offset }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> CliError {
        parse_error(self.line, self.column(), message)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.pos < self.text.len() && f(self.text[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos]).expect("ascii slice")
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt, CliError> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        Ok(digits.parse().expect("digits parse"))
    }

    fn exponent(&mut self) -> Result<u32, CliError> {
        self.skip_ws();
        let col = self.column();
        let n = self.integer()?;
        u32::try_from(n).map_err(|_| parse_error(self.line, col, "exponent too large"))
    }
}

/// `expr := ['+'|'-'] term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
/// `factor := int ['/' int] | var ['^' int]`.
fn parse_poly(lex: &mut Lexer<'_>, vars: &[String]) -> Result<Poly<Rational>, CliError> {
    let n = vars.len();
    let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
    let mut negative = false;
    if lex.eat(b'-') {
        negative = true;
    } else {
        lex.eat(b'+');
    }
    loop {
        let mut coeff = Rational::one();
        let mut mono = vec![0u32; n];
        loop {
            match lex.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = lex.integer()?;
                    let value = if lex.eat(b'/') {
                        let col = lex.column();
                        let den = lex.integer()?;
                        if den.is_zero() {
                            return Err(parse_error(lex.line, col, "zero denominator"));
                        }
                        Rational::new(num, den)
                    } else {
                        Rational::from_integer(num)
                    };
                    coeff *= value;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let col = lex.column();
                    let name = lex.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
                    let i = vars
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| parse_error(lex.line, col, format!("unknown variable `{name}`")))?;
                    let e = if lex.eat(b'^') { lex.exponent()? } else { 1 };
                    mono[i] += e;
                }
                Some(c) => return Err(lex.error(format!("unexpected `{}`", c as char))),
                None => return Err(lex.error("expected a term")),
            }
            if !lex.eat(b'*') {
                break;
            }
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((mono, coeff));
        match lex.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(c) => return Err(lex.error(format!("unexpected `{}`", c as char))),
        }
        lex.pos += 1;
    }
    Ok(Poly::from_terms(n, terms))
}

/// Parse a morphism file.
pub fn parse_morphism(text: &str) -> Result<Morphism, CliError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut vars: Option<(Vec<String>, usize)> = None;
    // component index -> (line, column of the expression, expression)
    let mut comps: BTreeMap<usize, (usize, usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(parse_error(line, 1, "expected `key=value`"));
        };
        let key = content[..eq].trim();
        let value = &content[eq + 1..];
        let value_col = eq + 2;
        match key {
            "N" => {
                let n = value.trim().parse::<usize>().map_err(|_| parse_error(line, value_col, "N must be a positive integer"))?;
                if n == 0 {
                    return Err(parse_error(line, value_col, "N must be a positive integer"));
                }
                dim = Some((n, line));
            }
            "vars" => {
                let names: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
                for name in &names {
                    let ok = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !ok {
                        return Err(parse_error(line, value_col, format!("invalid variable name `{name}`")));
                    }
                }
                vars = Some((names, line));
            }
            k if k.starts_with('f') && k.len() > 1 && k[1..].chars().all(|c| c.is_ascii_digit()) => {
                let i: usize = k[1..].parse().map_err(|_| parse_error(line, 1, "bad component index"))?;
                if comps.insert(i, (line, value_col - 1, value.to_string())).is_some() {
                    return Err(parse_error(line, 1, format!("component f{i} given twice")));
                }
            }
            _ => return Err(parse_error(line, 1, format!("unknown key `{key}`"))),
        }
    }
    let count = comps.len();
    if count < 2 {
        return Err(parse_error(text.lines().count().max(1), 1, "need at least two components f0, f1"));
    }
    if let Some((n, line)) = dim {
        if n + 1 != count {
            return Err(parse_error(line, 1, format!("N={n} needs {} components, found {count}", n + 1)));
        }
    }
    if let Some(missing) = (0..count).find(|i| !comps.contains_key(i)) {
        return Err(parse_error(text.lines().count().max(1), 1, format!("component f{missing} is missing")));
    }
    let names = match vars {
        Some((names, line)) => {
            if names.len() != count {
                return Err(parse_error(line, 1, format!("expected {count} variable names, found {}", names.len())));
            }
            names
        }
        None => default_var_names(count),
    };
    let mut forms = Vec::with_capacity(count);
    let mut degree: Option<u32> = None;
    for (i, (line, col, expr)) in &comps {
        let mut lex = Lexer::new(expr, *line, *col);
        let poly = parse_poly(&mut lex, &names)?;
        let Some(d) = poly.homogeneous_degree() else {
            if poly.is_zero() {
                return Err(parse_error(*line, 1, format!("component f{i} is zero")));
            }
            return Err(CliError::NotHomogeneous { component: *i, line: *line });
        };
        match degree {
            None => degree = Some(d),
            Some(first) if first != d => {
                return Err(CliError::DegreeMismatch { component: *i, line: *line, found: d, expected: first });
            }
            _ => {}
        }
        forms.push(HomogPoly::new(d, poly).expect("degree checked"));
    }
    Ok(Morphism::new(forms)?)
}

/// The file form of a morphism, accepted back by [`parse_morphism`].
pub fn render(phi: &Morphism) -> String {
    let names = phi.var_names();
    let mut out = format!("N={}\nvars={}\n", phi.dim(), names.join(","));
    for (i, c) in phi.components().iter().enumerate() {
        out.push_str(&format!("f{i}={}\n", c.poly().format_with(&names)));
    }
    out
}

/// A point given as `a,b,c` or `[a:b:c]` with rational entries.
pub fn parse_point(text: &str) -> Result<ProjPointQ, CliError> {
    let trimmed = text.trim();
    let (body, sep) = match trimmed.strip_prefix('[') {
        Some(rest) => match rest.strip_suffix(']') {
            Some(body) => (body, ':'),
            None => return Err(parse_error(1, trimmed.len(), "missing `]`")),
        },
        None => (trimmed, ','),
    };
    let mut coords = Vec::new();
    let mut col = if sep == ':' { 2 } else { 1 };
    for part in body.split(sep) {
        let value = parse_rational(part.trim()).ok_or_else(|| parse_error(1, col, format!("`{}` is not a rational number", part.trim())))?;
        coords.push(value);
        col += part.len() + 1;
    }
    Ok(ProjPointQ::new(coords)?)
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse().ok()?, b.trim().parse().ok()?),
        None => (s.parse().ok()?, num_bigint::BigInt::one()),
    };
    (!Zero::is_zero(&den)).then(|| Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_the_basic_example() {
        let phi = parse_morphism("N=1\nvars=x,y\nf0=x^2 - y^2\nf1=y^2").unwrap();
        let expected = Morphism::from_int_terms(&[&[(1, &[2, 0]), (-1, &[0, 2])], &[(1, &[0, 2])]]).unwrap();
        assert_eq!(phi, expected);
    }

    #[test]
    fn rational_coefficients() {
        let phi = parse_morphism("f0=1/2*x^2 + y^2\nf1=x*y").unwrap();
        let c = phi.components();
        assert_eq!(c[0].poly().coeff(&[2, 0]), Some(&rat(1, 2)));
        assert_eq!(c[0].poly().coeff(&[0, 2]), Some(&rat(1, 1)));
        assert_eq!(c[1].poly().coeff(&[1, 1]), Some(&rat(1, 1)));
    }

    #[test]
    fn homogeneity_errors() {
        let err = parse_morphism("f0=x^2\nf1=x*y + y").unwrap_err();
        assert!(matches!(err, CliError::NotHomogeneous { component: 1, line: 2 }), "{err:?}");
        let err = parse_morphism("f0=x^2\nf1=y^3").unwrap_err();
        assert!(matches!(err, CliError::DegreeMismatch { component: 1, found: 3, expected: 2, .. }), "{err:?}");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_morphism("N=1\nvars=x,y\nf0=x^2 + q\nf1=y^2").unwrap_err();
        assert_eq!(err, CliError::Parse { line: 3, column: 10, message: "unknown variable `q`".into() });
        let err = parse_morphism("# header\nf0=x^2 +\nf1=y^2").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err:?}");
        let err = parse_morphism("N=2\nf0=x^2\nf1=y^2").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }), "{err:?}");
        assert!(matches!(parse_morphism("f0=x^2\nf1=x^2"), Err(CliError::Math(_))));
    }

    #[test]
    fn comments_whitespace_and_implicit_coefficients() {
        let phi = parse_morphism("  f0 = - 3 * x ^ 2   # leading\n\n f1=2*x*y*1/2 - y^2").unwrap();
        let c = phi.components();
        assert_eq!(c[0].poly().coeff(&[2, 0]), Some(&rat(-3, 1)));
        assert_eq!(c[1].poly().coeff(&[1, 1]), Some(&rat(1, 1)));
        assert_eq!(c[1].poly().coeff(&[0, 2]), Some(&rat(-1, 1)));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0,1").unwrap(), ProjPointQ::from_ints(&[0, 1]).unwrap());
        assert_eq!(parse_point("[1/2:1]").unwrap(), ProjPointQ::from_ints(&[1, 2]).unwrap());
        assert_eq!(parse_point(" [ -1 : 4 : 2 ] ").unwrap(), ProjPointQ::from_ints(&[-1, 4, 2]).unwrap());
        assert!(parse_point("0,0").is_err());
        assert!(parse_point("[1:2").is_err());
        assert!(parse_point("1,x").is_err());
    }

    #[test]
    fn render_round_trip() {
        let phi = parse_morphism("N=2\nvars=a,b,c\nf0=a^2 - 1/3*b*c\nf1=b^2\nf2=c^2 + 7*a*b").unwrap();
        let text = render(&phi);
        assert!(text.starts_with("N=2\nvars=x,y,z\n"), "{text}");
        assert_eq!(parse_morphism(&text).unwrap(), phi);
    }
}
