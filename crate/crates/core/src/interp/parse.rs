//! Text formats for node sets.
//!
//! Files hold one node per line as `real imag`. Inline lists are
//! comma-separated complex literals such as `0, -1+pij, -3pi/4j, 0.5-2j`:
//! each term is a product/quotient of numbers and `pi`, with a trailing `j`
//! (or `i`) marking it imaginary.

use crate::error::{Error, Result};
use crate::interp::NodeSet;
use crate::scalar::{cplx, Complex};

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        message: msg.into(),
    }
}

fn parse_factor(tok: &str) -> Result<f64> {
    if tok == "pi" {
        return Ok(std::f64::consts::PI);
    }
    if let Some(num) = tok.strip_suffix("pi") {
        return parse_factor(num).map(|x| x * std::f64::consts::PI);
    }
    tok.parse::<f64>()
        .map_err(|_| usage(format!("cannot read '{tok}' as a number")))
}

fn parse_term(body: &str) -> Result<Complex<f64>> {
    let (body, imaginary) = match body.strip_suffix('j').or_else(|| body.strip_suffix('i')) {
        // "pi" ends in 'i' but is real
        Some(rest) if !body.ends_with("pi") || body.ends_with("pii") => (rest, true),
        _ => (body, false),
    };
    let body = if imaginary {
        body.strip_suffix('*').unwrap_or(body)
    } else {
        body
    };
    let value = if body.is_empty() {
        if !imaginary {
            return Err(usage("empty term"));
        }
        1.0
    } else {
        let mut value = 1.0;
        let mut op = '*';
        let mut start = 0;
        let bytes: Vec<char> = body.chars().collect();
        for (idx, ch) in bytes
            .iter()
            .enumerate()
            .chain(std::iter::once((bytes.len(), &'*')))
        {
            if *ch == '*' || *ch == '/' {
                let tok: String = bytes[start..idx].iter().collect();
                if tok.is_empty() {
                    return Err(usage(format!("missing operand in '{body}'")));
                }
                let x = parse_factor(&tok)?;
                value = if op == '*' { value * x } else { value / x };
                op = *ch;
                start = idx + 1;
            }
        }
        value
    };
    Ok(if imaginary {
        cplx(0.0, value)
    } else {
        cplx(value, 0.0)
    })
}

/// One complex literal, e.g. `-1+3pi/4j`.
pub fn parse_complex(text: &str) -> Result<Complex<f64>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(usage("empty node"));
    }
    let chars: Vec<char> = s.chars().collect();
    let mut terms = Vec::new();
    let mut start = 0;
    for i in 1..chars.len() {
        let sign = chars[i] == '+' || chars[i] == '-';
        let exponent = matches!(chars[i - 1], 'e' | 'E') && i >= 2 && chars[i - 2].is_ascii_digit();
        if sign && !exponent {
            terms.push(&chars[start..i]);
            start = i;
        }
    }
    terms.push(&chars[start..]);
    let mut total = cplx(0.0, 0.0);
    for term in terms {
        let (neg, body) = match term.first() {
            Some('-') => (true, &term[1..]),
            Some('+') => (false, &term[1..]),
            _ => (false, term),
        };
        let body: String = body.iter().collect();
        let v = parse_term(&body)?;
        total += if neg { -v } else { v };
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(usage(format!("non-finite node '{text}'")));
    }
    Ok(total)
}

/// Comma-separated inline list.
pub fn parse_node_list(text: &str) -> Result<NodeSet<f64>> {
    let nodes = text
        .split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    NodeSet::new(nodes)
}

/// One `real imag` pair per line; blank lines and `#`/`%` comments skipped.
pub fn parse_node_lines(text: &str) -> Result<NodeSet<f64>> {
    let mut nodes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        if parts.len() != 2 {
            return Err(err(format!("expected 'real imag', got '{line}'")));
        }
        let re: f64 = parts[0]
            .parse()
            .map_err(|_| err(format!("bad real part '{}'", parts[0])))?;
        let im: f64 = parts[1]
            .parse()
            .map_err(|_| err(format!("bad imaginary part '{}'", parts[1])))?;
        nodes.push(cplx(re, im));
    }
    NodeSet::new(nodes)
}

pub fn format_node_lines(nodes: &NodeSet<f64>) -> String {
    nodes
        .iter()
        .map(|z| format!("{:.16e} {:.16e}\n", z.re, z.im))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn literals() {
        assert_eq!(parse_complex("0").unwrap(), cplx(0.0, 0.0));
        assert_eq!(parse_complex("pij").unwrap(), cplx(0.0, PI));
        assert_eq!(parse_complex("-pij").unwrap(), cplx(0.0, -PI));
        assert_eq!(parse_complex("pi/2j").unwrap(), cplx(0.0, PI / 2.0));
        assert_eq!(
            parse_complex("-3pi/4j").unwrap(),
            cplx(0.0, -3.0 * PI / 4.0)
        );
        assert_eq!(parse_complex("-1+pij").unwrap(), cplx(-1.0, PI));
        assert_eq!(parse_complex("-1/2 - pi*j").unwrap(), cplx(-0.5, -PI));
        assert_eq!(parse_complex("1.5e-3+2j").unwrap(), cplx(1.5e-3, 2.0));
        assert_eq!(parse_complex("j").unwrap(), cplx(0.0, 1.0));
        assert_eq!(parse_complex("pi").unwrap(), cplx(PI, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), cplx(0.0, 2.0));
    }

    #[test]
    fn bad_literals() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1/0").is_err());
    }

    #[test]
    fn list_and_lines() {
        let n = parse_node_list("0, 1, -1+pij").unwrap();
        assert_eq!(n.len(), 3);
        let text = format_node_lines(&n);
        assert_eq!(parse_node_lines(&text).unwrap(), n);
        let err = parse_node_lines("1 2\nthree 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
