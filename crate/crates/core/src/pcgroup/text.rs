//! Line-oriented text format for pc presentations:
//!
//! ```text
//! pc 3
//! orders 2 3 2
//! pow 1: 3^1
//! conj 1 2: 2^2
//! ```
//!
//! Generators are numbered from 1. `pow i: w` gives `g_i^{p_i}` and `conj i j: w` (with
//! `i < j`) gives `g_j^{g_i}`. Words are `k^e` factors joined by ` * ` in increasing
//! generator order, or `1` for the identity. Trivial power relations and conjugates
//! `g_j^{g_i} = g_j` are omitted. Lines starting with `#` are comments.

use super::{PcElement, PcPresentation};
use crate::{Error, Result};
use std::fmt::Write;

fn format_word(w: &[u32]) -> String {
    let parts: Vec<String> =
        w.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| format!("{}^{}", i + 1, e)).collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" * ")
    }
}

pub fn format_presentation(g: &PcPresentation) -> String {
    let n = g.len();
    let mut s = String::new();
    writeln!(s, "pc {n}").unwrap();
    let orders: Vec<String> = g.rel_orders().iter().map(|p| p.to_string()).collect();
    writeln!(s, "orders {}", orders.join(" ")).unwrap();
    for i in 0..n {
        if !PcPresentation::is_identity(g.power(i)) {
            writeln!(s, "pow {}: {}", i + 1, format_word(g.power(i))).unwrap();
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = g.conjugate(j, i);
            if *c != g.gen(j) {
                writeln!(s, "conj {} {}: {}", i + 1, j + 1, format_word(c)).unwrap();
            }
        }
    }
    s
}

fn parse_word(s: &str, n: usize, line: usize) -> Result<PcElement> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut v = vec![0u32; n];
    let s = s.trim();
    if s == "1" {
        return Ok(v);
    }
    let mut last = 0usize;
    for part in s.split('*') {
        let part = part.trim();
        let (gen, exp) = match part.split_once('^') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (part, "1"),
        };
        let k: usize = gen.parse().map_err(|_| err(format!("bad generator `{gen}`")))?;
        let e: u32 = exp.parse().map_err(|_| err(format!("bad exponent `{exp}`")))?;
        if k == 0 || k > n {
            return Err(err(format!("generator {k} out of range")));
        }
        if k <= last {
            return Err(err("word factors must have strictly increasing generators".into()));
        }
        last = k;
        v[k - 1] = e;
    }
    Ok(v)
}

pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    let mut n: Option<usize> = None;
    let mut orders: Option<Vec<u32>> = None;
    let mut powers: Vec<PcElement> = Vec::new();
    let mut conj: Vec<Vec<PcElement>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match head {
            "pc" => {
                let k: usize = rest.trim().parse().map_err(|_| err("bad generator count".into()))?;
                n = Some(k);
            }
            "orders" => {
                let k = n.ok_or_else(|| err("`orders` before `pc`".into()))?;
                let o: Vec<u32> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(format!("bad order `{t}`"))))
                    .collect::<Result<_>>()?;
                if o.len() != k {
                    return Err(err(format!("expected {k} relative orders, found {}", o.len())));
                }
                powers = vec![vec![0; k]; k];
                conj = (0..k)
                    .map(|j| {
                        (0..j)
                            .map(|_| {
                                let mut v = vec![0; k];
                                v[j] = 1;
                                v
                            })
                            .collect()
                    })
                    .collect();
                orders = Some(o);
            }
            "pow" | "conj" => {
                let k = orders.as_ref().ok_or_else(|| err(format!("`{head}` before `orders`")))?.len();
                let (lhs, word) = rest.split_once(':').ok_or_else(|| err("missing `:`".into()))?;
                let idx: Vec<usize> = lhs
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(format!("bad index `{t}`"))))
                    .collect::<Result<_>>()?;
                let w = parse_word(word, k, line)?;
                if head == "pow" {
                    let [i] = idx[..] else { return Err(err("`pow` takes one index".into())) };
                    if i == 0 || i > k {
                        return Err(err(format!("generator {i} out of range")));
                    }
                    powers[i - 1] = w;
                } else {
                    let [i, j] = idx[..] else { return Err(err("`conj` takes two indices".into())) };
                    if i == 0 || j > k || i >= j {
                        return Err(err(format!("conjugate indices {i} {j} out of range")));
                    }
                    conj[j - 1][i - 1] = w;
                }
            }
            _ => return Err(err(format!("unknown directive `{head}`"))),
        }
    }
    let orders = match (n, orders) {
        (Some(0), None) => Vec::new(),
        (_, Some(o)) => o,
        _ => return Err(Error::Parse { line: 0, msg: "missing `pc` or `orders` line".into() }),
    };
    PcPresentation::new(orders, powers, conj)
}

#[cfg(test)]
mod tests {
    use super::super::examples::*;
    use super::*;

    #[test]
    fn round_trip() {
        for g in [symmetric3(), symmetric4(), dihedral8(), quaternion8(), cyclic(12), PcPresentation::trivial()] {
            let s = format_presentation(&g);
            let h = parse_presentation(&s).unwrap();
            assert_eq!(h, g);
            assert_eq!(format_presentation(&h), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_presentation("pc 2\norders 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_presentation("pc 1\norders 4\n"), Err(Error::Invalid(_))));
        assert!(matches!(parse_presentation("pc 2\norders 2 2\npow 1: 2^1 * 1^1\n"), Err(Error::Parse { .. })));
        let s3 = parse_presentation("# S3\npc 2\norders 2 3\nconj 1 2: 2^2\n").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(matches!(
            parse_presentation("pc 2\norders 2 3\npow 1: 2^1\nconj 1 2: 2^2\n"),
            Err(Error::Inconsistent(_))
        ));
    }
}
