//! Named group families and the group-spec grammar.
//!
//! Grammar: `S<n> | A<n> | D<2n> | Q8 | C<n> | <spec>x<spec> | pq(<p>,<q>)
//! | perm:[cycles;...] | table:<path>`. The dihedral argument is the group
//! ORDER (D8 is the dihedral group of order 8), so odd arguments are
//! rejected.

use super::{direct_product, FiniteGroup, Group};
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpecAst {
    Symmetric(usize),
    Alternating(usize),
    Dihedral(usize), // group order
    Quaternion,
    Cyclic(usize),
    Pq(usize, usize),
    Product(Vec<GroupSpecAst>),
    Perm(Vec<Vec<Vec<usize>>>), // generators -> cycles -> points (1-based)
    Table(String),
}

impl GroupSpecAst {
    /// Canonical text form; parse(print(ast)) == ast.
    pub fn canonical(&self) -> String {
        match self {
            GroupSpecAst::Symmetric(n) => format!("S{n}"),
            GroupSpecAst::Alternating(n) => format!("A{n}"),
            GroupSpecAst::Dihedral(n) => format!("D{n}"),
            GroupSpecAst::Quaternion => "Q8".into(),
            GroupSpecAst::Cyclic(n) => format!("C{n}"),
            GroupSpecAst::Pq(p, q) => format!("pq({p},{q})"),
            GroupSpecAst::Product(parts) => parts
                .iter()
                .map(|p| p.canonical())
                .collect::<Vec<_>>()
                .join("x"),
            GroupSpecAst::Perm(gens) => {
                let body = gens
                    .iter()
                    .map(|g| {
                        g.iter()
                            .map(|c| {
                                format!(
                                    "({})",
                                    c.iter()
                                        .map(|p| p.to_string())
                                        .collect::<Vec<_>>()
                                        .join(",")
                                )
                            })
                            .collect::<String>()
                    })
                    .collect::<Vec<_>>()
                    .join(";");
                format!("perm:[{body}]")
            }
            GroupSpecAst::Table(path) => format!("table:{path}"),
        }
    }
}

fn err(msg: impl Into<String>, pos: usize) -> Error {
    Error::Parse {
        msg: msg.into(),
        pos,
    }
}

/// Parse a group spec string into its AST.
pub fn parse_spec(text: &str) -> Result<GroupSpecAst> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(err("empty group spec", 0));
    }
    // split on top-level 'x' (outside parens and brackets)
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let bytes = trimmed.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'x' if depth == 0 => {
                parts.push((start, &trimmed[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(err("unbalanced brackets", trimmed.len()));
    }
    parts.push((start, &trimmed[start..]));
    if parts.len() > 1 {
        let sub = parts
            .into_iter()
            .map(|(pos, p)| {
                if p.is_empty() {
                    Err(err("empty product factor", pos))
                } else {
                    parse_atom(p, pos)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(GroupSpecAst::Product(sub));
    }
    parse_atom(trimmed, 0)
}

fn parse_atom(s: &str, pos: usize) -> Result<GroupSpecAst> {
    if let Some(rest) = s.strip_prefix("perm:") {
        return parse_perm(rest, pos + 5);
    }
    if let Some(rest) = s.strip_prefix("table:") {
        if rest.is_empty() {
            return Err(err("missing table path", pos + 6));
        }
        return Ok(GroupSpecAst::Table(rest.to_string()));
    }
    if let Some(rest) = s.strip_prefix("pq(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| err("pq(p,q) missing ')'", pos + s.len()))?;
        let mut it = inner.split(',');
        let p = parse_num(it.next().unwrap_or(""), pos + 3)?;
        let q = parse_num(it.next().unwrap_or(""), pos + 3)?;
        if it.next().is_some() {
            return Err(err("pq takes exactly two arguments", pos));
        }
        return Ok(GroupSpecAst::Pq(p, q));
    }
    if !s.is_ascii() {
        return Err(err("group specs are ASCII", pos));
    }
    let (head, tail) = s.split_at(1);
    match head {
        "S" => Ok(GroupSpecAst::Symmetric(parse_num(tail, pos + 1)?)),
        "A" => Ok(GroupSpecAst::Alternating(parse_num(tail, pos + 1)?)),
        "C" => Ok(GroupSpecAst::Cyclic(parse_num(tail, pos + 1)?)),
        "D" => {
            let n = parse_num(tail, pos + 1)?;
            if n % 2 != 0 {
                return Err(err(
                    format!("D{n}: dihedral labels give the group order, which is even"),
                    pos,
                ));
            }
            Ok(GroupSpecAst::Dihedral(n))
        }
        "Q" => {
            if tail == "8" {
                Ok(GroupSpecAst::Quaternion)
            } else {
                Err(err("only Q8 is supported", pos))
            }
        }
        _ => Err(err(format!("unrecognized group spec '{s}'"), pos)),
    }
}

fn parse_num(s: &str, pos: usize) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| err(format!("expected a number, found '{s}'"), pos))
}

fn parse_perm(s: &str, pos: usize) -> Result<GroupSpecAst> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err("perm generators must be wrapped in [...]", pos))?;
    let mut gens = Vec::new();
    for gen_txt in inner.split(';') {
        let mut cycles = Vec::new();
        let mut rest = gen_txt.trim();
        if rest.is_empty() {
            return Err(err("empty permutation generator", pos));
        }
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| err("expected '(' in cycle list", pos))?;
            let close = open
                .find(')')
                .ok_or_else(|| err("unterminated cycle", pos))?;
            let cycle: Vec<usize> = open[..close]
                .split(',')
                .map(|t| parse_num(t.trim(), pos))
                .collect::<Result<_>>()?;
            if cycle.iter().any(|&p| p == 0) {
                return Err(err("cycle points are 1-based", pos));
            }
            cycles.push(cycle);
            rest = &open[close + 1..];
        }
        gens.push(cycles);
    }
    Ok(GroupSpecAst::Perm(gens))
}

/// Build a validated group from a spec string; deterministic element
/// numbering (identity first, then generator-word order for families).
pub fn build_group(spec: &str, caps: &Caps) -> Result<Group> {
    let ast = parse_spec(spec)?;
    build_from_ast(&ast, caps)
}

pub fn build_from_ast(ast: &GroupSpecAst, caps: &Caps) -> Result<Group> {
    let cap = caps.analysis;
    let g = match ast {
        GroupSpecAst::Cyclic(n) => {
            let n = *n;
            check_order(n.max(1), cap)?;
            if n == 0 {
                return Err(err("C0 is not a group", 0));
            }
            let mut table = vec![0usize; n * n];
            for i in 0..n {
                for j in 0..n {
                    table[i * n + j] = (i + j) % n;
                }
            }
            FiniteGroup::from_table(table, format!("C{n}"))?
        }
        GroupSpecAst::Symmetric(n) => {
            let n = *n;
            if n == 0 {
                return Err(err("S0 is not supported", 0));
            }
            if n > 12 {
                return Err(Error::CapExceeded {
                    what: "symmetric degree".into(),
                    got: n,
                    cap: 12,
                });
            }
            check_order(factorial(n), cap)?;
            if n == 1 {
                return build_from_ast(&GroupSpecAst::Cyclic(1), caps);
            }
            let mut gens = vec![transposition(n, 0, 1)];
            if n > 2 {
                gens.push(cycle_perm(n));
            }
            perm_group(&gens, format!("S{n}"), cap)?
        }
        GroupSpecAst::Alternating(n) => {
            let n = *n;
            if n < 3 {
                return build_from_ast(&GroupSpecAst::Cyclic(1), caps);
            }
            if n > 12 {
                return Err(Error::CapExceeded {
                    what: "alternating degree".into(),
                    got: n,
                    cap: 12,
                });
            }
            check_order(factorial(n) / 2, cap)?;
            // standard generators: (0 1 2) and, for n > 3, a second cycle
            let mut gens = vec![three_cycle(n)];
            if n > 3 {
                if n % 2 == 1 {
                    gens.push(cycle_perm(n));
                } else {
                    let mut p: Vec<usize> = (0..n).collect();
                    for i in 1..n - 1 {
                        p[i] = i + 1;
                    }
                    p[n - 1] = 1;
                    gens.push(p);
                }
            }
            perm_group(&gens, format!("A{n}"), cap)?
        }
        GroupSpecAst::Dihedral(order) => {
            let order = *order;
            if order == 0 || order % 2 != 0 {
                return Err(err("dihedral order must be a positive even number", 0));
            }
            check_order(order, cap)?;
            let n = order / 2;
            match n {
                1 => build_from_ast(&GroupSpecAst::Cyclic(2), caps)?,
                2 => {
                    let c2 = build_from_ast(&GroupSpecAst::Cyclic(2), caps)?;
                    let (v4, _, _) = direct_product(&c2, &c2, caps.product)?;
                    FiniteGroup::from_table(
                        (0..16).map(|i| v4.mul(i / 4, i % 4)).collect(),
                        "D4",
                    )?
                }
                _ => {
                    let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                    let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
                    perm_group(&[r, s], format!("D{order}"), cap)?
                }
            }
        }
        GroupSpecAst::Quaternion => {
            check_order(8, cap)?;
            // elements (sign, axis) with axis in {1, i, j, k}
            type Q = (bool, u8);
            let qmul = |a: &Q, b: &Q| -> Q {
                let (sa, xa) = *a;
                let (sb, xb) = *b;
                let (s, x) = match (xa, xb) {
                    (0, y) => (false, y),
                    (y, 0) => (false, y),
                    (1, 1) | (2, 2) | (3, 3) => (true, 0),
                    (1, 2) => (false, 3),
                    (2, 1) => (true, 3),
                    (2, 3) => (false, 1),
                    (3, 2) => (true, 1),
                    (3, 1) => (false, 2),
                    (1, 3) => (true, 2),
                    _ => unreachable!(),
                };
                (sa ^ sb ^ s, x)
            };
            FiniteGroup::from_generators(
                &[(false, 1u8), (false, 2u8)],
                (false, 0u8),
                qmul,
                "Q8",
                cap,
            )?
        }
        GroupSpecAst::Pq(p, q) => {
            let (p, q) = (*p, *q);
            if !is_prime(p) || !is_prime(q) {
                return Err(err(format!("pq({p},{q}): both arguments must be prime"), 0));
            }
            if q % p != 1 {
                return Err(err(
                    format!("pq({p},{q}) requires q = 1 mod p for a nonabelian group"),
                    0,
                ));
            }
            check_order(p * q, cap)?;
            // smallest a of multiplicative order p mod q
            let a = (2..q)
                .find(|&a| {
                    let mut x = 1usize;
                    for _ in 0..p {
                        x = x * a % q;
                    }
                    x == 1
                })
                .expect("q = 1 mod p guarantees an element of order p");
            // element (u, v) represents x^u y^v with y x y^-1 = x^a
            let mul = move |l: &(usize, usize), r: &(usize, usize)| {
                let mut av = r.0;
                for _ in 0..l.1 {
                    av = av * a % q;
                }
                ((l.0 + av) % q, (l.1 + r.1) % p)
            };
            FiniteGroup::from_generators(
                &[(1usize, 0usize), (0usize, 1usize)],
                (0usize, 0usize),
                mul,
                format!("pq({p},{q})"),
                cap,
            )?
        }
        GroupSpecAst::Product(parts) => {
            let mut it = parts.iter();
            let mut acc = build_from_ast(it.next().unwrap(), caps)?;
            for part in it {
                let next = build_from_ast(part, caps)?;
                let (prod, _, _) = direct_product(&acc, &next, caps.product)?;
                acc = prod;
            }
            if acc.order > cap {
                return Err(Error::CapExceeded {
                    what: "group order".into(),
                    got: acc.order,
                    cap,
                });
            }
            acc
        }
        GroupSpecAst::Perm(gens) => {
            let degree = gens
                .iter()
                .flat_map(|g| g.iter().flat_map(|c| c.iter()))
                .copied()
                .max()
                .unwrap_or(1);
            let perms: Vec<Vec<usize>> = gens
                .iter()
                .map(|cycles| {
                    let mut p: Vec<usize> = (0..degree).collect();
                    for c in cycles {
                        for w in 0..c.len() {
                            let from = c[w] - 1;
                            let to = c[(w + 1) % c.len()] - 1;
                            p[from] = to;
                        }
                    }
                    p
                })
                .collect();
            for p in &perms {
                let mut seen = vec![false; degree];
                for &x in p {
                    if seen[x] {
                        return Err(err("cycles must be disjoint within a generator", 0));
                    }
                    seen[x] = true;
                }
            }
            perm_group(&perms, "perm".to_string(), cap)?
        }
        GroupSpecAst::Table(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
            load_table_json(&text, cap)?
        }
    };
    Ok(g)
}

/// Table-file format: JSON object with "order" and a row-major flat "table"
/// of 0-based indices.
fn load_table_json(text: &str, cap: usize) -> Result<Group> {
    // minimal hand parser to keep core free of serde_json
    let order_pos = text
        .find("\"order\"")
        .ok_or_else(|| Error::InvalidTable("missing \"order\"".into()))?;
    let after = &text[order_pos + 7..];
    let colon = after
        .find(':')
        .ok_or_else(|| Error::InvalidTable("malformed order".into()))?;
    let digits: String = after[colon + 1..]
        .chars()
        .skip_while(|c| c.is_whitespace())
        .take_while(|c| c.is_ascii_digit())
        .collect();
    let order: usize = digits
        .parse()
        .map_err(|_| Error::InvalidTable("malformed order".into()))?;
    check_order(order, cap)?;
    let tab_pos = text
        .find("\"table\"")
        .ok_or_else(|| Error::InvalidTable("missing \"table\"".into()))?;
    let after = &text[tab_pos + 7..];
    let open = after
        .find('[')
        .ok_or_else(|| Error::InvalidTable("table must be an array".into()))?;
    let close = after
        .rfind(']')
        .ok_or_else(|| Error::InvalidTable("unterminated table array".into()))?;
    let body = &after[open + 1..close];
    let entries: Vec<usize> = body
        .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidTable(format!("bad entry '{t}'")))
        })
        .collect::<Result<_>>()?;
    if entries.len() != order * order {
        return Err(Error::InvalidTable(format!(
            "table has {} entries, expected {}",
            entries.len(),
            order * order
        )));
    }
    FiniteGroup::from_table(entries, "table")
}

fn perm_group(gens: &[Vec<usize>], name: String, cap: usize) -> Result<Group> {
    let degree = gens[0].len();
    let id: Vec<usize> = (0..degree).collect();
    FiniteGroup::from_generators(
        gens,
        id,
        |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&x| b[x]).collect::<Vec<usize>>(),
        name,
        cap,
    )
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

fn cycle_perm(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn three_cycle(n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p[0] = 1;
    p[1] = 2;
    p[2] = 0;
    p
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check_order(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded {
            what: "group order".into(),
            got: n,
            cap,
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn family_orders() {
        assert_eq!(build_group("S4", &caps()).unwrap().order, 24);
        assert_eq!(build_group("A4", &caps()).unwrap().order, 12);
        assert_eq!(build_group("D8", &caps()).unwrap().order, 8);
        assert_eq!(build_group("D30", &caps()).unwrap().order, 30);
        assert_eq!(build_group("C6", &caps()).unwrap().order, 6);
        assert_eq!(build_group("C2xC4", &caps()).unwrap().order, 8);
        assert_eq!(build_group("D4", &caps()).unwrap().order, 4);
    }

    #[test]
    fn pq_groups() {
        let g = build_group("pq(3,7)", &caps()).unwrap();
        assert_eq!(g.order, 21);
        assert!(!g.is_abelian());
        let g = build_group("pq(2,3)", &caps()).unwrap();
        assert_eq!(g.order, 6);
        assert!(!g.is_abelian());
        assert!(build_group("pq(3,5)", &caps()).is_err()); // 5 != 1 mod 3
        assert!(build_group("pq(2,9)", &caps()).is_err()); // 9 not prime
    }

    #[test]
    fn quaternion_structure() {
        let q8 = build_group("Q8", &caps()).unwrap();
        assert_eq!(q8.order, 8);
        let involutions: Vec<usize> = (1..8).filter(|&x| q8.element_order(x) == 2).collect();
        assert_eq!(involutions.len(), 1);
        assert!(!q8.is_abelian());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            build_group("D7", &caps()),
            Err(Error::Parse { .. })
        ));
        assert!(build_group("", &caps()).is_err());
        assert!(build_group("Z5", &caps()).is_err());
        assert!(matches!(
            build_group("S6", &caps()),
            Err(Error::CapExceeded { .. })
        )); // 720 > 64
    }

    #[test]
    fn canonical_roundtrip() {
        for s in ["S4", "D8", "C2xC4", "pq(3,7)", "Q8", "perm:[(1,2)(3,4);(1,3)]"] {
            let ast = parse_spec(s).unwrap();
            assert_eq!(parse_spec(&ast.canonical()).unwrap(), ast);
            assert_eq!(ast.canonical(), s);
        }
    }

    #[test]
    fn perm_spec_builds() {
        // V4 as a permutation group
        let g = build_group("perm:[(1,2)(3,4);(1,3)(2,4)]", &caps()).unwrap();
        assert_eq!(g.order, 4);
        assert!(g.is_abelian());
    }

    #[test]
    fn dihedral_relations() {
        // sr = r^{-1}s holds in the permutation model
        let d8 = build_group("D8", &caps()).unwrap();
        // elements 1 and 2 are the generators r, s in BFS order
        let (r, s) = (1, 2);
        assert_eq!(d8.element_order(r), 4);
        assert_eq!(d8.element_order(s), 2);
        assert_eq!(d8.mul(s, r), d8.mul(d8.inv(r), s));
    }
}
