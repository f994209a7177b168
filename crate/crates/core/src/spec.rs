//! The group-spec mini-language.
//!
//! ```text
//! spec    := product
//! product := power (('x' | '×') power)*
//! power   := atom ('^' INT)?
//! atom    := ('C' | 'Z') INT | 'S' INT | 'A' INT | 'D' INT | 'Q8'
//!          | 'pq(' INT ',' INT ')' | 'perm:' gen (';' gen)*
//!          | 'table:' PATH | '(' product ')'
//! gen     := '()' | ('(' INT ((',' | ' ') INT)* ')')+
//! ```
//!
//! Keywords are case-insensitive and whitespace between tokens is ignored.
//! `D<k>` is the dihedral group of order `2k`. A `table:` path runs to the
//! end of the input.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup};
use crate::limits::Limits;
use crate::perm::{alternating_generators, permutation_group, symmetric_generators, Permutation};
use crate::subgroup::is_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u64),
    Symmetric(u64),
    Alternating(u64),
    Dihedral(u64),
    Quaternion,
    PQ { p: u64, q: u64 },
    /// Generators, each a list of cycles with 1-based points.
    Perm(Vec<Vec<Vec<u32>>>),
    Table(String),
    Product(Vec<GroupSpec>),
    Power(Box<GroupSpec>, u32),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(k) => write!(f, "C{k}"),
            GroupSpec::Symmetric(k) => write!(f, "S{k}"),
            GroupSpec::Alternating(k) => write!(f, "A{k}"),
            GroupSpec::Dihedral(k) => write!(f, "D{k}"),
            GroupSpec::Quaternion => write!(f, "Q8"),
            GroupSpec::PQ { p, q } => write!(f, "pq({p},{q})"),
            GroupSpec::Perm(gens) => {
                write!(f, "perm:")?;
                for (i, gen) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    if gen.is_empty() {
                        write!(f, "()")?;
                    }
                    for cycle in gen {
                        let pts: Vec<String> = cycle.iter().map(u32::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                Ok(())
            }
            GroupSpec::Table(path) => write!(f, "table:{path}"),
            GroupSpec::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "x")?;
                    }
                    match factor {
                        GroupSpec::Product(_) => write!(f, "({factor})")?,
                        _ => write!(f, "{factor}")?,
                    }
                }
                Ok(())
            }
            GroupSpec::Power(base, m) => match **base {
                GroupSpec::Product(_) | GroupSpec::Power(..) | GroupSpec::Perm(_) | GroupSpec::Table(_) => {
                    write!(f, "({base})^{m}")
                }
                _ => write!(f, "{base}^{m}"),
            },
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let spec = p.product()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("'x', '^' or end of input"));
    }
    Ok(spec)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, expected: &str) -> Error {
        let found = match self.chars.get(self.pos) {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        Error::InvalidSpec {
            position: self.pos,
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|x| x.eq_ignore_ascii_case(&c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let n = kw.chars().count();
        let ok = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .zip(kw.chars())
                .all(|(a, b)| a.eq_ignore_ascii_case(&b));
        if ok {
            self.pos += n;
        }
        ok
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("an integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| Error::InvalidSpec {
            position: start,
            message: format!("integer {digits} is too large"),
        })
    }

    fn positive(&mut self) -> Result<u64> {
        let start = self.pos;
        let v = self.int()?;
        if v == 0 {
            return Err(Error::InvalidSpec {
                position: start,
                message: "expected a positive integer, found 0".into(),
            });
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<GroupSpec> {
        let mut factors = vec![self.power()?];
        while self.eat('x') || self.eat('×') {
            factors.push(self.power()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            GroupSpec::Product(factors)
        })
    }

    fn power(&mut self) -> Result<GroupSpec> {
        let base = self.atom()?;
        if self.eat('^') {
            let m = self.positive()?;
            let m = u32::try_from(m).map_err(|_| self.error("a smaller exponent"))?;
            return Ok(GroupSpec::Power(Box::new(base), m));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GroupSpec> {
        if self.eat('(') {
            let inner = self.product()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if self.eat_keyword("perm:") {
            return self.perm();
        }
        if self.eat_keyword("table:") {
            let path: String = self.chars[self.pos..].iter().collect();
            self.pos = self.chars.len();
            let path = path.trim().to_string();
            if path.is_empty() {
                return Err(self.error("a file path"));
            }
            return Ok(GroupSpec::Table(path));
        }
        if self.eat_keyword("pq") {
            self.expect('(')?;
            let p = self.positive()?;
            self.expect(',')?;
            let q = self.positive()?;
            self.expect(')')?;
            return Ok(GroupSpec::PQ { p, q });
        }
        if self.eat_keyword("q8") {
            return Ok(GroupSpec::Quaternion);
        }
        let ctor: fn(u64) -> GroupSpec = match self.peek().map(|c| c.to_ascii_lowercase()) {
            Some('c') | Some('z') => GroupSpec::Cyclic,
            Some('s') => GroupSpec::Symmetric,
            Some('a') => GroupSpec::Alternating,
            Some('d') => GroupSpec::Dihedral,
            _ => return Err(self.error("a group (C, Z, S, A, D, Q8, pq, perm:, table: or '(')")),
        };
        self.pos += 1;
        Ok(ctor(self.positive()?))
    }

    fn perm(&mut self) -> Result<GroupSpec> {
        let mut gens = vec![self.perm_generator()?];
        while self.eat(';') {
            gens.push(self.perm_generator()?);
        }
        Ok(GroupSpec::Perm(gens))
    }

    fn perm_generator(&mut self) -> Result<Vec<Vec<u32>>> {
        let mut cycles = Vec::new();
        if self.peek() != Some('(') {
            return Err(self.error("'(' starting a cycle"));
        }
        while self.eat('(') {
            let mut cycle = Vec::new();
            while !self.eat(')') {
                if !cycle.is_empty() {
                    self.eat(',');
                }
                let v = self.positive()?;
                cycle.push(u32::try_from(v).map_err(|_| self.error("a smaller point"))?);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }
}

fn factorial(k: u64) -> u128 {
    (1..=k as u128).product()
}

/// Order implied by a group spec, when known without building the group.
pub fn predicted_order(spec: &GroupSpec) -> Option<u128> {
    match spec {
        GroupSpec::Cyclic(k) => Some(*k as u128),
        GroupSpec::Symmetric(k) => Some(factorial(*k)),
        GroupSpec::Alternating(k) => Some(if *k < 2 { 1 } else { factorial(*k) / 2 }),
        GroupSpec::Dihedral(k) => Some(2 * *k as u128),
        GroupSpec::Quaternion => Some(8),
        GroupSpec::PQ { p, q } => Some(*p as u128 * *q as u128),
        GroupSpec::Perm(_) | GroupSpec::Table(_) => None,
        GroupSpec::Product(fs) => fs
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(predicted_order(f)?)),
        GroupSpec::Power(b, m) => predicted_order(b)?.checked_pow(*m),
    }
}

/// Smallest `r > 1` with multiplicative order `p` modulo `q`.
pub fn pq_scalar(p: u64, q: u64) -> Result<u64> {
    if !is_prime(p) || !is_prime(q) || !(q - 1).is_multiple_of(p) {
        return Err(Error::InvalidPQ { p, q });
    }
    (2..q)
        .find(|&r| mult_order(r, q) == p)
        .ok_or(Error::InvalidPQ { p, q })
}

pub(crate) fn mult_order(r: u64, q: u64) -> u64 {
    let mut x = r % q;
    let mut k = 1;
    while x != 1 {
        x = x * r % q;
        k += 1;
        if k > q {
            return 0;
        }
    }
    k
}

pub fn construct_group(spec: &GroupSpec, limits: &Limits) -> Result<FiniteGroup> {
    if let Some(order) = predicted_order(spec) {
        if order > limits.max_order as u128 {
            return Err(Error::OrderCapExceeded {
                order,
                cap: limits.max_order,
            });
        }
    }
    let name = spec.to_string();
    match spec {
        GroupSpec::Cyclic(k) => cyclic(*k as usize, &name),
        GroupSpec::Symmetric(k) | GroupSpec::Alternating(k) => {
            if *k > 8 {
                return Err(Error::PreconditionViolated(format!(
                    "{name}: symmetric and alternating groups are limited to degree 8"
                )));
            }
            let k = *k as usize;
            let gens = match spec {
                GroupSpec::Symmetric(_) => symmetric_generators(k),
                _ => alternating_generators(k),
            };
            let gens = if gens.is_empty() {
                vec![Permutation::identity(k.max(1))]
            } else {
                gens
            };
            permutation_group(&gens, &name, limits)
        }
        GroupSpec::Dihedral(k) => dihedral(*k as usize, &name),
        GroupSpec::Quaternion => quaternion(),
        GroupSpec::PQ { p, q } => pq_group(*p, *q, &name),
        GroupSpec::Perm(gens) => {
            let degree = gens
                .iter()
                .flatten()
                .flatten()
                .copied()
                .max()
                .unwrap_or(1) as usize;
            let perms = gens
                .iter()
                .map(|g| Permutation::from_cycles(degree, g))
                .collect::<Result<Vec<_>, String>>()
                .map_err(|m| Error::InvalidSpec {
                    position: 0,
                    message: m,
                })?;
            permutation_group(&perms, &name, limits)
        }
        GroupSpec::Table(path) => read_table_file(Path::new(path)),
        GroupSpec::Product(factors) => {
            let groups = factors
                .iter()
                .map(|f| construct_group(f, limits))
                .collect::<Result<Vec<_>>>()?;
            Ok(FiniteGroup::direct_product(&groups, limits)?.with_name(&name))
        }
        GroupSpec::Power(base, m) => {
            let g = construct_group(base, limits)?;
            let groups = vec![g; *m as usize];
            Ok(FiniteGroup::direct_product(&groups, limits)?.with_name(&name))
        }
    }
}

/// Parse and construct with default limits.
pub fn build(text: &str) -> Result<FiniteGroup> {
    construct_group(&parse_spec(text)?, &Limits::default())
}

fn cyclic(k: usize, name: &str) -> Result<FiniteGroup> {
    let table = (0..k)
        .flat_map(|a| (0..k).map(move |b| ((a + b) % k) as u32))
        .collect();
    let gens = if k > 1 { vec![Element(1)] } else { vec![] };
    FiniteGroup::from_trusted_table(k, table, name, None, Some(gens))
}

/// `r^i s^j` has id `j*k + i`.
fn dihedral(k: usize, name: &str) -> Result<FiniteGroup> {
    let n = 2 * k;
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (i1, j1) = (a % k, a / k);
        for b in 0..n {
            let (i2, j2) = (b % k, b / k);
            let i = if j1 == 0 { (i1 + i2) % k } else { (i1 + k - i2) % k };
            let j = (j1 + j2) % 2;
            table.push((j * k + i) as u32);
        }
    }
    let mut gens = Vec::new();
    if k > 1 {
        gens.push(Element(1));
    }
    gens.push(Element(k as u32));
    FiniteGroup::from_trusted_table(n, table, name, None, Some(gens))
}

/// Ids `2u + s` for unit `u` in `1, i, j, k` and sign bit `s`.
fn quaternion() -> Result<FiniteGroup> {
    // unit products: (sign, unit)
    const UNIT: [[(u32, u32); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut table = Vec::with_capacity(64);
    for a in 0..8u32 {
        for b in 0..8u32 {
            let (s, u) = UNIT[(a / 2) as usize][(b / 2) as usize];
            table.push(2 * u + ((s + a % 2 + b % 2) % 2));
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_trusted_table(8, table, "Q8", Some(labels), Some(vec![Element(2), Element(4)]))
}

/// `C_q ⋊ C_p` with `a b a^-1 = b^r`; the element `b^v a^w` has id `w*q + v`.
fn pq_group(p: u64, q: u64, name: &str) -> Result<FiniteGroup> {
    let r = pq_scalar(p, q)?;
    let (p, q) = (p as usize, q as usize);
    let n = p * q;
    let mut rpow = vec![1usize; p];
    for w in 1..p {
        rpow[w] = rpow[w - 1] * r as usize % q;
    }
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let (v1, w1) = (a % q, a / q);
        for b in 0..n {
            let (v2, w2) = (b % q, b / q);
            let v = (v1 + rpow[w1] * v2) % q;
            let w = (w1 + w2) % p;
            table.push((w * q + v) as u32);
        }
    }
    FiniteGroup::from_trusted_table(n, table, name, None, Some(vec![Element(1), Element(q as u32)]))
}

/// Reads the Cayley-table text format: the order on the first line, then
/// one row per line of space-separated indices.
pub fn parse_table_text(text: &str, name: &str) -> Result<FiniteGroup> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let order: usize = lines
        .next()
        .ok_or_else(|| Error::NotAGroup("empty table file".into()))?
        .parse()
        .map_err(|_| Error::NotAGroup("first line must be the order".into()))?;
    let mut rows = Vec::with_capacity(order);
    for (i, line) in lines.enumerate() {
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Error::NotAGroup(format!("row {i} has a non-integer entry")))?;
        rows.push(row);
    }
    if rows.len() != order {
        return Err(Error::NotAGroup(format!(
            "declared order {order} but found {} rows",
            rows.len()
        )));
    }
    FiniteGroup::from_rows(&rows, name)
}

pub fn read_table_file(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_table_text(&text, &format!("table:{}", path.display()))
}

pub fn table_text(group: &FiniteGroup) -> String {
    let mut out = format!("{}\n", group.order());
    for a in group.elements() {
        let row: Vec<String> = group.elements().map(|b| group.multiply(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{is_abelian, structure_predicates};

    #[test]
    fn parses_the_grammar() {
        assert_eq!(
            parse_spec("C2xC3").unwrap(),
            GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)])
        );
        assert_eq!(parse_spec(" pq( 2 , 3 ) ").unwrap(), GroupSpec::PQ { p: 2, q: 3 });
        assert_eq!(parse_spec("q8").unwrap(), GroupSpec::Quaternion);
        assert_eq!(
            parse_spec("z2^3").unwrap(),
            GroupSpec::Power(Box::new(GroupSpec::Cyclic(2)), 3)
        );
        assert_eq!(
            parse_spec("perm:(1 2);(1,2,3)").unwrap(),
            GroupSpec::Perm(vec![vec![vec![1, 2]], vec![vec![1, 2, 3]]])
        );
        assert_eq!(
            parse_spec("table: some/path x.txt").unwrap(),
            GroupSpec::Table("some/path x.txt".into())
        );
        assert_eq!(
            parse_spec("(C2xC3)xC4").unwrap().to_string(),
            "(C2xC3)xC4"
        );
    }

    #[test]
    fn reports_position_and_expectation() {
        match parse_spec("C2xQ9") {
            Err(Error::InvalidSpec { position, message }) => {
                assert_eq!(position, 3);
                assert!(message.contains("expected a group"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_spec("C0"), Err(Error::InvalidSpec { .. })));
        assert!(matches!(parse_spec("pq(2,3"), Err(Error::InvalidSpec { position: 6, .. })));
        assert!(matches!(parse_spec("C2 C3"), Err(Error::InvalidSpec { position: 3, .. })));
        assert!(matches!(parse_spec(""), Err(Error::InvalidSpec { .. })));
    }

    #[test]
    fn constructs_standard_groups() {
        let c6 = build("C6").unwrap();
        assert_eq!((c6.order(), c6.exponent()), (6, 6));
        assert!(is_abelian(&c6));
        assert_eq!(build("C2xC3").unwrap().exponent(), 6);
        assert_eq!(build("S3").unwrap().exponent(), 6);
        assert_eq!(build("S4").unwrap().order(), 24);
        assert_eq!(build("A5").unwrap().order(), 60);
        assert_eq!(build("A4").unwrap().order(), 12);
        assert_eq!(build("D4").unwrap().order(), 8);
        assert_eq!(build("Q8").unwrap().exponent(), 4);
        assert_eq!(build("C2^3").unwrap().exponent(), 2);
        let pq = build("pq(2,3)").unwrap();
        assert_eq!(pq.order(), 6);
        assert!(!is_abelian(&pq));
        let p37 = build("pq(3,7)").unwrap();
        assert_eq!(p37.order(), 21);
        assert!(!structure_predicates(&p37).is_nilpotent);
        let perm = build("perm:(1 2);(1 2 3)").unwrap();
        assert_eq!(perm.order(), 6);
        assert_eq!(build("perm:()").unwrap().order(), 1);
        assert_eq!(build("S1").unwrap().order(), 1);
        assert_eq!(build("A3").unwrap().order(), 3);
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(build("pq(3,5)"), Err(Error::InvalidPQ { p: 3, q: 5 })));
        assert!(matches!(build("pq(2,9)"), Err(Error::InvalidPQ { .. })));
        assert!(matches!(build("S8"), Err(Error::OrderCapExceeded { .. })));
        assert!(matches!(build("C100000"), Err(Error::OrderCapExceeded { .. })));
        assert!(matches!(build("perm:(1 2 2)"), Err(Error::InvalidSpec { .. })));
        assert!(matches!(build("table:/nonexistent/file"), Err(Error::Io { .. })));
    }

    #[test]
    fn pq_scalar_is_smallest() {
        assert_eq!(pq_scalar(2, 3).unwrap(), 2);
        assert_eq!(pq_scalar(3, 7).unwrap(), 2);
        assert_eq!(pq_scalar(2, 7).unwrap(), 6);
        assert_eq!(pq_scalar(5, 11).unwrap(), 3);
    }

    #[test]
    fn table_text_round_trip() {
        let q8 = build("Q8").unwrap();
        let g = parse_table_text(&table_text(&q8), "copy").unwrap();
        for a in q8.elements() {
            for b in q8.elements() {
                assert_eq!(q8.multiply(a, b), g.multiply(a, b));
            }
        }
        assert!(parse_table_text("2\n0 1\n", "short").is_err());
        assert!(parse_table_text("2\n0 1\n1 1\n", "bad").is_err());
    }
}
