//! Finite groups given by multiplication tables.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{domain, Error, Result};

/// A finite group on `{0, …, n−1}` with identity `0`.
///
/// `table[g * n + h]` is the index of `g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    name: String,
}

impl FiniteGroup {
    /// Validates the table (closure, identity at 0, inverses, associativity)
    /// and that `generators` generate.
    pub fn from_table(n: usize, table: Vec<usize>, generators: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(domain("a group has at least one element"));
        }
        if table.len() != n * n {
            return Err(domain(format!("table has {} entries, expected {}", table.len(), n * n)));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= n) {
            return Err(domain(format!("table entry {bad} out of range")));
        }
        for g in 0..n {
            if table[g] != g || table[g * n] != g {
                return Err(domain("element 0 is not the identity"));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            let row = &table[g * n..(g + 1) * n];
            let mut seen = vec![false; n];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(domain(format!("row {g} is not a permutation")));
                }
            }
            inverses[g] = row.iter().position(|&x| x == 0).expect("row is a permutation");
        }
        for g in 0..n {
            for h in 0..n {
                let gh = table[g * n + h];
                for k in 0..n {
                    if table[gh * n + k] != table[g * n + table[h * n + k]] {
                        return Err(domain(format!("not associative at ({g},{h},{k})")));
                    }
                }
            }
        }
        if let Some(&bad) = generators.iter().find(|&&s| s >= n) {
            return Err(domain(format!("generator {bad} out of range")));
        }
        let group = FiniteGroup { n, table, inverses, generators, name: String::new() };
        if group.generated_subgroup_order() != n {
            return Err(domain("generators do not generate the group"));
        }
        Ok(group)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.n + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    fn generated_subgroup_order(&self) -> usize {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(g) = queue.pop_front() {
            for &s in &self.generators {
                let h = self.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    count += 1;
                    queue.push_back(h);
                }
            }
        }
        count
    }

    /// `Z/n` with generator `1`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        FiniteGroup::from_table(n, table, gens)
            .expect("cyclic table is a group")
            .with_name(format!("Z/{n}"))
    }

    /// `G × H` with `(g, h)` at index `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (n, m) = (g.n, h.n);
        let size = n * m;
        let mut table = vec![0; size * size];
        for x in 0..size {
            for y in 0..size {
                let (x1, x2) = (x / m, x % m);
                let (y1, y2) = (y / m, y % m);
                table[x * size + y] = g.mul(x1, y1) * m + h.mul(x2, y2);
            }
        }
        let gens = g
            .generators
            .iter()
            .map(|&s| s * m)
            .chain(h.generators.iter().copied())
            .collect();
        FiniteGroup::from_table(size, table, gens)
            .expect("product of groups is a group")
            .with_name(format!("{}x{}", g.name, h.name))
    }

    /// `(Z/2)^k`.
    pub fn elementary_abelian(k: u32) -> Self {
        let mut g = FiniteGroup::cyclic(1);
        for _ in 0..k {
            g = FiniteGroup::direct_product(&g, &FiniteGroup::cyclic(2));
        }
        g.with_name(format!("(Z/2)^{k}"))
    }

    /// The dihedral group of order `2m`: `r^i s^j` at index `i + m j`,
    /// generated by the rotation `r` and the reflection `s`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (i, j) = (x % m, x / m);
                let (k, l) = (y % m, y / m);
                // r^i s^j r^k s^l = r^(i ± k) s^(j + l)
                let rot = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                table[x * n + y] = rot + m * ((j + l) % 2);
            }
        }
        FiniteGroup::from_table(n, table, vec![1 % n, m])
            .expect("dihedral table is a group")
            .with_name(format!("D{m}"))
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`, generated by `i` and `j`.
    pub fn quaternion() -> Self {
        // index = 2 * unit + sign, unit in (1, i, j, k)
        const UNIT: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut table = vec![0; 64];
        for x in 0..8 {
            for y in 0..8 {
                let (u, neg) = UNIT[x / 2][y / 2];
                let sign = (x % 2) ^ (y % 2) ^ neg as usize;
                table[x * 8 + y] = 2 * u + sign;
            }
        }
        FiniteGroup::from_table(8, table, vec![2, 4])
            .expect("quaternion table is a group")
            .with_name("Q8")
    }

    /// Parses the text format: `n`, then the generator indices, then `n`
    /// rows of the multiplication table. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let parse_nums = |line: &str| -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
                .collect()
        };
        let n_line = lines.next().ok_or_else(|| Error::Parse("empty group file".into()))?;
        let n = match parse_nums(n_line)?.as_slice() {
            [n] => *n,
            _ => return Err(Error::Parse("first line must be the group order".into())),
        };
        let gens = parse_nums(lines.next().ok_or_else(|| Error::Parse("missing generator line".into()))?)?;
        let mut table = Vec::with_capacity(n * n);
        for row in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing table row {row}")))?;
            let entries = parse_nums(line)?;
            if entries.len() != n {
                return Err(Error::Parse(format!("row {row} has {} entries, expected {n}", entries.len())));
            }
            table.extend(entries);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after the table".into()));
        }
        FiniteGroup::from_table(n, table, gens)
    }

    /// Inverse of [`FiniteGroup::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        out.push_str(&gens.join(" "));
        out.push('\n');
        for g in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|h| self.mul(g, h).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// The groups every exhaustive check runs over.
    pub fn zoo() -> Vec<FiniteGroup> {
        vec![
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(8),
            FiniteGroup::elementary_abelian(2),
            FiniteGroup::elementary_abelian(3),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn element_order(g: &FiniteGroup, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = g.mul(y, x);
            k += 1;
        }
        k
    }

    #[test]
    fn zoo_is_valid() {
        let orders: Vec<usize> = FiniteGroup::zoo().iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![2, 4, 8, 4, 8, 8, 8, 8]);
    }

    #[test]
    fn d4_and_q8_are_nonabelian_and_distinct() {
        let d4 = FiniteGroup::dihedral(4);
        let q8 = FiniteGroup::quaternion();
        for g in [&d4, &q8] {
            assert!((0..8).any(|x| (0..8).any(|y| g.mul(x, y) != g.mul(y, x))));
        }
        let involutions = |g: &FiniteGroup| (1..8).filter(|&x| element_order(g, x) == 2).count();
        assert_eq!(involutions(&d4), 5);
        assert_eq!(involutions(&q8), 1);
    }

    #[test]
    fn text_round_trip() {
        for g in FiniteGroup::zoo() {
            let parsed = FiniteGroup::parse(&g.to_text()).unwrap();
            assert_eq!(parsed.to_text(), g.to_text());
        }
    }

    #[test]
    fn rejects_bad_tables() {
        // not associative: a Latin square with identity that is not a group
        let bad = "5\n1\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        assert!(matches!(FiniteGroup::parse(bad), Err(Error::Domain(_))));
        let not_latin = "2\n1\n0 1\n1 1\n";
        assert!(FiniteGroup::parse(not_latin).is_err());
        let no_gen = "2\n\n0 1\n1 0\n";
        assert!(FiniteGroup::parse(no_gen).is_err());
        assert!(matches!(FiniteGroup::parse("2\n1\n0 1\n"), Err(Error::Parse(_))));
        assert!(matches!(FiniteGroup::parse("2\n1\n0 x\n1 0\n"), Err(Error::Parse(_))));
    }
}
