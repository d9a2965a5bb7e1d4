//! Finite racks, quandles and keis given by operation tables.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Strongest axiom class a table satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RackKind {
    Rack,
    Quandle,
    Kei,
}

impl fmt::Display for RackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RackKind::Rack => "rack",
            RackKind::Quandle => "quandle",
            RackKind::Kei => "kei",
        })
    }
}

/// A finite rack on `{0, ..., k-1}` with `table[a][b] = a * b`.
///
/// Immutable once built. Construction always re-derives the kind and the
/// orbit partition from the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRack {
    name: String,
    size: usize,
    table: Vec<usize>,
    kind: RackKind,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
    // col_inverse[b*k + c] = the unique a with a*b = c
    col_inverse: Vec<usize>,
}

impl FiniteRack {
    /// The dihedral quandle `R_k`: `a*b = 2b - a mod k`.
    pub fn dihedral(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidRack("dihedral quandle needs k >= 1".into()));
        }
        let table = table_from(k, |a, b| (2 * b + k - a) % k);
        Self::build(format!("dihedral:{k}"), k, table)
    }

    /// Trivial quandle `a*b = a`.
    pub fn trivial(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidRack("trivial quandle needs k >= 1".into()));
        }
        Self::build(format!("trivial:{k}"), k, table_from(k, |a, _| a))
    }

    /// Alexander quandle on `Z_m`: `a*b = t*a + (1-t)*b`.
    ///
    /// With this orientation the right translation `*_b` is multiplication by
    /// `t` followed by a shift, so `t` must be a unit, and `t = -1` recovers
    /// the dihedral quandle.
    pub fn alexander(m: usize, t: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidRack("Alexander quandle needs m >= 1".into()));
        }
        let mi = m as i64;
        let t = t.rem_euclid(mi);
        if num_integer::gcd(t, mi) != 1 {
            return Err(Error::InvalidRack(format!("t = {t} is not a unit mod {m}")));
        }
        let s = (1 - t).rem_euclid(mi);
        let table = table_from(m, |a, b| ((t * a as i64 + s * b as i64) % mi) as usize);
        Self::build(format!("alexander:{m}:{t}"), m, table)
    }

    /// Classify an arbitrary table, returning the strongest satisfied kind.
    pub fn classify(table: Vec<Vec<usize>>) -> Result<Self> {
        let k = table.len();
        if k == 0 {
            return Err(Error::InvalidRack("empty table".into()));
        }
        let mut flat = Vec::with_capacity(k * k);
        for (a, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidRack(format!("row {a} has {} entries, expected {k}", row.len())));
            }
            for &v in row {
                if v >= k {
                    return Err(Error::InvalidRack(format!("entry {v} in row {a} is out of range")));
                }
                flat.push(v);
            }
        }
        Self::build(format!("table:{}", &digest_of(k, &flat)[..12]), k, flat)
    }

    /// Parse the text format: `k` on the first line, then `k` rows of `k`
    /// whitespace-separated entries.
    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let k: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing size".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("size: {e}")))?;
        let mut rows = vec![Vec::with_capacity(k); k];
        for (a, row) in rows.iter_mut().enumerate() {
            for b in 0..k {
                let tok = tokens
                    .next()
                    .ok_or_else(|| Error::Parse(format!("missing entry ({a},{b})")))?;
                row.push(tok.parse().map_err(|e| Error::Parse(format!("entry ({a},{b}): {e}")))?);
            }
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after table".into()));
        }
        Self::classify(rows)
    }

    /// Parse `dihedral:k`, `trivial:k`, `alexander:m:t` or `file:PATH`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let (head, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("rack spec `{spec}` has no `:`")))?;
        let num = |s: &str| -> Result<i64> {
            s.trim().parse().map_err(|e| Error::Parse(format!("`{s}`: {e}")))
        };
        let positive = |s: &str| -> Result<usize> {
            let v = num(s)?;
            usize::try_from(v).map_err(|_| Error::Parse(format!("`{s}` must be non-negative")))
        };
        match head {
            "dihedral" => Self::dihedral(positive(rest)?),
            "trivial" => Self::trivial(positive(rest)?),
            "alexander" => {
                let (m, t) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("expected alexander:m:t".into()))?;
                Self::alexander(positive(m)?, num(t)?)
            }
            "file" => {
                let text = std::fs::read_to_string(Path::new(rest))
                    .map_err(|e| Error::Parse(format!("{rest}: {e}")))?;
                let mut rack = Self::from_table_text(&text)?;
                rack.name = format!("file:{rest}");
                Ok(rack)
            }
            other => Err(Error::Parse(format!("unknown rack family `{other}`"))),
        }
    }

    fn build(name: String, k: usize, table: Vec<usize>) -> Result<Self> {
        let op = |a: usize, b: usize| table[a * k + b];
        let mut col_inverse = vec![usize::MAX; k * k];
        for b in 0..k {
            for a in 0..k {
                let c = op(a, b);
                let slot = &mut col_inverse[b * k + c];
                if *slot != usize::MAX {
                    return Err(Error::NotBijective { a1: *slot, a2: a, b });
                }
                *slot = a;
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if op(op(a, b), c) != op(op(a, c), op(b, c)) {
                        return Err(Error::NotDistributive { a, b, c });
                    }
                }
            }
        }
        let idempotent = (0..k).all(|a| op(a, a) == a);
        let involutive = (0..k).all(|a| (0..k).all(|b| op(op(a, b), b) == a));
        let kind = match (idempotent, involutive) {
            (true, true) => RackKind::Kei,
            (true, false) => RackKind::Quandle,
            _ => RackKind::Rack,
        };

        let mut uf: Vec<usize> = (0..k).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for a in 0..k {
            for b in 0..k {
                let (ra, rc) = (find(&mut uf, a), find(&mut uf, op(a, b)));
                if ra != rc {
                    uf[ra.max(rc)] = ra.min(rc);
                }
            }
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut orbit_of = vec![0; k];
        let mut label = vec![usize::MAX; k];
        for a in 0..k {
            let root = find(&mut uf, a);
            if label[root] == usize::MAX {
                label[root] = orbits.len();
                orbits.push(Vec::new());
            }
            orbit_of[a] = label[root];
            orbits[label[root]].push(a);
        }

        Ok(FiniteRack {
            name,
            size: k,
            table,
            kind,
            orbits,
            orbit_of,
            col_inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> RackKind {
        self.kind
    }

    pub fn is_quandle(&self) -> bool {
        self.kind >= RackKind::Quandle
    }

    pub fn is_kei(&self) -> bool {
        self.kind == RackKind::Kei
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    /// The unique `a` with `a * b = c`.
    #[inline]
    pub fn right_divide(&self, c: usize, b: usize) -> usize {
        self.col_inverse[b * self.size + c]
    }

    /// All `x` with `a * x = b`.
    pub fn left_solutions(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.size).filter(|&x| self.op(a, x) == b).collect()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, a: usize) -> usize {
        self.orbit_of[a]
    }

    /// Hex SHA-256 of the size and table; edited racks never share a digest.
    pub fn digest(&self) -> String {
        digest_of(self.size, &self.table)
    }

    /// The table in the text file format accepted by [`Self::from_table_text`].
    pub fn to_table_text(&self) -> String {
        let mut s = format!("{}\n", self.size);
        for row in self.table.chunks(self.size) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Exhaustive check of the structural properties used by the homology
    /// operations.
    pub fn properties(&self) -> PropertyReport {
        let k = self.size;
        let op = |a, b| self.op(a, b);
        let columns_equal = |x: usize, y: usize| (0..k).all(|z| op(z, x) == op(z, y));

        let property1 = (0..k).all(|x| {
            (0..k).all(|y| (0..k).all(|a| op(a, x) != op(a, y) || columns_equal(x, y)))
        });

        // composite[(x, x')][z] = z*x*x'
        let composite: Vec<Vec<usize>> = (0..k * k)
            .map(|p| {
                let (x, xp) = (p / k, p % k);
                (0..k).map(|z| op(op(z, x), xp)).collect()
            })
            .collect();
        let property2 = (0..k * k).all(|p| {
            (0..k * k).all(|q| {
                composite[p] == composite[q] || (0..k).all(|a| composite[p][a] != composite[q][a])
            })
        });

        let quasigroup = (0..k).all(|a| {
            let mut seen = vec![false; k];
            (0..k).all(|x| !std::mem::replace(&mut seen[op(a, x)], true))
        });
        let commutative = (0..k).all(|a| (0..k).all(|b| op(a, b) == op(b, a)));

        let n_condition = (0..k)
            .map(|a| {
                let mut state: Vec<usize> = (0..k).collect();
                let mut n = 0;
                loop {
                    state.iter_mut().for_each(|x| *x = op(*x, a));
                    n += 1;
                    if state.iter().enumerate().all(|(i, &x)| i == x) {
                        break n;
                    }
                }
            })
            .collect();

        let r_bijective = (0..k).all(|a| {
            let mut seen = vec![false; k];
            (0..k).all(|b| !std::mem::replace(&mut seen[op(op(b, a), b)], true))
        });

        PropertyReport {
            property1,
            property2,
            quasigroup,
            commutative,
            n_condition,
            r_bijective,
        }
    }
}

impl fmt::Display for FiniteRack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// `a*x = a*y` for some `a` forces `*_x = *_y`.
    pub property1: bool,
    /// `a*x*x' = a*y*y'` for some `a` forces `*_{x'} *_x = *_{y'} *_y`.
    pub property2: bool,
    /// Every `a*x = b` has exactly one solution `x`.
    pub quasigroup: bool,
    pub commutative: bool,
    /// Order of the permutation `*_a`, per element.
    pub n_condition: Vec<usize>,
    /// `b -> b*a*b` is a bijection for every `a`.
    pub r_bijective: bool,
}

fn table_from(k: usize, f: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    (0..k * k).map(|i| f(i / k, i % k)).collect()
}

fn digest_of(k: usize, table: &[usize]) -> String {
    let mut h = Sha256::new();
    h.update((k as u64).to_le_bytes());
    for &v in table {
        h.update((v as u32).to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_three() {
        let r = FiniteRack::dihedral(3).unwrap();
        assert_eq!(r.table()[0], vec![0, 2, 1]);
        assert_eq!(r.kind(), RackKind::Kei);
        assert_eq!(r.orbits().len(), 1);
    }

    #[test]
    fn dihedral_orbit_counts() {
        for k in 1..=12 {
            let r = FiniteRack::dihedral(k).unwrap();
            assert_eq!(r.orbits().len(), if k % 2 == 1 { 1 } else { 2 }, "k={k}");
        }
    }

    #[test]
    fn singleton_and_zero() {
        let r = FiniteRack::dihedral(1).unwrap();
        assert_eq!(r.table(), vec![vec![0]]);
        assert_eq!(r.kind(), RackKind::Kei);
        assert_eq!(r.table(), FiniteRack::trivial(1).unwrap().table());
        assert!(FiniteRack::dihedral(0).is_err());
        assert!(FiniteRack::trivial(0).is_err());
    }

    #[test]
    fn trivial_quandle() {
        let r = FiniteRack::trivial(2).unwrap();
        assert_eq!(r.table(), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(r.kind(), RackKind::Kei);
        assert_eq!(FiniteRack::trivial(3).unwrap().orbits().len(), 3);
    }

    #[test]
    fn alexander_quandles() {
        let a = FiniteRack::alexander(5, 4).unwrap();
        assert_eq!(a.table(), FiniteRack::dihedral(5).unwrap().table());
        assert_eq!(a.kind(), RackKind::Kei);

        let b = FiniteRack::alexander(5, 2).unwrap();
        // a*b = 2a - b
        assert_eq!(b.op(0, 1), 4);
        assert_eq!(b.op(1, 0), 2);
        assert_eq!(b.kind(), RackKind::Quandle);

        assert!(FiniteRack::alexander(4, 2).is_err());
    }

    #[test]
    fn classify_rack_that_is_not_a_quandle() {
        // a*b = a + 1 mod 2: bijective columns and distributive, but 0*0 = 1
        let r = FiniteRack::classify(vec![vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(r.kind(), RackKind::Rack);
    }

    #[test]
    fn classify_swap_table() {
        // Columns are bijective, but (0*1)*1 = 0 while (0*1)*(1*1) = 1*0 = 1.
        let err = FiniteRack::classify(vec![vec![0, 1], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotDistributive { .. }), "{err}");
    }

    #[test]
    fn classify_non_bijective_column() {
        let err = FiniteRack::classify(vec![vec![0, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::NotBijective { .. }), "{err}");
    }

    #[test]
    fn classify_round_trip() {
        for k in 1..=9 {
            let r = FiniteRack::dihedral(k).unwrap();
            let c = FiniteRack::classify(r.table()).unwrap();
            assert_eq!(c.table(), r.table());
            assert_eq!(c.kind(), r.kind());
            assert_eq!(c.orbits(), r.orbits());
            let t = FiniteRack::from_table_text(&r.to_table_text()).unwrap();
            assert_eq!(t.table(), r.table());
        }
    }

    #[test]
    fn properties_of_odd_dihedral() {
        let p = FiniteRack::dihedral(5).unwrap().properties();
        assert!(p.property1 && p.property2 && p.quasigroup && p.r_bijective);
        assert!(!p.commutative);
        assert_eq!(p.n_condition, vec![2; 5]);
        let p3 = FiniteRack::dihedral(3).unwrap().properties();
        assert!(p3.commutative);
        // r_a(b) = 3a - 2b... for q = 3: b*a*b = 2b - (2a - b) = 3b - 2a = -2a, constant
        assert!(!p3.r_bijective);
    }

    #[test]
    fn odd_dihedral_all_properties() {
        for k in (1..=15).step_by(2) {
            let p = FiniteRack::dihedral(k).unwrap().properties();
            assert!(p.property1 && p.property2 && p.quasigroup, "k={k}");
            assert!(p.n_condition.iter().all(|&n| 2 % n == 0));
        }
    }

    #[test]
    fn quasigroup_implies_property1() {
        for m in 2..=9usize {
            for t in 1..m as i64 {
                if let Ok(r) = FiniteRack::alexander(m, t) {
                    let p = r.properties();
                    if p.quasigroup {
                        assert!(p.property1, "m={m} t={t}");
                    }
                    let s = (1 - t).rem_euclid(m as i64);
                    if num_integer::gcd(s, m as i64) == 1 {
                        assert!(p.quasigroup, "m={m} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn spec_strings() {
        assert_eq!(FiniteRack::from_spec("dihedral:7").unwrap().size(), 7);
        assert_eq!(FiniteRack::from_spec("alexander:7:3").unwrap().size(), 7);
        assert!(FiniteRack::from_spec("nonsense:3").is_err());
        assert!(FiniteRack::from_spec("dihedral").is_err());
    }

    #[test]
    fn digest_distinguishes_tables() {
        let a = FiniteRack::dihedral(5).unwrap();
        let b = FiniteRack::alexander(5, 2).unwrap();
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest(), FiniteRack::alexander(5, 4).unwrap().digest());
    }
}
