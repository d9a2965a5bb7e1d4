//! Chain maps between rack complexes given generator-wise, their
//! verification, induced maps on homology, and chain homotopies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::abelian::GroupHom;
use crate::chain::{decode, Chain, Theory};
use crate::complex::{basis, boundary, ChainBasis};
use crate::error::{Error, Result};
use crate::homology::HomologyEngine;
use crate::int::Int;
use crate::matrix::DenseMatrix;
use crate::rack::FiniteRack;

/// Receives `(sign, tuple)` terms of an image.
pub type Emit<'a> = dyn FnMut(i64, &[usize]) + 'a;

type Rule = Arc<dyn Fn(&[usize], &mut Emit<'_>) + Send + Sync>;

/// Names of the maps understood by [`ChainMapSpec::named`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapName {
    Identity,
    Star(usize),
    /// The bare `h_a(w) = (w, a)`.
    H(usize),
    HPrime(usize),
    HBar(usize),
    Sym,
    Hs(usize),
    F(usize),
    D(usize),
    G1(usize),
    G2(usize),
    Pi,
    Psi,
    FaceF,
    TransferG,
    Hs0,
    /// `Compose(a, b)` applies `b` first.
    Compose(Box<MapName>, Box<MapName>),
}

impl fmt::Display for MapName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapName::Identity => write!(f, "id"),
            MapName::Star(a) => write!(f, "star:{a}"),
            MapName::H(a) => write!(f, "h:{a}"),
            MapName::HPrime(a) => write!(f, "hprime:{a}"),
            MapName::HBar(a) => write!(f, "hbar:{a}"),
            MapName::Sym => write!(f, "sym"),
            MapName::Hs(j) => write!(f, "hs:{j}"),
            MapName::F(j) => write!(f, "f:{j}"),
            MapName::D(j) => write!(f, "D:{j}"),
            MapName::G1(j) => write!(f, "g1:{j}"),
            MapName::G2(j) => write!(f, "g2:{j}"),
            MapName::Pi => write!(f, "pi"),
            MapName::Psi => write!(f, "psi"),
            MapName::FaceF => write!(f, "facef"),
            MapName::TransferG => write!(f, "transferg"),
            MapName::Hs0 => write!(f, "hs0"),
            MapName::Compose(a, b) => write!(f, "compose({a},{b})"),
        }
    }
}

impl FromStr for MapName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("compose(").and_then(|r| r.strip_suffix(')')) {
            let mut depth = 0i32;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        let a = inner[..i].parse()?;
                        let b = inner[i + 1..].parse()?;
                        return Ok(MapName::Compose(Box::new(a), Box::new(b)));
                    }
                    _ => {}
                }
            }
            return Err(Error::Parse(format!("compose needs two maps: `{s}`")));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = || -> Result<usize> {
            let a = arg.ok_or_else(|| Error::Parse(format!("`{head}` needs an argument")))?;
            a.trim().parse().map_err(|_| Error::Parse(format!("bad argument in `{s}`")))
        };
        let plain = |m: MapName| -> Result<MapName> {
            match arg {
                None => Ok(m),
                Some(_) => Err(Error::Parse(format!("`{head}` takes no argument"))),
            }
        };
        match head {
            "id" => plain(MapName::Identity),
            "star" => Ok(MapName::Star(num()?)),
            "h" => Ok(MapName::H(num()?)),
            "hprime" => Ok(MapName::HPrime(num()?)),
            "hbar" => Ok(MapName::HBar(num()?)),
            "sym" => plain(MapName::Sym),
            "hs" => Ok(MapName::Hs(num()?)),
            "f" => Ok(MapName::F(num()?)),
            "D" => Ok(MapName::D(num()?)),
            "g1" => Ok(MapName::G1(num()?)),
            "g2" => Ok(MapName::G2(num()?)),
            "pi" => plain(MapName::Pi),
            "psi" => plain(MapName::Psi),
            "facef" => plain(MapName::FaceF),
            "transferg" => plain(MapName::TransferG),
            "hs0" => plain(MapName::Hs0),
            _ => Err(Error::Parse(format!("unknown map `{s}`"))),
        }
    }
}

/// A degree-`shift` homomorphism `C_n(source) → C_{n+shift}(target)` given on
/// basis tuples. Chain-map verification is lazy and recorded per degree,
/// together with the sign `ε` in `∂F = ε F∂`.
pub struct ChainMapSpec {
    name: String,
    source: Arc<FiniteRack>,
    target: Arc<FiniteRack>,
    source_theory: Theory,
    target_theory: Theory,
    shift: i32,
    rule: Rule,
    verified: Mutex<BTreeMap<usize, i64>>,
}

impl fmt::Debug for ChainMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ChainMapSpec({}: {} {} -> {} {}, shift {})",
            self.name,
            self.source.name(),
            self.source_theory,
            self.target.name(),
            self.target_theory,
            self.shift
        )
    }
}

fn act(rack: &FiniteRack, x: &[usize], a: usize, out: &mut Vec<usize>) {
    out.clear();
    out.extend(x.iter().map(|&v| rack.op(v, a)));
}

fn sign_of(parity: usize) -> i64 {
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ChainMapSpec {
    pub fn new(
        name: impl Into<String>,
        source: (Arc<FiniteRack>, Theory),
        target: (Arc<FiniteRack>, Theory),
        shift: i32,
        rule: impl Fn(&[usize], &mut Emit<'_>) + Send + Sync + 'static,
    ) -> Result<Self> {
        for (rack, theory) in [&source, &target] {
            if *theory != Theory::Rack && !rack.is_quandle() {
                return Err(Error::RequiresQuandle(theory.name()));
            }
        }
        if source.1 == Theory::Degenerate || target.1 == Theory::Degenerate {
            return Err(Error::Precondition("maps are defined on rack and quandle complexes".into()));
        }
        Ok(ChainMapSpec {
            name: name.into(),
            source: source.0,
            target: target.0,
            source_theory: source.1,
            target_theory: target.1,
            shift,
            rule: Arc::new(rule),
            verified: Mutex::new(BTreeMap::new()),
        })
    }

    /// Build a named map on the complex of `rack` in `theory`. Maps through
    /// the orbit quandle (`pi`, `psi`) use the trivial quandle on the orbits
    /// as the other end.
    pub fn named(name: &MapName, rack: &Arc<FiniteRack>, theory: Theory) -> Result<Self> {
        let here = || (rack.clone(), theory);
        let r = rack.clone();
        let k = rack.size();
        let label = name.to_string();
        let element = |a: usize| -> Result<usize> {
            if a < k {
                Ok(a)
            } else {
                Err(Error::Precondition(format!("element {a} outside {}", rack.name())))
            }
        };
        match name {
            MapName::Identity => Self::new(label, here(), here(), 0, |x, emit| emit(1, x)),
            MapName::Star(a) => {
                let a = element(*a)?;
                Self::new(label, here(), here(), 0, move |x, emit| {
                    let mut y = Vec::new();
                    act(&r, x, a, &mut y);
                    emit(1, &y);
                })
            }
            MapName::H(a) => {
                let a = element(*a)?;
                Self::new(label, here(), here(), 1, move |x, emit| {
                    let mut y = x.to_vec();
                    y.push(a);
                    emit(1, &y);
                })
            }
            MapName::HPrime(a) => {
                let a = element(*a)?;
                // keis use h_a + *_a h_a; otherwise the orbit of *_a is summed
                let order = if rack.is_kei() { 2 } else { rack.properties().n_condition[a] };
                Self::new(label, here(), here(), 1, move |x, emit| {
                    let mut y = x.to_vec();
                    y.push(a);
                    let mut next = Vec::new();
                    for _ in 0..order {
                        emit(1, &y);
                        act(&r, &y, a, &mut next);
                        std::mem::swap(&mut y, &mut next);
                    }
                })
            }
            MapName::HBar(a) => {
                let a = element(*a)?;
                let props = rack.properties();
                if !rack.is_kei() {
                    return Err(Error::RequiresKei);
                }
                if !props.quasigroup || !props.property2 {
                    return Err(Error::Precondition(format!(
                        "hbar needs a quasigroup with property (2); {} fails",
                        rack.name()
                    )));
                }
                Self::new(label, here(), here(), -1, move |x, emit| {
                    let Some((&last, head)) = x.split_last() else { return };
                    let y = r.left_solutions(last, a)[0];
                    let mut w = Vec::new();
                    act(&r, head, y, &mut w);
                    emit(1, &w);
                    let mut v = Vec::new();
                    act(&r, &w, a, &mut v);
                    emit(1, &v);
                })
            }
            MapName::Sym => Self::new(label, here(), here(), 0, move |x, emit| {
                let mut y = Vec::new();
                for b in 0..r.size() {
                    act(&r, x, b, &mut y);
                    emit(1, &y);
                }
            }),
            MapName::Hs(j) => {
                let cycle = FibonacciCycle::new(rack, *j)?;
                Self::new(label, here(), here(), 2, move |x, emit| {
                    let mut y = x.to_vec();
                    y.extend([0, 0]);
                    let n = x.len();
                    for &(u, v) in &cycle.pairs {
                        y[n] = u;
                        y[n + 1] = v;
                        emit(1, &y);
                    }
                })
            }
            MapName::F(j) => {
                let j = *j;
                Self::new(label, here(), here(), 0, move |x, emit| {
                    if j == 0 {
                        emit(1, x);
                        return;
                    }
                    let m = j.min(x.len());
                    let mut y = x.to_vec();
                    for b in 0..k {
                        y[..m].fill(b);
                        emit(1, &y);
                    }
                })
            }
            MapName::D(j) => {
                let j = *j;
                if j == 0 {
                    return Err(Error::Precondition("D:j needs j >= 1".into()));
                }
                Self::new(label, here(), here(), 1, move |x, emit| {
                    if j > x.len() {
                        return;
                    }
                    let mut y = Vec::with_capacity(x.len() + 1);
                    for b in 0..k {
                        y.clear();
                        y.extend(std::iter::repeat(b).take(j - 1));
                        y.push(x[j - 1]);
                        y.push(b);
                        y.extend_from_slice(&x[j..]);
                        emit(1, &y);
                    }
                })
            }
            MapName::G1(j) | MapName::G2(j) => {
                let j = *j;
                if j == 0 {
                    return Err(Error::Precondition("g1:j and g2:j need j >= 1".into()));
                }
                let first = matches!(name, MapName::G1(_));
                Self::new(label, here(), here(), 0, move |x, emit| {
                    // below degree j the map is f^n_n
                    let mut y = x.to_vec();
                    let n = x.len();
                    for b in 0..k {
                        if n < j {
                            y.fill(b);
                        } else {
                            y[..j - 1].fill(b);
                            y[j - 1] = if first { r.op(b, x[j - 1]) } else { r.op(x[j - 1], b) };
                        }
                        emit(1, &y);
                    }
                })
            }
            MapName::Pi => {
                let orbits = Arc::new(FiniteRack::trivial(rack.orbits().len())?);
                Self::new(label, here(), (orbits, theory), 0, move |x, emit| {
                    let y: Vec<usize> = x.iter().map(|&v| r.orbit_of(v)).collect();
                    emit(1, &y);
                })
            }
            MapName::Psi => {
                if rack.orbits().len() != 1 {
                    return Err(Error::Precondition("psi is defined for connected racks".into()));
                }
                let orbits = Arc::new(FiniteRack::trivial(1)?);
                Self::new(label, (orbits, theory), here(), 0, move |x, emit| {
                    let mut y = vec![0; x.len()];
                    for b in 0..k {
                        y.fill(b);
                        emit(1, &y);
                    }
                })
            }
            MapName::FaceF => Self::new(label, here(), here(), -1, |x, emit| {
                if let Some((_, tail)) = x.split_first() {
                    emit(sign_of(x.len()), tail);
                }
            }),
            MapName::TransferG => Self::new(label, here(), here(), 1, move |x, emit| {
                let mut y = Vec::with_capacity(x.len() + 1);
                let sign = sign_of(x.len() + 1);
                for b in 0..k {
                    y.clear();
                    y.push(b);
                    y.extend_from_slice(x);
                    emit(sign, &y);
                }
            }),
            MapName::Hs0 => {
                let c = Self::named(
                    &MapName::Compose(Box::new(MapName::HPrime(0)), Box::new(MapName::Hs(1))),
                    rack,
                    theory,
                )?;
                Ok(c.renamed(label))
            }
            MapName::Compose(a, b) => {
                let a = Self::named(a, rack, theory)?;
                let b = Self::named(b, rack, theory)?;
                Self::compose(&a, &b)
            }
        }
    }

    /// `a ∘ b`.
    pub fn compose(a: &ChainMapSpec, b: &ChainMapSpec) -> Result<Self> {
        if b.target.digest() != a.source.digest() || b.target_theory != a.source_theory {
            return Err(Error::Precondition(format!(
                "cannot compose {} after {}: complexes differ",
                a.name, b.name
            )));
        }
        let (ra, rb) = (a.rule.clone(), b.rule.clone());
        let drop_degenerate = b.target_theory == Theory::Quandle;
        Self::new(
            format!("compose({},{})", a.name, b.name),
            (b.source.clone(), b.source_theory),
            (a.target.clone(), a.target_theory),
            a.shift + b.shift,
            move |x, emit| {
                rb(x, &mut |s, y| {
                    if drop_degenerate && crate::chain::is_degenerate(y) {
                        return;
                    }
                    ra(y, &mut |t, z| emit(s * t, z));
                })
            },
        )
    }

    fn renamed(mut self, name: String) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<FiniteRack> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteRack> {
        &self.target
    }

    pub fn source_theory(&self) -> Theory {
        self.source_theory
    }

    pub fn target_theory(&self) -> Theory {
        self.target_theory
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn target_degree(&self, n: usize) -> Option<usize> {
        usize::try_from(n as i64 + self.shift as i64).ok()
    }

    /// Calls `emit` for each raw image term of one tuple.
    pub fn apply_tuple(&self, x: &[usize], emit: &mut Emit<'_>) {
        (self.rule)(x, emit)
    }

    /// Image of a source-theory chain.
    pub fn apply(&self, c: &Chain) -> Result<Chain> {
        if c.base() != self.source.size() || c.theory() != self.source_theory {
            return Err(Error::Precondition(format!(
                "{} expects a {} chain over {}",
                self.name,
                self.source_theory,
                self.source.name()
            )));
        }
        let m = self.target_degree(c.degree()).ok_or(Error::InvalidDegree(c.degree()))?;
        Ok(self.apply_unchecked(c, m))
    }

    fn apply_unchecked(&self, c: &Chain, m: usize) -> Chain {
        let mut out = Chain::zero(self.target.size(), m, self.target_theory).with_modulus(c.modulus());
        for (x, coeff) in c.iter() {
            (self.rule)(&x, &mut |s, y| out.add_term(y, &(coeff * &Int::from(s))));
        }
        out
    }

    fn image(&self, x: &[usize], m: usize) -> Chain {
        let mut out = Chain::zero(self.target.size(), m, self.target_theory);
        (self.rule)(x, &mut |s, y| out.add_term(y, &Int::from(s)));
        out
    }

    /// Degrees verified so far with their signs.
    pub fn verified_degrees(&self) -> BTreeMap<usize, i64> {
        self.verified.lock().unwrap().clone()
    }

    /// Exhaustively check `∂F = ε F∂` on every basis tuple of degree `n`, for
    /// a single `ε ∈ {1, -1}`, preferring `1`. On quandle complexes the map
    /// must also send degenerate tuples to degenerate chains.
    pub fn verify(&self, n: usize) -> Result<i64> {
        if let Some(&s) = self.verified.lock().unwrap().get(&n) {
            return Ok(s);
        }
        let m = self.target_degree(n).ok_or(Error::InvalidDegree(n))?;
        let k = self.source.size();
        if self.source_theory == Theory::Quandle {
            let bad = basis(k, n, Theory::Degenerate).into_par_iter().find_map_first(|code| {
                let x = decode(k, n, code);
                let fx = self.image(&x, m);
                (!fx.is_zero()).then(|| format!("degenerate {x:?} maps to {fx}"))
            });
            if let Some(witness) = bad {
                return Err(self.failure(n, witness));
            }
        }
        let codes = basis(k, n, self.source_theory);
        let masks: Vec<u8> = codes
            .par_iter()
            .map(|&code| {
                let (lhs, rhs) = self.sides(&decode(k, n, code), n, m);
                (lhs == rhs) as u8 | ((lhs == -&rhs) as u8) << 1
            })
            .collect();
        let all = masks.iter().fold(3u8, |acc, &b| acc & b);
        let sign = match all {
            0 => {
                let want = masks.iter().find(|&&b| b != 3).map_or(1, |&b| b);
                let i = masks.iter().position(|&b| b & want == 0).unwrap();
                let x = decode(k, n, codes[i]);
                let (lhs, rhs) = self.sides(&x, n, m);
                return Err(self.failure(n, format!("{x:?}: ∂F = {lhs}, F∂ = {rhs}")));
            }
            2 => -1,
            _ => 1,
        };
        self.verified.lock().unwrap().insert(n, sign);
        Ok(sign)
    }

    fn failure(&self, degree: usize, witness: String) -> Error {
        Error::NotAChainMap {
            name: self.name.clone(),
            degree,
            witness,
        }
    }

    /// `(∂F x, F∂ x)` for a source tuple `x` of degree `n`, image degree `m`.
    fn sides(&self, x: &[usize], n: usize, m: usize) -> (Chain, Chain) {
        let zero = |d: usize| Chain::zero(self.target.size(), d, self.target_theory);
        if m == 0 {
            return (zero(0), zero(0));
        }
        let lhs = if m == 1 {
            zero(0)
        } else {
            boundary(&self.target, &self.image(x, m)).expect("theory checked at construction")
        };
        let rhs = if n <= 1 {
            zero(m - 1)
        } else {
            let dx = boundary(&self.source, &Chain::from_tuple(self.source.size(), self.source_theory, x))
                .expect("theory checked at construction");
            self.apply_unchecked(&dx, m - 1)
        };
        (lhs, rhs)
    }
}

/// The cycle `u_j = Σ_i (ij, ij + j)` of a cyclic Fibonacci sequence
/// `x_i = ij`, which must satisfy `x_{i+1} = x_{i-1} * x_i` (indices mod k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibonacciCycle {
    pub k: usize,
    pub j: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl FibonacciCycle {
    pub fn new(rack: &FiniteRack, j: usize) -> Result<Self> {
        let k = rack.size();
        if j == 0 || j >= k {
            return Err(Error::Precondition(format!("hs:j needs 0 < j < {k}, got {j}")));
        }
        let x = |i: usize| (i % k) * j % k;
        for i in 0..k {
            if rack.op(x(i + k - 1), x(i)) != x(i + 1) {
                return Err(Error::Precondition(format!(
                    "x_i = {j}i is not a cyclic Fibonacci sequence in {} at i = {i}",
                    rack.name()
                )));
            }
        }
        let pairs = (0..k).map(|i| (x(i), x(i + 1))).collect();
        Ok(FibonacciCycle { k, j, pairs })
    }

    /// `u_j ∈ C_2`.
    pub fn chain(&self, theory: Theory) -> Chain {
        let mut c = Chain::zero(self.k, 2, theory);
        for &(u, v) in &self.pairs {
            c.add_term(&[u, v], &Int::ONE);
        }
        c
    }

    /// `(0, u_j) ∈ C_3`.
    pub fn cone_chain(&self, theory: Theory) -> Chain {
        let mut c = Chain::zero(self.k, 3, theory);
        for &(u, v) in &self.pairs {
            c.add_term(&[0, u, v], &Int::ONE);
        }
        c
    }
}

/// The map `H_n(source) → H_{n+shift}(target)` on generators, verifying the
/// chain-map identity in degrees `n` and `n + 1` first.
pub fn induced_map<S, T>(f: &ChainMapSpec, n: usize, source: &HomologyEngine<S>, target: &HomologyEngine<T>) -> Result<GroupHom>
where
    S: ChainBasis + ?Sized,
    T: ChainBasis + ?Sized,
{
    let (sc, tc) = (source.complex(), target.complex());
    if sc.rack().digest() != f.source.digest() || sc.theory() != f.source_theory {
        return Err(Error::Precondition(format!("source complex does not match {}", f.name)));
    }
    if tc.rack().digest() != f.target.digest() || tc.theory() != f.target_theory {
        return Err(Error::Precondition(format!("target complex does not match {}", f.name)));
    }
    let m = f.target_degree(n).ok_or(Error::InvalidDegree(n))?;
    f.verify(n)?;
    f.verify(n + 1)?;
    let hs = source.group(n);
    let ht = target.group(m);
    let gens = source.generator_chains(n);
    let mut matrix = DenseMatrix::zeros(ht.generators().len(), gens.len());
    for (j, g) in gens.iter().enumerate() {
        let image = f.apply(g)?;
        for (i, c) in target.class_coordinates(&image)?.into_iter().enumerate() {
            matrix.set(i, j, c);
        }
    }
    GroupHom::new(hs.orders().to_vec(), ht.orders().to_vec(), matrix)
}

/// Check `∂H + H∂ = ε (F - G)` on every basis tuple of degree `n` for a
/// single sign `ε`, returned on success. `H` has shift one more than `F`
/// and `G`.
pub fn homotopy_sign(h: &ChainMapSpec, f: &ChainMapSpec, g: &ChainMapSpec, n: usize) -> Result<i64> {
    if f.shift != g.shift || h.shift != f.shift + 1 {
        return Err(Error::Precondition("homotopy degrees do not line up".into()));
    }
    let m = f.target_degree(n).ok_or(Error::InvalidDegree(n))?;
    let k = h.source.size();
    let codes = basis(k, n, h.source_theory);
    let sides = |x: &[usize]| -> (Chain, Chain) {
        let (dh, _) = h.sides(x, n, m + 1);
        let hd = if n <= 1 {
            Chain::zero(h.target.size(), m, h.target_theory)
        } else {
            let dx = boundary(&h.source, &Chain::from_tuple(k, h.source_theory, x)).expect("valid theory");
            h.apply_unchecked(&dx, m)
        };
        let lhs = dh + hd;
        let rhs = f.image(x, m) - g.image(x, m);
        (lhs, rhs)
    };
    let masks: Vec<u8> = codes
        .par_iter()
        .map(|&code| {
            let (lhs, rhs) = sides(&decode(k, n, code));
            (lhs == rhs) as u8 | ((lhs == -&rhs) as u8) << 1
        })
        .collect();
    match masks.iter().fold(3u8, |acc, &b| acc & b) {
        0 => {
            let i = masks.iter().position(|&b| b == 0).unwrap_or_else(|| {
                let want = masks.iter().find(|&&b| b != 3).copied().unwrap_or(1);
                masks.iter().position(|&b| b & want == 0).unwrap()
            });
            let x = decode(k, n, codes[i]);
            let (lhs, rhs) = sides(&x);
            Err(Error::NotAChainMap {
                name: format!("homotopy {} between {} and {}", h.name, f.name, g.name),
                degree: n,
                witness: format!("{x:?}: ∂H + H∂ = {lhs}, F - G = {rhs}"),
            })
        }
        2 => Ok(-1),
        _ => Ok(1),
    }
}

/// `(-1)^{n+1} h_a`, the homotopy between the identity and `*_a`.
pub fn star_homotopy(rack: &Arc<FiniteRack>, theory: Theory, a: usize) -> Result<ChainMapSpec> {
    if a >= rack.size() {
        return Err(Error::Precondition(format!("element {a} outside {}", rack.name())));
    }
    ChainMapSpec::new(
        format!("(-1)^(n+1) h:{a}"),
        (rack.clone(), theory),
        (rack.clone(), theory),
        1,
        move |x, emit| {
            let mut y = x.to_vec();
            y.push(a);
            emit(sign_of(x.len() + 1), &y);
        },
    )
}

/// `h̄'_a h'_a (x) - 2(x + x*a)` on every basis tuple of degree `n`; returns
/// the first tuple where it is nonzero.
pub fn hbar_hprime_defect(rack: &Arc<FiniteRack>, theory: Theory, a: usize, n: usize) -> Result<Option<Vec<usize>>> {
    let hp = ChainMapSpec::named(&MapName::HPrime(a), rack, theory)?;
    let hb = ChainMapSpec::named(&MapName::HBar(a), rack, theory)?;
    let both = ChainMapSpec::compose(&hb, &hp)?;
    let k = rack.size();
    let two = Int::from(2);
    Ok(basis(k, n, theory).into_par_iter().find_map_first(|code| {
        let x = decode(k, n, code);
        let lhs = both.image(&x, n);
        let mut rhs = Chain::zero(k, n, theory);
        rhs.add_term(&x, &two);
        let xa: Vec<usize> = x.iter().map(|&v| rack.op(v, a)).collect();
        rhs.add_term(&xa, &two);
        (lhs != rhs).then_some(x)
    }))
}

/// Outcome of searching for a chain homotopy by an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopySearch {
    /// Largest degree `N` of the truncated system.
    pub degree: usize,
    pub unknowns: usize,
    pub equations: usize,
    /// Whether `H_0, …, H_N` exist with `∂H_n + H_{n-1}∂ = F - G` on
    /// `C_n` for all `n ≤ N`.
    pub solvable: bool,
}

/// Solve for maps `H_n : C_n → C_{n+1}`, `0 ≤ n ≤ N`, with
/// `∂_{n+1} H_n + H_{n-1} ∂_n = F_n - G_n` on `C_n` for `n ≤ N`, over the
/// integers. A negative answer rules out a chain homotopy; a positive one
/// only shows the truncation is solvable.
pub fn search_homotopy(f: &ChainMapSpec, g: &ChainMapSpec, top: usize) -> Result<HomotopySearch> {
    use crate::complex::{ChainComplex, RackComplex};
    use crate::matrix::SparseIntMatrix;
    use crate::snf::IntReduction;

    if f.shift != 0 || g.shift != 0 || f.source.digest() != f.target.digest() {
        return Err(Error::Precondition("homotopy search needs two self-maps of degree 0".into()));
    }
    let complex = RackComplex::new(f.source.clone(), f.source_theory)?;
    let dims: Vec<usize> = (0..=top + 1).map(|n| complex.dim(n)).collect();
    let d: Vec<SparseIntMatrix> = (0..=top + 1).map(|n| complex.boundary_matrix(n)).collect();
    let d_rows: Vec<Vec<Vec<(u32, Int)>>> = d.iter().map(|m| m.row_lists()).collect();

    // unknown (n, r, c): entry of H_n from basis c of C_n to basis r of C_{n+1}
    let mut unknown_offset = vec![0usize];
    for n in 0..=top {
        let last = *unknown_offset.last().unwrap();
        unknown_offset.push(last + dims[n + 1] * dims[n]);
    }
    let mut equation_offset = vec![0usize];
    for n in 0..=top {
        let last = *equation_offset.last().unwrap();
        equation_offset.push(last + dims[n] * dims[n]);
    }
    let eq = |n: usize, r: usize, c: usize| equation_offset[n] + r * dims[n] + c;

    let mut triplets = Vec::new();
    for n in 0..=top {
        for r in 0..dims[n + 1] {
            for c in 0..dims[n] {
                let col = unknown_offset[n] + r * dims[n] + c;
                // ∂_{n+1} H_n: equation (n, s, c) gains ∂_{n+1}[s, r]
                if n >= 1 {
                    for (s, v) in d[n + 1].column(r) {
                        triplets.push((eq(n, s, c), col, v.clone()));
                    }
                }
                // H_n ∂_{n+1}: equation (n+1, r, b) gains ∂_{n+1}[c, b]
                if n < top {
                    for (b, v) in &d_rows[n + 1][c] {
                        triplets.push((eq(n + 1, r, *b as usize), col, v.clone()));
                    }
                }
            }
        }
    }
    let rows = *equation_offset.last().unwrap();
    let cols = *unknown_offset.last().unwrap();
    let system = SparseIntMatrix::from_triplets(rows, cols, triplets);

    let mut rhs = vec![Int::ZERO; rows];
    for n in 0..=top {
        for c in 0..dims[n] {
            let x = complex.basis_chain(n, c);
            let diff = f.apply(&x)? - g.apply(&x)?;
            for (t, v) in diff.iter() {
                let r = complex.index_of(n, &t).expect("basis tuple");
                rhs[eq(n, r, c)] = v.clone();
            }
        }
    }
    let red = IntReduction::new(&system);
    red.certify(&system).map_err(Error::Precondition)?;
    Ok(HomotopySearch {
        degree: top,
        unknowns: cols,
        equations: rows,
        solvable: red.in_image(&rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::RackComplex;

    fn r(k: usize) -> Arc<FiniteRack> {
        Arc::new(FiniteRack::dihedral(k).unwrap())
    }

    fn map(name: &str, k: usize, theory: Theory) -> ChainMapSpec {
        ChainMapSpec::named(&name.parse().unwrap(), &r(k), theory).unwrap()
    }

    fn tuple(k: usize, t: &[usize]) -> Chain {
        Chain::from_tuple(k, Theory::Rack, t)
    }

    fn terms(k: usize, n: usize, ts: &[(&[usize], i64)]) -> Chain {
        Chain::from_terms(k, n, Theory::Rack, ts.iter().copied())
    }

    #[test]
    fn names_round_trip() {
        for s in [
            "star:1", "hprime:0", "hbar:2", "sym", "hs:1", "f:2", "D:3", "g1:1", "g2:2", "pi", "psi", "facef",
            "transferg", "hs0", "id", "h:0", "compose(psi,pi)", "compose(hbar:0,compose(hprime:0,star:1))",
        ] {
            let m: MapName = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("star".parse::<MapName>().is_err());
        assert!("sym:1".parse::<MapName>().is_err());
        assert!("compose(pi)".parse::<MapName>().is_err());
        assert!("bogus".parse::<MapName>().is_err());
    }

    #[test]
    fn documented_values() {
        assert_eq!(map("star:0", 3, Theory::Rack).apply(&tuple(3, &[0, 1])).unwrap(), tuple(3, &[0, 2]));
        assert_eq!(
            map("hprime:0", 3, Theory::Rack).apply(&tuple(3, &[1])).unwrap(),
            terms(3, 2, &[(&[1, 0], 1), (&[2, 0], 1)])
        );
        assert_eq!(map("hbar:0", 3, Theory::Rack).apply(&tuple(3, &[1, 2])).unwrap().coefficient(&[1]), Int::ONE);
        assert_eq!(
            map("sym", 3, Theory::Rack).apply(&tuple(3, &[0, 1])).unwrap(),
            terms(3, 2, &[(&[0, 2], 1), (&[2, 1], 1), (&[1, 0], 1)])
        );
        assert_eq!(
            map("f:1", 3, Theory::Rack).apply(&tuple(3, &[0, 1])).unwrap(),
            terms(3, 2, &[(&[0, 1], 1), (&[1, 1], 1), (&[2, 1], 1)])
        );
        assert_eq!(
            map("g1:1", 5, Theory::Rack).apply(&tuple(5, &[2, 3])).unwrap(),
            terms(5, 2, &[(&[4, 3], 1), (&[2, 3], 1), (&[0, 3], 1), (&[3, 3], 1), (&[1, 3], 1)])
        );
        assert_eq!(map("facef", 3, Theory::Rack).apply(&tuple(3, &[0, 1, 2])).unwrap(), terms(3, 2, &[(&[1, 2], -1)]));
        assert_eq!(
            map("transferg", 3, Theory::Rack).apply(&tuple(3, &[1, 2])).unwrap(),
            terms(3, 3, &[(&[0, 1, 2], -1), (&[1, 1, 2], -1), (&[2, 1, 2], -1)])
        );
        let pi = map("pi", 3, Theory::Rack);
        assert_eq!(pi.apply(&tuple(3, &[0, 1, 2])).unwrap(), tuple(1, &[0, 0, 0]));
        let psi = map("psi", 3, Theory::Rack);
        assert_eq!(
            psi.apply(&tuple(1, &[0, 0])).unwrap(),
            terms(3, 2, &[(&[0, 0], 1), (&[1, 1], 1), (&[2, 2], 1)])
        );
        assert!(map("hs0", 3, Theory::Rack).apply(&Chain::zero(3, 2, Theory::Rack)).unwrap().is_zero());
    }

    #[test]
    fn f_edge_cases() {
        let x = tuple(3, &[0, 1, 2]);
        assert_eq!(map("f:0", 3, Theory::Rack).apply(&x).unwrap(), x);
        assert_eq!(
            map("f:5", 3, Theory::Rack).apply(&x).unwrap(),
            map("f:3", 3, Theory::Rack).apply(&x).unwrap()
        );
    }

    #[test]
    fn fibonacci_cycle() {
        let c = FibonacciCycle::new(&r(3), 1).unwrap();
        assert_eq!(c.chain(Theory::Rack), terms(3, 2, &[(&[0, 1], 1), (&[1, 2], 1), (&[2, 0], 1)]));
        for k in [3, 5, 7, 9] {
            for j in 1..k {
                let c = FibonacciCycle::new(&r(k), j).unwrap();
                assert_eq!(c.pairs.len(), k);
                assert!(c.pairs.iter().all(|(u, v)| u != v) || k % j == 0);
            }
        }
        assert!(FibonacciCycle::new(&r(3), 0).is_err());
        assert!(FibonacciCycle::new(&r(3), 3).is_err());
    }

    #[test]
    fn chain_maps_verify() {
        for k in [3, 5] {
            for name in ["star:1", "hprime:0", "hbar:0", "sym", "hs:1", "f:2", "facef", "transferg", "hs0"] {
                let m = map(name, k, Theory::Rack);
                for n in 1..=3 {
                    m.verify(n).unwrap_or_else(|e| panic!("R_{k} {name}: {e}"));
                }
            }
        }
        for n in 1..=3 {
            map("g1:1", 5, Theory::Rack).verify(n).unwrap();
            map("g2:2", 5, Theory::Rack).verify(n).unwrap();
        }
    }

    #[test]
    fn non_chain_maps_rejected() {
        let h = map("h:0", 3, Theory::Rack);
        assert!(matches!(h.verify(2), Err(Error::NotAChainMap { .. })));
        assert!(map("g1:1", 3, Theory::Rack).verify(2).is_err() || map("g1:2", 3, Theory::Rack).verify(3).is_err());
    }

    #[test]
    fn induced_maps_on_small_groups() {
        let rack = r(3);
        let eng = HomologyEngine::new(Arc::new(RackComplex::new(rack.clone(), Theory::Rack).unwrap()));
        for n in 1..=3 {
            let id = induced_map(&map("star:1", 3, Theory::Rack), n, &eng, &eng).unwrap();
            assert!(id.is_scalar(&Int::ONE));
            let s = induced_map(&map("sym", 3, Theory::Rack), n, &eng, &eng).unwrap();
            assert!(s.is_scalar(&Int::from(3)));
        }
        let h = induced_map(&map("hprime:0", 3, Theory::Rack), 3, &eng, &eng).unwrap();
        assert!(h.is_injective());
    }

    #[test]
    fn homotopies() {
        let rack = r(3);
        for n in 1..=3 {
            let h = star_homotopy(&rack, Theory::Rack, 1).unwrap();
            let id = map("id", 3, Theory::Rack);
            let st = map("star:1", 3, Theory::Rack);
            assert_eq!(homotopy_sign(&h, &id, &st, n).unwrap(), 1);
            for j in 2..=4 {
                let d = map(&format!("D:{j}"), 3, Theory::Rack);
                let f = map(&format!("f:{j}"), 3, Theory::Rack);
                let g = map(&format!("f:{}", j - 1), 3, Theory::Rack);
                let sign = homotopy_sign(&d, &f, &g, n).unwrap();
                if (2..=n).contains(&j) {
                    assert_eq!(sign, if j % 2 == 0 { 1 } else { -1 }, "n={n} j={j}");
                }
            }
            assert_eq!(hbar_hprime_defect(&rack, Theory::Rack, 0, n).unwrap(), None);
        }
    }
}
