//! Chain-level certificate that `H_4^Q(R_p)` has an element of order `p`.

use std::sync::Arc;

use serde::Serialize;

use crate::chain::{Chain, Theory};
use crate::complex::{alpha_split, boundary, RackComplex};
use crate::error::{Error, Result};
use crate::homology::HomologyEngine;
use crate::int::Int;
use crate::ops::{ChainMapSpec, MapName};
use crate::rack::FiniteRack;

/// The chains of the argument, over `R_p` (indices mod `p`).
struct Chains {
    c: [Chain; 4],
    /// `∂b1 = c1 - c3`, `∂b2 = c2 - c4`.
    b: [Chain; 2],
    /// `h'_0 α(Σ (0,i,i+1))`.
    psi: Chain,
    /// `α(q4)`.
    phi: Chain,
    /// The expansion `Σ(0,i,i+1,0) - Σ(0,i,i,0) - Σ(0,i,i+1,i+1) + Σ(0,i,i,i+1)`
    /// plus its image under `*_0`, as displayed for `α(q4)`.
    phi_displayed: Chain,
    /// `e + e * 0` with `e = Σ(0,0,i,i+1) - Σ(0,0,i+1,i+1)`, a degenerate
    /// cycle.
    correction: Chain,
    /// `Σ (0,i,i+1,0) + (Σ (0,i,i+1,0)) * 0` in the quandle complex.
    q4: Chain,
}

fn sum(p: usize, theory: Theory, deg: usize, terms: &[(i64, fn(usize, usize) -> Vec<usize>)]) -> Chain {
    let mut out = Chain::zero(p, deg, theory);
    for i in 0..p {
        for (s, t) in terms {
            let x: Vec<usize> = t(i, p).into_iter().map(|v| v % p).collect();
            out.add_term(&x, &Int::from(*s));
        }
    }
    out
}

fn build(rack: &Arc<FiniteRack>) -> Result<Chains> {
    let p = rack.size();
    let r = Theory::Rack;
    let c1 = sum(p, r, 4, &[(1, |i, _| vec![0, i, i, i + 1]), (-1, |i, _| vec![0, i, i + 1, i + 1])]);
    let c2 = sum(p, r, 4, &[(1, |i, _| vec![2, i + 1, i + 1, i]), (-1, |i, _| vec![2, i + 1, i, i])]);
    let c3 = sum(p, r, 4, &[(1, |i, _| vec![2 * i, i, i, i + 1]), (-1, |i, _| vec![2 * i, i + 1, i, i])]);
    let c4 = sum(p, r, 4, &[(1, |i, _| vec![2 * i, i + 1, i + 1, i]), (-1, |i, _| vec![2 * i, i, i + 1, i + 1])]);
    let b1 = sum(p, r, 5, &[(1, |i, _| vec![0, i, i, i, i + 1]), (1, |i, _| vec![0, i, i + 1, i + 1, i + 1])]);
    let b2 = sum(p, r, 5, &[(1, |i, _| vec![2, i + 1, i + 1, i + 1, i]), (1, |i, _| vec![2, i + 1, i, i, i])]);

    let hprime0 = ChainMapSpec::named(&MapName::HPrime(0), rack, Theory::Rack)?;
    let star0 = ChainMapSpec::named(&MapName::Star(0), rack, Theory::Quandle)?;
    let q3 = sum(p, Theory::Quandle, 3, &[(1, |i, _| vec![0, i, i + 1])]);
    let psi = hprime0.apply(&alpha_split(&q3)?)?;
    let base = sum(p, Theory::Quandle, 4, &[(1, |i, _| vec![0, i, i + 1, 0])]);
    let q4 = &base + &star0.apply(&base)?;
    let phi = alpha_split(&q4)?;
    let star0 = ChainMapSpec::named(&MapName::Star(0), rack, Theory::Rack)?;
    let shown = sum(
        p,
        r,
        4,
        &[
            (1, |i, _| vec![0, i, i + 1, 0]),
            (-1, |i, _| vec![0, i, i, 0]),
            (-1, |i, _| vec![0, i, i + 1, i + 1]),
            (1, |i, _| vec![0, i, i, i + 1]),
        ],
    );
    let phi_displayed = &shown + &star0.apply(&shown)?;
    let e = sum(p, r, 4, &[(1, |i, _| vec![0, 0, i, i + 1]), (-1, |i, _| vec![0, 0, i + 1, i + 1])]);
    let correction = &e + &star0.apply(&e)?;
    Ok(Chains { c: [c1, c2, c3, c4], b: [b1, b2], psi, phi, phi_displayed, correction, q4 })
}

/// Each step of the argument, checked exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourCycleCertificate {
    pub p: usize,
    /// The four chains `c1 … c4` are rack cycles.
    pub cycles: bool,
    /// `∂(Σ(0,i,i,i,i+1) + Σ(0,i,i+1,i+1,i+1)) = c1 - c3`.
    pub first_boundary: bool,
    /// `∂(Σ(2,i+1,i+1,i+1,i) + Σ(2,i+1,i,i,i)) = c2 - c4`.
    pub second_boundary: bool,
    /// `c2 * x = c1` for the `x` with `2 * x = 0`.
    pub translate: bool,
    /// `Σ_i h'_{i+1}h'_ih'_i(0) - h'_{i+1}h'_{i+1}h'_i(0) = 2(c1 + c2 + c3 + c4)`.
    pub expansion: bool,
    /// `Φ_shown - Ψ = c1 + c1 * 0` for the displayed expansion `Φ_shown`.
    pub displayed_difference: bool,
    /// `c1 … c4` have equal classes in `H_4^R`.
    pub classes_equal: bool,
    /// `Φ_shown - Ψ` is a boundary.
    pub displayed_difference_trivial: bool,
    /// `α(q4) = Φ_shown - (e + e * 0)` exactly.
    pub correction_exact: bool,
    /// `e + e * 0` is a cycle with nonzero class in `H_4^R`.
    pub correction_nontrivial: bool,
    /// `Φ - Ψ` is a boundary, with `Φ = α(q4)`.
    pub difference_trivial: bool,
    /// `Ψ` is not a boundary.
    pub psi_nontrivial: bool,
    /// Order of the class of `q4` in `H_4^Q` (`0` when infinite or not a
    /// cycle).
    pub quandle_order: Int,
}

impl FourCycleCertificate {
    pub fn compute(
        rack: &Arc<FiniteRack>,
        rack_engine: &HomologyEngine<RackComplex>,
        quandle_engine: &HomologyEngine<RackComplex>,
    ) -> Result<Self> {
        let p = rack.size();
        if !rack.is_kei() || p % 2 == 0 || p < 3 || rack.left_solutions(2 % p, 0).len() != 1 {
            return Err(Error::Precondition("the certificate is stated for odd dihedral quandles".into()));
        }
        for (e, t) in [(rack_engine, Theory::Rack), (quandle_engine, Theory::Quandle)] {
            use crate::complex::ChainBasis;
            if e.complex().rack().digest() != rack.digest() || e.complex().theory() != t {
                return Err(Error::Precondition(format!("expected the {t} engine of {}", rack.name())));
            }
        }
        let ch = build(rack)?;
        let [c1, c2, c3, c4] = &ch.c;
        let d = |c: &Chain| boundary(rack, c);

        let mut cycles = true;
        for c in &ch.c {
            cycles &= d(c)?.is_zero();
        }
        let first_boundary = d(&ch.b[0])? == c1 - c3;
        let second_boundary = d(&ch.b[1])? == c2 - c4;

        let x = rack.left_solutions(2 % p, 0)[0];
        let star_x = ChainMapSpec::named(&MapName::Star(x), rack, Theory::Rack)?;
        let star0 = ChainMapSpec::named(&MapName::Star(0), rack, Theory::Rack)?;
        let translate = star_x.apply(c2)? == *c1;

        let mut lhs = Chain::zero(p, 4, Theory::Rack);
        let point = Chain::from_tuple(p, Theory::Rack, &[0]);
        for i in 0..p {
            let h = |a: usize| ChainMapSpec::named(&MapName::HPrime(a % p), rack, Theory::Rack);
            let (hi, hj) = (h(i)?, h(i + 1)?);
            let first = hj.apply(&hi.apply(&hi.apply(&point)?)?)?;
            let second = hj.apply(&hj.apply(&hi.apply(&point)?)?)?;
            lhs += &first;
            lhs -= &second;
        }
        let total = &(&(c1 + c2) + c3) + c4;
        let expansion = lhs == total.scale(&Int::from(2));

        let shown_diff = &ch.phi_displayed - &ch.psi;
        let displayed_difference = shown_diff == c1 + &star0.apply(c1)?;
        let correction_exact = ch.phi == &ch.phi_displayed - &ch.correction;
        let diff = &ch.phi - &ch.psi;

        let first = rack_engine.class_coordinates(c1)?;
        let mut classes_equal = true;
        for c in [c2, c3, c4] {
            classes_equal &= rack_engine.class_coordinates(c)? == first;
        }
        let displayed_difference_trivial = d(&shown_diff)?.is_zero() && rack_engine.is_boundary(&shown_diff)?;
        let correction_nontrivial = d(&ch.correction)?.is_zero() && !rack_engine.is_boundary(&ch.correction)?;
        let difference_trivial = d(&diff)?.is_zero() && rack_engine.is_boundary(&diff)?;
        let psi_nontrivial = d(&ch.psi)?.is_zero() && !rack_engine.is_boundary(&ch.psi)?;

        let quandle_order = if d(&ch.q4)?.is_zero() {
            let coords = quandle_engine.class_coordinates(&ch.q4)?;
            class_order(quandle_engine.group(4).orders(), &coords)
        } else {
            Int::from(0)
        };
        Ok(FourCycleCertificate {
            p,
            cycles,
            first_boundary,
            second_boundary,
            translate,
            expansion,
            displayed_difference,
            classes_equal,
            displayed_difference_trivial,
            correction_exact,
            correction_nontrivial,
            difference_trivial,
            psi_nontrivial,
            quandle_order,
        })
    }

    /// Names of the steps that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let steps = [
            ("cycles", self.cycles),
            ("first boundary", self.first_boundary),
            ("second boundary", self.second_boundary),
            ("translate", self.translate),
            ("expansion", self.expansion),
            ("displayed difference", self.displayed_difference),
            ("classes equal", self.classes_equal),
            ("displayed difference trivial", self.displayed_difference_trivial),
            ("difference trivial", self.difference_trivial),
            ("psi nontrivial", self.psi_nontrivial),
            ("quandle class of order p", self.quandle_order == Int::from(self.p)),
        ];
        steps.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect()
    }

    pub fn holds(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Order of the element with the given coordinates; `0` if infinite.
fn class_order(orders: &[Int], coords: &[Int]) -> Int {
    let mut lcm = Int::from(1);
    for (d, c) in orders.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        if d.is_zero() {
            return Int::from(0);
        }
        let o = d.div_exact(&d.gcd(c));
        lcm = (&lcm * &o).div_exact(&lcm.gcd(&o));
    }
    lcm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_for_r3() {
        let rack = Arc::new(FiniteRack::dihedral(3).unwrap());
        let re = HomologyEngine::new(Arc::new(RackComplex::new(rack.clone(), Theory::Rack).unwrap()));
        let qe = HomologyEngine::new(Arc::new(RackComplex::new(rack.clone(), Theory::Quandle).unwrap()));
        let cert = FourCycleCertificate::compute(&rack, &re, &qe).unwrap();
        assert_eq!(cert.failures(), vec!["difference trivial"]);
        assert!(cert.correction_exact && cert.correction_nontrivial);
    }

    #[test]
    fn orders_of_classes() {
        let orders = [Int::from(3), Int::from(9), Int::from(0)];
        assert_eq!(class_order(&orders, &[Int::from(1), Int::from(3), Int::from(0)]), Int::from(3));
        assert_eq!(class_order(&orders, &[Int::from(0), Int::from(2), Int::from(0)]), Int::from(9));
        assert_eq!(class_order(&orders, &[Int::from(0), Int::from(0), Int::from(1)]), Int::from(0));
        assert_eq!(class_order(&orders, &[Int::from(0), Int::from(0), Int::from(0)]), Int::from(1));
    }
}
