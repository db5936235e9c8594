//! Quivers with potential, cyclic derivatives and (higher) Ginzburg dg quivers.
//!
//! Cycles are stored up to signed cyclic equivalence `pq ~ (-1)^{|p||q|} qp`.
//! For degree-0 arrows the signs are all trivial, so the classical and the
//! graded case share one implementation.

mod ginzburg;
mod lemma;
mod qp_mutation;

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{scalar, ArrowName, Element, Path, Quiver, Scalar};
use crate::error::{Error, Result};

pub use ginzburg::{classical_to_higher, ginzburg3, higher_ginzburg};
pub use lemma::{verify_derivative_lemma, LemmaCheck, LemmaReport};
pub use qp_mutation::{dec_cyc, higher_qp_mutate, higher_qp_mutate_detailed, qp_mutate, HigherMutation, MutatedArrow};

/// Least rotation (by arrow names) of a closed path, with the Koszul sign
/// picked up by rotating. The sign is 0 when the cycle equals its own
/// negative under rotation, i.e. vanishes in the signed cyclic quotient.
pub fn canonical_cycle(quiver: &Quiver, cycle: &Path) -> Result<(Path, i8)> {
    if cycle.source() != cycle.target() {
        return Err(Error::InvalidPotential(format!("{cycle} is not closed")));
    }
    let names = cycle.arrows();
    let k = names.len();
    if k == 0 {
        return Ok((cycle.clone(), 1));
    }
    let degrees: Vec<i64> = names.iter().map(|n| quiver.degree(n)).collect();
    let mut best: Option<(Vec<ArrowName>, i8)> = None;
    let mut vanishes = false;
    for r in 0..k {
        // move the rightmost r factors to the left
        let left: i64 = degrees[..k - r].iter().sum();
        let right: i64 = degrees[k - r..].iter().sum();
        let s: i8 = if (left * right) % 2 == 0 { 1 } else { -1 };
        let rotated: Vec<ArrowName> = names[k - r..].iter().chain(&names[..k - r]).cloned().collect();
        match &best {
            Some((b, bs)) if *b == rotated => {
                if *bs != s {
                    vanishes = true;
                }
            }
            Some((b, _)) if *b < rotated => {}
            _ => {
                best = Some((rotated, s));
                vanishes = false;
            }
        }
    }
    let (names, s) = best.expect("nonempty cycle");
    let path = Path::from_names(quiver, names)?;
    Ok((path, if vanishes { 0 } else { s }))
}

/// `∂_φ c = Σ_{c = p φ q} (-1)^{|pφ||q|} q p` for a single cycle.
fn cycle_derivative(quiver: &Quiver, cycle: &Path, phi: &ArrowName) -> Element {
    let names = cycle.arrows();
    let mut out = Element::zero();
    for (m, n) in names.iter().enumerate() {
        if n != phi {
            continue;
        }
        let p_phi: i64 = names[..=m].iter().map(|a| quiver.degree(a)).sum();
        let q: i64 = names[m + 1..].iter().map(|a| quiver.degree(a)).sum();
        let word: Vec<ArrowName> = names[m + 1..].iter().chain(&names[..m]).cloned().collect();
        let path = if word.is_empty() {
            Path::stationary(quiver.get(phi).expect("arrow of a cycle").source)
        } else {
            Path::from_names(quiver, word).expect("rotation of a cycle")
        };
        out.add_term(path, crate::algebra::sign(p_phi * q));
    }
    out
}

/// Linear combination of cycles in canonical form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Potential {
    terms: Element,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    /// Adds `coeff * cycle`, rotated into canonical form.
    pub fn add_cycle(&mut self, quiver: &Quiver, cycle: &Path, coeff: Scalar) -> Result<()> {
        let (canonical, s) = canonical_cycle(quiver, cycle)?;
        if s != 0 {
            self.terms.add_term(canonical, coeff * scalar(i64::from(s)));
        }
        Ok(())
    }

    pub fn from_element(quiver: &Quiver, x: &Element) -> Result<Self> {
        let mut w = Potential::zero();
        for (p, c) in x.terms() {
            w.add_cycle(quiver, p, c.clone())?;
        }
        Ok(w)
    }

    pub fn as_element(&self) -> &Element {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn cycles(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.terms()
    }

    pub fn cyclic_derivative(&self, quiver: &Quiver, phi: &ArrowName) -> Element {
        let mut out = Element::zero();
        for (c, k) in self.terms.terms() {
            out += cycle_derivative(quiver, c, phi).scale(k);
        }
        out
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        self.terms.render(quiver)
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential({:?})", self.terms)
    }
}

/// `φ ↦ ±φ^op`, pairing every arrow with an arrow in the opposite direction
/// of complementary degree `d - 2 - |φ|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpPairing {
    dimension: i64,
    map: BTreeMap<ArrowName, (ArrowName, i8)>,
}

impl OpPairing {
    pub fn new(quiver: &Quiver, dimension: i64, map: BTreeMap<ArrowName, (ArrowName, i8)>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidPairing(msg));
        if dimension < 2 {
            return bad(format!("dimension {dimension} is below 2"));
        }
        for a in quiver.arrows() {
            let Some((b, s)) = map.get(&a.name) else {
                return bad(format!("`{}` has no opposite", a.name));
            };
            if *s != 1 && *s != -1 {
                return bad(format!("sign of `{}`^op is not ±1", a.name));
            }
            let Some(op) = quiver.arrow(b) else {
                return bad(format!("opposite `{b}` of `{}` is not an arrow", a.name));
            };
            if op.source != a.target || op.target != a.source {
                return bad(format!("`{b}` does not run opposite to `{}`", a.name));
            }
            if a.degree + op.degree != dimension - 2 {
                return bad(format!(
                    "degrees of `{}` and `{b}` do not add up to {}",
                    a.name,
                    dimension - 2
                ));
            }
            let Some((back, t)) = map.get(b) else {
                return bad(format!("`{b}` has no opposite"));
            };
            let expected: i8 = if (a.degree * op.degree) % 2 == 0 { -1 } else { 1 };
            if back != &a.name || s * t != expected {
                return bad(format!(
                    "double opposite of `{}` is not {}`{}`",
                    a.name,
                    if expected < 0 { "-" } else { "" },
                    a.name
                ));
            }
        }
        if let Some(extra) = map.keys().find(|n| !quiver.contains(n)) {
            return bad(format!("`{extra}` is not an arrow"));
        }
        Ok(OpPairing { dimension, map })
    }

    pub fn dimension(&self) -> i64 {
        self.dimension
    }

    /// `φ^op = sign * arrow`.
    pub fn op(&self, name: &ArrowName) -> Option<(&ArrowName, i8)> {
        self.map.get(name).map(|(n, s)| (n, *s))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ArrowName, &ArrowName, i8)> {
        self.map.iter().map(|(a, (b, s))| (a, b, *s))
    }
}

/// A quiver with potential. Classical inputs carry no pairing and have only
/// degree-0 arrows; higher inputs contain all opposite arrows and a pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    quiver: Quiver,
    potential: Potential,
    pairing: Option<OpPairing>,
}

fn check_cycles(quiver: &Quiver, potential: &Potential, degree: i64) -> Result<()> {
    for (c, _) in potential.cycles() {
        let rebuilt = if c.is_stationary() {
            Ok(c.clone())
        } else {
            Path::from_names(quiver, c.arrows().iter().cloned())
        };
        if rebuilt.as_ref() != Ok(c) {
            return Err(Error::InvalidPotential(format!("{c} is not a path of the quiver")));
        }
        if c.degree(quiver) != degree {
            return Err(Error::InvalidPotential(format!(
                "{c} has degree {}, expected {degree}",
                c.degree(quiver)
            )));
        }
    }
    Ok(())
}

impl QuiverWithPotential {
    pub fn classical(quiver: Quiver, potential: Potential) -> Result<Self> {
        if let Some(a) = quiver.arrows().find(|a| a.degree != 0) {
            return Err(Error::DegreeMismatch {
                arrow: a.name.clone(),
                expected: 0,
                found: Some(a.degree),
            });
        }
        check_cycles(&quiver, &potential, 0)?;
        Ok(QuiverWithPotential {
            quiver,
            potential,
            pairing: None,
        })
    }

    pub fn higher(quiver: Quiver, potential: Potential, pairing: OpPairing) -> Result<Self> {
        let d = pairing.dimension();
        OpPairing::new(&quiver, d, pairing.map.clone())?;
        if let Some(a) = quiver.arrows().find(|a| a.degree > d - 2) {
            return Err(Error::DegreeMismatch {
                arrow: a.name.clone(),
                expected: d - 2,
                found: Some(a.degree),
            });
        }
        check_cycles(&quiver, &potential, d - 3)?;
        Ok(QuiverWithPotential {
            quiver,
            potential,
            pairing: Some(pairing),
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn pairing(&self) -> Option<&OpPairing> {
        self.pairing.as_ref()
    }

    pub fn is_classical(&self) -> bool {
        self.pairing.is_none()
    }

    /// Calabi-Yau dimension: 3 for classical inputs.
    pub fn dimension(&self) -> i64 {
        self.pairing.as_ref().map_or(3, OpPairing::dimension)
    }

    /// `∂_{φ^op} W`, with the sign of the pairing.
    pub(crate) fn derivative_at_op(&self, phi: &ArrowName) -> Result<Element> {
        let pairing = self
            .pairing
            .as_ref()
            .ok_or_else(|| Error::InvalidPairing("classical quiver has no pairing".into()))?;
        let (op, s) = pairing.op(phi).ok_or_else(|| Error::UnknownArrow(phi.clone()))?;
        Ok(self
            .potential
            .cyclic_derivative(&self.quiver, op)
            .scale(&scalar(i64::from(s))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Arrow;
    use crate::fixtures::poly;

    fn triangle() -> Quiver {
        Quiver::with_arrows(
            3,
            [
                Arrow::new("alpha", 1, 2, 0),
                Arrow::new("beta", 2, 3, 0),
                Arrow::new("gamma", 3, 1, 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn degree_zero_rotation_is_signless() {
        let q = triangle();
        let a = Path::from_names(&q, ["gamma", "beta", "alpha"]).unwrap();
        let b = Path::from_names(&q, ["beta", "alpha", "gamma"]).unwrap();
        assert_eq!(canonical_cycle(&q, &a).unwrap(), canonical_cycle(&q, &b).unwrap());
        assert_eq!(canonical_cycle(&q, &a).unwrap().1, 1);
    }

    #[test]
    fn graded_rotation_sign() {
        let q = Quiver::with_arrows(2, [Arrow::new("p", 1, 2, 1), Arrow::new("q", 2, 1, 1)]).unwrap();
        let pq = Path::from_names(&q, ["p", "q"]).unwrap();
        let qp = Path::from_names(&q, ["q", "p"]).unwrap();
        assert_eq!(canonical_cycle(&q, &pq).unwrap(), (pq.clone(), 1));
        assert_eq!(canonical_cycle(&q, &qp).unwrap(), (pq, -1));
    }

    #[test]
    fn odd_periodic_cycle_vanishes() {
        let q = Quiver::with_arrows(1, [Arrow::new("t", 1, 1, 1)]).unwrap();
        let tt = Path::from_names(&q, ["t", "t"]).unwrap();
        assert_eq!(canonical_cycle(&q, &tt).unwrap().1, 0);
        let stationary = Path::stationary(crate::algebra::VertexId(1));
        assert_eq!(canonical_cycle(&q, &stationary).unwrap(), (stationary, 1));
    }

    #[test]
    fn open_path_is_rejected() {
        let q = triangle();
        let p = Path::from_names(&q, ["beta", "alpha"]).unwrap();
        assert!(canonical_cycle(&q, &p).is_err());
    }

    #[test]
    fn derivative_of_triangle() {
        let q = triangle();
        let w = Potential::from_element(&q, &poly(&q, &[(1, &["gamma", "beta", "alpha"])])).unwrap();
        assert_eq!(
            w.cyclic_derivative(&q, &"beta".into()),
            poly(&q, &[(1, &["alpha", "gamma"])])
        );
        let mut bigger = q.clone();
        bigger.add_arrow(Arrow::new("omega", 1, 3, 0)).unwrap();
        assert!(w.cyclic_derivative(&bigger, &"omega".into()).is_zero());
    }

    #[test]
    fn derivative_counts_every_occurrence() {
        let q = Quiver::with_arrows(2, [Arrow::new("alpha", 1, 2, 0), Arrow::new("beta", 2, 1, 0)]).unwrap();
        let w = Potential::from_element(&q, &poly(&q, &[(1, &["beta", "alpha", "beta", "alpha"])])).unwrap();
        // brute force: each rotation of the word starting after an alpha
        assert_eq!(
            w.cyclic_derivative(&q, &"alpha".into()),
            poly(&q, &[(2, &["beta", "alpha", "beta"])])
        );
    }

    #[test]
    fn pairing_checks_double_op_law() {
        let q = Quiver::with_arrows(2, [Arrow::new("a", 1, 2, 0), Arrow::new("b", 2, 1, 1)]).unwrap();
        let good: BTreeMap<ArrowName, (ArrowName, i8)> =
            [("a".into(), ("b".into(), -1)), ("b".into(), ("a".into(), 1))]
                .into_iter()
                .collect();
        assert!(OpPairing::new(&q, 3, good).is_ok());
        let bad: BTreeMap<ArrowName, (ArrowName, i8)> = [("a".into(), ("b".into(), 1)), ("b".into(), ("a".into(), 1))]
            .into_iter()
            .collect();
        assert!(matches!(OpPairing::new(&q, 3, bad), Err(Error::InvalidPairing(_))));
    }
}
