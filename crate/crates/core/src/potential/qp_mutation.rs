use std::collections::{BTreeMap, BTreeSet};

use super::ginzburg::{higher_ginzburg, rebuild};
use super::{OpPairing, Potential, QuiverWithPotential};
use crate::algebra::{scalar, sign, Arrow, ArrowName, Element, Path, Quiver, VertexId};
use crate::error::{Error, Result};
use crate::mutation::{MutArrowName, MutationContext};

fn add_new_arrow(quiver: &mut Quiver, arrow: Arrow) -> Result<()> {
    match quiver.add_arrow(arrow) {
        Err(Error::DuplicateArrow(name)) => Err(Error::NameCollision(name)),
        other => other,
    }
}

/// Rotation of a cycle moving its `r` rightmost factors to the left, with Koszul sign.
fn rotate(quiver: &Quiver, cycle: &Path, r: usize) -> (Path, i64) {
    let names = cycle.arrows();
    let k = names.len();
    if r == 0 || k == 0 {
        return (cycle.clone(), 0);
    }
    let left: i64 = names[..k - r].iter().map(|n| quiver.degree(n)).sum();
    let right: i64 = names[k - r..].iter().map(|n| quiver.degree(n)).sum();
    let rotated: Vec<ArrowName> = names[k - r..].iter().chain(&names[..k - r]).cloned().collect();
    (
        Path::from_names(quiver, rotated).expect("rotation of a cycle"),
        left * right,
    )
}

/// Classical mutation of a quiver with potential at a vertex without loops.
pub fn qp_mutate(qp: &QuiverWithPotential, vertex: VertexId) -> Result<QuiverWithPotential> {
    if !qp.is_classical() {
        return Err(Error::InvalidPotential(
            "qp_mutate expects a classical quiver with potential".into(),
        ));
    }
    let q = qp.quiver();
    if !q.has_vertex(vertex) {
        return Err(Error::UnknownVertex(vertex));
    }
    if let Some(l) = q.arrows_from(vertex).find(|a| a.is_loop()) {
        return Err(Error::LoopAtVertex(vertex, l.name.clone()));
    }
    let incoming: Vec<Arrow> = q.arrows_into(vertex).cloned().collect();
    let outgoing: Vec<Arrow> = q.arrows_from(vertex).cloned().collect();

    let mut m = Quiver::new(q.vertex_count());
    for a in q.arrows() {
        if a.source != vertex && a.target != vertex {
            add_new_arrow(&mut m, a.clone())?;
        }
    }
    for a in incoming.iter().chain(&outgoing) {
        add_new_arrow(&mut m, Arrow::new(a.name.star(), a.target.0, a.source.0, 0))?;
    }
    for alpha in &incoming {
        for beta in &outgoing {
            add_new_arrow(
                &mut m,
                Arrow::new(
                    ArrowName::comp(&beta.name, &alpha.name),
                    alpha.source.0,
                    beta.target.0,
                    0,
                ),
            )?;
        }
    }

    let mut w = Potential::zero();
    for (cycle, k) in qp.potential().cycles() {
        let r = (0..cycle.len().max(1))
            .find(|&r| rotate(q, cycle, r).0.source() != vertex)
            .ok_or_else(|| Error::InvalidPotential(format!("{cycle} stays at the mutation vertex")))?;
        let (rotated, _) = rotate(q, cycle, r);
        let names = rotated.arrows();
        let mut word = Vec::with_capacity(names.len());
        let mut j = 0;
        while j < names.len() {
            if j + 1 < names.len() && q.get(&names[j + 1])?.target == vertex {
                word.push(ArrowName::comp(&names[j], &names[j + 1]));
                j += 2;
            } else {
                word.push(names[j].clone());
                j += 1;
            }
        }
        let path = if word.is_empty() {
            rotated.clone()
        } else {
            Path::from_names(&m, word)?
        };
        w.add_cycle(&m, &path, k.clone())?;
    }
    for alpha in &incoming {
        for beta in &outgoing {
            let names = [
                ArrowName::comp(&beta.name, &alpha.name),
                alpha.name.star(),
                beta.name.star(),
            ];
            w.add_cycle(&m, &Path::from_names(&m, names)?, scalar(1))?;
        }
    }
    QuiverWithPotential::classical(m, w)
}

/// Cyclic decoration of a potential of the source quiver of `ctx`, as a
/// potential on the quiver produced by silting mutation.
///
/// Each cycle is first rotated so that its first arrow lies outside `A`.
/// Cycles then based at the mutation vertex `i` map to
/// `(-1)^d dec c - Σ_α α (dec c) α^-1`, all others to `dec c`.
pub fn dec_cyc(ctx: &MutationContext, potential: &Potential, dimension: i64) -> Result<Potential> {
    let q = ctx.source();
    let mut out = Element::zero();
    for (cycle, k) in potential.cycles() {
        if cycle.is_stationary() {
            out.add_term(cycle.clone(), k.clone());
            continue;
        }
        let (rotated, exponent) = (0..cycle.len())
            .map(|r| rotate(q, cycle, r))
            .find(|(p, _)| !ctx.in_mutation_set(p.rightmost().expect("nonempty cycle")))
            .ok_or_else(|| Error::InvalidPotential(format!("{cycle} consists of arrows of A")))?;
        let coeff = k * sign(exponent);
        let c = Element::from_path(rotated.clone());
        let mut value = ctx.dec(&c)?;
        if rotated.source() == ctx.vertex() {
            value = value.scale(&sign(dimension));
            for alpha in ctx.mutation_set() {
                value = value - ctx.normalize(Some(alpha), &c, Some(alpha))?;
            }
        }
        out += value.scale(&coeff);
    }
    Potential::from_element(ctx.mutated(), &out)
}

/// Arrow of the mutated quiver with potential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutatedArrow {
    Mut(MutArrowName),
    /// `(alpha*)^op`, the partner of the reversed arrow `alpha*`.
    StarOp(ArrowName),
}

/// Result of [`higher_qp_mutate_detailed`].
#[derive(Clone, Debug)]
pub struct HigherMutation {
    pub context: MutationContext,
    pub result: QuiverWithPotential,
    pub kinds: BTreeMap<ArrowName, MutatedArrow>,
}

impl HigherMutation {
    /// Re-reads an element built by the mutation context in the mutated quiver with potential.
    pub fn translate(&self, x: &Element) -> Result<Element> {
        rebuild(self.result.quiver(), x)
            .map_err(|_| Error::Normalization(format!("{x} uses arrows outside the mutated quiver")))
    }
}

/// Mutation of a higher quiver with potential at a vertex without degree-0 loops.
pub fn higher_qp_mutate(qp: &QuiverWithPotential, vertex: VertexId) -> Result<QuiverWithPotential> {
    higher_qp_mutate_detailed(qp, vertex).map(|m| m.result)
}

pub fn higher_qp_mutate_detailed(qp: &QuiverWithPotential, vertex: VertexId) -> Result<HigherMutation> {
    let pairing = qp
        .pairing()
        .ok_or_else(|| Error::InvalidPairing("higher mutation needs an op-pairing".into()))?;
    let d = pairing.dimension();
    let q = qp.quiver();
    let ctx = MutationContext::new(q, vertex)?;
    let op = |n: &ArrowName| pairing.op(n).map(|(b, s)| (b.clone(), s)).expect("total pairing");
    let chi = |v: VertexId| i64::from(v == vertex);

    // opposites of the arrows in A disappear together with A
    let a_op: BTreeSet<ArrowName> = ctx.mutation_set().iter().map(|a| op(a).0).collect();

    let mut qm = Quiver::new(q.vertex_count());
    let mut kinds = BTreeMap::new();
    for arrow in ctx.mutated().arrows() {
        let kind = ctx.classify(&arrow.name).expect("arrow of the mutated quiver").clone();
        let dropped = match &kind {
            MutArrowName::Plain(p) | MutArrowName::Comp(_, p) => a_op.contains(p),
            _ => false,
        };
        if !dropped {
            qm.add_arrow(arrow.clone())?;
            kinds.insert(arrow.name.clone(), MutatedArrow::Mut(kind));
        }
    }
    for alpha in ctx.mutation_set() {
        let target = q.get(alpha)?.target;
        let name = alpha.star().op();
        add_new_arrow(&mut qm, Arrow::new(name.clone(), vertex.0, target.0, d - 2))?;
        kinds.insert(name, MutatedArrow::StarOp(alpha.clone()));
    }

    let mut map = BTreeMap::new();
    for (name, kind) in &kinds {
        let image = match kind {
            MutatedArrow::StarOp(alpha) => (alpha.star(), -1),
            MutatedArrow::Mut(MutArrowName::Star(alpha)) => (alpha.star().op(), 1),
            MutatedArrow::Mut(MutArrowName::Plain(phi)) => {
                let (psi, s) = op(phi);
                let flip = if (d + 1) * chi(q.get(phi)?.target) % 2 == 0 {
                    1
                } else {
                    -1
                };
                (psi, s * flip)
            }
            MutatedArrow::Mut(MutArrowName::Comp(alpha, phi)) => {
                let (psi, s) = op(phi);
                (ArrowName::anti_comp(&psi, alpha), -s)
            }
            MutatedArrow::Mut(MutArrowName::AntiComp(phi, alpha)) => {
                // fixed by the double-op law against the partner composition
                let (psi, _) = op(phi);
                let (_, s_back) = op(&psi);
                let comp = ArrowName::comp(alpha, &psi);
                let product = qm.degree(&comp) * qm.degree(name);
                let t = if product % 2 == 0 { s_back } else { -s_back };
                (comp, t)
            }
            MutatedArrow::Mut(MutArrowName::Conj(alpha, phi, beta)) => {
                let (psi, s) = op(phi);
                (ArrowName::conj(beta, &psi, alpha), s)
            }
        };
        map.insert(name.clone(), image);
    }
    let pairing_m = OpPairing::new(&qm, d, map)?;

    let mut w = dec_cyc(&ctx, qp.potential(), d)?.as_element().clone();
    for alpha in ctx.mutation_set() {
        let star = ctx.arrow_path(&MutArrowName::Star(alpha.clone()))?;
        for phi in q.arrows_into(vertex).filter(|p| !a_op.contains(&p.name)) {
            let (psi, s) = op(&phi.name);
            let coeff = scalar(i64::from(s)) * sign(d + 1);
            let loop_at_i = Element::term(coeff, Path::from_names(q, [phi.name.clone(), psi])?);
            w += ctx.normalize(Some(alpha), &loop_at_i, None)?.mul(&star)?;
        }
    }
    let partial = HigherMutation {
        context: ctx,
        result: QuiverWithPotential::higher(qm.clone(), Potential::zero(), pairing_m.clone())?,
        kinds,
    };
    let w = Potential::from_element(&qm, &partial.translate(&w)?)?;
    let result = QuiverWithPotential::higher(qm, w, pairing_m)?;
    higher_ginzburg(&result)?;
    Ok(HigherMutation { result, ..partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, poly};
    use crate::potential::{classical_to_higher, ginzburg3};

    #[test]
    fn linear_a3_mutation() {
        let m = qp_mutate(&fixtures::linear_a3(), VertexId(2)).unwrap();
        let q = m.quiver();
        let arrows: Vec<_> = q
            .arrows()
            .map(|a| (a.name.to_string(), a.source.0, a.target.0))
            .collect();
        assert_eq!(
            arrows,
            vec![
                ("(alpha|phi)".to_string(), 1, 3),
                ("alpha*".to_string(), 3, 2),
                ("phi*".to_string(), 2, 1),
            ]
        );
        let expected = Potential::from_element(q, &poly(q, &[(1, &["(alpha|phi)", "phi*", "alpha*"])])).unwrap();
        assert_eq!(m.potential(), &expected);
    }

    #[test]
    fn triangle_mutation() {
        let m = qp_mutate(&fixtures::triangle(), VertexId(2)).unwrap();
        let q = m.quiver();
        let expected = poly(
            q,
            &[
                (1, &["gamma", "(beta|alpha)"]),
                (1, &["(beta|alpha)", "alpha*", "beta*"]),
            ],
        );
        assert_eq!(m.potential(), &Potential::from_element(q, &expected).unwrap());
        assert!(ginzburg3(&m).unwrap().check_d_squared().passed());
    }

    #[test]
    fn isolated_vertex_keeps_qp() {
        let qp = fixtures::linear_a3();
        let mut q = Quiver::new(4);
        for a in qp.quiver().arrows() {
            q.add_arrow(a.clone()).unwrap();
        }
        let qp = QuiverWithPotential::classical(q, Potential::zero()).unwrap();
        assert_eq!(qp_mutate(&qp, VertexId(4)).unwrap(), qp);
    }

    #[test]
    fn loop_at_vertex_is_rejected() {
        let q = Quiver::with_arrows(1, [Arrow::new("t", 1, 1, 0)]).unwrap();
        let qp = QuiverWithPotential::classical(q, Potential::zero()).unwrap();
        assert!(matches!(qp_mutate(&qp, VertexId(1)), Err(Error::LoopAtVertex(..))));
    }

    #[test]
    fn dec_cyc_of_cycle_avoiding_vertex() {
        let qp = classical_to_higher(&fixtures::triangle()).unwrap();
        let ctx = MutationContext::new(qp.quiver(), VertexId(2)).unwrap();
        let w = dec_cyc(&ctx, qp.potential(), 3).unwrap();
        // gamma beta alpha, rotated to start with gamma, becomes gamma (beta|alpha)
        let m = ctx.mutated();
        assert_eq!(
            w,
            Potential::from_element(m, &poly(m, &[(1, &["gamma", "(beta|alpha)"])])).unwrap()
        );
        assert!(dec_cyc(&ctx, &Potential::zero(), 3).unwrap().is_zero());
    }

    #[test]
    fn dec_cyc_at_vertex_has_dimension_sign() {
        // the canonical rotation a.c.b starts with b in A, so b.a.c is decorated instead
        let qp = fixtures::higher_cycle(5, true);
        let ctx = MutationContext::new(qp.quiver(), VertexId(2)).unwrap();
        let w = dec_cyc(&ctx, qp.potential(), 5).unwrap();
        let m = ctx.mutated();
        assert_eq!(
            w,
            Potential::from_element(m, &poly(m, &[(1, &["c", "(b|a)"])])).unwrap()
        );
    }

    #[test]
    fn higher_mutation_pairing_is_valid() {
        for qp in [
            fixtures::higher_cycle(4, true),
            fixtures::higher_cycle(5, true),
            fixtures::higher_loop(4, true),
            fixtures::higher_loop(5, true),
            classical_to_higher(&fixtures::triangle()).unwrap(),
        ] {
            for v in qp.quiver().vertices() {
                let m = higher_qp_mutate(&qp, v).unwrap();
                assert_eq!(m.dimension(), qp.dimension());
            }
        }
    }

    #[test]
    fn zero_potential_gives_correction_terms_only() {
        let qp = classical_to_higher(&fixtures::linear_a3()).unwrap();
        let m = higher_qp_mutate(&qp, VertexId(2)).unwrap();
        let q = m.quiver();
        // phi ends at 2 with phi^op = -phi^op-arrow; (-1)^{d+1} = 1 for d = 3
        let expected = poly(q, &[(-1, &["(alpha|phi)", "phi^op", "alpha*"])]);
        assert_eq!(m.potential(), &Potential::from_element(q, &expected).unwrap());
    }
}
