use std::collections::BTreeMap;

use super::{OpPairing, Potential, QuiverWithPotential};
use crate::algebra::{scalar, Arrow, ArrowName, DgQuiver, Element, Path, Quiver};
use crate::error::{Error, Result};

fn add_loops(quiver: &mut Quiver, degree: i64) -> Result<()> {
    for v in quiver.vertices().collect::<Vec<_>>() {
        let name = ArrowName::ginzburg_loop(v);
        if quiver.contains(&name) {
            return Err(Error::NameCollision(name));
        }
        quiver.add_arrow(Arrow {
            name,
            source: v,
            target: v,
            degree,
        })?;
    }
    Ok(())
}

fn two_step(quiver: &Quiver, left: &ArrowName, right: &ArrowName) -> Path {
    Path::from_names(quiver, [left.clone(), right.clone()]).expect("composable pair")
}

/// Ginzburg dg quiver of a classical quiver with potential: `α^op` in
/// degree 1 with `d α^op = ∂_α W`, loops `l_i` in degree 2 with
/// `d l_i = Σ_{α out of i} α^op α - Σ_{α into i} α α^op`.
pub fn ginzburg3(qp: &QuiverWithPotential) -> Result<DgQuiver> {
    if !qp.is_classical() {
        return Err(Error::InvalidPotential(
            "ginzburg3 expects a classical quiver with potential".into(),
        ));
    }
    let q = qp.quiver();
    let mut g = q.clone();
    for a in q.arrows() {
        let op = a.name.op();
        if q.contains(&op) {
            return Err(Error::NameCollision(op));
        }
        g.add_arrow(Arrow {
            name: op,
            source: a.target,
            target: a.source,
            degree: 1,
        })?;
    }
    add_loops(&mut g, 2)?;
    let mut diff = BTreeMap::new();
    for a in q.arrows() {
        diff.insert(a.name.op(), qp.potential().cyclic_derivative(q, &a.name));
    }
    for v in q.vertices() {
        let mut x = Element::zero();
        for a in q.arrows_from(v) {
            x.add_term(two_step(&g, &a.name.op(), &a.name), scalar(1));
        }
        for a in q.arrows_into(v) {
            x.add_term(two_step(&g, &a.name, &a.name.op()), scalar(-1));
        }
        diff.insert(ArrowName::ginzburg_loop(v), x);
    }
    let dg = DgQuiver::new(g, diff)?;
    dg.check_d_squared().into_result()?;
    Ok(dg)
}

/// `d`-dimensional Ginzburg dg quiver: loops `l_j` of degree `d - 1`,
/// `d φ = ∂_{φ^op} W` and `d l_i = Σ_{φ ending at i} φ φ^op`.
pub fn higher_ginzburg(qp: &QuiverWithPotential) -> Result<DgQuiver> {
    let pairing = qp
        .pairing()
        .ok_or_else(|| Error::InvalidPotential("higher_ginzburg expects an op-pairing".into()))?;
    let q = qp.quiver();
    let d = pairing.dimension();
    let mut g = q.clone();
    add_loops(&mut g, d - 1)?;
    let mut diff = BTreeMap::new();
    for a in q.arrows() {
        diff.insert(a.name.clone(), qp.derivative_at_op(&a.name)?);
    }
    for v in q.vertices() {
        let mut x = Element::zero();
        for a in q.arrows_into(v) {
            let (op, s) = pairing.op(&a.name).expect("total pairing");
            x.add_term(two_step(&g, &a.name, op), scalar(i64::from(s)));
        }
        diff.insert(ArrowName::ginzburg_loop(v), x);
    }
    let dg = DgQuiver::new(g, diff)?;
    if let Some((arrow, residual)) = dg.check_d_squared().failures.into_iter().next() {
        return Err(Error::InvalidPotential(format!(
            "d² is nonzero on `{arrow}`: {residual}"
        )));
    }
    Ok(dg)
}

/// Views a classical quiver with potential as a 3-dimensional higher one by
/// adding `α^op` in degree 1, paired as `α ↦ -α^op`, `α^op ↦ α`. Its higher
/// Ginzburg dg quiver is then identical to [`ginzburg3`].
pub fn classical_to_higher(qp: &QuiverWithPotential) -> Result<QuiverWithPotential> {
    if !qp.is_classical() {
        return Err(Error::InvalidPotential("input already carries a pairing".into()));
    }
    let q = qp.quiver();
    let mut h = q.clone();
    let mut map = BTreeMap::new();
    for a in q.arrows() {
        let op = a.name.op();
        if q.contains(&op) {
            return Err(Error::NameCollision(op));
        }
        h.add_arrow(Arrow {
            name: op.clone(),
            source: a.target,
            target: a.source,
            degree: 1,
        })?;
        map.insert(a.name.clone(), (op.clone(), -1));
        map.insert(op, (a.name.clone(), 1));
    }
    let pairing = OpPairing::new(&h, 3, map)?;
    let potential = Potential::from_element(&h, &rebuild(&h, qp.potential().as_element())?)?;
    QuiverWithPotential::higher(h, potential, pairing)
}

/// Re-reads the paths of `x` in a larger quiver with the same arrows.
pub(crate) fn rebuild(quiver: &Quiver, x: &Element) -> Result<Element> {
    x.try_map(|p| {
        if p.is_stationary() {
            Ok(Element::from_path(p.clone()))
        } else {
            Path::from_names(quiver, p.arrows().iter().cloned()).map(Element::from_path)
        }
    })
}
