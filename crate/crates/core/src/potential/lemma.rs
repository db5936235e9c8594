use std::collections::BTreeSet;

use super::qp_mutation::{higher_qp_mutate_detailed, HigherMutation, MutatedArrow};
use super::QuiverWithPotential;
use crate::algebra::{scalar, sign, ArrowName, Element, Path, VertexId};
use crate::error::{Error, Result};
use crate::mutation::MutArrowName;

/// One comparison between a cyclic derivative of the mutated potential and
/// the expression predicted from the original potential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    /// 1..=7, in the order: plain arrows not ending at the vertex, plain
    /// arrows ending at it, `(alpha*)^op`, `alpha*`, compositions,
    /// anti-compositions, conjugates.
    pub formula: u8,
    pub arrow: ArrowName,
    pub lhs: Element,
    pub rhs: Element,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug, Default)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }
}

struct Sides<'a> {
    qp: &'a QuiverWithPotential,
    hm: &'a HigherMutation,
}

impl Sides<'_> {
    /// `∂_{Y^op} W_M`, straight from the mutated potential.
    fn lhs_at_op(&self, y: &ArrowName) -> Element {
        let m = &self.hm.result;
        let (x, s) = m.pairing().expect("higher result").op(y).expect("total pairing");
        m.potential()
            .cyclic_derivative(m.quiver(), x)
            .scale(&scalar(i64::from(s)))
    }

    fn d_op(&self, phi: &ArrowName) -> Result<Element> {
        self.qp.derivative_at_op(phi)
    }

    /// Predicted `∂_{φ^op} W_M` for a plain arrow `φ`, over the silting-mutated quiver.
    fn plain(&self, phi: &ArrowName) -> Result<Element> {
        let ctx = &self.hm.context;
        let reduced = ctx.dec(&ctx.red(&self.d_op(phi)?))?;
        if self.qp.quiver().get(phi)?.target != ctx.vertex() {
            return Ok(reduced);
        }
        let mut out = -reduced;
        for alpha in ctx.mutation_set() {
            let star = ctx.arrow_path(&MutArrowName::Star(alpha.clone()))?;
            let comp = ctx.arrow_path(&MutArrowName::Comp(alpha.clone(), phi.clone()))?;
            out += star.mul(&comp)?;
        }
        Ok(out)
    }

    fn composition(&self, alpha: &ArrowName, phi: &ArrowName) -> Result<Element> {
        let ctx = &self.hm.context;
        ctx.normalize(Some(alpha), &ctx.red(&self.d_op(phi)?), None)
    }

    fn star_derivative(&self, alpha: &ArrowName) -> Result<Element> {
        let ctx = &self.hm.context;
        let q = self.qp.quiver();
        let pairing = self.qp.pairing().expect("higher input");
        let d = pairing.dimension();
        let a_op: BTreeSet<&ArrowName> = ctx
            .mutation_set()
            .iter()
            .map(|a| pairing.op(a).expect("total pairing").0)
            .collect();
        let mut out = Element::zero();
        for phi in q.arrows_into(ctx.vertex()).filter(|p| !a_op.contains(&p.name)) {
            let (psi, s) = pairing.op(&phi.name).expect("total pairing");
            // φ ends at the vertex, so φ^{op_M} = (-1)^{d+1} φ^op
            let c = scalar(i64::from(s)) * sign(d + 1);
            let path = Path::from_names(q, [phi.name.clone(), psi.clone()])?;
            out += ctx.normalize(Some(alpha), &Element::term(c, path), None)?;
        }
        Ok(out)
    }

    fn anti_composition(&self, phi: &ArrowName, alpha: &ArrowName) -> Result<Element> {
        let ctx = &self.hm.context;
        let arrow = self.qp.quiver().get(phi)?;
        let first = ctx.times_inverse(&self.plain(phi)?, alpha)?;
        let second = ctx
            .arrow_path(&MutArrowName::Plain(phi.clone()))?
            .mul(&ctx.arrow_path(&MutArrowName::Star(alpha.clone()))?)?
            .scale(&sign(ctx.plain_degree(arrow)));
        let third = ctx
            .dec(&ctx.slash(&self.d_op(phi)?, alpha)?)?
            .scale(&sign(i64::from(arrow.target == ctx.vertex())));
        Ok(first + second - third)
    }

    fn conjugate(&self, alpha: &ArrowName, phi: &ArrowName, beta: &ArrowName) -> Result<Element> {
        let ctx = &self.hm.context;
        let comp = MutArrowName::Comp(alpha.clone(), phi.clone());
        let first = ctx.times_inverse(&self.composition(alpha, phi)?, beta)?;
        let second = ctx
            .arrow_path(&comp)?
            .mul(&ctx.arrow_path(&MutArrowName::Star(beta.clone()))?)?
            .scale(&sign(ctx.mutated().degree(&comp.name())));
        let third = ctx.normalize(Some(alpha), &ctx.slash(&self.d_op(phi)?, beta)?, None)?;
        Ok(first + second - third)
    }
}

/// Mutates `qp` at `vertex` and compares every cyclic derivative of the
/// mutated potential with the expression predicted from the original one.
pub fn verify_derivative_lemma(qp: &QuiverWithPotential, vertex: VertexId) -> Result<LemmaReport> {
    if qp.is_classical() {
        return Err(Error::InvalidPairing(
            "the derivative check needs a higher quiver with potential".into(),
        ));
    }
    let hm = higher_qp_mutate_detailed(qp, vertex)?;
    let sides = Sides { qp, hm: &hm };
    let m = &hm.result;
    let mut report = LemmaReport::default();
    for (name, kind) in &hm.kinds {
        let MutatedArrow::Mut(kind) = kind else {
            continue;
        };
        let (formula, rhs) = match kind {
            MutArrowName::Plain(phi) => {
                let ends_at_vertex = qp.quiver().get(phi)?.target == vertex;
                (if ends_at_vertex { 2 } else { 1 }, sides.plain(phi)?)
            }
            MutArrowName::Star(alpha) => {
                report.checks.push(LemmaCheck {
                    formula: 4,
                    arrow: name.clone(),
                    lhs: m.potential().cyclic_derivative(m.quiver(), name),
                    rhs: hm.translate(&sides.star_derivative(alpha)?)?,
                });
                (3, Element::zero())
            }
            MutArrowName::Comp(alpha, phi) => (5, sides.composition(alpha, phi)?),
            MutArrowName::AntiComp(phi, alpha) => (6, sides.anti_composition(phi, alpha)?),
            MutArrowName::Conj(alpha, phi, beta) => (7, sides.conjugate(alpha, phi, beta)?),
        };
        report.checks.push(LemmaCheck {
            formula,
            arrow: name.clone(),
            lhs: sides.lhs_at_op(name),
            rhs: hm.translate(&rhs)?,
        });
    }
    report
        .checks
        .sort_by(|a, b| (a.formula, &a.arrow).cmp(&(b.formula, &b.arrow)));
    Ok(report)
}
