//! Silting mutation of a Ginzburg dg quiver against the Ginzburg dg quiver
//! of the mutated quiver with potential.
//!
//! The mutated Ginzburg quiver has more arrows than the target: the
//! anti-compositions `l_i alpha^-1` cancel against `alpha^op`, and the
//! conjugates `alpha l_i beta^-1` against `alpha beta^op`. What remains is
//! matched by an explicit renaming with signs.

use num_traits::Signed;

use crate::algebra::{scalar, sign, ArrowName, DgQuiver, VertexId};
use crate::compare::{equal_under, ArrowCorrespondence, Mismatch};
use crate::error::{Error, Result};
use crate::mutation::{mutate_with_context, MutArrowName, MutationContext};
use crate::potential::{ginzburg3, higher_ginzburg, higher_qp_mutate, qp_mutate, QuiverWithPotential};
use crate::reduction::{cancel_pair, find_cancellable, DEFAULT_MAX_STEPS};

#[derive(Clone, Debug)]
pub struct Agreement {
    /// Silting mutation of the Ginzburg dg quiver.
    pub mutated: DgQuiver,
    /// `mutated` after the cancellations listed in `cancelled`.
    pub reduced: DgQuiver,
    pub cancelled: Vec<(ArrowName, ArrowName)>,
    /// Ginzburg dg quiver of the mutated quiver with potential.
    pub expected: DgQuiver,
    /// Renaming `reduced -> expected`.
    pub map: ArrowCorrespondence,
    pub mismatch: Option<Mismatch>,
}

impl Agreement {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }

    /// Arrows of `reduced` that the renaming negates.
    pub fn negated(&self) -> Vec<ArrowName> {
        self.map
            .entries()
            .filter(|(_, _, s)| s.is_negative())
            .map(|(a, _, _)| a.clone())
            .collect()
    }
}

/// Cancels the pair `(rho, psi)`, which must be cancellable in `dg`.
pub fn cancel_named(dg: &DgQuiver, rho: &ArrowName, psi: &ArrowName) -> Result<DgQuiver> {
    let pair = find_cancellable(dg)
        .into_iter()
        .find(|p| &p.rho.name == rho && &p.psi.name == psi)
        .ok_or_else(|| Error::NotCancellable {
            rho: rho.clone(),
            psi: psi.clone(),
            reason: "d rho has no invertible term psi".into(),
        })?;
    cancel_pair(dg, &pair, DEFAULT_MAX_STEPS)
}

/// Runs the comparison for a classical or a higher quiver with potential.
pub fn ginzburg_agreement(qp: &QuiverWithPotential, vertex: VertexId) -> Result<Agreement> {
    if qp.is_classical() {
        run(
            qp,
            vertex,
            &ginzburg3(qp)?,
            &ginzburg3(&qp_mutate(qp, vertex)?)?,
            Flavour::Classical,
        )
    } else {
        run(
            qp,
            vertex,
            &higher_ginzburg(qp)?,
            &higher_ginzburg(&higher_qp_mutate(qp, vertex)?)?,
            Flavour::Higher,
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flavour {
    Classical,
    Higher,
}

fn op_of(qp: &QuiverWithPotential, name: &ArrowName) -> ArrowName {
    match qp.pairing() {
        Some(p) => p.op(name).expect("total pairing").0.clone(),
        None => name.op(),
    }
}

fn run(
    qp: &QuiverWithPotential,
    vertex: VertexId,
    ginzburg: &DgQuiver,
    expected: &DgQuiver,
    flavour: Flavour,
) -> Result<Agreement> {
    let (mutated, ctx) = mutate_with_context(ginzburg, vertex)?;
    let loop_i = ArrowName::ginzburg_loop(vertex);
    let mut reduced = mutated.clone();
    let mut cancelled = Vec::new();
    for alpha in ctx.mutation_set() {
        let rho = MutArrowName::AntiComp(loop_i.clone(), alpha.clone()).name();
        let psi = MutArrowName::Plain(op_of(qp, alpha)).name();
        reduced = cancel_named(&reduced, &rho, &psi)?;
        cancelled.push((rho, psi));
        for beta in ctx.mutation_set() {
            let rho = MutArrowName::Conj(alpha.clone(), loop_i.clone(), beta.clone()).name();
            let psi = MutArrowName::Comp(alpha.clone(), op_of(qp, beta)).name();
            reduced = cancel_named(&reduced, &rho, &psi)?;
            cancelled.push((rho, psi));
        }
    }
    let map = match flavour {
        Flavour::Classical => classical_map(qp, &ctx, &reduced),
        Flavour::Higher => higher_map(qp, &ctx, &reduced),
    };
    let mismatch = equal_under(&map, &reduced, expected)?;
    Ok(Agreement {
        mutated,
        reduced,
        cancelled,
        expected: expected.clone(),
        map,
        mismatch,
    })
}

/// Identity, except for the renamings and sign changes needed in dimension 3:
/// `phi ↦ phi*^op`, `phi^op ↦ -phi*`, `(phi^op|alpha^-1) ↦ -(alpha|phi)^op`,
/// `(alpha|l_i) ↦ alpha*^op` and `l_i ↦ -l_i`.
fn classical_map(qp: &QuiverWithPotential, ctx: &MutationContext, reduced: &DgQuiver) -> ArrowCorrespondence {
    let v = ctx.vertex();
    let loop_i = ArrowName::ginzburg_loop(v);
    let mut map = ArrowCorrespondence::identity(reduced.quiver());
    for phi in qp.quiver().arrows_into(v) {
        let name = &phi.name;
        map.insert(name.clone(), name.star().op(), scalar(1));
        map.insert(name.op(), name.star(), scalar(-1));
        for alpha in ctx.mutation_set() {
            map.insert(
                MutArrowName::AntiComp(name.op(), alpha.clone()).name(),
                ArrowName::comp(alpha, name).op(),
                scalar(-1),
            );
        }
    }
    for alpha in ctx.mutation_set() {
        map.insert(
            MutArrowName::Comp(alpha.clone(), loop_i.clone()).name(),
            alpha.star().op(),
            scalar(1),
        );
    }
    map.insert(loop_i.clone(), loop_i, scalar(-1));
    map
}

/// Identity, except `(alpha|l_i) ↦ (-1)^d alpha*^op` and `l_i ↦ (-1)^d l_i`.
fn higher_map(qp: &QuiverWithPotential, ctx: &MutationContext, reduced: &DgQuiver) -> ArrowCorrespondence {
    let s = sign(qp.dimension());
    let loop_i = ArrowName::ginzburg_loop(ctx.vertex());
    let mut map = ArrowCorrespondence::identity(reduced.quiver());
    for alpha in ctx.mutation_set() {
        map.insert(
            MutArrowName::Comp(alpha.clone(), loop_i.clone()).name(),
            alpha.star().op(),
            s.clone(),
        );
    }
    map.insert(loop_i.clone(), loop_i, s);
    map
}
