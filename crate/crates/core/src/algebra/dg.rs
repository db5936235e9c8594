use std::collections::BTreeMap;

use super::{sign, Arrow, ArrowName, Element, Path, Quiver};
use crate::error::{Error, Result};

/// Extends `diff` (given on arrows) to `x` by linearity and the graded
/// Leibniz rule `d(pq) = d(p) q + (-1)^{|p|} p d(q)`.
///
/// Arrows missing from `diff` have zero differential.
pub fn leibniz_extend(quiver: &Quiver, diff: &BTreeMap<ArrowName, Element>, x: &Element) -> Result<Element> {
    let mut out = Element::zero();
    for (path, c) in x.terms() {
        let arrows = path.arrows();
        let mut prefix_degree = 0;
        for (m, a) in arrows.iter().enumerate() {
            let arrow = quiver.get(a)?;
            if let Some(da) = diff.get(a) {
                let sgn = sign(prefix_degree) * c;
                for (q, k) in da.terms() {
                    if q.source() != arrow.source || q.target() != arrow.target {
                        return Err(Error::EndpointMismatch {
                            arrow: a.clone(),
                            path: q.to_string(),
                        });
                    }
                    let mut spliced = Vec::with_capacity(arrows.len() + q.len());
                    spliced.extend_from_slice(&arrows[..m]);
                    spliced.extend_from_slice(q.arrows());
                    spliced.extend_from_slice(&arrows[m + 1..]);
                    let p = Path::from_parts(spliced, path.source(), path.target());
                    out.add_term(p, k * &sgn);
                }
            }
            prefix_degree += arrow.degree;
        }
    }
    Ok(out)
}

/// Result of checking `d² = 0` arrow by arrow.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DSquaredReport {
    pub failures: Vec<(ArrowName, Element)>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.failures.into_iter().next() {
            None => Ok(()),
            Some((arrow, residual)) => Err(Error::DSquaredNonzero {
                arrow,
                residual: residual.to_string(),
            }),
        }
    }
}

/// A graded quiver with a differential on its arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgQuiver {
    quiver: Quiver,
    diff: BTreeMap<ArrowName, Element>,
}

impl DgQuiver {
    /// Validates degrees and endpoints of every differential. Does not check
    /// `d² = 0`; see [`DgQuiver::check_d_squared`].
    pub fn new(quiver: Quiver, diff: BTreeMap<ArrowName, Element>) -> Result<Self> {
        for (name, value) in &diff {
            let arrow = quiver.get(name)?;
            validate_value(&quiver, arrow, value)?;
        }
        let diff = diff.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(DgQuiver { quiver, diff })
    }

    /// Like [`DgQuiver::new`] but also insists on `d² = 0`.
    pub fn new_checked(quiver: Quiver, diff: BTreeMap<ArrowName, Element>) -> Result<Self> {
        let dg = DgQuiver::new(quiver, diff)?;
        dg.check_d_squared().into_result()?;
        Ok(dg)
    }

    pub fn with_zero_differential(quiver: Quiver) -> Self {
        DgQuiver {
            quiver,
            diff: BTreeMap::new(),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn diff_map(&self) -> &BTreeMap<ArrowName, Element> {
        &self.diff
    }

    /// The differential of an arrow (zero when none is recorded).
    pub fn d(&self, name: &ArrowName) -> Element {
        self.diff.get(name).cloned().unwrap_or_default()
    }

    /// The differential extended to an arbitrary element.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        leibniz_extend(&self.quiver, &self.diff, x)
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrow_count()
    }

    /// Lists every arrow whose differential does not square to zero.
    pub fn check_d_squared(&self) -> DSquaredReport {
        let mut failures = Vec::new();
        for (name, value) in &self.diff {
            match self.apply(value) {
                Ok(r) if r.is_zero() => {}
                Ok(r) => failures.push((name.clone(), r)),
                // values were validated at construction
                Err(e) => unreachable!("validated differential failed to extend: {e}"),
            }
        }
        DSquaredReport { failures }
    }

    /// The opposite dg quiver: arrows reversed, every path reversed with its
    /// Koszul sign `(-1)^{Σ_{j<l} |a_j||a_l|}`.
    pub fn opposite(&self) -> DgQuiver {
        let quiver = self.quiver.opposite();
        let diff = self
            .diff
            .iter()
            .map(|(n, v)| {
                let mut out = Element::zero();
                for (p, c) in v.terms() {
                    let degs: Vec<i64> = p.arrows().iter().map(|a| self.quiver.degree(a)).collect();
                    let mut exp = 0;
                    let mut seen = 0;
                    for d in &degs {
                        exp += seen * d;
                        seen += d;
                    }
                    let mut arrows = p.arrows().to_vec();
                    arrows.reverse();
                    out.add_term(Path::from_parts(arrows, p.target(), p.source()), c * sign(exp));
                }
                (n.clone(), out)
            })
            .collect();
        DgQuiver { quiver, diff }
    }
}

fn validate_value(quiver: &Quiver, arrow: &Arrow, value: &Element) -> Result<()> {
    for p in value.paths() {
        for a in p.arrows() {
            quiver.get(a)?;
        }
        if p.source() != arrow.source || p.target() != arrow.target {
            return Err(Error::EndpointMismatch {
                arrow: arrow.name.clone(),
                path: p.to_string(),
            });
        }
    }
    match value.homogeneous_degree(quiver) {
        Some(None) => Ok(()),
        Some(Some(d)) if d == arrow.degree - 1 => Ok(()),
        found => Err(Error::DegreeMismatch {
            arrow: arrow.name.clone(),
            expected: arrow.degree - 1,
            found: found.flatten(),
        }),
    }
}
