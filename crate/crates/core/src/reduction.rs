//! Gaussian elimination for dg quivers: factoring out the dg ideal `(rho, d rho)`
//! when `d rho` contains a single arrow `psi` with invertible coefficient.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::algebra::{sign, Arrow, ArrowName, DgQuiver, Element, Path, Quiver, Scalar, VertexId};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Total number of arrow occurrences one cancellation may produce while
/// substituting. When `psi` occurs in its own replacement every pass makes
/// the paths longer, often exponentially; past this amount we stop early.
pub const SUBSTITUTION_BUDGET: usize = 20_000;

/// Longest path a substitution may produce before it is reported as not terminating.
pub const SUBSTITUTION_MAX_LEN: usize = 64;

/// `d rho = coeff * psi + rest`, with `psi` an arrow not occurring alone in `rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellablePair {
    pub rho: Arrow,
    pub psi: Arrow,
    pub coeff: Scalar,
    pub rest: Element,
}

/// All cancellable pairs, ordered by degree of `rho`, then by the names of `rho` and `psi`.
pub fn find_cancellable(dg: &DgQuiver) -> Vec<CancellablePair> {
    let q = dg.quiver();
    let mut out = Vec::new();
    for (name, value) in dg.diff_map() {
        let rho = q.arrow(name).expect("differential of a known arrow");
        for (p, c) in value.terms() {
            if p.len() != 1 {
                continue;
            }
            let psi = q.arrow(&p.arrows()[0]).expect("arrow of a path");
            let mut rest = value.clone();
            rest.add_term(p.clone(), -c.clone());
            out.push(CancellablePair {
                rho: rho.clone(),
                psi: psi.clone(),
                coeff: c.clone(),
                rest,
            });
        }
    }
    out.sort_by(|a, b| (a.rho.degree, &a.rho.name, &a.psi.name).cmp(&(b.rho.degree, &b.rho.name, &b.psi.name)));
    out
}

fn not_cancellable(pair: &CancellablePair, reason: &str) -> Error {
    Error::NotCancellable {
        rho: pair.rho.name.clone(),
        psi: pair.psi.name.clone(),
        reason: reason.to_string(),
    }
}

fn validate(dg: &DgQuiver, pair: &CancellablePair) -> Result<()> {
    let q = dg.quiver();
    if q.arrow(&pair.rho.name) != Some(&pair.rho) || q.arrow(&pair.psi.name) != Some(&pair.psi) {
        return Err(not_cancellable(pair, "arrows do not belong to the quiver"));
    }
    if pair.coeff.is_zero() {
        return Err(not_cancellable(pair, "zero coefficient"));
    }
    let psi_path = Path::arrow(&pair.psi);
    let mut expected = pair.rest.clone();
    expected.add_term(psi_path.clone(), pair.coeff.clone());
    if expected != dg.d(&pair.rho.name) || !pair.rest.coefficient(&psi_path).is_zero() {
        return Err(not_cancellable(pair, "d(rho) is not coeff * psi + rest"));
    }
    Ok(())
}

/// Replaces every occurrence of `psi` by `replacement` and kills every term through `rho`.
/// Gives `None` once more than `budget` arrow occurrences have been produced
/// or a path outgrows [`SUBSTITUTION_MAX_LEN`].
fn substitute(
    x: &Element,
    rho: &ArrowName,
    psi: &ArrowName,
    replacement: &Element,
    budget: &mut usize,
) -> Option<Element> {
    let mut out = Element::zero();
    for (p, c) in x.terms() {
        let names = p.arrows();
        if names.contains(rho) {
            continue;
        }
        if !names.contains(psi) {
            out.add_term(p.clone(), c.clone());
            continue;
        }
        // Expand in written order; the replacement keeps the endpoints of `psi`.
        let mut words: Vec<(Vec<ArrowName>, Scalar)> = vec![(Vec::new(), c.clone())];
        for (k, segment) in names.split(|n| n == psi).enumerate() {
            if k > 0 {
                let mut next = Vec::with_capacity(words.len() * replacement.len());
                for (mut w, a) in words {
                    let mut terms = replacement.terms().peekable();
                    while let Some((r, b)) = terms.next() {
                        // the last branch takes the word itself
                        let mut branch = if terms.peek().is_some() {
                            w.clone()
                        } else {
                            std::mem::take(&mut w)
                        };
                        branch.extend_from_slice(r.arrows());
                        next.push((branch, &a * b));
                    }
                }
                words = next;
            }
            for (w, _) in &mut words {
                w.extend_from_slice(segment);
            }
            let weight: usize = words.iter().map(|(w, _)| w.len().max(1)).sum();
            if weight > *budget || words.iter().any(|(w, _)| w.len() > SUBSTITUTION_MAX_LEN) {
                return None;
            }
        }
        *budget -= words.iter().map(|(w, _)| w.len().max(1)).sum::<usize>();
        for (w, a) in words {
            out.add_term(Path::from_parts(w, p.source(), p.target()), a);
        }
    }
    Some(out)
}

/// Factors out the dg ideal generated by `rho` and `d rho`.
pub fn cancel_pair(dg: &DgQuiver, pair: &CancellablePair, max_steps: usize) -> Result<DgQuiver> {
    validate(dg, pair)?;
    let rho = &pair.rho.name;
    let psi = &pair.psi.name;
    let factor = -Scalar::one() / pair.coeff.clone();
    let replacement = pair.rest.scale(&factor);
    let q = dg.quiver();

    let mut diff: BTreeMap<ArrowName, Element> = dg
        .diff_map()
        .iter()
        .filter(|(n, _)| *n != rho && *n != psi)
        .map(|(n, v)| (n.clone(), v.clone()))
        .collect();
    let mut steps = 0;
    let mut budget = SUBSTITUTION_BUDGET;
    let stop = |passes| Error::NonTermination {
        psi: psi.clone(),
        max_steps,
        passes,
    };
    loop {
        let pending = diff
            .values()
            .any(|v| v.paths().any(|p| p.arrows().contains(psi) || p.arrows().contains(rho)));
        if !pending {
            break;
        }
        if steps == max_steps {
            return Err(stop(steps));
        }
        steps += 1;
        for v in diff.values_mut() {
            *v = substitute(v, rho, psi, &replacement, &mut budget).ok_or_else(|| stop(steps))?;
        }
    }

    let mut quiver = q.clone();
    quiver.remove_arrow(rho);
    quiver.remove_arrow(psi);
    let result = DgQuiver::new(quiver, diff)?;
    result.check_d_squared().into_result()?;
    Ok(result)
}

/// Outcome of [`simplify`].
#[derive(Clone, Debug)]
pub struct Simplification {
    pub dg: DgQuiver,
    /// `(rho, psi)` in the order they were cancelled.
    pub cancelled: Vec<(ArrowName, ArrowName)>,
    pub warnings: Vec<String>,
}

/// Greedily cancels the first available pair until none is left.
/// Pairs whose substitution does not terminate are skipped with a warning.
pub fn simplify(dg: &DgQuiver, max_steps: usize) -> Result<Simplification> {
    let mut current = dg.clone();
    let mut cancelled = Vec::new();
    let mut warnings = Vec::new();
    let mut skipped: BTreeSet<(ArrowName, ArrowName)> = BTreeSet::new();
    'outer: loop {
        for pair in find_cancellable(&current) {
            let key = (pair.rho.name.clone(), pair.psi.name.clone());
            if skipped.contains(&key) {
                continue;
            }
            match cancel_pair(&current, &pair, max_steps) {
                Ok(next) => {
                    current = next;
                    cancelled.push(key);
                    continue 'outer;
                }
                Err(err @ Error::NonTermination { .. }) => {
                    warnings.push(format!("skipped ({}, {}): {err}", key.0, key.1));
                    skipped.insert(key);
                }
                Err(err) => return Err(err),
            }
        }
        break;
    }
    Ok(Simplification {
        dg: current,
        cancelled,
        warnings,
    })
}

/// Every dg quiver reachable by cancelling pairs in any order until none is
/// left, without duplicates. Exponential; meant for small inputs.
pub fn maximal_reductions(dg: &DgQuiver, max_steps: usize) -> Result<Vec<DgQuiver>> {
    let mut seen: Vec<DgQuiver> = Vec::new();
    let mut finals: Vec<DgQuiver> = Vec::new();
    let mut stack = vec![dg.clone()];
    while let Some(current) = stack.pop() {
        if seen.contains(&current) {
            continue;
        }
        seen.push(current.clone());
        let mut progressed = false;
        for pair in find_cancellable(&current) {
            match cancel_pair(&current, &pair, max_steps) {
                Ok(next) => {
                    progressed = true;
                    stack.push(next);
                }
                Err(Error::NonTermination { .. }) => {}
                Err(err) => return Err(err),
            }
        }
        if !progressed && !finals.contains(&current) {
            finals.push(current);
        }
    }
    Ok(finals)
}

/// `Σ_n (-1)^n #{arrows u -> v of degree n}` for every pair of vertices with arrows.
pub fn euler_characteristic(quiver: &Quiver) -> BTreeMap<(VertexId, VertexId), i64> {
    let mut out = BTreeMap::new();
    for a in quiver.arrows() {
        let s = sign(a.degree);
        let v = if s.is_one() { 1 } else { -1 };
        *out.entry((a.source, a.target)).or_insert(0) += v;
    }
    out.retain(|_, v| *v != 0);
    out
}
