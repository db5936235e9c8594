//! Isomorphisms of dg quivers that fix vertices and send each arrow to a
//! nonzero multiple of an arrow.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{scalar, Arrow, ArrowName, DgQuiver, Element, Path, Quiver, Scalar, VertexId};
use crate::error::{Error, Result};

/// `left arrow ↦ scale * right arrow`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ArrowCorrespondence {
    map: BTreeMap<ArrowName, (ArrowName, Scalar)>,
}

impl ArrowCorrespondence {
    pub fn new(map: BTreeMap<ArrowName, (ArrowName, Scalar)>) -> Self {
        ArrowCorrespondence { map }
    }

    pub fn identity(quiver: &Quiver) -> Self {
        let map = quiver
            .arrow_names()
            .map(|n| (n.clone(), (n.clone(), scalar(1))))
            .collect();
        ArrowCorrespondence { map }
    }

    pub fn get(&self, name: &ArrowName) -> Option<(&ArrowName, &Scalar)> {
        self.map.get(name).map(|(n, s)| (n, s))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ArrowName, &ArrowName, &Scalar)> {
        self.map.iter().map(|(a, (b, s))| (a, b, s))
    }

    pub fn insert(&mut self, left: ArrowName, right: ArrowName, scale: Scalar) {
        self.map.insert(left, (right, scale));
    }

    /// The inverse correspondence, from right to left.
    pub fn inverse(&self) -> ArrowCorrespondence {
        let map = self
            .map
            .iter()
            .map(|(a, (b, s))| (b.clone(), (a.clone(), Scalar::one() / s)))
            .collect();
        ArrowCorrespondence { map }
    }

    /// Checks that this is a bijection preserving endpoints and degrees.
    pub fn validate(&self, left: &Quiver, right: &Quiver) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCorrespondence(msg));
        if left.vertex_count() != right.vertex_count() {
            return bad("vertex counts differ".into());
        }
        let mut images = BTreeSet::new();
        for a in left.arrows() {
            let Some((b, s)) = self.map.get(&a.name) else {
                return bad(format!("`{}` is not mapped", a.name));
            };
            let Some(target) = right.arrow(b) else {
                return bad(format!("`{b}` is not an arrow"));
            };
            if s.is_zero() {
                return bad(format!("`{}` is sent to zero", a.name));
            }
            if (a.source, a.target, a.degree) != (target.source, target.target, target.degree) {
                return bad(format!("`{}` and `{b}` differ in endpoints or degree", a.name));
            }
            if !images.insert(b.clone()) {
                return bad(format!("`{b}` is hit twice"));
            }
        }
        if self.map.len() != left.arrow_count() || images.len() != right.arrow_count() {
            return bad("not a bijection on arrows".into());
        }
        Ok(())
    }

    /// Image of an element of the left quiver.
    pub fn transport(&self, right: &Quiver, x: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (p, c) in x.terms() {
            let mut coeff = c.clone();
            let mut names = Vec::with_capacity(p.len());
            for n in p.arrows() {
                let (b, s) = self
                    .map
                    .get(n)
                    .ok_or_else(|| Error::InvalidCorrespondence(format!("`{n}` is not mapped")))?;
                coeff *= s;
                names.push(b.clone());
            }
            let image = if names.is_empty() {
                p.clone()
            } else {
                Path::from_names(right, names)?
            };
            out.add_term(image, coeff);
        }
        Ok(out)
    }
}

/// First arrow whose differential is not carried over, with both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub arrow: ArrowName,
    /// `scale * d(image)` in the right dg quiver.
    pub expected: Element,
    /// The left differential carried over.
    pub found: Element,
}

/// `Ok(None)` when the correspondence is an isomorphism of dg quivers.
pub fn equal_under(map: &ArrowCorrespondence, a: &DgQuiver, b: &DgQuiver) -> Result<Option<Mismatch>> {
    map.validate(a.quiver(), b.quiver())?;
    for arrow in a.quiver().arrows() {
        let (image, s) = map.get(&arrow.name).expect("validated");
        let found = map.transport(b.quiver(), &a.d(&arrow.name))?;
        let expected = b.d(image).scale(s);
        if found != expected {
            return Ok(Some(Mismatch {
                arrow: arrow.name.clone(),
                expected,
                found,
            }));
        }
    }
    Ok(None)
}

/// Which scalars an isomorphism may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarDomain {
    Signs,
    Field,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoResult {
    Found(ArrowCorrespondence),
    NotIsomorphic,
    Inconclusive(String),
}

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

type Class = (VertexId, VertexId, i64);

struct Search<'a> {
    a: &'a DgQuiver,
    b: &'a DgQuiver,
    domain: ScalarDomain,
    order: Vec<Arrow>,
    candidates: Vec<Vec<ArrowName>>,
    /// arrows of `a` whose differential can be checked once position k is assigned
    checks_at: Vec<Vec<ArrowName>>,
    nodes: usize,
    cap: usize,
    inconclusive: Option<String>,
}

fn class(a: &Arrow) -> Class {
    (a.source, a.target, a.degree)
}

/// Searches for a vertex-fixing isomorphism `a -> b`, trying bijections in
/// lexicographic order and solving for the scalars of each.
pub fn iso_search(a: &DgQuiver, b: &DgQuiver, domain: ScalarDomain, node_cap: usize) -> Result<IsoResult> {
    let (qa, qb) = (a.quiver(), b.quiver());
    if qa.vertex_count() != qb.vertex_count() || qa.arrow_count() != qb.arrow_count() {
        return Ok(IsoResult::NotIsomorphic);
    }
    let mut classes_b: BTreeMap<Class, Vec<ArrowName>> = BTreeMap::new();
    for x in qb.arrows() {
        classes_b.entry(class(x)).or_default().push(x.name.clone());
    }
    let mut count_a: BTreeMap<Class, usize> = BTreeMap::new();
    for x in qa.arrows() {
        *count_a.entry(class(x)).or_default() += 1;
    }
    if count_a.len() != classes_b.len() || count_a.iter().any(|(c, n)| classes_b.get(c).map(Vec::len) != Some(*n)) {
        return Ok(IsoResult::NotIsomorphic);
    }

    let mut order: Vec<Arrow> = qa.arrows().cloned().collect();
    order.sort_by(|x, y| (class(x), &x.name).cmp(&(class(y), &y.name)));
    let position: BTreeMap<&ArrowName, usize> = order.iter().enumerate().map(|(k, x)| (&x.name, k)).collect();
    let mut checks_at = vec![Vec::new(); order.len()];
    for x in &order {
        let mut last = position[&x.name];
        for p in a.d(&x.name).paths() {
            for n in p.arrows() {
                last = last.max(position[n]);
            }
        }
        checks_at[last].push(x.name.clone());
    }
    let candidates = order.iter().map(|x| classes_b[&class(x)].clone()).collect();
    let mut search = Search {
        a,
        b,
        domain,
        order,
        candidates,
        checks_at,
        nodes: 0,
        cap: node_cap,
        inconclusive: None,
    };
    let mut assignment = BTreeMap::new();
    let mut used = BTreeSet::new();
    match search.extend(&mut assignment, &mut used, 0)? {
        Some(found) => {
            // soundness: every witness is an isomorphism
            if let Some(m) = equal_under(&found, a, b)? {
                return Err(Error::InvalidCorrespondence(format!(
                    "internal: witness fails on `{}`",
                    m.arrow
                )));
            }
            Ok(IsoResult::Found(found))
        }
        None => Ok(match search.inconclusive {
            Some(why) => IsoResult::Inconclusive(why),
            None => IsoResult::NotIsomorphic,
        }),
    }
}

impl Search<'_> {
    fn extend(
        &mut self,
        assignment: &mut BTreeMap<ArrowName, ArrowName>,
        used: &mut BTreeSet<ArrowName>,
        k: usize,
    ) -> Result<Option<ArrowCorrespondence>> {
        if k == self.order.len() {
            return self.solve_scalars(assignment);
        }
        let name = self.order[k].name.clone();
        for cand in self.candidates[k].clone() {
            if used.contains(&cand) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                self.inconclusive = Some(format!("search exceeded {} nodes", self.cap));
                return Ok(None);
            }
            assignment.insert(name.clone(), cand.clone());
            used.insert(cand.clone());
            if self.supports_agree(assignment, k)? {
                if let Some(found) = self.extend(assignment, used, k + 1)? {
                    return Ok(Some(found));
                }
                if self.nodes > self.cap {
                    return Ok(None);
                }
            }
            assignment.remove(&name);
            used.remove(&cand);
        }
        Ok(None)
    }

    fn image_path(&self, assignment: &BTreeMap<ArrowName, ArrowName>, p: &Path) -> Result<Path> {
        if p.is_stationary() {
            return Ok(p.clone());
        }
        Path::from_names(self.b.quiver(), p.arrows().iter().map(|n| assignment[n].clone()))
    }

    fn supports_agree(&self, assignment: &BTreeMap<ArrowName, ArrowName>, k: usize) -> Result<bool> {
        for x in &self.checks_at[k] {
            let da = self.a.d(x);
            let db = self.b.d(&assignment[x]);
            if da.len() != db.len() {
                return Ok(false);
            }
            for p in da.paths() {
                if db.coefficient(&self.image_path(assignment, p)?).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Per term: `coeff_a * Π s_factors = s_x * coeff_b`.
    fn constraints(&self, assignment: &BTreeMap<ArrowName, ArrowName>) -> Result<Vec<(Vec<usize>, usize, Scalar)>> {
        let index: BTreeMap<&ArrowName, usize> = self.order.iter().enumerate().map(|(k, x)| (&x.name, k)).collect();
        let mut out = Vec::new();
        for x in &self.order {
            let db = self.b.d(&assignment[&x.name]);
            for (p, c) in self.a.d(&x.name).terms() {
                let cb = db.coefficient(&self.image_path(assignment, p)?);
                let factors = p.arrows().iter().map(|n| index[n]).collect();
                out.push((factors, index[&x.name], cb / c));
            }
        }
        Ok(out)
    }

    fn solve_scalars(&mut self, assignment: &BTreeMap<ArrowName, ArrowName>) -> Result<Option<ArrowCorrespondence>> {
        let n = self.order.len();
        let constraints = self.constraints(assignment)?;
        // signs over GF(2)
        let mut rows = Vec::new();
        for (factors, x, ratio) in &constraints {
            if self.domain == ScalarDomain::Signs && ratio.abs() != Scalar::one() {
                return Ok(None);
            }
            let mut row = vec![false; n + 1];
            for &f in factors {
                row[f] ^= true;
            }
            row[*x] ^= true;
            row[n] = ratio.is_negative();
            rows.push(row);
        }
        let Some(sign_bits) = solve_gf2(rows, n) else {
            return Ok(None);
        };
        let mut magnitudes = vec![Scalar::one(); n];
        if self.domain == ScalarDomain::Field {
            match solve_magnitudes(&constraints, n) {
                Magnitudes::Solved(m) => magnitudes = m,
                Magnitudes::Inconsistent => return Ok(None),
                Magnitudes::NonIntegral => {
                    self.inconclusive =
                        Some("scalar system has only non-integral exponent solutions for some bijection".into());
                    return Ok(None);
                }
            }
        }
        let mut map = ArrowCorrespondence::default();
        for (k, x) in self.order.iter().enumerate() {
            let s = if sign_bits[k] {
                -magnitudes[k].clone()
            } else {
                magnitudes[k].clone()
            };
            map.insert(x.name.clone(), assignment[&x.name].clone(), s);
        }
        Ok(Some(map))
    }
}

/// Solves `rows * x = rhs` over GF(2), free variables set to 0.
fn solve_gf2(mut rows: Vec<Vec<bool>>, n: usize) -> Option<Vec<bool>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&k| rows[k][col]) else {
            continue;
        };
        rows.swap(r, p);
        for k in 0..rows.len() {
            if k != r && rows[k][col] {
                let pivot = rows[r].clone();
                for (a, b) in rows[k].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n]) {
        return None;
    }
    let mut x = vec![false; n];
    for (k, &col) in pivots.iter().enumerate() {
        x[col] = rows[k][n];
    }
    Some(x)
}

enum Magnitudes {
    Solved(Vec<Scalar>),
    Inconsistent,
    NonIntegral,
}

fn factor(mut n: BigInt, out: &mut BTreeMap<BigInt, i64>, exponent_sign: i64) {
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        while n.is_multiple_of(&d) {
            n /= &d;
            *out.entry(d.clone()).or_default() += exponent_sign;
        }
        d += 1;
    }
    if n > BigInt::one() {
        *out.entry(n).or_default() += exponent_sign;
    }
}

/// Solves `Σ e_factors - e_x = v_p(|ratio|)` over the rationals, one prime at a time.
fn solve_magnitudes(constraints: &[(Vec<usize>, usize, Scalar)], n: usize) -> Magnitudes {
    let valuations: Vec<BTreeMap<BigInt, i64>> = constraints
        .iter()
        .map(|(_, _, ratio)| {
            let mut v = BTreeMap::new();
            factor(ratio.numer().abs(), &mut v, 1);
            factor(ratio.denom().abs(), &mut v, -1);
            v
        })
        .collect();
    let primes: BTreeSet<BigInt> = valuations.iter().flat_map(|v| v.keys().cloned()).collect();
    let mut magnitudes = vec![Scalar::one(); n];
    for p in primes {
        let mut rows: Vec<Vec<BigRational>> = constraints
            .iter()
            .zip(&valuations)
            .map(|((factors, x, _), v)| {
                let mut row = vec![BigRational::zero(); n + 1];
                for &f in factors {
                    row[f] += scalar(1);
                }
                row[*x] -= scalar(1);
                row[n] = scalar(*v.get(&p).unwrap_or(&0));
                row
            })
            .collect();
        let Some(exponents) = solve_rational(&mut rows, n) else {
            return Magnitudes::Inconsistent;
        };
        for (k, e) in exponents.iter().enumerate() {
            if !e.is_integer() {
                return Magnitudes::NonIntegral;
            }
            let e = e.to_integer();
            let base = BigRational::from_integer(p.clone());
            let power = num_traits::pow(base, e.magnitude().try_into().unwrap_or(0usize));
            magnitudes[k] *= if e.is_negative() { Scalar::one() / power } else { power };
        }
    }
    Magnitudes::Solved(magnitudes)
}

fn solve_rational(rows: &mut [Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v /= &lead;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][col].is_zero() {
                let f = rows[k][col].clone();
                let pivot = rows[r].clone();
                for (a, b) in rows[k].iter_mut().zip(pivot) {
                    *a -= &f * b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (k, &col) in pivots.iter().enumerate() {
        x[col] = rows[k][n].clone();
    }
    Some(x)
}
