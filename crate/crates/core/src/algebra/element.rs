use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{One, Zero};

use super::{scalar, Path, Quiver, Scalar};
use crate::error::Result;

/// A finite linear combination of paths with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Path, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_path(p: Path) -> Self {
        Element::term(scalar(1), p)
    }

    pub fn term(c: Scalar, p: Path) -> Self {
        let mut e = Element::zero();
        e.add_term(p, c);
        e
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Path, Scalar)> {
        self.terms.into_iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(p, k)| (p.clone(), k * c)).collect(),
        }
    }

    /// Bilinear product `self · rhs` (`rhs` applied first). Every pair of
    /// terms must compose.
    pub fn mul(&self, rhs: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.add_term(p.compose(q)?, a * b);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every path and sums the results with coefficients.
    pub fn try_map<F>(&self, mut f: F) -> Result<Element>
    where
        F: FnMut(&Path) -> Result<Element>,
    {
        let mut out = Element::zero();
        for (p, c) in &self.terms {
            out += f(p)?.scale(c);
        }
        Ok(out)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter<F: FnMut(&Path) -> bool>(&self, mut keep: F) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// `Some(Some(n))` if all paths have degree `n`, `Some(None)` for zero,
    /// `None` if inhomogeneous.
    pub fn homogeneous_degree(&self, quiver: &Quiver) -> Option<Option<i64>> {
        let mut deg = None;
        for p in self.terms.keys() {
            let d = p.degree(quiver);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        Some(deg)
    }

    /// Terms in canonical order: degree, then length, then arrow names.
    pub fn sorted_terms<'a>(&'a self, quiver: &Quiver) -> Vec<(&'a Path, &'a Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(p, _), (q, _)| {
            (p.degree(quiver), p.len(), p.arrows(), p.source()).cmp(&(
                q.degree(quiver),
                q.len(),
                q.arrows(),
                q.source(),
            ))
        });
        v
    }

    /// Renders with the canonical term order of [`Element::sorted_terms`].
    pub fn render(&self, quiver: &Quiver) -> String {
        render_terms(self.sorted_terms(quiver))
    }
}

pub(crate) fn render_terms<'a>(terms: impl IntoIterator<Item = (&'a Path, &'a Scalar)>) -> String {
    let mut s = String::new();
    for (k, (p, c)) in terms.into_iter().enumerate() {
        let negative = c < &Scalar::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        match (k, negative) {
            (0, false) => {}
            (0, true) => s.push('-'),
            (_, false) => s.push_str(" + "),
            (_, true) => s.push_str(" - "),
        }
        if !abs.is_one() {
            s.push_str(&abs.to_string());
            s.push(' ');
        }
        s.push_str(&p.to_string());
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(p, _), (q, _)| (p.len(), p.arrows()).cmp(&(q.len(), q.arrows())));
        f.write_str(&render_terms(v))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AddAssign<Element> for Element {
    fn add_assign(&mut self, rhs: Element) {
        for (p, c) in rhs.terms {
            self.add_term(p, c);
        }
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (p, c) in &rhs.terms {
            self.add_term(p.clone(), c.clone());
        }
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += rhs;
        self
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        -self.clone()
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        self + (-rhs)
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.clone() + (-rhs)
    }
}

impl std::iter::Sum for Element {
    fn sum<I: Iterator<Item = Element>>(iter: I) -> Element {
        let mut out = Element::zero();
        for e in iter {
            out += e;
        }
        out
    }
}
