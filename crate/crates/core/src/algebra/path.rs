use std::fmt;

use super::{Arrow, ArrowName, Quiver, VertexId};
use crate::error::{Error, Result};

/// A path in a quiver, or the stationary path `e_j` when `arrows` is empty.
///
/// `arrows` is in written order: the last entry is applied first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    arrows: Vec<ArrowName>,
    source: VertexId,
    target: VertexId,
}

impl Path {
    pub fn stationary(v: VertexId) -> Self {
        Path {
            arrows: Vec::new(),
            source: v,
            target: v,
        }
    }

    pub fn arrow(a: &Arrow) -> Self {
        Path {
            arrows: vec![a.name.clone()],
            source: a.source,
            target: a.target,
        }
    }

    /// Builds a path from names in written order, checking composability.
    pub fn from_names<I, N>(quiver: &Quiver, names: I) -> Result<Self>
    where
        I: IntoIterator<Item = N>,
        I::IntoIter: DoubleEndedIterator,
        N: Into<ArrowName>,
    {
        let mut it = names.into_iter().rev();
        let first = it.next().map(Into::into).ok_or_else(|| Error::Composition {
            left: String::new(),
            right: String::new(),
        })?;
        let mut path = Path::arrow(quiver.get(&first)?);
        for n in it {
            let n = n.into();
            let a = Path::arrow(quiver.get(&n)?);
            path = a.compose(&path)?;
        }
        Ok(path)
    }

    /// Rebuilds a path from raw parts without consulting a quiver.
    pub(crate) fn from_parts(arrows: Vec<ArrowName>, source: VertexId, target: VertexId) -> Self {
        Path { arrows, source, target }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[ArrowName] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_stationary(&self) -> bool {
        self.arrows.is_empty()
    }

    /// The factor applied first, if any.
    pub fn rightmost(&self) -> Option<&ArrowName> {
        self.arrows.last()
    }

    pub fn leftmost(&self) -> Option<&ArrowName> {
        self.arrows.first()
    }

    pub fn degree(&self, quiver: &Quiver) -> i64 {
        self.arrows.iter().map(|a| quiver.degree(a)).sum()
    }

    /// `self ∘ rhs`: the path that runs `rhs` and then `self`.
    pub fn compose(&self, rhs: &Path) -> Result<Path> {
        if rhs.target != self.source {
            return Err(Error::Composition {
                left: self.to_string(),
                right: rhs.to_string(),
            });
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + rhs.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&rhs.arrows);
        Ok(Path {
            arrows,
            source: rhs.source,
            target: self.target,
        })
    }

    /// Drops the rightmost factor, which must be `arrow`.
    pub fn strip_rightmost(&self, arrow: &Arrow) -> Option<Path> {
        if self.rightmost() != Some(&arrow.name) {
            return None;
        }
        Some(Path {
            arrows: self.arrows[..self.arrows.len() - 1].to_vec(),
            source: arrow.target,
            target: self.target,
        })
    }

    /// Sub-path `arrows[start..end]` (written order), with endpoints looked up.
    pub fn slice(&self, quiver: &Quiver, start: usize, end: usize) -> Path {
        if start == end {
            // the stationary path at the junction
            let v = if end == self.arrows.len() {
                self.source
            } else {
                quiver.get(&self.arrows[end]).map(|a| a.target).unwrap_or(self.source)
            };
            return Path::stationary(v);
        }
        let target = quiver.get(&self.arrows[start]).expect("arrow of path").target;
        let source = quiver.get(&self.arrows[end - 1]).expect("arrow of path").source;
        Path {
            arrows: self.arrows[start..end].to_vec(),
            source,
            target,
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "e_{}", self.source.0);
        }
        for (k, a) in self.arrows.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Quiver {
        Quiver::with_arrows(
            3,
            [
                Arrow::new("phi", 1, 2, 0),
                Arrow::new("psi", 2, 3, 0),
                Arrow::new("omega", 1, 3, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let q = a3();
        let phi = Path::arrow(q.get(&"phi".into()).unwrap());
        let psi = Path::arrow(q.get(&"psi".into()).unwrap());
        let p = psi.compose(&phi).unwrap();
        assert_eq!(p.to_string(), "psi.phi");
        assert_eq!(p.source(), VertexId(1));
        assert_eq!(p.target(), VertexId(3));
        assert_eq!(p.degree(&q), 0);
    }

    #[test]
    fn stationary_paths_are_units() {
        let q = a3();
        let phi = Path::arrow(q.get(&"phi".into()).unwrap());
        let e2 = Path::stationary(VertexId(2));
        let e1 = Path::stationary(VertexId(1));
        assert_eq!(e2.compose(&phi).unwrap(), phi);
        assert_eq!(phi.compose(&e1).unwrap(), phi);
        assert_eq!(e2.degree(&q), 0);
    }

    #[test]
    fn endpoint_mismatch_is_an_error() {
        let q = a3();
        let phi = Path::arrow(q.get(&"phi".into()).unwrap());
        let psi = Path::arrow(q.get(&"psi".into()).unwrap());
        assert!(matches!(phi.compose(&psi), Err(Error::Composition { .. })));
    }

    #[test]
    fn from_names_and_slices() {
        let q = a3();
        let p = Path::from_names(&q, ["psi", "phi"]).unwrap();
        assert_eq!(p.slice(&q, 0, 1).to_string(), "psi");
        assert_eq!(p.slice(&q, 1, 2).to_string(), "phi");
        assert_eq!(p.slice(&q, 1, 1), Path::stationary(VertexId(2)));
        assert_eq!(p.slice(&q, 2, 2), Path::stationary(VertexId(1)));
        assert!(Path::from_names(&q, ["phi", "psi"]).is_err());
    }
}
