use std::fmt;
use std::sync::Arc;

use super::VertexId;

/// Identifier of an arrow.
///
/// Names of generated arrows are built structurally through the constructors
/// below, so that a mutated quiver can be serialized and read back with the
/// same identities: `alpha*`, `(alpha|phi)`, `(phi|alpha^-1)`,
/// `(alpha|phi|beta^-1)`, `phi^op` and the Ginzburg loops `l_3`.
/// Ordering is lexicographic on the rendered name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowName(Arc<str>);

impl ArrowName {
    pub fn new(name: impl AsRef<str>) -> Self {
        ArrowName(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The reversed arrow `alpha*`.
    pub fn star(&self) -> Self {
        ArrowName::new(format!("{}*", self.0))
    }

    /// The opposite arrow `phi^op` of a Ginzburg construction.
    pub fn op(&self) -> Self {
        ArrowName::new(format!("{}^op", self.0))
    }

    /// The Ginzburg loop at a vertex.
    pub fn ginzburg_loop(vertex: VertexId) -> Self {
        ArrowName::new(format!("l_{}", vertex.0))
    }

    /// Formal composite `alpha phi` (`phi` applied first).
    pub fn comp(alpha: &ArrowName, phi: &ArrowName) -> Self {
        ArrowName::new(format!("({}|{})", alpha.0, phi.0))
    }

    /// Formal anti-composite `phi alpha^-1`.
    pub fn anti_comp(phi: &ArrowName, alpha: &ArrowName) -> Self {
        ArrowName::new(format!("({}|{}^-1)", phi.0, alpha.0))
    }

    /// Formal conjugate `alpha phi beta^-1` of a loop `phi`.
    pub fn conj(alpha: &ArrowName, phi: &ArrowName, beta: &ArrowName) -> Self {
        ArrowName::new(format!("({}|{}|{}^-1)", alpha.0, phi.0, beta.0))
    }
}

impl fmt::Display for ArrowName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ArrowName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.0)
    }
}

impl From<&str> for ArrowName {
    fn from(s: &str) -> Self {
        ArrowName::new(s)
    }
}
