use std::collections::BTreeMap;
use std::fmt;

use super::ArrowName;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: ArrowName,
    pub source: VertexId,
    pub target: VertexId,
    pub degree: i64,
}

impl Arrow {
    pub fn new(name: impl Into<ArrowName>, source: u32, target: u32, degree: i64) -> Self {
        Arrow {
            name: name.into(),
            source: VertexId(source),
            target: VertexId(target),
            degree,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A graded quiver on the vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: u32,
    arrows: BTreeMap<ArrowName, Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: u32) -> Self {
        Quiver {
            vertex_count,
            arrows: BTreeMap::new(),
        }
    }

    pub fn with_arrows(vertex_count: u32, arrows: impl IntoIterator<Item = Arrow>) -> Result<Self> {
        let mut q = Quiver::new(vertex_count);
        for a in arrows {
            q.add_arrow(a)?;
        }
        Ok(q)
    }

    pub fn add_arrow(&mut self, arrow: Arrow) -> Result<()> {
        for v in [arrow.source, arrow.target] {
            if !self.has_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        if arrow.degree < 0 {
            return Err(Error::NegativeDegree {
                name: arrow.name,
                degree: arrow.degree,
            });
        }
        if self.arrows.contains_key(&arrow.name) {
            return Err(Error::DuplicateArrow(arrow.name));
        }
        self.arrows.insert(arrow.name.clone(), arrow);
        Ok(())
    }

    pub fn remove_arrow(&mut self, name: &ArrowName) -> Option<Arrow> {
        self.arrows.remove(name)
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.vertex_count).map(VertexId)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        v.0 >= 1 && v.0 <= self.vertex_count
    }

    pub fn arrow(&self, name: &ArrowName) -> Option<&Arrow> {
        self.arrows.get(name)
    }

    pub fn get(&self, name: &ArrowName) -> Result<&Arrow> {
        self.arrows.get(name).ok_or_else(|| Error::UnknownArrow(name.clone()))
    }

    pub fn contains(&self, name: &ArrowName) -> bool {
        self.arrows.contains_key(name)
    }

    /// Degree of a known arrow; panics on unknown names, which callers rule
    /// out by validating paths against the quiver first.
    pub fn degree(&self, name: &ArrowName) -> i64 {
        match self.arrows.get(name) {
            Some(a) => a.degree,
            None => panic!("degree of unknown arrow {name:?}"),
        }
    }

    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> {
        self.arrows.values()
    }

    pub fn arrow_names(&self) -> impl Iterator<Item = &ArrowName> {
        self.arrows.keys()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = &Arrow> {
        self.arrows.values().filter(move |a| a.source == v)
    }

    pub fn arrows_into(&self, v: VertexId) -> impl Iterator<Item = &Arrow> {
        self.arrows.values().filter(move |a| a.target == v)
    }

    /// The same arrows with source and target exchanged.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .values()
            .map(|a| {
                let mut b = a.clone();
                std::mem::swap(&mut b.source, &mut b.target);
                (b.name.clone(), b)
            })
            .collect();
        Quiver {
            vertex_count: self.vertex_count,
            arrows,
        }
    }
}
