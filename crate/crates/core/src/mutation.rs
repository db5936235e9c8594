//! Combinatorial silting mutation of a dg quiver at a vertex.
//!
//! Paths of the mutated quiver are handled as words of [`Token`]s: arrows of
//! the original quiver, reversed arrows `alpha*` and formal inverses
//! `alpha^-1` of the arrows in the mutation set. A word is turned into a path
//! of the mutated quiver by [`MutationContext::group`], which bonds every
//! `alpha` to the arrow applied before it and every `alpha^-1` to the arrow
//! applied after it. Each token can bond with at most one neighbour on each
//! side, so grouping is unique.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{scalar, sign, Arrow, ArrowName, DgQuiver, Element, Path, Quiver, Scalar, VertexId};
use crate::error::{Error, Result};

/// Structured identity of an arrow of the mutated quiver.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MutArrowName {
    /// An arrow of the original quiver outside the mutation set.
    Plain(ArrowName),
    /// `alpha*`, reversing an arrow of the mutation set.
    Star(ArrowName),
    /// `alpha phi` for `phi` ending at the mutation vertex.
    Comp(ArrowName, ArrowName),
    /// `phi alpha^-1` for `phi` starting at the mutation vertex.
    AntiComp(ArrowName, ArrowName),
    /// `alpha phi beta^-1` for a loop `phi` at the mutation vertex.
    Conj(ArrowName, ArrowName, ArrowName),
}

impl MutArrowName {
    pub fn name(&self) -> ArrowName {
        match self {
            MutArrowName::Plain(p) => p.clone(),
            MutArrowName::Star(a) => a.star(),
            MutArrowName::Comp(a, p) => ArrowName::comp(a, p),
            MutArrowName::AntiComp(p, a) => ArrowName::anti_comp(p, a),
            MutArrowName::Conj(a, p, b) => ArrowName::conj(a, p, b),
        }
    }

    fn tokens(&self) -> Vec<Token> {
        match self {
            MutArrowName::Plain(p) => vec![Token::Arrow(p.clone())],
            MutArrowName::Star(a) => vec![Token::Star(a.clone())],
            MutArrowName::Comp(a, p) => vec![Token::Arrow(a.clone()), Token::Arrow(p.clone())],
            MutArrowName::AntiComp(p, a) => vec![Token::Arrow(p.clone()), Token::Inv(a.clone())],
            MutArrowName::Conj(a, p, b) => {
                vec![Token::Arrow(a.clone()), Token::Arrow(p.clone()), Token::Inv(b.clone())]
            }
        }
    }
}

/// Letter of a word in the mutated quiver, before grouping.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Token {
    Arrow(ArrowName),
    Star(ArrowName),
    Inv(ArrowName),
}

/// Everything mutation at a vertex needs: the source quiver, the mutation
/// set `A` of degree-0 arrows leaving the vertex, and the mutated quiver.
#[derive(Clone, Debug)]
pub struct MutationContext {
    source: Quiver,
    vertex: VertexId,
    mutation_set: BTreeSet<ArrowName>,
    mutated: Quiver,
    lookup: BTreeMap<ArrowName, MutArrowName>,
}

impl MutationContext {
    pub fn new(source: &Quiver, vertex: VertexId) -> Result<Self> {
        if !source.has_vertex(vertex) {
            return Err(Error::UnknownVertex(vertex));
        }
        if let Some(l) = source.arrows_from(vertex).find(|a| a.is_loop() && a.degree == 0) {
            return Err(Error::LoopAtVertex(vertex, l.name.clone()));
        }
        let mutation_set: BTreeSet<ArrowName> = source
            .arrows_from(vertex)
            .filter(|a| a.degree == 0)
            .map(|a| a.name.clone())
            .collect();
        let mut ctx = MutationContext {
            source: source.clone(),
            vertex,
            mutation_set,
            mutated: Quiver::new(source.vertex_count()),
            lookup: BTreeMap::new(),
        };
        ctx.build_mutated_quiver()?;
        Ok(ctx)
    }

    fn chi(&self, v: VertexId) -> i64 {
        i64::from(v == self.vertex)
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn source(&self) -> &Quiver {
        &self.source
    }

    pub fn mutated(&self) -> &Quiver {
        &self.mutated
    }

    pub fn mutation_set(&self) -> &BTreeSet<ArrowName> {
        &self.mutation_set
    }

    pub fn in_mutation_set(&self, name: &ArrowName) -> bool {
        self.mutation_set.contains(name)
    }

    /// Structure of an arrow of the mutated quiver.
    pub fn classify(&self, name: &ArrowName) -> Option<&MutArrowName> {
        self.lookup.get(name)
    }

    /// Degree in the mutated quiver of an arrow of the source quiver outside `A`.
    pub fn plain_degree(&self, phi: &Arrow) -> i64 {
        phi.degree - self.chi(phi.source) + self.chi(phi.target)
    }

    fn insert(&mut self, m: MutArrowName, source: VertexId, target: VertexId, degree: i64) -> Result<()> {
        let name = m.name();
        if self.lookup.contains_key(&name) {
            return Err(Error::NameCollision(name));
        }
        self.mutated.add_arrow(Arrow {
            name: name.clone(),
            source,
            target,
            degree,
        })?;
        self.lookup.insert(name, m);
        Ok(())
    }

    fn build_mutated_quiver(&mut self) -> Result<()> {
        let i = self.vertex;
        let arrows: Vec<Arrow> = self.source.arrows().cloned().collect();
        let alphas: Vec<Arrow> = arrows
            .iter()
            .filter(|a| self.in_mutation_set(&a.name))
            .cloned()
            .collect();
        for phi in &arrows {
            if self.in_mutation_set(&phi.name) {
                continue;
            }
            let deg = self.plain_degree(phi);
            self.insert(MutArrowName::Plain(phi.name.clone()), phi.source, phi.target, deg)?;
        }
        for alpha in &alphas {
            self.insert(MutArrowName::Star(alpha.name.clone()), alpha.target, i, 0)?;
        }
        for phi in arrows.iter().filter(|a| a.target == i) {
            let deg = self.plain_degree(phi) - 1;
            for alpha in &alphas {
                self.insert(
                    MutArrowName::Comp(alpha.name.clone(), phi.name.clone()),
                    phi.source,
                    alpha.target,
                    deg,
                )?;
            }
        }
        let leaving: Vec<&Arrow> = arrows
            .iter()
            .filter(|a| a.source == i && !self.in_mutation_set(&a.name))
            .collect();
        for phi in leaving {
            let deg = self.plain_degree(phi) + 1;
            for alpha in &alphas {
                self.insert(
                    MutArrowName::AntiComp(phi.name.clone(), alpha.name.clone()),
                    alpha.target,
                    phi.target,
                    deg,
                )?;
            }
        }
        for phi in arrows.iter().filter(|a| a.source == i && a.target == i) {
            let deg = self.plain_degree(phi);
            for alpha in &alphas {
                for beta in &alphas {
                    self.insert(
                        MutArrowName::Conj(alpha.name.clone(), phi.name.clone(), beta.name.clone()),
                        beta.target,
                        alpha.target,
                        deg,
                    )?;
                }
            }
        }
        Ok(())
    }

    /// Deletes every term whose rightmost factor lies in `A`.
    pub fn red(&self, x: &Element) -> Element {
        x.filter(|p| p.rightmost().is_none_or(|a| !self.in_mutation_set(a)))
    }

    /// Keeps the terms whose rightmost factor is `alpha` and strips it.
    pub fn slash(&self, x: &Element, alpha: &ArrowName) -> Result<Element> {
        let arrow = self.source.get(alpha)?;
        let mut out = Element::zero();
        for (p, c) in x.terms() {
            if let Some(q) = p.strip_rightmost(arrow) {
                out.add_term(q, c.clone());
            }
        }
        Ok(out)
    }

    /// Realizes `dec`: inserts `Δ = 1 - Σ_α α^-1 α` at every interior passage
    /// through the vertex entering by any arrow and leaving by an arrow outside
    /// `A`, optionally prefixes `lead` and appends `trail^-1`, then groups the
    /// result into paths of the mutated quiver.
    pub fn normalize(&self, lead: Option<&ArrowName>, word: &Element, trail: Option<&ArrowName>) -> Result<Element> {
        let mut out = Element::zero();
        for (p, c) in word.terms() {
            for (mut tokens, k) in self.expand_delta(p)? {
                let mut source = p.source();
                let mut target = p.target();
                if let Some(a) = lead {
                    let arrow = self.source.get(a)?;
                    if p.target() != arrow.source {
                        return Err(Error::Normalization(format!("{a} cannot follow {p}")));
                    }
                    target = arrow.target;
                    tokens.insert(0, Token::Arrow(a.clone()));
                }
                if let Some(a) = trail {
                    let arrow = self.source.get(a)?;
                    if p.source() != self.vertex {
                        return Err(Error::Normalization(format!("{a}^-1 cannot precede {p}")));
                    }
                    source = arrow.target;
                    tokens.push(Token::Inv(a.clone()));
                }
                let path = self.group(&tokens, source, target)?;
                out.add_term(path, c * k);
            }
        }
        Ok(out)
    }

    /// `dec(x)`.
    pub fn dec(&self, x: &Element) -> Result<Element> {
        self.normalize(None, x, None)
    }

    fn expand_delta(&self, p: &Path) -> Result<Vec<(Vec<Token>, Scalar)>> {
        let arrows = p.arrows();
        let mut words: Vec<(Vec<Token>, Scalar)> = vec![(Vec::new(), scalar(1))];
        for (m, a) in arrows.iter().enumerate() {
            let mut next = Vec::with_capacity(words.len());
            let junction = m > 0 && !self.in_mutation_set(&arrows[m - 1]) && self.source.get(a)?.target == self.vertex;
            for (w, c) in words {
                if junction {
                    for alpha in &self.mutation_set {
                        let mut w2 = w.clone();
                        w2.push(Token::Inv(alpha.clone()));
                        w2.push(Token::Arrow(alpha.clone()));
                        w2.push(Token::Arrow(a.clone()));
                        next.push((w2, -c.clone()));
                    }
                }
                let mut w1 = w;
                w1.push(Token::Arrow(a.clone()));
                next.push((w1, c));
            }
            words = next;
        }
        Ok(words)
    }

    /// Groups a token word (written order) into a path of the mutated quiver.
    pub fn group(&self, tokens: &[Token], source: VertexId, target: VertexId) -> Result<Path> {
        let i = self.vertex;
        let fail = |why: &str| Error::Normalization(format!("{why} in {tokens:?}"));
        let mut names = Vec::new();
        let mut k = 0;
        while k < tokens.len() {
            match &tokens[k] {
                Token::Arrow(a) if self.in_mutation_set(a) => {
                    let phi = match tokens.get(k + 1) {
                        Some(Token::Arrow(phi)) if !self.in_mutation_set(phi) => phi,
                        _ => return Err(fail("arrow of A is not preceded by an arrow")),
                    };
                    let phi_arrow = self.source.get(phi)?;
                    if phi_arrow.target != i {
                        return Err(fail("arrow of A preceded by an arrow not ending at the vertex"));
                    }
                    if let Some(Token::Inv(b)) = tokens.get(k + 2) {
                        if phi_arrow.source != i {
                            return Err(fail("inverse after an arrow not starting at the vertex"));
                        }
                        names.push(MutArrowName::Conj(a.clone(), phi.clone(), b.clone()));
                        k += 3;
                    } else {
                        names.push(MutArrowName::Comp(a.clone(), phi.clone()));
                        k += 2;
                    }
                }
                Token::Arrow(phi) => {
                    if let Some(Token::Inv(b)) = tokens.get(k + 1) {
                        if self.source.get(phi)?.source != i {
                            return Err(fail("inverse after an arrow not starting at the vertex"));
                        }
                        names.push(MutArrowName::AntiComp(phi.clone(), b.clone()));
                        k += 2;
                    } else {
                        names.push(MutArrowName::Plain(phi.clone()));
                        k += 1;
                    }
                }
                Token::Star(a) => {
                    names.push(MutArrowName::Star(a.clone()));
                    k += 1;
                }
                Token::Inv(_) => return Err(fail("inverse not followed by an arrow")),
            }
        }
        if names.is_empty() {
            if source != target {
                return Err(fail("empty word between distinct vertices"));
            }
            return Ok(Path::stationary(source));
        }
        let names: Vec<ArrowName> = names.iter().map(MutArrowName::name).collect();
        let path = Path::from_names(&self.mutated, names)?;
        if path.source() != source || path.target() != target {
            return Err(fail("grouped path has unexpected endpoints"));
        }
        Ok(path)
    }

    /// Token word of a path of the mutated quiver.
    pub fn ungroup(&self, p: &Path) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        for n in p.arrows() {
            let m = self
                .lookup
                .get(n)
                .ok_or_else(|| Error::Normalization(format!("`{n}` is not a token-built arrow")))?;
            out.extend(m.tokens());
        }
        Ok(out)
    }

    /// Right multiplication `x · alpha^-1` of an element of the mutated quiver.
    pub fn times_inverse(&self, x: &Element, alpha: &ArrowName) -> Result<Element> {
        let target_of_alpha = self.source.get(alpha)?.target;
        let mut out = Element::zero();
        for (p, c) in x.terms() {
            if p.source() != self.vertex {
                return Err(Error::Normalization(format!("{alpha}^-1 cannot precede {p}")));
            }
            let mut tokens = self.ungroup(p)?;
            tokens.push(Token::Inv(alpha.clone()));
            out.add_term(self.group(&tokens, target_of_alpha, p.target())?, c.clone());
        }
        Ok(out)
    }

    /// The single-arrow path of an arrow of the mutated quiver.
    pub fn arrow_path(&self, m: &MutArrowName) -> Result<Element> {
        Ok(Element::from_path(Path::arrow(self.mutated.get(&m.name())?)))
    }

    /// The mutated differential of one arrow, given the differential `d` of
    /// the source quiver on arrows.
    pub fn mutated_differential<F>(&self, m: &MutArrowName, d: &F) -> Result<Element>
    where
        F: Fn(&ArrowName) -> Element,
    {
        let i = self.vertex;
        match m {
            MutArrowName::Plain(phi) => {
                let arrow = self.source.get(phi)?;
                let reduced = self.dec(&self.red(&d(phi)))?;
                if arrow.target != i {
                    return Ok(reduced);
                }
                let mut out = -reduced;
                for alpha in &self.mutation_set {
                    let star = self.arrow_path(&MutArrowName::Star(alpha.clone()))?;
                    let comp = self.arrow_path(&MutArrowName::Comp(alpha.clone(), phi.clone()))?;
                    out += star.mul(&comp)?;
                }
                Ok(out)
            }
            MutArrowName::Comp(alpha, phi) => self.normalize(Some(alpha), &self.red(&d(phi)), None),
            MutArrowName::Star(_) => Ok(Element::zero()),
            MutArrowName::AntiComp(phi, alpha) => {
                let arrow = self.source.get(phi)?;
                let plain = MutArrowName::Plain(phi.clone());
                let first = self.times_inverse(&self.mutated_differential(&plain, d)?, alpha)?;
                let second = self
                    .arrow_path(&plain)?
                    .mul(&self.arrow_path(&MutArrowName::Star(alpha.clone()))?)?
                    .scale(&sign(self.plain_degree(arrow)));
                let third = self
                    .dec(&self.slash(&d(phi), alpha)?)?
                    .scale(&sign(self.chi(arrow.target)));
                Ok(first + second - third)
            }
            MutArrowName::Conj(alpha, phi, beta) => {
                let comp = MutArrowName::Comp(alpha.clone(), phi.clone());
                let comp_degree = self.mutated.degree(&comp.name());
                let first = self.times_inverse(&self.mutated_differential(&comp, d)?, beta)?;
                let second = self
                    .arrow_path(&comp)?
                    .mul(&self.arrow_path(&MutArrowName::Star(beta.clone()))?)?
                    .scale(&sign(comp_degree));
                let third = self.normalize(Some(alpha), &self.slash(&d(phi), beta)?, None)?;
                Ok(first + second - third)
            }
        }
    }
}

/// Silting mutation of `dg` at `vertex`, with `∂² = 0` verified.
pub fn mutate(dg: &DgQuiver, vertex: VertexId) -> Result<DgQuiver> {
    mutate_with_context(dg, vertex).map(|(m, _)| m)
}

/// As [`mutate`], also returning the context used.
pub fn mutate_with_context(dg: &DgQuiver, vertex: VertexId) -> Result<(DgQuiver, MutationContext)> {
    let ctx = MutationContext::new(dg.quiver(), vertex)?;
    let d = |a: &ArrowName| dg.d(a);
    let mut diff = BTreeMap::new();
    for (name, m) in &ctx.lookup {
        let value = ctx.mutated_differential(m, &d)?;
        if !value.is_zero() {
            diff.insert(name.clone(), value);
        }
    }
    let mutated = DgQuiver::new(ctx.mutated.clone(), diff)?;
    // d² = 0 holds for every valid input; a failure here is a bug.
    mutated.check_d_squared().into_result()?;
    Ok((mutated, ctx))
}

/// Right silting mutation, computed as left mutation of the opposite dg quiver.
pub fn mutate_right(dg: &DgQuiver, vertex: VertexId) -> Result<DgQuiver> {
    Ok(mutate(&dg.opposite(), vertex)?.opposite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn el(q: &Quiver, terms: &[(i64, &[&str])]) -> Element {
        let mut e = Element::zero();
        for (c, names) in terms {
            e.add_term(Path::from_names(q, names.iter().copied()).unwrap(), scalar(*c));
        }
        e
    }

    #[test]
    fn example_41_mutated_quiver() {
        let dg = fixtures::a3_rad2();
        let ctx = MutationContext::new(dg.quiver(), VertexId(1)).unwrap();
        let m = ctx.mutated();
        let mut got: Vec<_> = m
            .arrows()
            .map(|a| (a.name.to_string(), a.source.0, a.target.0, a.degree))
            .collect();
        got.sort();
        assert_eq!(
            got,
            vec![
                ("(omega|phi^-1)".to_string(), 2, 3, 1),
                ("omega".to_string(), 1, 3, 0),
                ("phi*".to_string(), 2, 1, 0),
                ("psi".to_string(), 2, 3, 0),
            ]
        );
    }

    #[test]
    fn example_42_mutated_quiver() {
        let dg = fixtures::example_42();
        let ctx = MutationContext::new(dg.quiver(), VertexId(2)).unwrap();
        let degrees: BTreeMap<String, i64> = ctx.mutated().arrows().map(|a| (a.name.to_string(), a.degree)).collect();
        let expected: BTreeMap<String, i64> = [
            ("alpha", 1),
            ("beta*", 0),
            ("delta*", 0),
            ("s", 0),
            ("(beta|alpha)", 0),
            ("(delta|alpha)", 0),
            ("r", 1),
            ("(s|beta^-1)", 1),
            ("(s|delta^-1)", 1),
            ("x", 2),
            ("gamma", 0),
        ]
        .into_iter()
        .map(|(n, d)| (n.to_string(), d))
        .collect();
        assert_eq!(degrees, expected);
    }

    #[test]
    fn red_and_slash() {
        let dg = fixtures::a3_rad2();
        let q = dg.quiver();
        let ctx = MutationContext::new(q, VertexId(1)).unwrap();
        let psiphi = el(q, &[(1, &["psi", "phi"])]);
        assert!(ctx.red(&psiphi).is_zero());
        assert_eq!(ctx.slash(&psiphi, &"phi".into()).unwrap(), el(q, &[(1, &["psi"])]));

        let ctx2 = MutationContext::new(q, VertexId(2)).unwrap();
        assert_eq!(ctx2.red(&psiphi), psiphi);
        assert!(ctx2.slash(&psiphi, &"psi".into()).unwrap().is_zero());
    }

    #[test]
    fn normalize_inserts_delta() {
        let dg = fixtures::example_42();
        let q = dg.quiver();
        let ctx = MutationContext::new(q, VertexId(2)).unwrap();
        let s_alpha = el(q, &[(1, &["s", "alpha"])]);
        let got = ctx.dec(&s_alpha).unwrap();
        let m = ctx.mutated();
        let expected = el(
            m,
            &[
                (1, &["s", "alpha"]),
                (-1, &["(s|beta^-1)", "(beta|alpha)"]),
                (-1, &["(s|delta^-1)", "(delta|alpha)"]),
            ],
        );
        assert_eq!(got, expected);
        // a path avoiding the vertex is untouched
        let gamma = el(q, &[(1, &["gamma"])]);
        assert_eq!(ctx.dec(&gamma).unwrap(), el(m, &[(1, &["gamma"])]));
    }

    #[test]
    fn trail_after_arrow_of_a_is_an_error() {
        let dg = fixtures::example_42();
        let q = dg.quiver();
        let ctx = MutationContext::new(q, VertexId(2)).unwrap();
        let beta = el(q, &[(1, &["beta"])]);
        assert!(matches!(
            ctx.normalize(None, &beta, Some(&"delta".into())),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn example_41_differential() {
        let dg = fixtures::a3_rad2();
        let m = mutate(&dg, VertexId(1)).unwrap();
        let q = m.quiver();
        assert_eq!(
            m.d(&"(omega|phi^-1)".into()),
            el(q, &[(1, &["omega", "phi*"]), (-1, &["psi"])])
        );
        assert_eq!(m.diff_map().len(), 1);
    }

    #[test]
    fn example_42_differentials() {
        let dg = fixtures::example_42();
        let m = mutate(&dg, VertexId(2)).unwrap();
        let q = m.quiver();
        let d = |n: &str| m.d(&n.into());
        assert_eq!(
            d("alpha"),
            el(q, &[(1, &["beta*", "(beta|alpha)"]), (1, &["delta*", "(delta|alpha)"])])
        );
        assert_eq!(d("r"), el(q, &[(1, &["(beta|alpha)"])]));
        assert!(d("s").is_zero());
        assert_eq!(
            d("x"),
            el(
                q,
                &[
                    (1, &["s", "alpha"]),
                    (-1, &["(s|beta^-1)", "(beta|alpha)"]),
                    (-1, &["(s|delta^-1)", "(delta|alpha)"]),
                    (-1, &["gamma", "r"]),
                ]
            )
        );
        assert_eq!(d("(s|beta^-1)"), el(q, &[(1, &["s", "beta*"]), (-1, &["gamma"])]));
        assert_eq!(d("(s|delta^-1)"), el(q, &[(1, &["s", "delta*"])]));
        assert!(d("beta*").is_zero());
        assert_eq!(m.diff_map().len(), 5);
    }

    #[test]
    fn isolated_vertex_is_unchanged() {
        let mut q = fixtures::a3_rad2().quiver().clone();
        let mut big = Quiver::new(4);
        for a in q.arrows() {
            big.add_arrow(a.clone()).unwrap();
        }
        q = big;
        let dg = DgQuiver::new(q, fixtures::a3_rad2().diff_map().clone()).unwrap();
        assert_eq!(mutate(&dg, VertexId(4)).unwrap(), dg);
    }

    #[test]
    fn degree_zero_loop_is_rejected() {
        let q = Quiver::with_arrows(1, [Arrow::new("x", 1, 1, 0)]).unwrap();
        let dg = DgQuiver::with_zero_differential(q);
        assert!(matches!(mutate(&dg, VertexId(1)), Err(Error::LoopAtVertex(..))));
    }

    #[test]
    fn right_mutation_squares_to_zero() {
        for v in 1..=5 {
            let m = mutate_right(&fixtures::example_42(), VertexId(v)).unwrap();
            assert!(m.check_d_squared().passed());
        }
    }
}
