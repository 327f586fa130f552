//! Laurent expansions of tagged arcs from good matchings of loop graphs.
//!
//! Variables are indexed by dense surface labels: `x_i` for every label
//! (boundary segments stay formal) and `y_i` for interior arcs.

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{AlgebraError, LaurentPolynomial, Monomial, Var, VarNames};
use crate::loopgraph::{build_loop_graph, GoodMatching, LoopError, LoopGraph};
use crate::snakegraph::{build_snake_graph, Matching};
use crate::surface::{Label, Rotation, Step, Surface, Tag, TaggedArc};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error("formula not established: doubly notched arc on a twice-punctured closed surface")]
    TwicePuncturedClosed,
    #[error("doubly notched arc whose underlying plain arc lies in the triangulation is not supported")]
    DoublyNotchedInTriangulation,
    #[error("notched at {0}, a puncture enclosed by a self-folded triangle")]
    SelfFoldedNotch(String),
    #[error("division by the underlying arc failed: {0}")]
    Division(AlgebraError),
    #[error("{0}")]
    Unsupported(String),
}

/// The monomials attached to arcs of the triangulation.
#[derive(Clone, Debug)]
pub struct VariableAssignment {
    n_arcs: usize,
    x: Vec<Monomial>,
    y: Vec<Monomial>,
    names: VarNames,
}

impl VariableAssignment {
    /// `x_τ` is `x_i`, or `x_ℓ x_r` for a loop `ℓ` around radius `r`. A radius on
    /// a positive diagonal contributes `y_r y_ℓ^{-1}`.
    pub fn new(s: &Surface) -> VariableAssignment {
        let n = s.n_arcs();
        let x = (0..s.n_labels())
            .map(|i| match s.radius_of_loop(i) {
                Some(r) => Monomial::x(i as u32).mul(&Monomial::x(r as u32)),
                None => Monomial::x(i as u32),
            })
            .collect();
        let y = (0..n)
            .map(|i| match s.loop_of_radius(i) {
                Some(l) => Monomial::y(i as u32).div(&Monomial::y(l as u32)),
                None => Monomial::y(i as u32),
            })
            .collect();
        VariableAssignment {
            n_arcs: n,
            x,
            y,
            names: var_names(s),
        }
    }

    /// The assignment with the roles of the labels in each pair exchanged.
    pub fn swapped(&self, pairs: &[(Label, Label)]) -> VariableAssignment {
        let sw = |m: &Monomial| -> Monomial { Monomial::from_pairs(m.iter().map(|(v, e)| (swap_var(v, pairs), e))) };
        VariableAssignment {
            n_arcs: self.n_arcs,
            x: self.x.iter().map(sw).collect(),
            y: self.y.iter().map(sw).collect(),
            names: self.names.clone(),
        }
    }

    pub fn x_of(&self, l: Label) -> &Monomial {
        &self.x[l]
    }

    pub fn y_of(&self, l: Label) -> &Monomial {
        &self.y[l]
    }

    pub fn names(&self) -> &VarNames {
        &self.names
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }
}

fn swap_var(v: Var, pairs: &[(Label, Label)]) -> Var {
    let f = |i: u32| -> u32 {
        for &(a, b) in pairs {
            if i as usize == a {
                return b as u32;
            }
            if i as usize == b {
                return a as u32;
            }
        }
        i
    };
    match v {
        Var::X(i) => Var::X(f(i)),
        Var::Y(i) => Var::Y(f(i)),
    }
}

/// `x<label>` for every label and `y<label>` for every interior arc.
pub fn var_names(s: &Surface) -> VarNames {
    VarNames::new(
        s.labels().iter().map(|l| format!("x{l}")).collect(),
        s.labels()[..s.n_arcs()].iter().map(|l| format!("y{l}")).collect(),
    )
}

/// Sets every boundary variable to 1.
pub fn specialize_boundary(p: &LaurentPolynomial, s: &Surface) -> LaurentPolynomial {
    let n = s.n_arcs() as u32;
    p.set_to_one(|v| matches!(v, Var::X(i) if i >= n))
}

pub fn crossing_monomial_of(path: &[Step], s: &Surface, va: &VariableAssignment) -> Monomial {
    path.iter()
        .fold(Monomial::one(), |m, st| m.mul(va.x_of(s.side(st.tri, st.exit))))
}

pub fn weight_monomial(lg: &LoopGraph, p: &GoodMatching, va: &VariableAssignment) -> Monomial {
    matching_weight(lg, &p.matching, va)
}

pub(crate) fn matching_weight(lg: &LoopGraph, m: &Matching, va: &VariableAssignment) -> Monomial {
    m.edges
        .iter()
        .fold(Monomial::one(), |acc, &e| acc.mul(va.x_of(lg.base().edge(e).label)))
}

pub fn coefficient_monomial(lg: &LoopGraph, p: &GoodMatching, va: &VariableAssignment) -> Monomial {
    height_monomial(lg, &p.height, va)
}

pub(crate) fn height_monomial(lg: &LoopGraph, height: &[usize], va: &VariableAssignment) -> Monomial {
    height
        .iter()
        .fold(Monomial::one(), |acc, &j| acc.mul(va.y_of(lg.base().tile(j).diagonal)))
}

#[derive(Clone, Debug)]
pub struct Term {
    pub matching: GoodMatching,
    pub x: Monomial,
    pub y: Monomial,
}

/// A Main-Theorem expansion with its ingredients.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub loop_graph: LoopGraph,
    pub cross: Monomial,
    pub terms: Vec<Term>,
    pub polynomial: LaurentPolynomial,
}

impl Expansion {
    /// The sum of `x(P) y(P)` before dividing by the crossing monomial.
    pub fn numerator(&self) -> LaurentPolynomial {
        self.polynomial.mul_monomial(&self.cross)
    }
}

/// Checks the hypotheses under which the loop-graph formula applies.
fn check_hypotheses(s: &Surface, g: &TaggedArc) -> Result<(), ExpandError> {
    for end in 0..2 {
        if g.notched(end) && s.self_folded_at(g.points[end]).is_some() {
            return Err(ExpandError::SelfFoldedNotch(s.points()[g.points[end]].name.clone()));
        }
    }
    if g.n_notches() == 2 && s.is_closed() && s.n_punctures() == 2 {
        return Err(ExpandError::TwicePuncturedClosed);
    }
    if g.path.is_empty() {
        return Err(LoopError::PlainInTriangulation.into());
    }
    Ok(())
}

pub fn crossing_monomial(s: &Surface, g: &TaggedArc, va: &VariableAssignment) -> Result<Monomial, ExpandError> {
    check_hypotheses(s, g)?;
    let lg = build_loop_graph(s, g)?;
    Ok(cross_of(s, &lg, va))
}

fn cross_of(s: &Surface, lg: &LoopGraph, va: &VariableAssignment) -> Monomial {
    let steps: Vec<Step> = lg.base().tiles().iter().map(|t| t.step).collect();
    crossing_monomial_of(&steps, s, va)
}

/// The loop-graph formula: the sum of `x(P) y(P)` over good matchings,
/// divided by the crossing monomial.
pub fn expand(s: &Surface, g: &TaggedArc, va: &VariableAssignment) -> Result<Expansion, ExpandError> {
    check_hypotheses(s, g)?;
    let lg = build_loop_graph(s, g)?;
    Ok(expand_loop_graph(s, lg, va))
}

pub fn expand_loop_graph(s: &Surface, lg: LoopGraph, va: &VariableAssignment) -> Expansion {
    let cross = cross_of(s, &lg, va);
    let mut poly = LaurentPolynomial::zero();
    let mut terms = Vec::new();
    for p in lg.good_matchings() {
        let x = weight_monomial(&lg, &p, va);
        let y = coefficient_monomial(&lg, &p, va);
        poly.add_term(x.mul(&y).div(&cross), BigInt::from(1));
        terms.push(Term { matching: p, x, y });
    }
    Expansion {
        loop_graph: lg,
        cross,
        terms,
        polynomial: poly,
    }
}

/// Tag reversal at punctures enclosed by self-folded triangles: notched
/// ends there become plain, and the `(radius, loop)` label pairs whose
/// variables trade places are returned.
pub fn normalize_by_tag_symmetry(s: &Surface, g: &TaggedArc) -> (TaggedArc, Vec<(Label, Label)>) {
    let mut pairs: Vec<(Label, Label)> = Vec::new();
    let mut tags = g.tags;
    for end in 0..2 {
        if tags[end] != Tag::Notched {
            continue;
        }
        if let Some(sf) = s.self_folded_at(g.points[end]) {
            tags[end] = Tag::Plain;
            if !pairs.contains(&(sf.radius, sf.loop_)) {
                pairs.push((sf.radius, sf.loop_));
            }
        }
    }
    (g.with_tags(tags), pairs)
}

/// Expansion of a singly notched arc whose underlying plain arc `τ` is in
/// the triangulation: expand the loop `ℓ_p` around the notched puncture and
/// divide by `x_τ`.
pub fn expand_when_plain_in_t(
    s: &Surface,
    g: &TaggedArc,
    va: &VariableAssignment,
) -> Result<LaurentPolynomial, ExpandError> {
    let tau = g
        .underlying
        .ok_or_else(|| ExpandError::Unsupported("underlying plain arc is not in the triangulation".into()))?;
    if g.n_notches() != 1 {
        return Err(ExpandError::Unsupported("expected exactly one notched end".into()));
    }
    let end = if g.notched(0) { 0 } else { 1 };
    let p = g.points[end];
    if s.self_folded_at(p).is_some() {
        return Err(ExpandError::SelfFoldedNotch(s.points()[p].name.clone()));
    }
    let path = loop_around_end(s, tau, p)?;
    let sg = build_snake_graph(s, &path).map_err(LoopError::from)?;
    let lg = LoopGraph::new(sg, &[]).map_err(ExpandError::from)?;
    let ell = expand_loop_graph(s, lg, va);
    let tau_x = LaurentPolynomial::from_monomial(va.x_of(tau).clone());
    ell.polynomial.exact_divide(&tau_x).map_err(ExpandError::Division)
}

/// Crossing path of the loop that follows `τ` to `p`, circles `p`, and comes back.
fn loop_around_end(s: &Surface, tau: Label, p: usize) -> Result<Vec<Step>, ExpandError> {
    for &(t, k) in s.slots(tau) {
        for (c, rot) in [(k, Rotation::Counterclockwise), ((k + 2) % 3, Rotation::Clockwise)] {
            if s.corner_point(t, c) != p {
                continue;
            }
            let walk = s
                .walk_around(t, c, rot)
                .ok_or_else(|| ExpandError::Unsupported("notched end is not a puncture".into()))?;
            let last = walk.len() - 1;
            if s.side(walk[last].tri, walk[last].exit) != tau
                || walk[..last].iter().any(|st| s.side(st.tri, st.exit) == tau)
            {
                continue;
            }
            return Ok(walk[..last].to_vec());
        }
    }
    Err(ExpandError::Unsupported(
        "cannot route a loop around the notched end".into(),
    ))
}

/// The cluster variable of any supported tagged arc: applies tag symmetry,
/// then the loop-graph formula or its reductions.
pub fn expand_tagged(s: &Surface, g: &TaggedArc) -> Result<LaurentPolynomial, ExpandError> {
    let va = VariableAssignment::new(s);
    let (g2, pairs) = normalize_by_tag_symmetry(s, g);
    let va2 = va.swapped(&pairs);
    if g2.n_notches() == 2 && s.is_closed() && s.n_punctures() == 2 {
        return Err(ExpandError::TwicePuncturedClosed);
    }
    match g2.underlying {
        Some(tau) => match g2.n_notches() {
            0 => Ok(LaurentPolynomial::from_monomial(va2.x_of(tau).clone())),
            1 => expand_when_plain_in_t(s, &g2, &va2),
            _ => Err(ExpandError::DoublyNotchedInTriangulation),
        },
        None => Ok(expand(s, &g2, &va2)?.polynomial),
    }
}
