//! The older expansion for notched arcs, rebuilt from γ-symmetric matchings
//! of the snake graph of `ℓ_p` (and γ-compatible pairs for two notches),
//! with checks that it agrees term by term with the loop-graph expansion.
//!
//! `ℓ_p` follows `γ` to the notched puncture `p`, circles `p` and comes back,
//! so its snake graph is `(G_1, …, G_{2k+l})` with `G_1..G_k` and
//! `G_{k+l+1}..G_{2k+l}` both copies of the snake graph of `γ`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Range;

use num_bigint::BigInt;
use thiserror::Error;

use crate::expansion::{crossing_monomial_of, VariableAssignment};
use crate::laurent::{LaurentPolynomial, Monomial};
use crate::loopgraph::{build_loop_graph, CutClass, End, GoodMatching, LoopError, LoopGraph};
use crate::snakegraph::{build_snake_graph, EdgeId, Matching, Side, SnakeError, SnakeGraph, Vertex};
use crate::surface::{Rotation, Step, Surface, TaggedArc};

#[derive(Debug, Error)]
pub enum MswError {
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Snake(#[from] SnakeError),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("no label-preserving isomorphism between the two copies of the snake graph of the arc")]
    Isomorphism,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// The snake graph of `ℓ_p` with its two copies of the graph of `γ`.
#[derive(Clone, Debug)]
pub struct EllGraph {
    /// The arc, reversed if needed so that `p` is its end.
    pub oriented: TaggedArc,
    /// True when `oriented` is the input arc read backwards.
    pub reversed: bool,
    pub path: Vec<Step>,
    pub graph: SnakeGraph,
    pub k: usize,
    pub l: usize,
    /// Vertex maps from `G_{γ,1}` and `G_{γ,2}` onto the snake graph of the
    /// input arc (in its own orientation).
    pub embed: [HashMap<Vertex, Vertex>; 2],
}

impl EllGraph {
    /// Tiles of `G_{γ,i}` for `i` in `{1, 2}`.
    pub fn copy(&self, i: usize) -> Range<usize> {
        match i {
            1 => 0..self.k,
            _ => self.k + self.l..2 * self.k + self.l,
        }
    }

    /// Edges of `ℋ_{γ,1}` or `ℋ_{γ,2}`: the copy minus `NE(G_k)` or `SW(G_{k+l+1})`.
    fn h_edges(&self, i: usize) -> Vec<EdgeId> {
        let gone = if i == 1 {
            self.graph.tile(self.k - 1).ne()
        } else {
            self.graph.tile(self.k + self.l).sw()
        };
        edges_on(&self.graph, self.copy(i))
            .into_iter()
            .filter(|&e| {
                let (a, b) = self.graph.edge(e).ends;
                a != gone && b != gone
            })
            .collect()
    }

    /// Images of the matched edges of copy `i` in the snake graph of the arc.
    fn image(&self, m: &Matching, i: usize, edges: &[EdgeId]) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<(Vertex, Vertex)> = edges
            .iter()
            .filter(|&&e| m.contains(e))
            .map(|&e| {
                let (a, b) = self.graph.edge(e).ends;
                let (a, b) = (self.embed[i - 1][&a], self.embed[i - 1][&b]);
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Edges bounding at least one tile in `r`.
fn edges_on(g: &SnakeGraph, r: Range<usize>) -> Vec<EdgeId> {
    (0..g.edges().len())
        .filter(|&e| g.edge(e).on.iter().any(|(t, _)| r.contains(t)))
        .collect()
}

/// The part of `m` on tiles `r`, and whether it is a perfect matching of
/// the subgraph those tiles span.
fn restrict(g: &SnakeGraph, m: &Matching, r: Range<usize>) -> (Matching, bool) {
    let sub = Matching::new(edges_on(g, r.clone()).into_iter().filter(|&e| m.contains(e)).collect());
    let mut cover: HashMap<Vertex, u32> = HashMap::new();
    for t in &g.tiles()[r] {
        for v in [t.sw(), t.se(), t.nw(), t.ne()] {
            cover.insert(v, 0);
        }
    }
    for &e in &sub.edges {
        let (a, b) = g.edge(e).ends;
        *cover.get_mut(&a).unwrap() += 1;
        *cover.get_mut(&b).unwrap() += 1;
    }
    let perfect = cover.values().all(|&c| c == 1);
    (sub, perfect)
}

/// The tiles `r` as a snake graph of their own, keeping positions.
fn subgraph(g: &SnakeGraph, r: Range<usize>) -> SnakeGraph {
    let glue = g.glue()[r.start..r.end - 1].to_vec();
    SnakeGraph::from_tiles(g.tiles()[r].to_vec(), glue)
}

fn weight(g: &SnakeGraph, m: &Matching, va: &VariableAssignment) -> Monomial {
    m.edges
        .iter()
        .fold(Monomial::one(), |acc, &e| acc.mul(va.x_of(g.edge(e).label)))
}

fn coefficient(g: &SnakeGraph, m: &Matching, va: &VariableAssignment) -> Result<Monomial, MswError> {
    Ok(g.positivity(m)?
        .into_iter()
        .fold(Monomial::one(), |acc, j| acc.mul(va.y_of(g.tile(j).diagonal))))
}

/// `(x, y)` of the restriction of `m` to tiles `r`, computed inside the subgraph.
fn restricted_monomials(
    g: &SnakeGraph,
    m: &Matching,
    r: Range<usize>,
    va: &VariableAssignment,
) -> Result<(Monomial, Monomial), MswError> {
    let (part, _) = restrict(g, m, r.clone());
    let sub = subgraph(g, r);
    let moved = transfer(g, &part, &sub)?;
    Ok((weight(&sub, &moved, va), coefficient(&sub, &moved, va)?))
}

/// Moves edges between graphs that share coordinates.
fn transfer(from: &SnakeGraph, m: &Matching, to: &SnakeGraph) -> Result<Matching, MswError> {
    m.edges
        .iter()
        .map(|&e| {
            let (a, b) = from.edge(e).ends;
            to.find_edge(a, b)
                .ok_or_else(|| MswError::Invariant(format!("edge {a:?}-{b:?} missing after transfer")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Matching::new)
}

/// Label-preserving maps from tiles `src` of `a` onto tiles `dst` of `b`
/// (paired in order), as lattice symmetries followed by a translation.
fn embeddings(a: &SnakeGraph, src: &[usize], b: &SnakeGraph, dst: &[usize]) -> Vec<HashMap<Vertex, Vertex>> {
    const LIN: [[i32; 4]; 8] = [
        [1, 0, 0, 1],
        [0, -1, 1, 0],
        [-1, 0, 0, -1],
        [0, 1, -1, 0],
        [-1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, -1, -1, 0],
    ];
    let centre = |g: &SnakeGraph, j: usize| {
        let (x, y) = g.tile(j).pos;
        (2 * x + 1, 2 * y + 1)
    };
    let mut out = Vec::new();
    if src.len() != dst.len() || src.is_empty() {
        return out;
    }
    for m in LIN {
        let lin = |(x, y): (i32, i32)| (m[0] * x + m[1] * y, m[2] * x + m[3] * y);
        let (cx, cy) = lin(centre(a, src[0]));
        let (dx, dy) = centre(b, dst[0]);
        let (tx, ty) = (dx - cx, dy - cy);
        let map = |v: Vertex| {
            let (x, y) = lin((2 * v.0, 2 * v.1));
            ((x + tx) / 2, (y + ty) / 2)
        };
        let mut vmap = HashMap::new();
        let ok = src.iter().zip(dst).all(|(&i, &j)| {
            let (ti, tj) = (a.tile(i), b.tile(j));
            if ti.diagonal != tj.diagonal {
                return false;
            }
            let corners = [ti.sw(), ti.se(), ti.nw(), ti.ne()];
            let target: HashSet<Vertex> = [tj.sw(), tj.se(), tj.nw(), tj.ne()].into_iter().collect();
            if !corners.iter().all(|&v| target.contains(&map(v))) {
                return false;
            }
            for v in corners {
                vmap.insert(v, map(v));
            }
            Side::ALL.into_iter().all(|sd| {
                let (p, q) = ti.edge_vertices(sd);
                b.find_edge(map(p), map(q))
                    .is_some_and(|e| b.edge(e).label == a.edge(a.tile_edge(i, sd)).label)
            })
        });
        if ok && !out.contains(&vmap) {
            out.push(vmap);
        }
    }
    out
}

/// Builds `ℓ_p` for the notched end `end` of `g`.
pub fn build_ellp(s: &Surface, g: &TaggedArc, end: usize) -> Result<EllGraph, MswError> {
    if !g.notched(end) {
        return Err(MswError::Hypothesis("the chosen end is not notched".into()));
    }
    if g.path.is_empty() {
        return Err(LoopError::PlainInTriangulation.into());
    }
    let p = g.points[end];
    let name = &s.points()[p].name;
    if !s.points()[p].puncture {
        return Err(LoopError::NotPuncture(name.clone()).into());
    }
    if s.self_folded_at(p).is_some() {
        return Err(LoopError::SelfFoldedNotch(name.clone()).into());
    }
    let reversed = end == 0;
    let oriented = if reversed { g.reversed(s) } else { g.clone() };
    let (t, c) = oriented.end_corner;
    let walk = s
        .walk_around(t, c, Rotation::Counterclockwise)
        .ok_or_else(|| LoopError::NotPuncture(name.clone()))?;
    let k = oriented.path.len();
    let l = walk.len();
    let mut path = oriented.path.clone();
    path.extend(walk);
    path.extend(oriented.reversed(s).path);
    let graph = build_snake_graph(s, &path)?;

    let gamma = build_snake_graph(s, &g.path)?;
    let forward: Vec<usize> = (0..k).collect();
    let backward: Vec<usize> = (0..k).rev().collect();
    let (d1, d2) = if reversed {
        (&backward, &forward)
    } else {
        (&forward, &backward)
    };
    let c1: Vec<usize> = (0..k).collect();
    let c2: Vec<usize> = (k + l..2 * k + l).collect();
    let e1 = embeddings(&graph, &c1, &gamma, d1);
    let e2 = embeddings(&graph, &c2, &gamma, d2);
    // the vertices removed from the two copies must correspond
    let gone1 = graph.tile(k - 1).ne();
    let gone2 = graph.tile(k + l).sw();
    let pair = e1
        .iter()
        .flat_map(|a| e2.iter().map(move |b| (a, b)))
        .find(|(a, b)| a[&gone1] == b[&gone2])
        .ok_or(MswError::Isomorphism)?;
    Ok(EllGraph {
        embed: [pair.0.clone(), pair.1.clone()],
        oriented,
        reversed,
        path,
        graph,
        k,
        l,
    })
}

/// Perfect matchings of the `ℓ_p` graph whose restrictions to `ℋ_{γ,1}` and
/// `ℋ_{γ,2}` agree.
pub fn gamma_symmetric_matchings(d: &EllGraph) -> Vec<Matching> {
    let h1 = d.h_edges(1);
    let h2 = d.h_edges(2);
    d.graph
        .perfect_matchings()
        .into_iter()
        .filter(|m| d.image(m, 1, &h1) == d.image(m, 2, &h2))
        .collect()
}

/// The monomials of a γ-symmetric matching with the copy `G_{γ,i}` factored out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barred {
    /// Which copy restricts to a perfect matching (1 when both do).
    pub copy: usize,
    pub both_perfect: bool,
    pub x: Monomial,
    pub y: Monomial,
}

/// The copy `G_{γ,i}` on which `m` restricts to a perfect matching, preferring `i = 1`.
fn perfect_copy(d: &EllGraph, m: &Matching) -> Result<(usize, bool), MswError> {
    let p1 = restrict(&d.graph, m, d.copy(1)).1;
    let p2 = restrict(&d.graph, m, d.copy(2)).1;
    match (p1, p2) {
        (true, b) => Ok((1, b)),
        (false, true) => Ok((2, false)),
        _ => Err(MswError::Invariant(
            "neither copy of the arc's graph is perfectly matched".into(),
        )),
    }
}

pub fn barred_monomials(d: &EllGraph, m: &Matching, va: &VariableAssignment) -> Result<Barred, MswError> {
    let (i, both) = perfect_copy(d, m)?;
    let (rx, ry) = restricted_monomials(&d.graph, m, d.copy(i), va)?;
    Ok(Barred {
        copy: i,
        both_perfect: both,
        x: weight(&d.graph, m, va).div(&rx),
        y: coefficient(&d.graph, m, va)?.div(&ry),
    })
}

/// Which end-local boundary edge a γ-symmetric matching uses: `E` when it
/// restricts perfectly to `(G_1, …, G_{k+l})`, `S` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymClass {
    E,
    S,
}

impl SymClass {
    pub fn name(self) -> &'static str {
        match self {
            SymClass::E => "E",
            SymClass::S => "S",
        }
    }
}

/// One γ-symmetric matching with its image under the restriction map.
#[derive(Clone, Debug)]
pub struct SingleTerm {
    pub matching: Matching,
    pub class: SymClass,
    pub barred: Barred,
    /// Index into the good matchings of the loop graph.
    pub image: usize,
    pub image_class: CutClass,
}

#[derive(Clone, Debug)]
pub struct SingleReport {
    pub ell: EllGraph,
    pub loop_graph: LoopGraph,
    pub good: Vec<GoodMatching>,
    pub terms: Vec<SingleTerm>,
    /// Terms whose barred monomials differ from those of their image.
    pub mismatches: Vec<usize>,
    pub bijective: bool,
}

impl SingleReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.mismatches.is_empty()
    }

    /// Counts per `(class, image cut class)`.
    pub fn class_counts(&self) -> BTreeMap<(SymClass, CutClass), usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry((t.class, t.image_class)).or_default() += 1;
        }
        out
    }
}

/// The restriction map from γ-symmetric matchings of `ℓ_p` to good matchings
/// of the loop graph `(G_1, …, G_{k+l})` glued at `G_k`.
///
/// A matching perfect on `(G_1, …, G_{k+l})` keeps its edges there, minus
/// `c'`. Otherwise it keeps its edges on `(G_1, …, G_{k+l-1})`; the edges it
/// loses sit on the first tile of the second copy.
pub fn phi_single(s: &Surface, g: &TaggedArc, va: &VariableAssignment) -> Result<SingleReport, MswError> {
    if g.n_notches() != 1 {
        return Err(MswError::Hypothesis("expected exactly one notched end".into()));
    }
    let end = if g.notched(0) { 0 } else { 1 };
    let ell = build_ellp(s, g, end)?;
    let lg = build_loop_graph(s, &ell.oriented)?;
    let (k, l) = (ell.k, ell.l);
    if lg.len() != k + l || (0..k + l).any(|j| lg.base().tile(j).pos != ell.graph.tile(j).pos) {
        return Err(MswError::Invariant(
            "loop graph is not the first k + l tiles of ℓ_p".into(),
        ));
    }
    if lg.cut(End::End).is_none() {
        return Err(MswError::Invariant("loop graph has no cut".into()));
    }
    let good = lg.good_matchings();
    let index: HashMap<Matching, usize> = good.iter().enumerate().map(|(i, p)| (p.matching.clone(), i)).collect();
    let mut terms = Vec::new();
    let mut mismatches = Vec::new();
    for m in gamma_symmetric_matchings(&ell) {
        let barred = barred_monomials(&ell, &m, va)?;
        let (head, perfect) = restrict(&ell.graph, &m, 0..k + l);
        let (class, image) = if perfect {
            let pb = transfer(&ell.graph, &head, lg.base())?;
            (SymClass::E, lg.reduce(&pb))
        } else {
            let (short, _) = restrict(&ell.graph, &m, 0..k + l - 1);
            let pm = transfer(&ell.graph, &short, lg.base())?;
            (SymClass::S, lg.classify_matching(&pm).ok())
        };
        let image =
            image.ok_or_else(|| MswError::Invariant(format!("a {} class matching has no good image", class.name())))?;
        let idx = index[&image.matching];
        let x = weight(lg.base(), &image.matching, va);
        let y = image
            .height
            .iter()
            .fold(Monomial::one(), |acc, &j| acc.mul(va.y_of(lg.base().tile(j).diagonal)));
        if x != barred.x || y != barred.y {
            mismatches.push(terms.len());
        }
        terms.push(SingleTerm {
            matching: m,
            class,
            barred,
            image: idx,
            image_class: image.classes[0],
        });
    }
    let hit: HashSet<usize> = terms.iter().map(|t| t.image).collect();
    let bijective = hit.len() == terms.len() && terms.len() == good.len();
    Ok(SingleReport {
        ell,
        loop_graph: lg,
        good,
        terms,
        mismatches,
        bijective,
    })
}

/// `cross(γ) / cross(ℓ_p) · Σ x̄(P) ȳ(P)` over γ-symmetric matchings.
pub fn msw_expand_single(s: &Surface, g: &TaggedArc, va: &VariableAssignment) -> Result<LaurentPolynomial, MswError> {
    if g.n_notches() != 1 {
        return Err(MswError::Hypothesis("expected exactly one notched end".into()));
    }
    let end = if g.notched(0) { 0 } else { 1 };
    let ell = build_ellp(s, g, end)?;
    let factor = crossing_monomial_of(&g.path, s, va).div(&crossing_monomial_of(&ell.path, s, va));
    let mut poly = LaurentPolynomial::zero();
    for m in gamma_symmetric_matchings(&ell) {
        let b = barred_monomials(&ell, &m, va)?;
        poly.add_term(b.x.mul(&b.y).mul(&factor), BigInt::from(1));
    }
    Ok(poly)
}

/// A γ-compatible pair, indexed into the γ-symmetric matchings of `ℓ_p` and `ℓ_q`.
#[derive(Clone, Debug)]
pub struct CompatiblePair {
    pub p: usize,
    pub q: usize,
    /// Copies `(i, j)` whose restrictions agree.
    pub copies: (usize, usize),
    pub x: Monomial,
    pub y: Monomial,
}

/// Pairs of γ-symmetric matchings of `ℓ_p` and `ℓ_q` that restrict to the
/// same perfect matching of the arc's snake graph on some copies, with the
/// doubly barred monomials `x(P_p) x(P_q) / x(P_p|_{G_{γ,i}})^3`.
pub fn compatible_pairs(
    dp: &EllGraph,
    sp: &[Matching],
    dq: &EllGraph,
    sq: &[Matching],
    va: &VariableAssignment,
) -> Result<Vec<CompatiblePair>, MswError> {
    let images = |d: &EllGraph, m: &Matching| -> Vec<(usize, Vec<(Vertex, Vertex)>)> {
        (1..=2)
            .filter_map(|i| {
                let (part, perfect) = restrict(&d.graph, m, d.copy(i));
                perfect.then(|| (i, d.image(&part, i, &part.edges)))
            })
            .collect()
    };
    let ip: Vec<_> = sp.iter().map(|m| images(dp, m)).collect();
    let iq: Vec<_> = sq.iter().map(|m| images(dq, m)).collect();
    let mut out = Vec::new();
    for (a, pa) in ip.iter().enumerate() {
        for (b, qb) in iq.iter().enumerate() {
            let Some(&(i, j)) = pa
                .iter()
                .flat_map(|(i, x)| qb.iter().filter(move |(_, y)| x == y).map(move |(j, _)| (*i, *j)))
                .collect::<Vec<_>>()
                .first()
            else {
                continue;
            };
            let (rx, ry) = restricted_monomials(&dp.graph, &sp[a], dp.copy(i), va)?;
            let x = weight(&dp.graph, &sp[a], va)
                .mul(&weight(&dq.graph, &sq[b], va))
                .div(&rx.pow(3));
            let y = coefficient(&dp.graph, &sp[a], va)?
                .mul(&coefficient(&dq.graph, &sq[b], va)?)
                .div(&ry.pow(3));
            out.push(CompatiblePair {
                p: a,
                q: b,
                copies: (i, j),
                x,
                y,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DoubleTerm {
    pub pair: CompatiblePair,
    pub classes: (SymClass, SymClass),
    pub image: usize,
    pub image_classes: (CutClass, CutClass),
}

#[derive(Clone, Debug)]
pub struct DoubleReport {
    pub ell: [EllGraph; 2],
    pub symmetric: [usize; 2],
    pub loop_graph: LoopGraph,
    pub good: Vec<GoodMatching>,
    pub terms: Vec<DoubleTerm>,
    /// Pairs left without an image of matching class and monomials.
    pub unmatched: Vec<usize>,
    pub bijective: bool,
}

impl DoubleReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.unmatched.is_empty()
    }

    pub fn class_counts(&self) -> BTreeMap<((SymClass, SymClass), (CutClass, CutClass)), usize> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry((t.classes, t.image_classes)).or_default() += 1;
        }
        out
    }
}

fn sym_class(d: &EllGraph, m: &Matching) -> SymClass {
    if restrict(&d.graph, m, 0..d.k + d.l).1 {
        SymClass::E
    } else {
        SymClass::S
    }
}

fn merged(c: CutClass) -> CutClass {
    match c {
        CutClass::Centre => CutClass::Right,
        other => other,
    }
}

/// Matches γ-compatible pairs with good matchings of the doubly notched loop
/// graph. Each pair class `(E|S, E|S)` goes to the good matchings with the
/// corresponding cut types (right or centre for `E`, left for `S`); within a
/// class the pairing is by equal `(x, y)` monomials.
pub fn phi_double(s: &Surface, g: &TaggedArc, va: &VariableAssignment) -> Result<DoubleReport, MswError> {
    if g.n_notches() != 2 {
        return Err(MswError::Hypothesis("expected both ends notched".into()));
    }
    if s.is_closed() && s.n_punctures() == 2 {
        return Err(MswError::Hypothesis("twice-punctured closed surface".into()));
    }
    let dp = build_ellp(s, g, 0)?;
    let dq = build_ellp(s, g, 1)?;
    let sp = gamma_symmetric_matchings(&dp);
    let sq = gamma_symmetric_matchings(&dq);
    let pairs = compatible_pairs(&dp, &sp, &dq, &sq, va)?;
    let lg = build_loop_graph(s, g)?;
    let good = lg.good_matchings();
    let start = lg.cuts().iter().position(|c| c.end == End::Start).unwrap();
    let endc = lg.cuts().iter().position(|c| c.end == End::End).unwrap();
    let key = |p: &GoodMatching| {
        let x = weight(lg.base(), &p.matching, va);
        let y = p
            .height
            .iter()
            .fold(Monomial::one(), |acc, &j| acc.mul(va.y_of(lg.base().tile(j).diagonal)));
        (merged(p.classes[start]), merged(p.classes[endc]), x, y)
    };
    let keys: Vec<_> = good.iter().map(key).collect();
    let mut used = vec![false; good.len()];
    let mut terms = Vec::new();
    let mut unmatched = Vec::new();
    let want = |c: SymClass| match c {
        SymClass::E => CutClass::Right,
        SymClass::S => CutClass::Left,
    };
    for (n, pair) in pairs.into_iter().enumerate() {
        let classes = (sym_class(&dp, &sp[pair.p]), sym_class(&dq, &sq[pair.q]));
        let target = (want(classes.0), want(classes.1), pair.x.clone(), pair.y.clone());
        match (0..good.len()).find(|&i| !used[i] && keys[i] == target) {
            Some(i) => {
                used[i] = true;
                terms.push(DoubleTerm {
                    pair,
                    classes,
                    image: i,
                    image_classes: (good[i].classes[start], good[i].classes[endc]),
                });
            }
            None => unmatched.push(n),
        }
    }
    let bijective = unmatched.is_empty() && used.iter().all(|&u| u);
    Ok(DoubleReport {
        symmetric: [sp.len(), sq.len()],
        ell: [dp, dq],
        loop_graph: lg,
        good,
        terms,
        unmatched,
        bijective,
    })
}

/// `cross(γ)^3 / (cross(ℓ_p) cross(ℓ_q)) · Σ x̿ ȳ̿` over γ-compatible pairs.
pub fn msw_expand_double(s: &Surface, g: &TaggedArc, va: &VariableAssignment) -> Result<LaurentPolynomial, MswError> {
    if g.n_notches() != 2 {
        return Err(MswError::Hypothesis("expected both ends notched".into()));
    }
    if s.is_closed() && s.n_punctures() == 2 {
        return Err(MswError::Hypothesis("twice-punctured closed surface".into()));
    }
    let dp = build_ellp(s, g, 0)?;
    let dq = build_ellp(s, g, 1)?;
    let sp = gamma_symmetric_matchings(&dp);
    let sq = gamma_symmetric_matchings(&dq);
    let factor = crossing_monomial_of(&g.path, s, va)
        .pow(3)
        .div(&crossing_monomial_of(&dp.path, s, va))
        .div(&crossing_monomial_of(&dq.path, s, va));
    let mut poly = LaurentPolynomial::zero();
    for pair in compatible_pairs(&dp, &sp, &dq, &sq, va)? {
        poly.add_term(pair.x.mul(&pair.y).mul(&factor), BigInt::from(1));
    }
    Ok(poly)
}
