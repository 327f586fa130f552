//! Hooked arcs, loop graphs and their good matchings.
//!
//! A loop graph is kept as its base snake graph plus cuts. Matchings of the
//! glued graph are sets of base edge ids in which the cut edge `c'` never
//! appears (it is merged into `c`).

use std::collections::HashMap;

use thiserror::Error;

use crate::snakegraph::{
    build_snake_graph, perfect_matchings_of, EdgeId, Matching, Side, SnakeError, SnakeGraph, Vertex,
};
use crate::surface::{Label, Rotation, Step, Surface, TaggedArc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Start,
    End,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoopError {
    #[error(transparent)]
    Snake(#[from] SnakeError),
    #[error("notched at {0}, a puncture enclosed by a self-folded triangle; normalize by tag symmetry first")]
    SelfFoldedNotch(String),
    #[error("the underlying plain arc lies in the triangulation")]
    PlainInTriangulation,
    #[error("cannot hook around {0}: it is not a puncture")]
    NotPuncture(String),
    #[error("no cut edge at tile {k} for the {end:?} loop")]
    CutNotFound { end: End, k: usize },
    #[error("cut at tile {k} out of range for {d} tiles")]
    CutRange { k: usize, d: usize },
    #[error("cuts overlap: start cut at {k1} lies after end cut at {k2}")]
    CutOrder { k1: usize, k2: usize },
}

/// The crossing path of an arc whose notched ends were replaced by hooks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookedArc {
    pub path: Vec<Step>,
    pub crossings: Vec<Label>,
    /// Crossings contributed by the hook at each end; zero for a plain end.
    pub hooks: [usize; 2],
}

/// Hooks run clockwise at the start and counterclockwise at the end, so the
/// hooked arc read backwards is the hooked arc of the reversed curve.
pub fn build_hooked_arc(s: &Surface, g: &TaggedArc) -> Result<HookedArc, LoopError> {
    build_hooked_arc_with(s, g, [Rotation::Clockwise, Rotation::Counterclockwise])
}

/// Hooked arc with a chosen rotation sense for each end's hook.
pub fn build_hooked_arc_with(s: &Surface, g: &TaggedArc, rot: [Rotation; 2]) -> Result<HookedArc, LoopError> {
    if g.path.is_empty() {
        if g.n_notches() == 0 {
            // nothing to hook; callers handle the arc itself
            return Ok(HookedArc {
                path: Vec::new(),
                crossings: Vec::new(),
                hooks: [0, 0],
            });
        }
        return Err(LoopError::PlainInTriangulation);
    }
    for end in 0..2 {
        if g.notched(end) {
            let p = g.points[end];
            let name = &s.points()[p].name;
            if !s.points()[p].puncture {
                return Err(LoopError::NotPuncture(name.clone()));
            }
            if s.self_folded_at(p).is_some() {
                return Err(LoopError::SelfFoldedNotch(name.clone()));
            }
        }
    }
    let mut path = Vec::new();
    let mut hooks = [0, 0];
    if g.notched(0) {
        let (t, k) = g.start_corner;
        let h = s
            .walk_around(t, k, rot[0])
            .ok_or_else(|| LoopError::NotPuncture(s.points()[g.points[0]].name.clone()))?;
        hooks[0] = h.len();
        path.extend(h);
    }
    path.extend_from_slice(&g.path);
    if g.notched(1) {
        let (t, k) = g.end_corner;
        let h = s
            .walk_around(t, k, rot[1])
            .ok_or_else(|| LoopError::NotPuncture(s.points()[g.points[1]].name.clone()))?;
        hooks[1] = h.len();
        path.extend(h);
    }
    let crossings = path.iter().map(|st| s.side(st.tri, st.exit)).collect();
    Ok(HookedArc { path, crossings, hooks })
}

/// Where a cut sits: which end is glued back, to which tile, and which
/// side of the end tile carries `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutSpec {
    pub end: End,
    pub k: usize,
    pub c_side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub end: End,
    /// 0-based index of the tile `G_k` carrying `c'`.
    pub k: usize,
    pub c: EdgeId,
    pub c_prime: EdgeId,
    pub c_side: Side,
    pub c_prime_side: Side,
    pub x: Vertex,
    pub y: Vertex,
    pub x_prime: Vertex,
    pub y_prime: Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutClass {
    Left,
    Right,
    Centre,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodMatching {
    /// Edges in the glued graph (base ids, never a `c'`).
    pub matching: Matching,
    pub classes: Vec<CutClass>,
    /// The unique extension to a perfect matching of the base snake graph.
    pub extension: Matching,
    /// Tiles with positive diagonal under the extension.
    pub height: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LoopGraph {
    base: SnakeGraph,
    cuts: Vec<Cut>,
    hooks: [usize; 2],
    glued_vertex: HashMap<Vertex, usize>,
    n_glued: usize,
}

/// The loop graph of a tagged arc: the snake graph of its hooked arc with
/// each hooked end glued back to the first tile of the underlying plain arc.
pub fn build_loop_graph(s: &Surface, g: &TaggedArc) -> Result<LoopGraph, LoopError> {
    build_loop_graph_with(s, g, [Rotation::Clockwise, Rotation::Counterclockwise])
}

pub fn build_loop_graph_with(s: &Surface, g: &TaggedArc, rot: [Rotation; 2]) -> Result<LoopGraph, LoopError> {
    if g.path.is_empty() {
        return Err(LoopError::PlainInTriangulation);
    }
    let h = build_hooked_arc_with(s, g, rot)?;
    let base = build_snake_graph(s, &h.path)?;
    let d = base.len();
    let mut specs = Vec::new();
    if h.hooks[0] > 0 {
        let k = h.hooks[0];
        let cp = boundary_side(&base, End::Start, k).ok_or(LoopError::CutNotFound { end: End::Start, k })?;
        let slot = base.tile(k).side(cp);
        let c_side = [Side::S, Side::W]
            .into_iter()
            .find(|&sd| base.tile(0).side(sd) == slot)
            .ok_or(LoopError::CutNotFound { end: End::Start, k })?;
        specs.push(CutSpec {
            end: End::Start,
            k,
            c_side,
        });
    }
    if h.hooks[1] > 0 {
        let k = d - 1 - h.hooks[1];
        let cp = boundary_side(&base, End::End, k).ok_or(LoopError::CutNotFound { end: End::End, k })?;
        let slot = base.tile(k).side(cp);
        let c_side = [Side::N, Side::E]
            .into_iter()
            .find(|&sd| base.tile(d - 1).side(sd) == slot)
            .ok_or(LoopError::CutNotFound { end: End::End, k })?;
        specs.push(CutSpec {
            end: End::End,
            k,
            c_side,
        });
    }
    let mut lg = LoopGraph::new(base, &specs)?;
    lg.hooks = h.hooks;
    Ok(lg)
}

/// The side of `G_k` among S/W (start) or N/E (end) that is not shared with
/// the neighbouring tile towards the glued end.
fn boundary_side(g: &SnakeGraph, end: End, k: usize) -> Option<Side> {
    let d = g.len();
    match end {
        End::Start => {
            let cands: Vec<Side> = [Side::S, Side::W]
                .into_iter()
                .filter(|&sd| k == 0 || g.tile_edge(k, sd) != g.shared_edge(k - 1))
                .collect();
            (cands.len() == 1).then(|| cands[0])
        }
        End::End => {
            let cands: Vec<Side> = [Side::N, Side::E]
                .into_iter()
                .filter(|&sd| k + 1 >= d || g.tile_edge(k, sd) != g.shared_edge(k))
                .collect();
            (cands.len() == 1).then(|| cands[0])
        }
    }
}

impl LoopGraph {
    /// Glues the ends of a snake graph. A start cut needs `1 <= k`, an end
    /// cut `k <= d - 2`, and a start cut may not lie after an end cut.
    pub fn new(base: SnakeGraph, specs: &[CutSpec]) -> Result<LoopGraph, LoopError> {
        let d = base.len();
        let mut cuts = Vec::new();
        for sp in specs {
            let (lo, hi) = match sp.end {
                End::Start => (1, d.saturating_sub(1)),
                End::End => (0, d.saturating_sub(2)),
            };
            if d < 2 || sp.k < lo || sp.k > hi {
                return Err(LoopError::CutRange { k: sp.k, d });
            }
            let cps = boundary_side(&base, sp.end, sp.k).ok_or(LoopError::CutNotFound { end: sp.end, k: sp.k })?;
            let (tile0, corner0, cornerk) = match sp.end {
                End::Start => (0, base.tile(0).sw(), base.tile(sp.k).sw()),
                End::End => (d - 1, base.tile(d - 1).ne(), base.tile(sp.k).ne()),
            };
            let ok_side = match sp.end {
                End::Start => matches!(sp.c_side, Side::S | Side::W),
                End::End => matches!(sp.c_side, Side::N | Side::E),
            };
            if !ok_side {
                return Err(LoopError::CutNotFound { end: sp.end, k: sp.k });
            }
            let c = base.tile_edge(tile0, sp.c_side);
            let c_prime = base.tile_edge(sp.k, cps);
            let other = |e: EdgeId, v: Vertex| {
                let (a, b) = base.edge(e).ends;
                if a == v {
                    b
                } else {
                    a
                }
            };
            cuts.push(Cut {
                end: sp.end,
                k: sp.k,
                c,
                c_prime,
                c_side: sp.c_side,
                c_prime_side: cps,
                x: corner0,
                y: other(c, corner0),
                x_prime: other(c_prime, cornerk),
                y_prime: cornerk,
            });
        }
        let k1 = cuts.iter().find(|c| c.end == End::Start).map(|c| c.k);
        let k2 = cuts.iter().find(|c| c.end == End::End).map(|c| c.k);
        if let (Some(k1), Some(k2)) = (k1, k2) {
            if k1 > k2 {
                return Err(LoopError::CutOrder { k1, k2 });
            }
        }
        // union-find on base vertices
        let verts = base.vertices().to_vec();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for c in &cuts {
            for (a, b) in [(c.x, c.x_prime), (c.y, c.y_prime)] {
                let ia = base.vertex_index(a).unwrap();
                let ib = base.vertex_index(b).unwrap();
                let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut glued_vertex = HashMap::new();
        for (i, v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            let n = ids.len();
            let id = *ids.entry(r).or_insert(n);
            glued_vertex.insert(*v, id);
        }
        let n_glued = ids.len();
        Ok(LoopGraph {
            base,
            cuts,
            hooks: [0, 0],
            glued_vertex,
            n_glued,
        })
    }

    pub fn base(&self) -> &SnakeGraph {
        &self.base
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn cut(&self, end: End) -> Option<&Cut> {
        self.cuts.iter().find(|c| c.end == end)
    }

    /// Hook lengths at each end (zero when that end is plain).
    pub fn hooks(&self) -> [usize; 2] {
        self.hooks
    }

    /// 0-based index of the first tile of the underlying plain arc.
    pub fn k1(&self) -> usize {
        self.cut(End::Start).map_or(0, |c| c.k)
    }

    /// 0-based index of the last tile of the underlying plain arc.
    pub fn k2(&self) -> usize {
        self.cut(End::End).map_or(self.base.len() - 1, |c| c.k)
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn n_glued_vertices(&self) -> usize {
        self.n_glued
    }

    pub fn glued_vertex(&self, v: Vertex) -> usize {
        self.glued_vertex[&v]
    }

    /// Edges of the glued graph: every base edge except the `c'`.
    pub fn glued_edges(&self) -> Vec<EdgeId> {
        (0..self.base.edges().len())
            .filter(|e| !self.cuts.iter().any(|c| c.c_prime == *e))
            .collect()
    }

    /// Classifies a perfect matching of the glued graph; `Err` carries the
    /// index of the first cut at which it is neither left, right nor centre.
    pub fn classify_matching(&self, m: &Matching) -> Result<GoodMatching, usize> {
        let mut covered: HashMap<Vertex, usize> = HashMap::new();
        for &e in &m.edges {
            let (a, b) = self.base.edge(e).ends;
            *covered.entry(a).or_default() += 1;
            *covered.entry(b).or_default() += 1;
        }
        let cov = |v: Vertex| covered.get(&v).copied().unwrap_or(0) > 0;
        let mut classes = Vec::new();
        let mut ext = m.edges.clone();
        for (i, c) in self.cuts.iter().enumerate() {
            if m.contains(c.c) {
                classes.push(CutClass::Centre);
                ext.push(c.c_prime);
            } else if cov(c.x) && cov(c.y) {
                classes.push(CutClass::Right);
                ext.push(c.c_prime);
            } else if cov(c.x_prime) && cov(c.y_prime) {
                classes.push(CutClass::Left);
                ext.push(c.c);
            } else {
                return Err(i);
            }
        }
        let extension = Matching::new(ext);
        if !self.base.is_perfect(&extension) {
            return Err(0);
        }
        let height = self.base.positivity(&extension).map_err(|_| 0usize)?;
        Ok(GoodMatching {
            matching: m.clone(),
            classes,
            extension,
            height,
        })
    }

    /// Good matchings from perfect matchings of the glued graph, found by
    /// vertex backtracking. Sorted by height.
    pub fn enumerate_good_matchings_bruteforce(&self) -> Vec<GoodMatching> {
        let edges = self.glued_edges();
        let ends: Vec<(usize, usize)> = edges
            .iter()
            .map(|&e| {
                let (a, b) = self.base.edge(e).ends;
                (self.glued_vertex(a), self.glued_vertex(b))
            })
            .collect();
        let mut out: Vec<GoodMatching> = perfect_matchings_of(self.n_glued, &ends)
            .into_iter()
            .map(|ix| Matching::new(ix.into_iter().map(|i| edges[i]).collect()))
            .filter_map(|m| self.classify_matching(&m).ok())
            .collect();
        sort_by_height(&mut out);
        out
    }

    /// Good matchings as the perfect matchings of the base graph meeting
    /// every cut pair `{c, c'}`, each with `c'` (or else `c`) removed.
    pub fn good_matchings(&self) -> Vec<GoodMatching> {
        let mut out: Vec<GoodMatching> = self
            .base
            .perfect_matchings()
            .into_iter()
            .filter_map(|pb| self.reduce(&pb))
            .collect();
        sort_by_height(&mut out);
        out
    }

    /// The good matching whose extension is `pb`, if any.
    pub fn reduce(&self, pb: &Matching) -> Option<GoodMatching> {
        let mut drop = Vec::new();
        for c in &self.cuts {
            match (pb.contains(c.c), pb.contains(c.c_prime)) {
                (_, true) => drop.push(c.c_prime),
                (true, false) => drop.push(c.c),
                (false, false) => return None,
            }
        }
        let m = Matching::new(pb.edges.iter().copied().filter(|e| !drop.contains(e)).collect());
        self.classify_matching(&m).ok().filter(|g| &g.extension == pb)
    }

    /// Positive twist at tile `j` (0-based): on the extension, tile `j + 1`
    /// odd trades `{N, S}` for `{W, E}` and even trades `{W, E}` for `{N, S}`.
    pub fn positive_twist(&self, p: &GoodMatching, j: usize) -> Option<GoodMatching> {
        let (from, to) = if j % 2 == 0 {
            ([Side::N, Side::S], [Side::W, Side::E])
        } else {
            ([Side::W, Side::E], [Side::N, Side::S])
        };
        self.swap_tile(p, j, from, to)
    }

    /// Inverse of [`LoopGraph::positive_twist`].
    pub fn negative_twist(&self, p: &GoodMatching, j: usize) -> Option<GoodMatching> {
        let (from, to) = if j % 2 == 0 {
            ([Side::W, Side::E], [Side::N, Side::S])
        } else {
            ([Side::N, Side::S], [Side::W, Side::E])
        };
        self.swap_tile(p, j, from, to)
    }

    fn swap_tile(&self, p: &GoodMatching, j: usize, from: [Side; 2], to: [Side; 2]) -> Option<GoodMatching> {
        if j >= self.base.len() {
            return None;
        }
        let f = from.map(|s| self.base.tile_edge(j, s));
        let t = to.map(|s| self.base.tile_edge(j, s));
        if !f.iter().all(|&e| p.extension.contains(e)) {
            return None;
        }
        let mut ext: Vec<EdgeId> = p.extension.edges.iter().copied().filter(|e| !f.contains(e)).collect();
        ext.extend_from_slice(&t);
        self.reduce(&Matching::new(ext))
    }

    /// Edge labels of a good matching in the glued graph.
    pub fn labels_of(&self, p: &GoodMatching) -> Vec<Label> {
        self.base.labels_of(&p.matching)
    }
}

fn sort_by_height(v: &mut [GoodMatching]) {
    v.sort_by(|a, b| (a.height.len(), &a.height).cmp(&(b.height.len(), &b.height)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snakegraph::tests::shape;
    use crate::snakegraph::Glue;

    #[test]
    fn cut_free_loop_graph_is_the_snake_graph() {
        let g = shape(&[Glue::Right, Glue::Top, Glue::Right]);
        let n = g.perfect_matchings().len();
        let lg = LoopGraph::new(g, &[]).unwrap();
        assert_eq!(lg.good_matchings().len(), n);
        assert_eq!(lg.enumerate_good_matchings_bruteforce().len(), n);
    }

    #[test]
    fn abstract_cuts_agree_between_enumerators() {
        for d in 3..=7usize {
            for mask in 0u32..(1 << (d - 1)) {
                let glue: Vec<Glue> = (0..d - 1)
                    .map(|i| if mask >> i & 1 == 1 { Glue::Top } else { Glue::Right })
                    .collect();
                for k in 1..d {
                    for c_side in [Side::S, Side::W] {
                        let lg = LoopGraph::new(
                            shape(&glue),
                            &[CutSpec {
                                end: End::Start,
                                k,
                                c_side,
                            }],
                        )
                        .unwrap();
                        let a: Vec<_> = lg.good_matchings().into_iter().map(|g| g.matching).collect();
                        let b: Vec<_> = lg
                            .enumerate_good_matchings_bruteforce()
                            .into_iter()
                            .map(|g| g.matching)
                            .collect();
                        assert_eq!(a, b, "glue {glue:?} k {k} {c_side:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn twist_round_trip() {
        let lg = LoopGraph::new(
            shape(&[Glue::Right, Glue::Top, Glue::Top]),
            &[CutSpec {
                end: End::Start,
                k: 2,
                c_side: Side::S,
            }],
        )
        .unwrap();
        for p in lg.good_matchings() {
            for j in 0..lg.len() {
                if let Some(q) = lg.positive_twist(&p, j) {
                    assert_eq!(lg.negative_twist(&q, j).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn bad_cut_ranges_are_rejected() {
        let g = shape(&[Glue::Right]);
        assert!(LoopGraph::new(
            g.clone(),
            &[CutSpec {
                end: End::Start,
                k: 0,
                c_side: Side::S
            }]
        )
        .is_err());
        assert!(LoopGraph::new(
            g,
            &[CutSpec {
                end: End::End,
                k: 1,
                c_side: Side::N
            }]
        )
        .is_err());
    }
}
