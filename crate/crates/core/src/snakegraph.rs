//! Snake graphs of crossing sequences, their perfect matchings and the
//! orientation a matching induces on the tile diagonals.
//!
//! Tiles are unit squares in the plane; tile `j` sits at `pos` with its
//! diagonal joining the north-west and south-east corners. Tile indices in
//! this API are 0-based.

use std::collections::HashMap;

use thiserror::Error;

use crate::surface::{Label, Step, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    N = 0,
    E = 1,
    S = 2,
    W = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    pub fn name(self) -> &'static str {
        match self {
            Side::N => "N",
            Side::E => "E",
            Side::S => "S",
            Side::W => "W",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TileKind {
    Ordinary,
    /// Both triangles of the tile are the same self-folded triangle.
    NonOrdinary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Glue {
    Top,
    Right,
}

/// Direction of a diagonal under the walk of an induced orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// north-west to south-east
    Down,
    Up,
}

pub type Vertex = (i32, i32);
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    pub diagonal: Label,
    pub rel: i8,
    pub kind: TileKind,
    /// Triangle side `(tri, slot)` each edge comes from, indexed by [`Side`].
    pub sides: [(usize, usize); 4],
    pub labels: [Label; 4],
    pub pos: Vertex,
    /// The crossing step this tile came from.
    pub step: Step,
}

impl Tile {
    pub fn label(&self, s: Side) -> Label {
        self.labels[s as usize]
    }

    pub fn side(&self, s: Side) -> (usize, usize) {
        self.sides[s as usize]
    }

    pub fn sw(&self) -> Vertex {
        self.pos
    }

    pub fn ne(&self) -> Vertex {
        (self.pos.0 + 1, self.pos.1 + 1)
    }

    pub fn nw(&self) -> Vertex {
        (self.pos.0, self.pos.1 + 1)
    }

    pub fn se(&self) -> Vertex {
        (self.pos.0 + 1, self.pos.1)
    }

    pub fn edge_vertices(&self, s: Side) -> (Vertex, Vertex) {
        let (x, y) = self.pos;
        match s {
            Side::S => ((x, y), (x + 1, y)),
            Side::W => ((x, y), (x, y + 1)),
            Side::N => ((x, y + 1), (x + 1, y + 1)),
            Side::E => ((x + 1, y), (x + 1, y + 1)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: (Vertex, Vertex),
    pub label: Label,
    /// Every `(tile, side)` this edge bounds: one entry, or two for a shared edge.
    pub on: Vec<(usize, Side)>,
}

/// A set of edges, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
}

impl Matching {
    pub fn new(mut edges: Vec<EdgeId>) -> Matching {
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SnakeError {
    #[error("empty crossing sequence")]
    Empty,
    #[error("crossing step {0} does not continue from the previous triangle")]
    Inconsistent(usize),
    #[error("crossing step {0} leaves through a boundary segment")]
    Boundary(usize),
    #[error("tiles {0} and {1} do not share an edge")]
    Gluing(usize, usize),
    #[error("matching is not perfect")]
    NotPerfect,
    #[error("orientation walk broke at vertex {0:?}")]
    Walk(Vertex),
}

#[derive(Clone, Debug)]
pub struct SnakeGraph {
    tiles: Vec<Tile>,
    glue: Vec<Glue>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    tile_edges: Vec<[EdgeId; 4]>,
}

/// Builds the snake graph of a crossing path with `rel` of the first tile equal to `+1`.
pub fn build_snake_graph(s: &Surface, path: &[Step]) -> Result<SnakeGraph, SnakeError> {
    if path.is_empty() {
        return Err(SnakeError::Empty);
    }
    let mut tiles: Vec<Tile> = Vec::with_capacity(path.len());
    let mut rel: i8 = 1;
    let mut other = Vec::with_capacity(path.len());
    for (j, st) in path.iter().enumerate() {
        let (bt, b) = s.glued(st.tri, st.exit).ok_or(SnakeError::Boundary(j + 1))?;
        if let Some(next) = path.get(j + 1) {
            if next.tri != bt || next.exit == b {
                return Err(SnakeError::Inconsistent(j + 2));
            }
        }
        other.push((bt, b));
        let (t, a) = (st.tri, st.exit);
        let a1 = (t, (a + 1) % 3);
        let a2 = (t, (a + 2) % 3);
        let b1 = (bt, (b + 1) % 3);
        let b2 = (bt, (b + 2) % 3);
        // [N, E, S, W]
        let sides = if rel == 1 { [b1, b2, a1, a2] } else { [b2, b1, a2, a1] };
        let labels = sides.map(|(t, k)| s.side(t, k));
        tiles.push(Tile {
            diagonal: s.side(t, a),
            rel,
            kind: if t == bt {
                TileKind::NonOrdinary
            } else {
                TileKind::Ordinary
            },
            sides,
            labels,
            pos: (0, 0),
            step: *st,
        });
        rel = -rel;
    }
    let mut glue = Vec::with_capacity(path.len() - 1);
    for j in 0..path.len() - 1 {
        let (bt, b) = other[j];
        let nxt = path[j + 1].exit;
        let z = (0..3).find(|&z| z != b && z != nxt).unwrap();
        let (x, y) = tiles[j].pos;
        if tiles[j].side(Side::N) == (bt, z) {
            glue.push(Glue::Top);
            tiles[j + 1].pos = (x, y + 1);
        } else if tiles[j].side(Side::E) == (bt, z) {
            glue.push(Glue::Right);
            tiles[j + 1].pos = (x + 1, y);
        } else {
            return Err(SnakeError::Gluing(j, j + 1));
        }
    }
    Ok(SnakeGraph::from_tiles(tiles, glue))
}

impl SnakeGraph {
    /// Assembles a graph from positioned tiles. Shared edges take the label of
    /// the earlier tile.
    pub fn from_tiles(tiles: Vec<Tile>, glue: Vec<Glue>) -> SnakeGraph {
        let mut by_ends: HashMap<(Vertex, Vertex), EdgeId> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut tile_edges = Vec::with_capacity(tiles.len());
        let mut vertices = Vec::new();
        for (j, t) in tiles.iter().enumerate() {
            let mut ids = [0; 4];
            for side in Side::ALL {
                let ends = t.edge_vertices(side);
                vertices.push(ends.0);
                vertices.push(ends.1);
                let id = *by_ends.entry(ends).or_insert_with(|| {
                    edges.push(Edge {
                        ends,
                        label: t.label(side),
                        on: Vec::new(),
                    });
                    edges.len() - 1
                });
                edges[id].on.push((j, side));
                ids[side as usize] = id;
            }
            tile_edges.push(ids);
        }
        vertices.sort_unstable();
        vertices.dedup();
        SnakeGraph {
            tiles,
            glue,
            vertices,
            edges,
            tile_edges,
        }
    }

    /// An abstract snake graph with prescribed gluings and alternating `rel`.
    /// Diagonals are labelled by tile index, sides by fresh numbers.
    pub fn from_glue(glue: &[Glue]) -> SnakeGraph {
        let mut tiles = Vec::new();
        let mut pos = (0, 0);
        for j in 0..=glue.len() {
            if j > 0 {
                pos = match glue[j - 1] {
                    Glue::Top => (pos.0, pos.1 + 1),
                    Glue::Right => (pos.0 + 1, pos.1),
                };
            }
            tiles.push(Tile {
                diagonal: j,
                rel: if j % 2 == 0 { 1 } else { -1 },
                kind: TileKind::Ordinary,
                sides: [(j, 0), (j, 1), (j, 2), (j, 0)],
                labels: [100 + 4 * j, 101 + 4 * j, 102 + 4 * j, 103 + 4 * j],
                pos,
                step: Step { tri: j, exit: 0 },
            });
        }
        SnakeGraph::from_tiles(tiles, glue.to_vec())
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn tile(&self, j: usize) -> &Tile {
        &self.tiles[j]
    }

    pub fn glue(&self) -> &[Glue] {
        &self.glue
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn tile_edge(&self, j: usize, s: Side) -> EdgeId {
        self.tile_edges[j][s as usize]
    }

    pub fn find_edge(&self, a: Vertex, b: Vertex) -> Option<EdgeId> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.iter().position(|e| e.ends == key)
    }

    pub fn sw(&self) -> Vertex {
        self.tiles[0].sw()
    }

    pub fn ne(&self) -> Vertex {
        self.tiles[self.tiles.len() - 1].ne()
    }

    /// Every gluing goes the same way.
    pub fn is_straight(&self) -> bool {
        self.glue.windows(2).all(|w| w[0] == w[1])
    }

    /// No three consecutive tiles are straight.
    pub fn is_zigzag(&self) -> bool {
        self.glue.windows(2).all(|w| w[0] != w[1])
    }

    /// The shared edge between tiles `j` and `j + 1`.
    pub fn shared_edge(&self, j: usize) -> EdgeId {
        match self.glue[j] {
            Glue::Top => self.tile_edge(j, Side::N),
            Glue::Right => self.tile_edge(j, Side::E),
        }
    }

    pub fn is_perfect(&self, m: &Matching) -> bool {
        let mut seen = vec![0u8; self.vertices.len()];
        for &e in &m.edges {
            let (a, b) = self.edges[e].ends;
            for v in [a, b] {
                seen[self.vertex_index(v).unwrap()] += 1;
            }
        }
        seen.iter().all(|&c| c == 1)
    }

    /// All perfect matchings, tile by tile: the edges of tile `j` other than
    /// the one shared with `j - 1` are chosen so that every vertex of tile `j`
    /// off the edge shared with `j + 1` ends up covered exactly once.
    pub fn perfect_matchings(&self) -> Vec<Matching> {
        let mut out = Vec::new();
        let mut covered = vec![false; self.vertices.len()];
        let mut chosen = Vec::new();
        self.extend_from(0, &mut covered, &mut chosen, &mut out);
        self.sort_by_height(out)
    }

    fn extend_from(&self, j: usize, covered: &mut Vec<bool>, chosen: &mut Vec<EdgeId>, out: &mut Vec<Matching>) {
        if j == self.tiles.len() {
            out.push(Matching::new(chosen.clone()));
            return;
        }
        let incoming = if j > 0 { Some(self.shared_edge(j - 1)) } else { None };
        let outgoing = if j + 1 < self.tiles.len() {
            Some(self.shared_edge(j))
        } else {
            None
        };
        let free: Vec<EdgeId> = self.tile_edges[j]
            .iter()
            .copied()
            .filter(|&e| Some(e) != incoming)
            .collect();
        let vi = |v: Vertex| self.vertex_index(v).unwrap();
        let must: Vec<usize> = {
            let t = &self.tiles[j];
            let keep: Vec<Vertex> = match outgoing {
                Some(e) => vec![self.edges[e].ends.0, self.edges[e].ends.1],
                None => vec![],
            };
            [t.sw(), t.se(), t.nw(), t.ne()]
                .into_iter()
                .filter(|v| !keep.contains(v))
                .map(vi)
                .collect()
        };
        for mask in 0u32..(1 << free.len()) {
            let pick: Vec<EdgeId> = (0..free.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| free[i])
                .collect();
            let mut touched = Vec::new();
            let mut ok = true;
            for &e in &pick {
                let (a, b) = self.edges[e].ends;
                for v in [vi(a), vi(b)] {
                    if covered[v] || touched.contains(&v) {
                        ok = false;
                    }
                    touched.push(v);
                }
            }
            if !ok {
                continue;
            }
            if must.iter().any(|&v| !covered[v] && !touched.contains(&v)) {
                continue;
            }
            for &v in &touched {
                covered[v] = true;
            }
            let n = chosen.len();
            chosen.extend_from_slice(&pick);
            self.extend_from(j + 1, covered, chosen, out);
            chosen.truncate(n);
            for &v in &touched {
                covered[v] = false;
            }
        }
    }

    /// Brute-force enumeration by vertex backtracking; a test oracle.
    pub fn perfect_matchings_bruteforce(&self) -> Vec<Matching> {
        let ends: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    self.vertex_index(e.ends.0).unwrap(),
                    self.vertex_index(e.ends.1).unwrap(),
                )
            })
            .collect();
        let found = perfect_matchings_of(self.vertices.len(), &ends);
        self.sort_by_height(found.into_iter().map(Matching::new).collect())
    }

    fn sort_by_height(&self, ms: Vec<Matching>) -> Vec<Matching> {
        let mut keyed: Vec<(Vec<usize>, Matching)> = ms
            .into_iter()
            .map(|m| {
                let h = self.positivity(&m).expect("perfect matching");
                (h, m)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        keyed.into_iter().map(|(_, m)| m).collect()
    }

    /// Walks from the south-west corner of the first tile to the north-east
    /// corner of the last, alternating matched edges and diagonals.
    pub fn induced_orientation(&self, m: &Matching) -> Result<Vec<Direction>, SnakeError> {
        if !self.is_perfect(m) {
            return Err(SnakeError::NotPerfect);
        }
        let d = self.tiles.len();
        let mut dir: Vec<Option<Direction>> = vec![None; d];
        let mut used = vec![false; self.edges.len()];
        let mut v = self.sw();
        let end = self.ne();
        loop {
            let e = m
                .edges
                .iter()
                .copied()
                .filter(|&e| !used[e] && (self.edges[e].ends.0 == v || self.edges[e].ends.1 == v))
                .collect::<Vec<_>>();
            if e.len() != 1 {
                return Err(SnakeError::Walk(v));
            }
            used[e[0]] = true;
            let (a, b) = self.edges[e[0]].ends;
            v = if a == v { b } else { a };
            if v == end {
                break;
            }
            let cands: Vec<usize> = (0..d)
                .filter(|&j| dir[j].is_none() && (self.tiles[j].nw() == v || self.tiles[j].se() == v))
                .collect();
            if cands.len() != 1 {
                return Err(SnakeError::Walk(v));
            }
            let j = cands[0];
            let t = &self.tiles[j];
            if v == t.nw() {
                dir[j] = Some(Direction::Down);
                v = t.se();
            } else {
                dir[j] = Some(Direction::Up);
                v = t.nw();
            }
        }
        dir.into_iter().collect::<Option<Vec<_>>>().ok_or(SnakeError::Walk(end))
    }

    /// Tiles whose diagonal is positive: down with `rel = +1` or up with `rel = -1`.
    pub fn positivity(&self, m: &Matching) -> Result<Vec<usize>, SnakeError> {
        let dir = self.induced_orientation(m)?;
        Ok((0..self.tiles.len())
            .filter(|&j| matches!((dir[j], self.tiles[j].rel), (Direction::Down, 1) | (Direction::Up, -1)))
            .collect())
    }

    /// Edge labels of a matching, as a multiset in edge order.
    pub fn labels_of(&self, m: &Matching) -> Vec<Label> {
        m.edges.iter().map(|&e| self.edges[e].label).collect()
    }
}

/// All perfect matchings of a multigraph on `n` vertices, by covering the
/// smallest uncovered vertex first. Loops are ignored. Results hold edge indices.
pub fn perfect_matchings_of(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a != b {
            adj[a].push(i);
            adj[b].push(i);
        }
    }
    let mut out = Vec::new();
    let mut covered = vec![false; n];
    let mut cur = Vec::new();
    fn rec(
        adj: &[Vec<usize>],
        edges: &[(usize, usize)],
        covered: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(v) = covered.iter().position(|&c| !c) else {
            out.push(cur.clone());
            return;
        };
        for &e in &adj[v] {
            let (a, b) = edges[e];
            let w = if a == v { b } else { a };
            if covered[w] {
                continue;
            }
            covered[v] = true;
            covered[w] = true;
            cur.push(e);
            rec(adj, edges, covered, cur, out);
            cur.pop();
            covered[v] = false;
            covered[w] = false;
        }
    }
    rec(&adj, edges, &mut covered, &mut cur, &mut out);
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn shape(glue: &[Glue]) -> SnakeGraph {
        SnakeGraph::from_glue(glue)
    }

    #[test]
    fn single_tile_has_two_matchings_with_opposite_diagonals() {
        let g = shape(&[]);
        let ms = g.perfect_matchings();
        assert_eq!(ms.len(), 2);
        let d0 = g.induced_orientation(&ms[0]).unwrap();
        let d1 = g.induced_orientation(&ms[1]).unwrap();
        assert_ne!(d0, d1);
        assert_eq!(g.positivity(&ms[0]).unwrap(), Vec::<usize>::new());
        assert_eq!(g.positivity(&ms[1]).unwrap(), vec![0]);
    }

    #[test]
    fn transfer_agrees_with_bruteforce_on_all_small_shapes() {
        for d in 1..=8usize {
            for mask in 0u32..(1 << (d - 1)) {
                let glue: Vec<Glue> = (0..d - 1)
                    .map(|i| if mask >> i & 1 == 1 { Glue::Top } else { Glue::Right })
                    .collect();
                let g = shape(&glue);
                let a = g.perfect_matchings();
                let b = g.perfect_matchings_bruteforce();
                assert_eq!(a, b, "glue {glue:?}");
                let mut hs: Vec<Vec<usize>> = a.iter().map(|m| g.positivity(m).unwrap()).collect();
                hs.dedup();
                assert_eq!(hs.len(), a.len());
                assert!(hs[0].is_empty());
                assert_eq!(hs.last().unwrap().len(), d);
            }
        }
    }

    #[test]
    fn walk_visits_each_diagonal_once() {
        let g = shape(&[Glue::Right, Glue::Top, Glue::Top, Glue::Right]);
        for m in g.perfect_matchings() {
            assert_eq!(g.induced_orientation(&m).unwrap().len(), 5);
        }
        let not_perfect = Matching::new(vec![0]);
        assert_eq!(g.induced_orientation(&not_perfect), Err(SnakeError::NotPerfect));
    }
}
