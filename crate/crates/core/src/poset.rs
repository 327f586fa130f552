//! Quivers of snake and loop graphs, their order ideals, and the lattice of
//! good matchings under positive twists.
//!
//! Vertices are 0-based tile indices here; the parity rules below are stated
//! for 1-based tiles, so tile `j` is odd when `j` is even.

use std::collections::HashMap;

use thiserror::Error;

use crate::loopgraph::{End, GoodMatching, LoopGraph};
use crate::snakegraph::{Glue, Side, SnakeGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("quiver has a cycle through vertex {0}; not a surface loop graph")]
    Cyclic(usize),
    #[error("{0:?} is not an order ideal")]
    NotAnIdeal(Vec<usize>),
    #[error("vertex {0} out of range")]
    Range(usize),
    #[error("no good matching with height {0:?}")]
    Missing(Vec<usize>),
}

/// A quiver on `0..n` whose reflexive-transitive closure is a partial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseQuiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
    /// `below[j][i]`: `i <= j`.
    below: Vec<Vec<bool>>,
    topo: Vec<usize>,
}

impl HasseQuiver {
    /// Builds the quiver, refusing cycles. Duplicate arrows are merged.
    pub fn new(n: usize, arrows: &[(usize, usize)]) -> Result<HasseQuiver, PosetError> {
        let mut arrows: Vec<(usize, usize)> = arrows.to_vec();
        for &(a, b) in &arrows {
            if a >= n || b >= n {
                return Err(PosetError::Range(a.max(b)));
            }
        }
        arrows.sort_unstable();
        arrows.dedup();
        // Kahn
        let mut indeg = vec![0usize; n];
        for &(_, b) in &arrows {
            indeg[b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            topo.push(v);
            for &(a, b) in &arrows {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|v| !topo.contains(v)).unwrap();
            return Err(PosetError::Cyclic(stuck));
        }
        let mut below = vec![vec![false; n]; n];
        for &v in &topo {
            below[v][v] = true;
            for &(a, b) in &arrows {
                if b == v {
                    let row = below[a].clone();
                    for (i, r) in row.into_iter().enumerate() {
                        below[v][i] |= r;
                    }
                }
            }
        }
        Ok(HasseQuiver { n, arrows, below, topo })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// `i <= j`: there is a path of arrows from `i` to `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j][i]
    }

    /// A linear extension: every arrow goes forward.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Arrows implied by longer paths.
    pub fn redundant_arrows(&self) -> Vec<(usize, usize)> {
        self.arrows
            .iter()
            .copied()
            .filter(|&(a, b)| (0..self.n).any(|m| m != a && m != b && self.leq(a, m) && self.leq(m, b)))
            .collect()
    }

    /// The Hasse diagram of the order.
    pub fn transitive_reduction(&self) -> HasseQuiver {
        let red = self.redundant_arrows();
        let arrows: Vec<(usize, usize)> = self.arrows.iter().copied().filter(|a| !red.contains(a)).collect();
        HasseQuiver::new(self.n, &arrows).expect("subquiver of an acyclic quiver")
    }

    pub fn is_order_ideal(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.n];
        for &x in set {
            if x >= self.n {
                return false;
            }
            inside[x] = true;
        }
        self.arrows.iter().all(|&(a, b)| !inside[b] || inside[a])
    }

    /// All order ideals, each sorted, listed by size then lexicographically.
    /// Elements are decided along a linear extension, so an element may be
    /// taken only when all its predecessors are in.
    pub fn order_ideals(&self) -> Vec<Vec<usize>> {
        let preds: Vec<Vec<usize>> = (0..self.n)
            .map(|v| self.arrows.iter().filter(|a| a.1 == v).map(|a| a.0).collect())
            .collect();
        let mut out = Vec::new();
        let mut inside = vec![false; self.n];
        fn go(q: &HasseQuiver, preds: &[Vec<usize>], idx: usize, inside: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if idx == q.n {
                out.push((0..q.n).filter(|&i| inside[i]).collect());
                return;
            }
            let v = q.topo[idx];
            go(q, preds, idx + 1, inside, out);
            if preds[v].iter().all(|&u| inside[u]) {
                inside[v] = true;
                go(q, preds, idx + 1, inside, out);
                inside[v] = false;
            }
        }
        go(self, &preds, 0, &mut inside, &mut out);
        sort_sets(&mut out);
        out
    }

    /// Order ideals by filtering all `2^n` subsets; for testing, `n <= 20`.
    pub fn order_ideals_bruteforce(&self) -> Vec<Vec<usize>> {
        assert!(self.n <= 20, "brute force is limited to 20 vertices");
        let mut out: Vec<Vec<usize>> = (0u32..1 << self.n)
            .map(|mask| (0..self.n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| {
                s.iter()
                    .all(|&x| (0..self.n).all(|y| !self.leq(y, x) || s.contains(&y)))
            })
            .collect();
        sort_sets(&mut out);
        out
    }

    /// Covering pairs `(I, J)` of the ideal lattice, as indices into
    /// `ideals`, with the added element: `J = I ∪ {x}`.
    pub fn ideal_covers(&self, ideals: &[Vec<usize>]) -> Vec<(usize, usize, usize)> {
        let index: HashMap<&Vec<usize>, usize> = ideals.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut out = Vec::new();
        for (i, s) in ideals.iter().enumerate() {
            for x in 0..self.n {
                if s.contains(&x) {
                    continue;
                }
                let mut t = s.clone();
                t.push(x);
                t.sort_unstable();
                if let Some(&j) = index.get(&t) {
                    out.push((i, j, x));
                }
            }
        }
        out
    }
}

fn sort_sets(v: &mut [Vec<usize>]) {
    v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
}

/// Arrows between consecutive tiles: `i -> i+1` when tile `i` (1-based) is
/// odd and `G_{i+1}` sits to its right, or even and `G_{i+1}` sits on top;
/// otherwise `i+1 -> i`.
pub fn snake_arrows(g: &SnakeGraph) -> Vec<(usize, usize)> {
    g.glue()
        .iter()
        .enumerate()
        .map(|(j, glue)| {
            let odd = j % 2 == 0;
            let forward = matches!((odd, glue), (true, Glue::Right) | (false, Glue::Top));
            if forward {
                (j, j + 1)
            } else {
                (j + 1, j)
            }
        })
        .collect()
}

pub fn quiver_of_snake(g: &SnakeGraph) -> Result<HasseQuiver, PosetError> {
    HasseQuiver::new(g.len(), &snake_arrows(g))
}

/// The snake quiver of the base graph plus one arrow per cut, oriented by the
/// parity of `k` (1-based) and the side of `G_k` carrying the cut edge.
pub fn loop_arrows(lg: &LoopGraph) -> Vec<(usize, usize)> {
    let d = lg.len();
    let mut arrows = snake_arrows(lg.base());
    for c in lg.cuts() {
        let odd = c.k % 2 == 0;
        let (first, a, b) = match c.end {
            End::Start => (0, Side::S, Side::W),
            End::End => (d - 1, Side::N, Side::E),
        };
        let out = (odd && c.c_prime_side == a) || (!odd && c.c_prime_side == b);
        arrows.push(if out { (first, c.k) } else { (c.k, first) });
    }
    arrows
}

pub fn quiver_of_loop(lg: &LoopGraph) -> Result<HasseQuiver, PosetError> {
    HasseQuiver::new(lg.len(), &loop_arrows(lg))
}

/// The height of a good matching, as an order ideal.
pub fn ideal_from_matching(p: &GoodMatching) -> Vec<usize> {
    p.height.clone()
}

/// The good matching with the given height, built from the minimal one by
/// positive twists along a linear extension of the ideal.
pub fn matching_from_ideal(lg: &LoopGraph, q: &HasseQuiver, ideal: &[usize]) -> Result<GoodMatching, PosetError> {
    let mut ideal = ideal.to_vec();
    ideal.sort_unstable();
    ideal.dedup();
    if !q.is_order_ideal(&ideal) {
        return Err(PosetError::NotAnIdeal(ideal));
    }
    let mut p = lg
        .good_matchings()
        .into_iter()
        .find(|m| m.height.is_empty())
        .ok_or(PosetError::Missing(Vec::new()))?;
    for &x in q.topological_order() {
        if ideal.contains(&x) {
            p = lg
                .positive_twist(&p, x)
                .ok_or_else(|| PosetError::Missing(ideal.clone()))?;
        }
    }
    if p.height != ideal {
        return Err(PosetError::Missing(ideal));
    }
    Ok(p)
}

/// The lattice of good matchings: vertices sorted by height, arrows
/// `(from, to, tile)` for each positive twist.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub matchings: Vec<GoodMatching>,
    pub arrows: Vec<(usize, usize, usize)>,
}

impl Lattice {
    pub fn sources(&self) -> Vec<usize> {
        (0..self.matchings.len())
            .filter(|&v| !self.arrows.iter().any(|a| a.1 == v))
            .collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.matchings.len())
            .filter(|&v| !self.arrows.iter().any(|a| a.0 == v))
            .collect()
    }
}

pub fn lattice(lg: &LoopGraph) -> Lattice {
    let matchings = lg.good_matchings();
    let index: HashMap<Vec<usize>, usize> = matchings
        .iter()
        .enumerate()
        .map(|(i, m)| (m.height.clone(), i))
        .collect();
    let mut arrows = Vec::new();
    for (i, m) in matchings.iter().enumerate() {
        for j in 0..lg.len() {
            if let Some(t) = lg.positive_twist(m, j) {
                arrows.push((i, index[&t.height], j));
            }
        }
    }
    Lattice { matchings, arrows }
}

/// Outcome of comparing the lattice of good matchings with the ideal lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCheck {
    pub matchings: usize,
    pub ideals: usize,
    /// Heights that are not ideals, ideals that are not heights, and repeats.
    pub height_mismatches: usize,
    /// Twists that are not covers plus covers that are not twists.
    pub cover_mismatches: usize,
    pub sources: Vec<Vec<usize>>,
    pub sinks: Vec<Vec<usize>>,
}

impl LatticeCheck {
    pub fn ok(&self, d: usize) -> bool {
        self.height_mismatches == 0
            && self.cover_mismatches == 0
            && self.matchings == self.ideals
            && self.sources == [Vec::<usize>::new()]
            && self.sinks == [(0..d).collect::<Vec<_>>()]
    }
}

pub fn check_lattice(lg: &LoopGraph) -> Result<LatticeCheck, PosetError> {
    let q = quiver_of_loop(lg)?;
    let ideals = q.order_ideals();
    let l = lattice(lg);
    let heights: Vec<Vec<usize>> = l.matchings.iter().map(|m| m.height.clone()).collect();
    let mut height_mismatches = heights.iter().filter(|h| !q.is_order_ideal(h)).count();
    height_mismatches += ideals.iter().filter(|i| !heights.contains(i)).count();
    let mut uniq = heights.clone();
    uniq.dedup();
    height_mismatches += heights.len() - uniq.len();
    let mut twists: Vec<(Vec<usize>, Vec<usize>)> = l
        .arrows
        .iter()
        .map(|&(a, b, _)| (heights[a].clone(), heights[b].clone()))
        .collect();
    let mut covers: Vec<(Vec<usize>, Vec<usize>)> = q
        .ideal_covers(&ideals)
        .into_iter()
        .map(|(a, b, _)| (ideals[a].clone(), ideals[b].clone()))
        .collect();
    twists.sort();
    covers.sort();
    let cover_mismatches = twists.iter().filter(|t| covers.binary_search(t).is_err()).count()
        + covers.iter().filter(|c| twists.binary_search(c).is_err()).count();
    Ok(LatticeCheck {
        matchings: heights.len(),
        ideals: ideals.len(),
        height_mismatches,
        cover_mismatches,
        sources: l.sources().into_iter().map(|i| heights[i].clone()).collect(),
        sinks: l.sinks().into_iter().map(|i| heights[i].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snakegraph::tests::shape;

    #[test]
    fn chain_has_prefix_ideals() {
        let q = HasseQuiver::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            q.order_ideals(),
            vec![vec![], vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 1, 2, 3]]
        );
        assert_eq!(q.order_ideals(), q.order_ideals_bruteforce());
    }

    #[test]
    fn antichain_has_all_subsets() {
        let q = HasseQuiver::new(5, &[]).unwrap();
        assert_eq!(q.order_ideals().len(), 32);
    }

    #[test]
    fn cycles_are_refused() {
        assert_eq!(HasseQuiver::new(2, &[(0, 1), (1, 0)]), Err(PosetError::Cyclic(0)));
    }

    #[test]
    fn shortcuts_are_reported() {
        let q = HasseQuiver::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(q.redundant_arrows(), vec![(0, 2)]);
        assert_eq!(q.transitive_reduction().arrows(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn straight_snake_alternates() {
        let g = shape(&[Glue::Right, Glue::Right]);
        assert_eq!(snake_arrows(&g), vec![(0, 1), (2, 1)]);
        let g = shape(&[Glue::Top, Glue::Top]);
        assert_eq!(snake_arrows(&g), vec![(1, 0), (1, 2)]);
    }

    #[test]
    fn snake_heights_are_ideals() {
        use crate::loopgraph::LoopGraph;
        for glue in [
            vec![Glue::Right, Glue::Top, Glue::Right, Glue::Right],
            vec![Glue::Top, Glue::Top, Glue::Right],
            vec![Glue::Right, Glue::Top, Glue::Top, Glue::Right, Glue::Top],
        ] {
            let lg = LoopGraph::new(shape(&glue), &[]).unwrap();
            let c = check_lattice(&lg).unwrap();
            assert!(c.ok(lg.len()), "{glue:?}: {c:?}");
        }
    }

    #[test]
    fn single_tile_is_a_two_chain() {
        let lg = LoopGraph::new(shape(&[]), &[]).unwrap();
        let l = lattice(&lg);
        assert_eq!(l.matchings.len(), 2);
        assert_eq!(l.arrows, vec![(0, 1, 0)]);
    }
}
