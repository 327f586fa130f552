//! Random triangulated surfaces and random tagged arcs for property checks.
//!
//! Surfaces start as triangulated polygons, get punctures inserted into
//! triangles and are then shuffled by ideal flips, which may create
//! self-folded triangles. Arcs are random walks through triangles that cross
//! each arc at most once.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::surface::{
    ArcFile, CombinatorialTriangulation, EndpointEntry, SelfFoldedEntry, Step, Surface, Tag, TaggedArc,
};

fn blank(arcs: Vec<String>, boundary: Vec<String>, triangles: Vec<Vec<String>>) -> CombinatorialTriangulation {
    CombinatorialTriangulation {
        arcs,
        boundary,
        punctures: Vec::new(),
        marked_points: Vec::new(),
        triangles,
        self_folded: Vec::new(),
    }
}

/// A random triangulation of an `n`-gon (`n >= 3`). Arcs are `1..n-3`,
/// boundary segments `b0..b{n-1}`.
pub fn polygon<R: Rng>(n: usize, rng: &mut R) -> CombinatorialTriangulation {
    assert!(n >= 3);
    let boundary: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let mut arcs = Vec::new();
    let mut triangles = Vec::new();
    let mut stack: Vec<Vec<String>> = vec![boundary.clone()];
    while let Some(sides) = stack.pop() {
        let m = sides.len();
        if m == 3 {
            triangles.push(sides);
            continue;
        }
        // cut along a diagonal between vertices a and b (vertex i sits before side i)
        let a = rng.gen_range(0..m);
        let len = rng.gen_range(2..=m - 2);
        let sides: Vec<String> = sides[a..].iter().chain(&sides[..a]).cloned().collect();
        let (a, b) = (0, len);
        let d = format!("{}", arcs.len() + 1);
        arcs.push(d.clone());
        let mut left: Vec<String> = sides[a..b].to_vec();
        left.push(d.clone());
        let mut right: Vec<String> = sides[b..].to_vec();
        right.extend_from_slice(&sides[..a]);
        right.push(d);
        stack.push(left);
        stack.push(right);
    }
    blank(arcs, boundary, triangles)
}

/// Inserts a puncture inside a random triangle, joined to its three corners.
pub fn insert_puncture<R: Rng>(t: &mut CombinatorialTriangulation, rng: &mut R) {
    let cands: Vec<usize> = (0..t.triangles.len())
        .filter(|&i| {
            let tr = &t.triangles[i];
            tr[0] != tr[1] && tr[1] != tr[2] && tr[0] != tr[2]
        })
        .collect();
    let Some(&i) = cands.choose(rng) else { return };
    let tri = t.triangles.remove(i);
    let base = t.arcs.len() + 1;
    let u: Vec<String> = (0..3).map(|k| format!("{}", base + k)).collect();
    t.arcs.extend(u.iter().cloned());
    // side k runs from corner k-1 to corner k; u[k] joins corner k to the puncture
    for k in 0..3 {
        t.triangles
            .push(vec![tri[k].clone(), u[k].clone(), u[(k + 2) % 3].clone()]);
    }
}

/// Flips an interior arc in place, keeping its label. Returns `false` when
/// the arc sits in a self-folded triangle and cannot be flipped.
pub fn flip(t: &mut CombinatorialTriangulation, arc: &str) -> bool {
    let occ: Vec<(usize, usize)> = t
        .triangles
        .iter()
        .enumerate()
        .flat_map(|(i, tr)| {
            tr.iter()
                .enumerate()
                .filter(|(_, l)| *l == arc)
                .map(move |(k, _)| (i, k))
        })
        .collect();
    if occ.len() != 2 || occ[0].0 == occ[1].0 || t.self_folded.iter().any(|s| s.loop_ == arc) {
        return false;
    }
    let rot = |i: usize, k: usize| -> Vec<String> {
        let tr = &t.triangles[i];
        vec![tr[k].clone(), tr[(k + 1) % 3].clone(), tr[(k + 2) % 3].clone()]
    };
    let t1 = rot(occ[0].0, occ[0].1);
    let t2 = rot(occ[1].0, occ[1].1);
    let (a, b, c, d) = (t1[1].clone(), t1[2].clone(), t2[1].clone(), t2[2].clone());
    let new1 = vec![arc.to_string(), b.clone(), c.clone()];
    let new2 = vec![arc.to_string(), d.clone(), a.clone()];
    let (hi, lo) = (occ[0].0.max(occ[1].0), occ[0].0.min(occ[1].0));
    t.triangles.remove(hi);
    t.triangles.remove(lo);
    for (x, y) in [(&b, &c), (&d, &a)] {
        if x == y {
            t.self_folded.push(SelfFoldedEntry {
                radius: x.clone(),
                loop_: arc.to_string(),
                puncture: format!("sf{arc}"),
            });
        }
    }
    t.triangles.push(new1);
    t.triangles.push(new2);
    t.self_folded.retain(|s| {
        t.triangles
            .iter()
            .any(|tr| tr.iter().filter(|l| **l == s.radius).count() == 2 && tr.contains(&s.loop_))
    });
    true
}

/// A random surface: a triangulated `n`-gon with `punctures` inserted, then
/// `flips` random ideal flips. Only flips that keep the surface valid are kept.
pub fn random_surface<R: Rng>(n: usize, punctures: usize, flips: usize, rng: &mut R) -> CombinatorialTriangulation {
    let mut t = polygon(n, rng);
    for _ in 0..punctures {
        insert_puncture(&mut t, rng);
    }
    for _ in 0..flips {
        let Some(arc) = t.arcs.choose(rng).cloned() else { break };
        let mut trial = t.clone();
        if flip(&mut trial, &arc) && Surface::build(&trial).is_ok() {
            t = trial;
        }
    }
    t
}

/// A random arc: start next to a random corner, walk through triangles
/// without crossing an arc twice (a loop is crossed again on the way out of
/// its self-folded triangle), and stop at a corner of a different marked
/// point. Notches are placed at punctures outside self-folded
/// triangles with probability `notch`.
pub fn random_arc<R: Rng>(s: &Surface, max_crossings: usize, notch: f64, rng: &mut R) -> Option<TaggedArc> {
    let is_radius = |l| s.loop_of_radius(l).is_some();
    let mut starts: Vec<Step> = Vec::new();
    for (t, tri) in s.triangles().iter().enumerate() {
        for (k, &l) in tri.iter().enumerate() {
            // leaving a self-folded triangle across its radius would cut a half-bigon
            if s.is_arc(l) && !is_radius(l) {
                starts.push(Step { tri: t, exit: k });
            }
        }
    }
    let first = *starts.choose(rng)?;
    let start_point = s.corner_point(first.tri, first.exit + 1);
    let mut path = vec![first];
    let mut crossed = vec![s.side(first.tri, first.exit)];
    loop {
        let last = *path.last().unwrap();
        let (t, e) = s.glued(last.tri, last.exit)?;
        if is_radius(s.side(t, e)) {
            // through the radius, straight back out across the loop
            let k = (0..3).find(|&k| !is_radius(s.side(t, k)))?;
            path.push(Step { tri: t, exit: k });
            continue;
        }
        let end_point = s.corner_point(t, e + 1);
        let exits: Vec<usize> = (0..3)
            .filter(|&k| k != e && s.is_arc(s.side(t, k)) && !crossed.contains(&s.side(t, k)))
            .collect();
        let stop_ok = end_point != start_point;
        let stop = exits.is_empty() || path.len() >= max_crossings || (stop_ok && rng.gen_bool(0.3));
        if stop {
            if !stop_ok {
                return None;
            }
            break;
        }
        let k = *exits.choose(rng).unwrap();
        crossed.push(s.side(t, k));
        path.push(Step { tri: t, exit: k });
    }
    let last = *path.last().unwrap();
    let (t, e) = s.glued(last.tri, last.exit)?;
    let pts = [start_point, s.corner_point(t, e + 1)];
    let mut tags = [Tag::Plain; 2];
    for i in 0..2 {
        let pt = &s.points()[pts[i]];
        if pt.puncture && s.self_folded_at(pts[i]).is_none() && rng.gen_bool(notch) {
            tags[i] = Tag::Notched;
        }
    }
    if tags == [Tag::Notched; 2] && s.is_closed() && s.n_punctures() == 2 {
        tags[1] = Tag::Plain;
    }
    s.arc_from_path("gamma", &path, tags).ok()
}

/// An arc of the triangulation itself, notched at one end that is a
/// puncture. Loops are skipped.
pub fn random_notched_triangulation_arc<R: Rng>(s: &Surface, rng: &mut R) -> Option<TaggedArc> {
    let mut cands: Vec<(usize, usize)> = Vec::new();
    for l in 0..s.n_arcs() {
        if s.radius_of_loop(l).is_some() {
            continue;
        }
        let (a, b) = s.endpoints(l);
        for (end, p) in [(0, a), (1, b)] {
            if s.points()[p].puncture {
                cands.push((l, end));
            }
        }
    }
    let &(l, end) = cands.choose(rng)?;
    let mut tags = [Tag::Plain; 2];
    tags[end] = Tag::Notched;
    let a = ArcFile {
        name: "gamma".into(),
        endpoints: [0, 1].map(|i| EndpointEntry {
            point: String::new(),
            tag: tags[i],
        }),
        crossings: Vec::new(),
        first_triangle: Some(s.slots(l)[0].0),
        last_triangle: None,
        crossing_slots: None,
        underlying: Some(s.label_name(l).to_string()),
    };
    s.resolve_arc(&a).ok()
}
