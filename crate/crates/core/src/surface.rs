//! Triangulated bordered surfaces given combinatorially by clockwise label triples.
//!
//! Corners: corner `(t, k)` of triangle `t` sits between its sides `k` and
//! `k + 1`. Gluing side `k` of `t` to side `j` of `t'` identifies corner
//! `(t, k)` with `(t', j - 1)` and `(t, k - 1)` with `(t', j)`. Marked points
//! are the classes of that identification.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense label index: interior arcs are `0..n`, boundary segments `n..m`.
pub type Label = usize;

/// One crossing of a curve: leave triangle `tri` through side `exit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub tri: usize,
    pub exit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Plain,
    Notched,
}

/// Rotation sense around a marked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rotation {
    Clockwise,
    Counterclockwise,
}

impl Rotation {
    pub fn reversed(self) -> Rotation {
        match self {
            Rotation::Clockwise => Rotation::Counterclockwise,
            Rotation::Counterclockwise => Rotation::Clockwise,
        }
    }
}

// ---------------------------------------------------------------- file format

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointEntry {
    Name(String),
    Anchored { name: String, corner: [usize; 2] },
}

impl PointEntry {
    pub fn name(&self) -> &str {
        match self {
            PointEntry::Name(n) => n,
            PointEntry::Anchored { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfFoldedEntry {
    pub radius: String,
    #[serde(rename = "loop")]
    pub loop_: String,
    pub puncture: String,
}

/// The surface input file, unvalidated.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombinatorialTriangulation {
    pub arcs: Vec<String>,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default)]
    pub punctures: Vec<String>,
    #[serde(default)]
    pub marked_points: Vec<PointEntry>,
    pub triangles: Vec<Vec<String>>,
    #[serde(default)]
    pub self_folded: Vec<SelfFoldedEntry>,
}

impl CombinatorialTriangulation {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndpointEntry {
    pub point: String,
    pub tag: Tag,
}

/// The arc input file, unvalidated.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcFile {
    pub name: String,
    pub endpoints: [EndpointEntry; 2],
    pub crossings: Vec<String>,
    #[serde(default)]
    pub first_triangle: Option<usize>,
    #[serde(default)]
    pub last_triangle: Option<usize>,
    /// Exit side per crossing; only needed where a crossing is ambiguous
    /// (leaving a self-folded triangle through one of the two radius sides).
    #[serde(default)]
    pub crossing_slots: Option<Vec<usize>>,
    /// For arcs with no crossings: the triangulation arc equal to the underlying plain arc.
    #[serde(default)]
    pub underlying: Option<String>,
}

impl ArcFile {
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

// ---------------------------------------------------------------- diagnostics

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub label: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} [{}]: {}", self.code, self.label, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("invalid triangulation: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{0:?} is not an interior arc")]
    NotAnArc(String),
    #[error("{0:?} is not a puncture")]
    NotAPuncture(String),
    #[error("unknown marked point {0:?}")]
    UnknownPoint(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArcError {
    #[error("unknown label {0:?} in crossing sequence")]
    UnknownLabel(String),
    #[error("crossing {step} ({label}) is not a side of the current triangle")]
    NotAdjacent { step: usize, label: String },
    #[error("crossing {step} ({label}) is ambiguous; supply crossing_slots")]
    Ambiguous { step: usize, label: String },
    #[error("crossing {step} ({label}) is a boundary segment")]
    Boundary { step: usize, label: String },
    #[error("start triangle cannot be determined: {0}")]
    Start(String),
    #[error("arc ends in triangle {found}, expected {expected}")]
    LastTriangle { expected: usize, found: usize },
    #[error("endpoint {which} is {found:?}, the arc file says {expected:?}")]
    Endpoint {
        which: usize,
        expected: String,
        found: String,
    },
    #[error("boundary endpoint {0:?} must be tagged plain")]
    NotchedBoundary(String),
    #[error("both ends sit at {0:?} but carry different tags")]
    TagMismatch(String),
    #[error("arc with no crossings must lie in the triangulation: {0}")]
    Underlying(String),
    #[error("bad crossing_slots entry at crossing {0}")]
    Slot(usize),
    #[error("the crossing sequence describes a self-crossing curve")]
    SelfCrossing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Corner(usize),
    Side(usize),
}

// ---------------------------------------------------------------- resolved types

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub name: String,
    pub puncture: bool,
    /// Corners at this point in clockwise order. For boundary points the
    /// sequence runs from the corner after one boundary side to the corner
    /// before the other.
    pub corners: Vec<(usize, usize)>,
    /// Interior arc ends at this point in clockwise order (loops twice).
    pub star: Vec<Label>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelfFolded {
    pub radius: Label,
    pub loop_: Label,
    pub puncture: usize,
    pub triangle: usize,
}

/// A validated triangulated surface.
#[derive(Clone, Debug)]
pub struct Surface {
    labels: Vec<String>,
    n_arcs: usize,
    triangles: Vec<[Label; 3]>,
    slots: Vec<Vec<(usize, usize)>>,
    corner_point: Vec<[usize; 3]>,
    points: Vec<MarkedPoint>,
    self_folded: Vec<SelfFolded>,
}

/// Checks the surface invariants; an empty result means the input is valid.
pub fn validate_triangulation(t: &CombinatorialTriangulation) -> Vec<Diagnostic> {
    match Surface::build(t) {
        Ok(_) => Vec::new(),
        Err(SurfaceError::Invalid(d)) => d,
        Err(e) => vec![Diagnostic {
            code: "E_SURFACE",
            label: String::new(),
            message: e.to_string(),
        }],
    }
}

fn diag(code: &'static str, label: &str, message: String) -> Diagnostic {
    Diagnostic {
        code,
        label: label.to_string(),
        message,
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Surface {
    pub fn from_json(s: &str) -> Result<Surface, SurfaceError> {
        let file = CombinatorialTriangulation::from_json(s)
            .map_err(|e| SurfaceError::Invalid(vec![diag("E_JSON", "", e.to_string())]))?;
        Surface::build(&file)
    }

    pub fn build(t: &CombinatorialTriangulation) -> Result<Surface, SurfaceError> {
        let mut diags = Vec::new();
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, Label> = HashMap::new();
        for name in t.arcs.iter().chain(t.boundary.iter()) {
            if index.insert(name.clone(), labels.len()).is_some() {
                diags.push(diag("E_DUP_LABEL", name, "label declared twice".into()));
            }
            labels.push(name.clone());
        }
        let n_arcs = t.arcs.len();
        let mut triangles = Vec::new();
        for (ti, tri) in t.triangles.iter().enumerate() {
            if tri.len() != 3 {
                diags.push(diag(
                    "E_TRIANGLE_ARITY",
                    &ti.to_string(),
                    format!("triangle {ti} has {} sides", tri.len()),
                ));
                continue;
            }
            let mut out = [0usize; 3];
            let mut ok = true;
            for (k, l) in tri.iter().enumerate() {
                match index.get(l) {
                    Some(&i) => out[k] = i,
                    None => {
                        diags.push(diag(
                            "E_UNKNOWN_LABEL",
                            l,
                            format!("triangle {ti} uses undeclared label"),
                        ));
                        ok = false;
                    }
                }
            }
            if ok {
                triangles.push(out);
            }
        }
        if !diags.is_empty() {
            return Err(SurfaceError::Invalid(diags));
        }
        let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); labels.len()];
        for (ti, tri) in triangles.iter().enumerate() {
            for (k, &l) in tri.iter().enumerate() {
                slots[l].push((ti, k));
            }
        }
        for (l, s) in slots.iter().enumerate() {
            let want = if l < n_arcs { 2 } else { 1 };
            if s.len() != want {
                diags.push(diag(
                    "E_SLOT_COUNT",
                    &labels[l],
                    format!("occurs in {} triangle sides, expected {want}", s.len()),
                ));
            }
        }
        if !diags.is_empty() {
            return Err(SurfaceError::Invalid(diags));
        }

        // corner identification
        let nc = triangles.len() * 3;
        let cid = |t: usize, k: usize| 3 * t + k % 3;
        let mut uf = UnionFind::new(nc);
        for l in 0..n_arcs {
            let (t, k) = slots[l][0];
            let (t2, j) = slots[l][1];
            uf.union(cid(t, k + 2), cid(t2, j));
            uf.union(cid(t, k), cid(t2, j + 2));
        }
        let mut class_of = vec![0usize; nc];
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        for c in 0..nc {
            let r = uf.find(c);
            let next = roots.len();
            class_of[c] = *roots.entry(r).or_insert(next);
        }
        let n_points = roots.len();

        let other = |t: usize, k: usize| -> Option<(usize, usize)> {
            let l = triangles[t][k];
            if l >= n_arcs {
                return None;
            }
            let s = &slots[l];
            Some(if s[0] == (t, k) { s[1] } else { s[0] })
        };

        // clockwise walks
        let mut points: Vec<MarkedPoint> = Vec::with_capacity(n_points);
        for p in 0..n_points {
            let members: Vec<usize> = (0..nc).filter(|&c| class_of[c] == p).collect();
            // a boundary point has a corner whose counterclockwise side (k+1) is boundary
            let start = members
                .iter()
                .copied()
                .find(|&c| triangles[c / 3][(c % 3 + 1) % 3] >= n_arcs);
            let puncture = start.is_none();
            let first = start.unwrap_or(members[0]);
            let mut corners = Vec::new();
            let mut star = Vec::new();
            let (mut t, mut k) = (first / 3, first % 3);
            loop {
                corners.push((t, k));
                if corners.len() > members.len() {
                    break;
                }
                match other(t, k) {
                    None => break,
                    Some((t2, j)) => {
                        star.push(triangles[t][k]);
                        t = t2;
                        k = (j + 2) % 3;
                        if puncture && cid(t, k) == first {
                            break;
                        }
                    }
                }
            }
            let mut seen: Vec<usize> = corners.iter().map(|&(t, k)| cid(t, k)).collect();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != corners.len() || seen != members {
                diags.push(diag(
                    "E_CORNER_WALK",
                    &format!("corner {first}"),
                    "walking around a marked point does not visit its corners exactly once".into(),
                ));
            }
            points.push(MarkedPoint {
                name: String::new(),
                puncture,
                corners,
                star,
            });
        }
        let mut corner_point = vec![[0usize; 3]; triangles.len()];
        for c in 0..nc {
            corner_point[c / 3][c % 3] = class_of[c];
        }

        // self-folded triangles
        let mut self_folded = Vec::new();
        let mut bound: Vec<Option<String>> = vec![None; n_points];
        let bind = |p: usize, name: &str, diags: &mut Vec<Diagnostic>, bound: &mut Vec<Option<String>>| match &bound[p]
        {
            Some(existing) if existing != name => diags.push(diag(
                "E_POINT_CONFLICT",
                name,
                format!("corner class already named {existing:?}"),
            )),
            _ => bound[p] = Some(name.to_string()),
        };
        for sf in &t.self_folded {
            let (Some(&r), Some(&l)) = (index.get(&sf.radius), index.get(&sf.loop_)) else {
                diags.push(diag("E_SELF_FOLDED", &sf.radius, "unknown radius or loop label".into()));
                continue;
            };
            if r >= n_arcs || l >= n_arcs {
                diags.push(diag(
                    "E_SELF_FOLDED",
                    &sf.radius,
                    "radius and loop must be interior arcs".into(),
                ));
                continue;
            }
            let (t0, _) = slots[r][0];
            let (t1, _) = slots[r][1];
            let tri = triangles[t0];
            let r_count = tri.iter().filter(|&&x| x == r).count();
            if t0 != t1 || r_count != 2 || !tri.contains(&l) {
                diags.push(diag(
                    "E_SELF_FOLDED",
                    &sf.radius,
                    "radius must occur twice in one triangle whose third side is the loop".into(),
                ));
                continue;
            }
            // the corner between the two radius sides is the enclosed puncture
            let k = (0..3).find(|&k| tri[k] == r && tri[(k + 1) % 3] == r).unwrap();
            let p = corner_point[t0][k];
            bind(p, &sf.puncture, &mut diags, &mut bound);
            self_folded.push(SelfFolded {
                radius: r,
                loop_: l,
                puncture: p,
                triangle: t0,
            });
        }
        for (ti, tri) in triangles.iter().enumerate() {
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                let declared = self_folded.iter().any(|s| s.triangle == ti);
                if !declared {
                    diags.push(diag(
                        "E_SELF_FOLDED",
                        &labels[tri[0]],
                        format!("triangle {ti} repeats a side but has no self_folded record"),
                    ));
                }
            }
        }

        // point names
        let mut loose: Vec<String> = Vec::new();
        for e in &t.marked_points {
            match e {
                PointEntry::Anchored { name, corner } => {
                    let [ti, k] = *corner;
                    if ti >= triangles.len() || k >= 3 {
                        diags.push(diag("E_POINT_ANCHOR", name, "corner out of range".into()));
                    } else {
                        bind(corner_point[ti][k], name, &mut diags, &mut bound);
                    }
                }
                PointEntry::Name(name) => {
                    if !bound.iter().any(|b| b.as_deref() == Some(name.as_str())) {
                        loose.push(name.clone());
                    }
                }
            }
        }
        loose.retain(|n| !bound.iter().any(|b| b.as_deref() == Some(n.as_str())));
        let unbound: Vec<usize> = (0..n_points).filter(|&p| bound[p].is_none()).collect();
        if t.marked_points.len() > n_points {
            diags.push(diag(
                "E_POINT_COUNT",
                "",
                format!(
                    "{} marked points declared, the triangles determine {n_points}",
                    t.marked_points.len()
                ),
            ));
        } else if !loose.is_empty() && loose.len() == unbound.len() {
            for (p, name) in unbound.iter().zip(loose.iter()) {
                bound[*p] = Some(name.clone());
            }
        } else {
            for name in &loose {
                diags.push(diag(
                    "E_POINT_ANCHOR",
                    name,
                    "cannot place marked point; give it a corner anchor".into(),
                ));
            }
        }
        for (p, b) in bound.into_iter().enumerate() {
            points[p].name = b.unwrap_or_else(|| format!("_v{p}"));
        }
        for name in &t.punctures {
            match points.iter().find(|p| &p.name == name) {
                Some(p) if p.puncture => {}
                Some(_) => diags.push(diag(
                    "E_PUNCTURE",
                    name,
                    "declared puncture lies on the boundary".into(),
                )),
                None => diags.push(diag(
                    "E_PUNCTURE",
                    name,
                    "declared puncture is not a marked point".into(),
                )),
            }
        }
        let derived = points.iter().filter(|p| p.puncture).count();
        if (!t.punctures.is_empty() || !t.marked_points.is_empty()) && derived != t.punctures.len() {
            diags.push(diag(
                "E_PUNCTURE",
                "",
                format!(
                    "{} punctures declared, the triangles determine {derived}",
                    t.punctures.len()
                ),
            ));
        }
        if !diags.is_empty() {
            return Err(SurfaceError::Invalid(diags));
        }
        Ok(Surface {
            labels,
            n_arcs,
            triangles,
            slots,
            corner_point,
            points,
            self_folded,
        })
    }

    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn is_arc(&self, l: Label) -> bool {
        l < self.n_arcs
    }

    pub fn label_name(&self, l: Label) -> &str {
        &self.labels[l]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, name: &str) -> Result<Label, SurfaceError> {
        self.labels
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SurfaceError::UnknownLabel(name.to_string()))
    }

    pub fn triangles(&self) -> &[[Label; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [Label; 3] {
        self.triangles[t]
    }

    pub fn side(&self, t: usize, k: usize) -> Label {
        self.triangles[t][k % 3]
    }

    pub fn slots(&self, l: Label) -> &[(usize, usize)] {
        &self.slots[l]
    }

    /// The other side glued to side `k` of triangle `t`, or `None` on the boundary.
    pub fn glued(&self, t: usize, k: usize) -> Option<(usize, usize)> {
        let l = self.triangles[t][k % 3];
        if l >= self.n_arcs {
            return None;
        }
        let s = &self.slots[l];
        Some(if s[0] == (t, k % 3) { s[1] } else { s[0] })
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn point(&self, name: &str) -> Result<usize, SurfaceError> {
        self.points
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| SurfaceError::UnknownPoint(name.to_string()))
    }

    pub fn corner_point(&self, t: usize, k: usize) -> usize {
        self.corner_point[t][k % 3]
    }

    pub fn self_folded(&self) -> &[SelfFolded] {
        &self.self_folded
    }

    pub fn n_boundary(&self) -> usize {
        self.labels.len() - self.n_arcs
    }

    pub fn n_punctures(&self) -> usize {
        self.points.iter().filter(|p| p.puncture).count()
    }

    pub fn is_closed(&self) -> bool {
        self.n_boundary() == 0
    }

    /// The puncture enclosed by a self-folded triangle, if `p` is one.
    pub fn self_folded_at(&self, p: usize) -> Option<&SelfFolded> {
        self.self_folded.iter().find(|s| s.puncture == p)
    }

    pub fn loop_of_radius(&self, r: Label) -> Option<Label> {
        self.self_folded.iter().find(|s| s.radius == r).map(|s| s.loop_)
    }

    pub fn radius_of_loop(&self, l: Label) -> Option<Label> {
        self.self_folded.iter().find(|s| s.loop_ == l).map(|s| s.radius)
    }

    /// The two marked points joined by the label, in side order.
    pub fn endpoints(&self, l: Label) -> (usize, usize) {
        let (t, k) = self.slots[l][0];
        (self.corner_point(t, k + 2), self.corner_point(t, k))
    }

    /// Sends a radius to its loop and fixes everything else.
    pub fn pi_t(&self, i: Label) -> Result<Label, SurfaceError> {
        if i >= self.n_arcs {
            return Err(SurfaceError::NotAnArc(
                self.labels.get(i).cloned().unwrap_or_else(|| i.to_string()),
            ));
        }
        Ok(self.loop_of_radius(i).unwrap_or(i))
    }

    /// The signed adjacency matrix: summed over non-self-folded triangles,
    /// `b[i][j] += 1` when `pi(j)` follows `pi(i)` clockwise.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n_arcs;
        let mut b = vec![vec![0i64; n]; n];
        let pi: Vec<Label> = (0..n).map(|i| self.loop_of_radius(i).unwrap_or(i)).collect();
        for tri in &self.triangles {
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                continue;
            }
            for s in 0..3 {
                let (a, c) = (tri[s], tri[(s + 1) % 3]);
                if a >= n || c >= n {
                    continue;
                }
                for i in 0..n {
                    if pi[i] != a {
                        continue;
                    }
                    for j in 0..n {
                        if pi[j] == c {
                            b[i][j] += 1;
                            b[j][i] -= 1;
                        }
                    }
                }
            }
        }
        b
    }

    /// Clockwise cyclic sequence of arc ends at a puncture.
    pub fn puncture_star(&self, p: usize) -> Result<Vec<Label>, SurfaceError> {
        let pt = self
            .points
            .get(p)
            .ok_or_else(|| SurfaceError::UnknownPoint(p.to_string()))?;
        if !pt.puncture {
            return Err(SurfaceError::NotAPuncture(pt.name.clone()));
        }
        Ok(pt.star.clone())
    }

    /// Steps of a curve that starts in triangle `t` near the corner `k`,
    /// travels once around that corner's marked point and returns to `t`.
    /// Returns `None` if the point is on the boundary.
    pub fn walk_around(&self, t: usize, k: usize, rot: Rotation) -> Option<Vec<Step>> {
        let start = (t, k % 3);
        let (mut t, mut k) = start;
        let mut steps = Vec::new();
        loop {
            let exit = match rot {
                Rotation::Clockwise => k,
                Rotation::Counterclockwise => (k + 1) % 3,
            };
            let (t2, j) = self.glued(t, exit)?;
            steps.push(Step { tri: t, exit });
            t = t2;
            k = match rot {
                Rotation::Clockwise => (j + 2) % 3,
                Rotation::Counterclockwise => j,
            };
            if (t, k) == start {
                return Some(steps);
            }
            if steps.len() > 3 * self.triangles.len() {
                return None;
            }
        }
    }

    /// Resolves an arc file against this surface.
    pub fn resolve_arc(&self, a: &ArcFile) -> Result<TaggedArc, ArcError> {
        let mut labels = Vec::with_capacity(a.crossings.len());
        for (j, c) in a.crossings.iter().enumerate() {
            let l = self
                .labels
                .iter()
                .position(|n| n == c)
                .ok_or_else(|| ArcError::UnknownLabel(c.clone()))?;
            if l >= self.n_arcs {
                return Err(ArcError::Boundary {
                    step: j + 1,
                    label: c.clone(),
                });
            }
            labels.push(l);
        }
        let want_point = |i: usize| -> Option<usize> { self.point(&a.endpoints[i].point).ok() };
        let tags = [a.endpoints[0].tag, a.endpoints[1].tag];
        if labels.is_empty() {
            return self.resolve_underlying(a, tags);
        }
        let hint = |j: usize| -> Option<usize> { a.crossing_slots.as_ref().and_then(|v| v.get(j).copied()) };
        if let Some(v) = &a.crossing_slots {
            if v.len() != labels.len() || v.iter().any(|&s| s > 2) {
                return Err(ArcError::Slot(v.len().min(labels.len())));
            }
        }
        // first step
        let first = match a.first_triangle {
            Some(t) => {
                if t >= self.triangles.len() {
                    return Err(ArcError::Start(format!("triangle {t} out of range")));
                }
                let cands: Vec<usize> = (0..3).filter(|&k| self.triangles[t][k] == labels[0]).collect();
                pick(&cands, hint(0), 1, &a.crossings[0])?.map(|k| Step { tri: t, exit: k })
            }
            None => {
                let mut cands: Vec<(usize, usize)> = self.slots[labels[0]].clone();
                if let Some(p) = want_point(0) {
                    cands.retain(|&(t, k)| self.corner_point(t, k + 1) == p);
                }
                if let Some(h) = hint(0) {
                    cands.retain(|&(_, k)| k == h);
                }
                if cands.len() != 1 {
                    return Err(ArcError::Start(format!(
                        "{} candidate start triangles; give first_triangle",
                        cands.len()
                    )));
                }
                Some(Step {
                    tri: cands[0].0,
                    exit: cands[0].1,
                })
            }
        }
        .ok_or_else(|| ArcError::NotAdjacent {
            step: 1,
            label: a.crossings[0].clone(),
        })?;
        let mut path = vec![first];
        for j in 1..labels.len() {
            let prev = path[j - 1];
            let (t, entry) = self.glued(prev.tri, prev.exit).expect("interior arc");
            let cands: Vec<usize> = (0..3)
                .filter(|&k| k != entry && self.triangles[t][k] == labels[j])
                .collect();
            let k = pick(&cands, hint(j), j + 1, &a.crossings[j])?.ok_or_else(|| ArcError::NotAdjacent {
                step: j + 1,
                label: a.crossings[j].clone(),
            })?;
            path.push(Step { tri: t, exit: k });
        }
        let last = *path.last().unwrap();
        let (t_end, entry) = self.glued(last.tri, last.exit).unwrap();
        if let Some(lt) = a.last_triangle {
            if lt != t_end {
                return Err(ArcError::LastTriangle {
                    expected: lt,
                    found: t_end,
                });
            }
        }
        let start_corner = (path[0].tri, (path[0].exit + 1) % 3);
        let end_corner = (t_end, (entry + 1) % 3);
        let pts = [
            self.corner_point(start_corner.0, start_corner.1),
            self.corner_point(end_corner.0, end_corner.1),
        ];
        self.check_endpoints(a, pts, tags)?;
        if !self.is_simple(&path) {
            return Err(ArcError::SelfCrossing);
        }
        Ok(TaggedArc {
            name: a.name.clone(),
            points: pts,
            tags,
            crossings: labels,
            path,
            start_corner,
            end_corner,
            underlying: None,
        })
    }

    /// A tagged arc from an explicit crossing path.
    pub fn arc_from_path(&self, name: &str, path: &[Step], tags: [Tag; 2]) -> Result<TaggedArc, ArcError> {
        let a = ArcFile {
            name: name.to_string(),
            endpoints: [0, 1].map(|i| EndpointEntry {
                point: String::new(),
                tag: tags[i],
            }),
            crossings: path
                .iter()
                .map(|st| self.label_name(self.side(st.tri, st.exit)).to_string())
                .collect(),
            first_triangle: path.first().map(|st| st.tri),
            last_triangle: None,
            crossing_slots: Some(path.iter().map(|st| st.exit).collect()),
            underlying: None,
        };
        let arc = self.resolve_arc(&a)?;
        if arc.path != path {
            return Err(ArcError::Start("path does not follow the triangle gluing".into()));
        }
        Ok(arc)
    }

    /// The input record that resolves back to `g`.
    pub fn arc_file(&self, g: &TaggedArc) -> ArcFile {
        let slots_needed = g
            .path
            .iter()
            .any(|st| self.loop_of_radius(self.side(st.tri, st.exit)).is_some());
        ArcFile {
            name: g.name.clone(),
            endpoints: [0, 1].map(|i| EndpointEntry {
                point: self.points[g.points[i]].name.clone(),
                tag: g.tags[i],
            }),
            crossings: g.crossings.iter().map(|&l| self.label_name(l).to_string()).collect(),
            first_triangle: Some(g.path.first().map_or(g.start_corner.0, |st| st.tri)),
            last_triangle: None,
            crossing_slots: slots_needed.then(|| g.path.iter().map(|st| st.exit).collect()),
            underlying: g.underlying.map(|l| self.label_name(l).to_string()),
        }
    }

    /// Whether the curve with this crossing path can be drawn without
    /// self-intersections. Pieces of the curve inside one triangle are chords
    /// between corners and sides; chords on a common side are ordered by
    /// following both strands outward until they part.
    pub fn is_simple(&self, path: &[Step]) -> bool {
        let d = path.len();
        if d == 0 {
            return true;
        }
        // piece m lies in triangle tri[m], between ports ends[m] = [back, front]
        let mut tri = Vec::with_capacity(d + 1);
        let mut ends: Vec<[Port; 2]> = Vec::with_capacity(d + 1);
        tri.push(path[0].tri);
        ends.push([Port::Corner((path[0].exit + 1) % 3), Port::Side(path[0].exit)]);
        for m in 1..=d {
            let (t, e) = self.glued(path[m - 1].tri, path[m - 1].exit).expect("interior arc");
            tri.push(t);
            let front = if m < d {
                Port::Side(path[m].exit)
            } else {
                Port::Corner((e + 1) % 3)
            };
            ends.push([Port::Side(e), front]);
        }
        // a strand leaves piece m through ends[m][dir], dir 1 forward and 0 backward
        let next = |m: usize, dir: usize| -> Option<usize> {
            match (dir, m) {
                (1, m) if m < d => Some(m + 1),
                (0, m) if m > 0 => Some(m - 1),
                _ => None,
            }
        };
        // strand A is nearer the start of side ends[a][da] of its triangle than strand B
        let before = |a: usize, da: usize, b: usize, db: usize| -> Option<bool> {
            let (mut a, mut b) = (a, b);
            for _ in 0..=2 * d + 2 {
                let (na, nb) = (next(a, da)?, next(b, db)?);
                let entry = match ends[na][1 - da] {
                    Port::Side(k) => k,
                    Port::Corner(_) => unreachable!(),
                };
                let rank = |m: usize, dir: usize| match ends[m][dir] {
                    Port::Side(k) if k == (entry + 1) % 3 => 0,
                    Port::Side(_) => 2,
                    Port::Corner(_) => 1,
                };
                let (ra, rb) = (rank(na, da), rank(nb, db));
                if ra != rb {
                    // nearer the end of the entry side here is nearer the start of the exit side we came through
                    return Some(ra < rb);
                }
                if ra == 1 {
                    return None;
                }
                a = na;
                b = nb;
            }
            None
        };
        let pos = |p: Port| -> i32 {
            match p {
                Port::Corner(c) => 2 * c as i32,
                Port::Side(k) => (2 * k as i32 + 5) % 6,
            }
        };
        for a in 0..=d {
            for b in a + 1..=d {
                if tri[a] != tri[b] {
                    continue;
                }
                // boundary coordinate of each port; ties on a side broken by `before`
                let mut keys: Vec<(i32, usize, usize)> = Vec::new();
                for (m, dir) in [(a, 0), (a, 1), (b, 0), (b, 1)] {
                    keys.push((pos(ends[m][dir]), m, dir));
                }
                let mut order: Vec<usize> = (0..4).collect();
                let mut bad = false;
                order.sort_by(|&i, &j| {
                    let (pi, mi, di) = keys[i];
                    let (pj, mj, dj) = keys[j];
                    if pi != pj || pi % 2 == 0 || (mi, di) == (mj, dj) {
                        return pi.cmp(&pj).then(i.cmp(&j));
                    }
                    match before(mi, di, mj, dj) {
                        Some(true) => std::cmp::Ordering::Less,
                        Some(false) => std::cmp::Ordering::Greater,
                        None => {
                            bad = true;
                            std::cmp::Ordering::Equal
                        }
                    }
                });
                if bad {
                    return false;
                }
                let piece = |i: usize| if i < 2 { 0 } else { 1 };
                let seq: Vec<usize> = order.iter().map(|&i| piece(i)).collect();
                // a shared corner is a common endpoint, not a crossing
                let corners_shared = (0..2).any(|i| (2..4).any(|j| keys[i].0 == keys[j].0 && keys[i].0 % 2 == 0));
                if !corners_shared && seq[0] == seq[2] && seq[1] == seq[3] {
                    return false;
                }
            }
        }
        true
    }

    fn check_endpoints(&self, a: &ArcFile, pts: [usize; 2], tags: [Tag; 2]) -> Result<(), ArcError> {
        for i in 0..2 {
            let found = &self.points[pts[i]].name;
            let declared = &a.endpoints[i].point;
            let known = self.points.iter().any(|p| &p.name == declared);
            if known && found != declared {
                return Err(ArcError::Endpoint {
                    which: i,
                    expected: declared.clone(),
                    found: found.clone(),
                });
            }
            if tags[i] == Tag::Notched && !self.points[pts[i]].puncture {
                return Err(ArcError::NotchedBoundary(found.clone()));
            }
        }
        if pts[0] == pts[1] && tags[0] != tags[1] {
            return Err(ArcError::TagMismatch(self.points[pts[0]].name.clone()));
        }
        Ok(())
    }

    fn resolve_underlying(&self, a: &ArcFile, tags: [Tag; 2]) -> Result<TaggedArc, ArcError> {
        let named = match &a.underlying {
            Some(u) => Some(
                self.labels
                    .iter()
                    .position(|n| n == u)
                    .filter(|&l| l < self.n_arcs)
                    .ok_or_else(|| ArcError::Underlying(format!("{u:?} is not an interior arc")))?,
            ),
            None => None,
        };
        let p0 = self.point(&a.endpoints[0].point).ok();
        let p1 = self.point(&a.endpoints[1].point).ok();
        let mut cands: Vec<(Label, usize, usize)> = Vec::new();
        let tris: Vec<usize> = match a.first_triangle {
            Some(t) if t < self.triangles.len() => vec![t],
            Some(t) => return Err(ArcError::Start(format!("triangle {t} out of range"))),
            None => (0..self.triangles.len()).collect(),
        };
        for &t in &tris {
            for k in 0..3 {
                let l = self.triangles[t][k];
                if l >= self.n_arcs || named.is_some_and(|u| u != l) {
                    continue;
                }
                // side k runs from corner k-1 to corner k
                let (s, e) = (self.corner_point(t, k + 2), self.corner_point(t, k));
                let fits = |x: usize, want: Option<usize>| want.map_or(true, |w| w == x);
                if fits(s, p0) && fits(e, p1) {
                    cands.push((l, s, e));
                } else if fits(e, p0) && fits(s, p1) {
                    cands.push((l, e, s));
                }
            }
        }
        cands.sort_unstable();
        cands.dedup_by_key(|c| c.0);
        if cands.len() != 1 {
            return Err(ArcError::Underlying(format!(
                "{} candidate arcs; name it with \"underlying\"",
                cands.len()
            )));
        }
        let (l, s, e) = cands[0];
        let pts = [s, e];
        self.check_endpoints(a, pts, tags)?;
        let (t, k) = self.slots[l][0];
        Ok(TaggedArc {
            name: a.name.clone(),
            points: pts,
            tags,
            crossings: Vec::new(),
            path: Vec::new(),
            start_corner: (t, (k + 2) % 3),
            end_corner: (t, k),
            underlying: Some(l),
        })
    }

    /// The tagged triangulation attached to this ideal triangulation.
    pub fn ideal_to_tagged(&self) -> TaggedTriangulation {
        let arcs = (0..self.n_arcs)
            .map(|i| match self.self_folded.iter().find(|s| s.loop_ == i) {
                Some(s) => TaggedArcRef {
                    underlying: s.radius,
                    notched_at: vec![s.puncture],
                },
                None => TaggedArcRef {
                    underlying: i,
                    notched_at: Vec::new(),
                },
            })
            .collect();
        TaggedTriangulation { arcs }
    }

    /// Inverse of [`Surface::ideal_to_tagged`]: returns the ideal arc for each
    /// tagged arc, after reversing tags at punctures where every incident
    /// tagged arc is notched (those punctures are also returned).
    pub fn tagged_to_ideal(&self, t: &TaggedTriangulation) -> Result<(Vec<Label>, Vec<usize>), SurfaceError> {
        let mut flipped = Vec::new();
        for p in 0..self.points.len() {
            if !self.points[p].puncture {
                continue;
            }
            let incident: Vec<&TaggedArcRef> = t
                .arcs
                .iter()
                .filter(|a| {
                    let (s, e) = self.endpoints(a.underlying);
                    s == p || e == p
                })
                .collect();
            if !incident.is_empty() && incident.iter().all(|a| a.notched_at.contains(&p)) {
                flipped.push(p);
            }
        }
        let mut out = Vec::with_capacity(t.arcs.len());
        for a in &t.arcs {
            let notches: Vec<usize> = a.notched_at.iter().copied().filter(|p| !flipped.contains(p)).collect();
            let plain_notch: Vec<usize> = flipped
                .iter()
                .copied()
                .filter(|p| {
                    let (s, e) = self.endpoints(a.underlying);
                    (s == *p || e == *p) && !a.notched_at.contains(p)
                })
                .collect();
            let effective: Vec<usize> = notches.into_iter().chain(plain_notch).collect();
            match effective.as_slice() {
                [] => out.push(a.underlying),
                [p] => {
                    let sf = self
                        .self_folded
                        .iter()
                        .find(|s| s.radius == a.underlying && s.puncture == *p)
                        .ok_or_else(|| SurfaceError::NotAnArc(self.labels[a.underlying].clone()))?;
                    out.push(sf.loop_);
                }
                _ => return Err(SurfaceError::NotAnArc(self.labels[a.underlying].clone())),
            }
        }
        Ok((out, flipped))
    }
}

fn pick(cands: &[usize], hint: Option<usize>, step: usize, label: &str) -> Result<Option<usize>, ArcError> {
    match (cands.len(), hint) {
        (0, _) => Ok(None),
        (1, None) => Ok(Some(cands[0])),
        (_, Some(h)) => {
            if cands.contains(&h) {
                Ok(Some(h))
            } else {
                Err(ArcError::Slot(step - 1))
            }
        }
        (_, None) => Err(ArcError::Ambiguous {
            step,
            label: label.to_string(),
        }),
    }
}

/// An element of a tagged triangulation, referring to the labels of a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedArcRef {
    pub underlying: Label,
    pub notched_at: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedTriangulation {
    pub arcs: Vec<TaggedArcRef>,
}

/// A tagged arc resolved against a surface: endpoints, tags and the
/// crossing path of its underlying plain arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedArc {
    pub name: String,
    pub points: [usize; 2],
    pub tags: [Tag; 2],
    pub crossings: Vec<Label>,
    pub path: Vec<Step>,
    pub start_corner: (usize, usize),
    pub end_corner: (usize, usize),
    /// Set when the underlying plain arc is an arc of the triangulation.
    pub underlying: Option<Label>,
}

impl TaggedArc {
    pub fn notched(&self, end: usize) -> bool {
        self.tags[end] == Tag::Notched
    }

    pub fn n_notches(&self) -> usize {
        self.tags.iter().filter(|&&t| t == Tag::Notched).count()
    }

    /// The same arc traversed in the opposite direction.
    pub fn reversed(&self, s: &Surface) -> TaggedArc {
        let mut path = Vec::with_capacity(self.path.len());
        for st in self.path.iter().rev() {
            let (t, j) = s.glued(st.tri, st.exit).expect("interior arc");
            path.push(Step { tri: t, exit: j });
        }
        TaggedArc {
            name: self.name.clone(),
            points: [self.points[1], self.points[0]],
            tags: [self.tags[1], self.tags[0]],
            crossings: self.crossings.iter().rev().copied().collect(),
            path,
            start_corner: self.end_corner,
            end_corner: self.start_corner,
            underlying: self.underlying,
        }
    }

    /// The same curve with different tags.
    pub fn with_tags(&self, tags: [Tag; 2]) -> TaggedArc {
        TaggedArc { tags, ..self.clone() }
    }

    pub fn to_file(&self, s: &Surface) -> ArcFile {
        ArcFile {
            name: self.name.clone(),
            endpoints: [0, 1].map(|i| EndpointEntry {
                point: s.points()[self.points[i]].name.clone(),
                tag: self.tags[i],
            }),
            crossings: self.crossings.iter().map(|&l| s.label_name(l).to_string()).collect(),
            first_triangle: self.path.first().map(|st| st.tri),
            last_triangle: self.path.last().map(|st| s.glued(st.tri, st.exit).unwrap().0),
            crossing_slots: if self.path.is_empty() {
                None
            } else {
                Some(self.path.iter().map(|st| st.exit).collect())
            },
            underlying: self.underlying.map(|l| s.label_name(l).to_string()),
        }
    }
}
