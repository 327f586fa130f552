//! Seed mutation with principal coefficients, used as an independent oracle.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expansion::{expand_tagged, specialize_boundary, ExpandError};
use crate::laurent::{inv_mod, mul_mod, pow_mod, AlgebraError, LaurentPolynomial, Monomial, Var};
use crate::surface::{ArcError, ArcFile, CombinatorialTriangulation, Label, Surface, SurfaceError, TaggedArc};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MutationError {
    #[error("direction {0} out of range for rank {1}")]
    Direction(usize, usize),
    #[error("exchange matrix is not skew-symmetric")]
    NotSkew,
    #[error("exchange relation not divisible (Laurent phenomenon violated): {0}")]
    NotLaurent(AlgebraError),
    #[error("label {0} is not an interior arc")]
    NotAnArc(String),
}

/// A seed with principal coefficients: cluster variables in `x_i, y_i` and
/// the extended `2n × n` exchange matrix whose lower half tracks coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    cluster: Vec<LaurentPolynomial>,
    extended: Vec<Vec<i64>>,
}

impl Seed {
    /// The initial seed `x_0..x_{n-1}` with principal coefficients. Variable
    /// `x_i` of the seed is `Var::X(vars[i])`, likewise for `y`.
    pub fn initial(b: &[Vec<i64>], vars: &[u32]) -> Result<Seed, MutationError> {
        let n = b.len();
        for i in 0..n {
            if b[i].len() != n {
                return Err(MutationError::NotSkew);
            }
            for j in 0..n {
                if b[i][j] != -b[j][i] {
                    return Err(MutationError::NotSkew);
                }
            }
        }
        if vars.len() != n {
            return Err(MutationError::Direction(vars.len(), n));
        }
        let mut extended: Vec<Vec<i64>> = b.to_vec();
        for i in 0..n {
            extended.push((0..n).map(|j| i64::from(i == j)).collect());
        }
        Ok(Seed {
            cluster: vars.iter().map(|&v| LaurentPolynomial::var(Var::X(v))).collect(),
            extended,
        })
    }

    pub fn rank(&self) -> usize {
        self.cluster.len()
    }

    pub fn cluster(&self) -> &[LaurentPolynomial] {
        &self.cluster
    }

    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        self.extended[..self.rank()].to_vec()
    }

    pub fn extended_matrix(&self) -> &[Vec<i64>] {
        &self.extended
    }

    /// Mutation in direction `i`. `y_vars[j]` names the coefficient of row `n + j`.
    pub fn mutate(&self, i: usize, y_vars: &[u32]) -> Result<Seed, MutationError> {
        let n = self.rank();
        if i >= n {
            return Err(MutationError::Direction(i, n));
        }
        let mut pos = Monomial::one();
        let mut neg = Monomial::one();
        let mut pos_poly = LaurentPolynomial::one();
        let mut neg_poly = LaurentPolynomial::one();
        for k in 0..2 * n {
            let b = self.extended[k][i];
            if b == 0 {
                continue;
            }
            if k < n {
                let f = self.cluster[k].pow(b.unsigned_abs() as u32);
                if b > 0 {
                    pos_poly = &pos_poly * &f;
                } else {
                    neg_poly = &neg_poly * &f;
                }
            } else {
                let m = Monomial::power(Var::Y(y_vars[k - n]), b.abs() as i32);
                if b > 0 {
                    pos = pos.mul(&m);
                } else {
                    neg = neg.mul(&m);
                }
            }
        }
        let num = &pos_poly.mul_monomial(&pos) + &neg_poly.mul_monomial(&neg);
        let new = num.exact_divide(&self.cluster[i]).map_err(MutationError::NotLaurent)?;
        let mut cluster = self.cluster.clone();
        cluster[i] = new;
        Ok(Seed {
            cluster,
            extended: mutate_matrix(&self.extended, i),
        })
    }
}

/// Matrix mutation on an extended `m × n` matrix.
pub fn mutate_matrix(b: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let m = b.len();
    let n = b[0].len();
    let mut out = vec![vec![0i64; n]; m];
    for j in 0..m {
        for k in 0..n {
            out[j][k] = if j == i || k == i {
                -b[j][k]
            } else {
                b[j][k] + (-b[j][i]).max(0) * b[i][k] + b[i][k].max(0) * b[j][i]
            };
        }
    }
    out
}

/// The seed of a triangulation: `x_i, y_i` for each interior arc and `B_T`.
pub fn seed_from_triangulation(s: &Surface) -> Seed {
    let vars: Vec<u32> = (0..s.n_arcs() as u32).collect();
    Seed::initial(&s.adjacency_matrix(), &vars).expect("adjacency matrix is skew-symmetric")
}

/// Mutates along the flip sequence (arc labels) and returns the variable
/// sitting at `position` afterwards.
pub fn variable_by_flips(s: &Surface, flips: &[Label], position: Label) -> Result<LaurentPolynomial, MutationError> {
    let n = s.n_arcs();
    for &l in flips.iter().chain(std::iter::once(&position)) {
        if l >= n {
            return Err(MutationError::NotAnArc(s.labels().get(l).cloned().unwrap_or_default()));
        }
    }
    let y: Vec<u32> = (0..n as u32).collect();
    let mut seed = seed_from_triangulation(s);
    for &f in flips {
        seed = seed.mutate(f, &y)?;
    }
    Ok(seed.cluster[position].clone())
}

/// Prime used for modular fingerprints.
pub const FINGERPRINT_PRIME: u64 = (1 << 61) - 1;

/// Flip directions that suffice to reach a triangulation containing `g`:
/// the arcs it crosses and, at a notched end, the arcs incident to that
/// puncture. Arcs compatible with `g` never need to move.
pub fn oracle_directions(s: &Surface, g: &TaggedArc) -> Vec<Label> {
    let mut out: Vec<Label> = g.crossings.clone();
    for end in 0..2 {
        if !g.notched(end) {
            continue;
        }
        let p = g.points[end];
        for l in 0..s.n_arcs() {
            let (a, b) = s.endpoints(l);
            if a == p || b == p {
                out.push(l);
            }
        }
        if let Some(sf) = s.self_folded_at(p) {
            out.push(sf.loop_);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Breadth-first search over seeds for a flip sequence producing `target`
/// (boundary variables specialized to 1). Cluster variables are replaced by
/// their values at one random point mod a prime, so a hit is only a
/// candidate: confirm it with [`variable_by_flips`]. Only the given
/// directions are mutated. Returns the flips and the position of the
/// matching variable.
pub fn search_flips(
    s: &Surface,
    target: &LaurentPolynomial,
    directions: &[Label],
    max_seeds: usize,
    rng_seed: u64,
) -> Option<(Vec<Label>, Label)> {
    let n = s.n_arcs();
    let p = FINGERPRINT_PRIME;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let xs: Vec<u64> = (0..n).map(|_| rng.gen_range(2..p)).collect();
    let ys: Vec<u64> = (0..n).map(|_| rng.gen_range(2..p)).collect();
    let want = target.eval_mod(p, |v| match v {
        Var::X(i) if (i as usize) < n => xs[i as usize],
        Var::X(_) => 1,
        Var::Y(i) => ys[i as usize],
    });
    let mut root = s.adjacency_matrix();
    for i in 0..n {
        root.push((0..n).map(|j| i64::from(i == j)).collect());
    }
    // nodes store (parent, flip, values); matrices are replayed from the root
    let mut nodes: Vec<(u32, u32, Vec<u64>)> = vec![(u32::MAX, u32::MAX, xs.clone())];
    let path_of = |nodes: &[(u32, u32, Vec<u64>)], mut i: usize| -> Vec<Label> {
        let mut out = Vec::new();
        while nodes[i].0 != u32::MAX {
            out.push(nodes[i].1 as usize);
            i = nodes[i].0 as usize;
        }
        out.reverse();
        out
    };
    let key = |x: &[u64]| -> Vec<u64> {
        let mut k = x.to_vec();
        k.sort_unstable();
        k
    };
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(key(&xs));
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(id) = queue.pop_front() {
        if let Some(i) = nodes[id].2.iter().position(|&v| v == want) {
            return Some((path_of(&nodes, id), i));
        }
        let path = path_of(&nodes, id);
        let mut e = root.clone();
        for &f in &path {
            e = mutate_matrix(&e, f);
        }
        for &i in directions {
            if path.last() == Some(&i) {
                continue;
            }
            let x = &nodes[id].2;
            let (mut pos, mut neg) = (1u64, 1u64);
            for k in 0..2 * n {
                let v = if k < n { x[k] } else { ys[k - n] };
                let b = e[k][i];
                if b > 0 {
                    pos = mul_mod(pos, pow_mod(v, b as u64, p), p);
                } else if b < 0 {
                    neg = mul_mod(neg, pow_mod(v, (-b) as u64, p), p);
                }
            }
            let mut nx = x.clone();
            nx[i] = mul_mod((pos + neg) % p, inv_mod(x[i], p), p);
            if !seen.insert(key(&nx)) {
                continue;
            }
            if seen.len() > max_seeds {
                return None;
            }
            nodes.push((id as u32, i as u32, nx));
            queue.push_back(nodes.len() - 1);
        }
    }
    None
}

/// A stored comparison: the flip sequence (arc names) after which the
/// variable at `position` should be the cluster variable of `arc`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleCase {
    pub name: String,
    pub surface: CombinatorialTriangulation,
    pub arc: ArcFile,
    pub flips: Vec<String>,
    pub position: String,
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Arc(#[from] ArcError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

/// Both sides of an oracle comparison, boundary variables set to 1.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub expansion: LaurentPolynomial,
    pub oracle: LaurentPolynomial,
}

impl OracleOutcome {
    pub fn agrees(&self) -> bool {
        self.expansion == self.oracle
    }
}

impl OracleCase {
    pub fn run(&self) -> Result<OracleOutcome, OracleError> {
        let s = Surface::build(&self.surface)?;
        let g = s.resolve_arc(&self.arc)?;
        let flips = self.flips.iter().map(|f| s.label(f)).collect::<Result<Vec<_>, _>>()?;
        let position = s.label(&self.position)?;
        Ok(OracleOutcome {
            expansion: specialize_boundary(&expand_tagged(&s, &g)?, &s),
            oracle: specialize_boundary(&variable_by_flips(&s, &flips, position)?, &s),
        })
    }
}
