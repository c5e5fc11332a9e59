//! Random data generators and naive reference computations shared by the
//! integration tests.  The references deliberately avoid the library's own
//! algorithms: paths are enumerated by plain recursion and forms are summed
//! straight from their definitions.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use quiver_moduli::cohomology::RationalRepresentation;
use quiver_moduli::linalg::RationalMatrix;
use quiver_moduli::{DimensionVector, Quiver, StabilityParameter};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn dv(v: &[i64]) -> DimensionVector {
    DimensionVector::new(v.to_vec()).unwrap()
}

pub fn theta(v: &[i64]) -> StabilityParameter {
    StabilityParameter::new(v.to_vec())
}

/// The 3-vertex example: `1 -> 2`, two arrows `2 -> 3`, and `1 -> 3`.
pub fn three_vertex() -> Quiver {
    Quiver::with_numbered_vertices(3, [(0, 1), (1, 2), (1, 2), (0, 2)]).unwrap()
}

/// Acyclic quiver on `2..=max_vertices` vertices with up to `max_parallel`
/// arrows between each ordered pair, shuffled so that vertex order is not
/// a topological order.  With `connected`, a random spanning tree is added.
pub fn random_acyclic_quiver<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_parallel: usize,
    connected: bool,
) -> Quiver {
    let n = rng.gen_range(2..=max_vertices);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut arrows = Vec::new();
    for lo in 0..n {
        for hi in lo + 1..n {
            let count = if rng.gen_bool(0.5) { rng.gen_range(0..=max_parallel) } else { 0 };
            arrows.extend(std::iter::repeat_n((label[lo], label[hi]), count));
        }
    }
    if connected {
        for k in 1..n {
            let parent = rng.gen_range(0..k);
            let (s, t) = (label[parent], label[k]);
            let present = arrows.iter().any(|&(a, b)| (a, b) == (s, t));
            if !present {
                arrows.push((s, t));
            }
        }
    }
    arrows.shuffle(rng);
    Quiver::with_numbered_vertices(n, arrows).unwrap()
}

pub fn random_dimension<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> DimensionVector {
    DimensionVector::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect()).unwrap()
}

/// A random parameter with `theta(d) = 0`: random weights, then the first
/// vertex with `d_k = 1` absorbs the defect.  `None` if no vertex is thin.
pub fn random_balanced_theta<R: Rng>(rng: &mut R, d: &DimensionVector, spread: i64) -> Option<StabilityParameter> {
    let pivot = d.values().iter().position(|&x| x == 1)?;
    let mut t: Vec<i64> = (0..d.len()).map(|_| rng.gen_range(-spread..=spread)).collect();
    t[pivot] = 0;
    let defect: i64 = t.iter().zip(d.values()).map(|(a, b)| a * b).sum();
    t[pivot] = -defect;
    Some(StabilityParameter::new(t))
}

/// Number of paths `from -> to` by explicit recursion over arrows.
pub fn dfs_path_count(q: &Quiver, from: usize, to: usize) -> u64 {
    if from == to {
        return 1 + q
            .arrows()
            .iter()
            .filter(|a| a.source == from)
            .map(|a| dfs_path_count(q, a.target, to))
            .sum::<u64>();
    }
    q.arrows()
        .iter()
        .filter(|a| a.source == from)
        .map(|a| dfs_path_count(q, a.target, to))
        .sum()
}

/// `sum e_i f_i - sum_a e_{s(a)} f_{t(a)}`.
pub fn naive_euler_form(q: &Quiver, e: &[i64], f: &[i64]) -> i64 {
    let vertices: i64 = e.iter().zip(f).map(|(a, b)| a * b).sum();
    let arrows: i64 = q.arrows().iter().map(|a| e[a.source] * f[a.target]).sum();
    vertices - arrows
}

/// All `0 <= e <= d` by nested counting, independent of the library iterator.
pub fn all_subvectors(d: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &bound in d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=bound).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn pair(t: &[i64], e: &[i64]) -> i64 {
    t.iter().zip(e).map(|(a, b)| a * b).sum()
}

/// Coprimality and the strong criterion straight from the definitions.
pub fn naive_coprime(d: &[i64], t: &[i64]) -> bool {
    all_subvectors(d)
        .iter()
        .filter(|e| e.iter().any(|&x| x != 0) && e.as_slice() != d)
        .all(|e| pair(t, e) != 0)
}

pub fn naive_strongly_amply_stable(q: &Quiver, d: &[i64], t: &[i64]) -> bool {
    all_subvectors(d)
        .iter()
        .filter(|e| e.iter().any(|&x| x != 0) && e.as_slice() != d)
        .filter(|e| pair(t, e) >= 0)
        .all(|e| {
            let rest: Vec<i64> = d.iter().zip(e.iter()).map(|(a, b)| a - b).collect();
            naive_euler_form(q, e, &rest) <= -2
        })
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn random_rational_representation<R: Rng>(
    rng: &mut R,
    q: &Quiver,
    d: &DimensionVector,
    entry_bound: i64,
) -> RationalRepresentation {
    let matrices = q
        .arrows()
        .iter()
        .map(|a| {
            let (r, c) = (d[a.target] as usize, d[a.source] as usize);
            let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-entry_bound..=entry_bound)).collect();
            RationalMatrix::from_integers(r, c, &entries)
        })
        .collect();
    RationalRepresentation::new(q, d.clone(), matrices).unwrap()
}
