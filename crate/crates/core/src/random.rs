//! Seeded generators for test instances.
//!
//! Multi-graded objects are sums of elementary cubes (identity maps along a
//! subset of directions) followed by a random change of basis at every
//! position, so all differentials commute and square to zero by construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{CochainComplex, Degree};
use crate::exactlin::{Field, Matrix, Scalar, Subspace};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sub-seed for trial `k` of a suite started from `seed`.
pub fn trial_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k.wrapping_mul(0xBF58_476D_1CE4_E5B9)) ^ (k << 17)
}

pub fn random_scalar(field: Field, rng: &mut Rng) -> Scalar {
    match field {
        Field::Rationals => field.scalar(rng.gen_range(-3..=3)),
        Field::Prime(p) => Scalar::Modular(rng.gen_range(0..p)),
    }
}

pub fn random_matrix(field: Field, rows: usize, cols: usize, rng: &mut Rng) -> Matrix {
    let v: Vec<Scalar> = (0..rows * cols).map(|_| random_scalar(field, rng)).collect();
    Matrix::from_scalars(field, rows, cols, &v)
}

pub fn random_invertible(field: Field, n: usize, rng: &mut Rng) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

pub type Position = Vec<i32>;

/// A finite multi-graded vector space with one commuting differential per
/// direction. Basis vectors carry weights that never decrease along maps.
#[derive(Clone, Debug)]
pub struct MultiComplex {
    pub field: Field,
    pub ndirs: usize,
    dims: BTreeMap<Position, usize>,
    maps: BTreeMap<(usize, Position), Matrix>,
    weights: BTreeMap<Position, Vec<i32>>,
    frames: BTreeMap<Position, Matrix>,
}

#[derive(Clone, Debug)]
pub struct CubeSpec {
    /// Inclusive range per direction.
    pub ranges: Vec<(i32, i32)>,
    pub max_dim: usize,
    pub cubes: usize,
    /// Directions allowed to carry a cube edge (others hold single points only).
    pub edge_dirs: Vec<bool>,
    /// Directions every cube must span (used for acyclic summands).
    pub force_dirs: Vec<bool>,
}

impl CubeSpec {
    pub fn new(ranges: Vec<(i32, i32)>, max_dim: usize, cubes: usize) -> Self {
        let n = ranges.len();
        CubeSpec { ranges, max_dim, cubes, edge_dirs: vec![true; n], force_dirs: vec![false; n] }
    }
}

struct Cube {
    base: Position,
    dirs: Vec<usize>,
    base_weight: i32,
    step: Vec<i32>,
}

fn offset(base: &Position, dirs: &[usize], mask: usize) -> Position {
    let mut p = base.clone();
    for (b, d) in dirs.iter().enumerate() {
        if mask >> b & 1 == 1 {
            p[*d] += 1;
        }
    }
    p
}

impl MultiComplex {
    pub fn zero(field: Field, ndirs: usize) -> Self {
        MultiComplex {
            field,
            ndirs,
            dims: BTreeMap::new(),
            maps: BTreeMap::new(),
            weights: BTreeMap::new(),
            frames: BTreeMap::new(),
        }
    }

    pub fn random(field: Field, spec: &CubeSpec, rng: &mut Rng) -> Self {
        let ndirs = spec.ranges.len();
        let mut dims: BTreeMap<Position, usize> = BTreeMap::new();
        let mut cubes = Vec::new();
        for _ in 0..spec.cubes * 4 {
            if cubes.len() == spec.cubes {
                break;
            }
            let dirs: Vec<usize> =
                (0..ndirs).filter(|d| spec.force_dirs[*d] || (spec.edge_dirs[*d] && rng.gen_bool(0.5))).collect();
            let mut base = Vec::with_capacity(ndirs);
            let mut ok = true;
            for (d, (lo, hi)) in spec.ranges.iter().enumerate() {
                let top = if dirs.contains(&d) { hi - 1 } else { *hi };
                if top < *lo {
                    ok = false;
                    break;
                }
                base.push(rng.gen_range(*lo..=top));
            }
            if !ok {
                continue;
            }
            let verts: Vec<Position> = (0..1usize << dirs.len()).map(|m| offset(&base, &dirs, m)).collect();
            if verts.iter().any(|v| dims.get(v).copied().unwrap_or(0) >= spec.max_dim) {
                continue;
            }
            for v in verts {
                *dims.entry(v).or_insert(0) += 1;
            }
            let step = dirs.iter().map(|_| rng.gen_range(0..=1)).collect();
            cubes.push(Cube { base, dirs, base_weight: rng.gen_range(0..=2), step });
        }
        MultiComplex::from_cubes(field, ndirs, &cubes, rng)
    }

    fn from_cubes(field: Field, ndirs: usize, cubes: &[Cube], rng: &mut Rng) -> Self {
        // basis index of (cube, vertex mask) at its position
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut dims: BTreeMap<Position, usize> = BTreeMap::new();
        let mut weights: BTreeMap<Position, Vec<i32>> = BTreeMap::new();
        for (c, cube) in cubes.iter().enumerate() {
            for mask in 0..1usize << cube.dirs.len() {
                let pos = offset(&cube.base, &cube.dirs, mask);
                let slot = dims.entry(pos.clone()).or_insert(0);
                index.insert((c, mask), *slot);
                *slot += 1;
                let w = cube.base_weight
                    + (0..cube.dirs.len()).filter(|b| mask >> b & 1 == 1).map(|b| cube.step[b]).sum::<i32>();
                weights.entry(pos).or_default().push(w);
            }
        }
        let mut entries: BTreeMap<(usize, Position), Vec<(usize, usize, i64)>> = BTreeMap::new();
        for (c, cube) in cubes.iter().enumerate() {
            for (b, d) in cube.dirs.iter().enumerate() {
                for mask in (0..1usize << cube.dirs.len()).filter(|m| m >> b & 1 == 0) {
                    let src = offset(&cube.base, &cube.dirs, mask);
                    let (i, j) = (index[&(c, mask | 1 << b)], index[&(c, mask)]);
                    entries.entry((*d, src)).or_default().push((i, j, 1));
                }
            }
        }
        let frames: BTreeMap<Position, Matrix> =
            dims.iter().map(|(p, n)| (p.clone(), random_invertible(field, *n, rng))).collect();
        let inverses: BTreeMap<&Position, Matrix> =
            frames.iter().map(|(p, g)| (p, g.inverse().expect("frames are invertible"))).collect();
        let maps = entries
            .into_iter()
            .map(|((d, src), e)| {
                let mut tgt = src.clone();
                tgt[d] += 1;
                let raw = Matrix::from_entries(field, dims[&tgt], dims[&src], e);
                let m = frames[&tgt].mul(&raw).mul(&inverses[&src]);
                ((d, src), m)
            })
            .collect();
        MultiComplex { field, ndirs, dims, maps, weights, frames }
    }

    pub fn dim(&self, pos: &[i32]) -> usize {
        self.dims.get(pos).copied().unwrap_or(0)
    }

    /// The differential in direction `dir` leaving `pos`.
    pub fn map(&self, dir: usize, pos: &[i32]) -> Matrix {
        let mut tgt = pos.to_vec();
        tgt[dir] += 1;
        match self.maps.get(&(dir, pos.to_vec())) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.field, self.dim(&tgt), self.dim(pos)),
        }
    }

    /// Span of the basis vectors of weight `>= k` at `pos`.
    pub fn filtration(&self, pos: &[i32], k: i32) -> Subspace {
        let n = self.dim(pos);
        if n == 0 {
            return Subspace::zero(self.field, 0);
        }
        let idx: Vec<usize> = self.weights[pos].iter().enumerate().filter(|(_, w)| **w >= k).map(|(i, _)| i).collect();
        Subspace::span(&self.frames[pos].select_cols(&idx))
    }

    pub fn weight_range(&self) -> (i32, i32) {
        let all = self.weights.values().flatten();
        let lo = all.clone().copied().min().unwrap_or(0);
        let hi = all.copied().max().unwrap_or(0);
        (lo, hi)
    }

    pub fn positions(&self) -> impl Iterator<Item = &Position> {
        self.dims.keys()
    }

    /// Direct sum, `other` placed after `self` at every position.
    pub fn direct_sum(&self, other: &MultiComplex) -> MultiComplex {
        assert_eq!(self.ndirs, other.ndirs);
        let field = self.field;
        let mut keys: Vec<Position> = self.dims.keys().chain(other.dims.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        let dims: BTreeMap<Position, usize> = keys.iter().map(|p| (p.clone(), self.dim(p) + other.dim(p))).collect();
        let mut maps = BTreeMap::new();
        for p in &keys {
            for d in 0..self.ndirs {
                let m = Matrix::block_diag(field, &[&self.map(d, p), &other.map(d, p)]);
                if !m.is_zero() {
                    maps.insert((d, p.clone()), m);
                }
            }
        }
        let join = |a: Option<&Vec<i32>>, b: Option<&Vec<i32>>| {
            a.into_iter().flatten().chain(b.into_iter().flatten()).copied().collect::<Vec<i32>>()
        };
        let weights = keys.iter().map(|p| (p.clone(), join(self.weights.get(p), other.weights.get(p)))).collect();
        let frames = keys
            .iter()
            .map(|p| {
                let a = self.frames.get(p).cloned().unwrap_or_else(|| Matrix::identity(field, 0));
                let b = other.frames.get(p).cloned().unwrap_or_else(|| Matrix::identity(field, 0));
                (p.clone(), Matrix::block_diag(field, &[&a, &b]))
            })
            .collect();
        MultiComplex { field, ndirs: self.ndirs, dims, maps, weights, frames }
    }

    /// The single complex along direction `dir` through the line fixed by `at`.
    pub fn line(&self, dir: usize, at: &[i32], lo: Degree, hi: Degree) -> CochainComplex {
        let pos = |n: Degree| {
            let mut p = at.to_vec();
            p[dir] = n;
            p
        };
        let dims = (lo..=hi).map(|n| self.dim(&pos(n))).collect();
        let diffs = (lo..hi).map(|n| self.map(dir, &pos(n))).collect();
        CochainComplex::new(self.field, lo, dims, diffs).expect("cube sums are complexes")
    }
}

/// Canonical projection of a sum `A ⊕ B` (as built by `direct_sum`) onto `A`.
pub fn first_summand_projection(sum: &MultiComplex, first: &MultiComplex, pos: &[i32]) -> Matrix {
    let (a, n) = (first.dim(pos), sum.dim(pos));
    Matrix::from_entries(sum.field, a, n, (0..a).map(|i| (i, i, 1)))
}

/// Random bounded complex in degrees `lo..=hi` with dimensions `<= max_dim`.
pub fn random_complex(field: Field, lo: Degree, hi: Degree, max_dim: usize, rng: &mut Rng) -> CochainComplex {
    let cubes = rng.gen_range(0..=((hi - lo + 1) as usize * max_dim).max(1));
    let mc = MultiComplex::random(field, &CubeSpec::new(vec![(lo, hi)], max_dim, cubes), rng);
    mc.line(0, &[0], lo, hi)
}

/// A random complex with at least one nonzero cohomology class somewhere.
pub fn random_noncontractible(field: Field, lo: Degree, hi: Degree, max_dim: usize, rng: &mut Rng) -> CochainComplex {
    loop {
        let c = random_complex(field, lo, hi, max_dim, rng);
        if crate::complexes::betti(&c).values().any(|b| *b > 0) {
            return c;
        }
    }
}

pub fn choose<'a, T>(items: &'a [T], rng: &mut Rng) -> &'a T {
    items.choose(rng).expect("choose from empty slice")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::betti;

    #[test]
    fn generators_are_deterministic() {
        let f = Field::Prime(5);
        let a = random_complex(f, 0, 3, 3, &mut seeded(11));
        let b = random_complex(f, 0, 3, 3, &mut seeded(11));
        assert_eq!(a, b);
    }

    #[test]
    fn multicomplex_differentials_commute() {
        let f = Field::Prime(5);
        let spec = CubeSpec::new(vec![(0, 2), (0, 2), (0, 2)], 3, 10);
        let mc = MultiComplex::random(f, &spec, &mut seeded(3));
        for p in mc.positions().cloned().collect::<Vec<_>>() {
            for a in 0..3 {
                let mut pa = p.clone();
                pa[a] += 1;
                assert!(mc.map(a, &pa).mul(&mc.map(a, &p)).is_zero());
                for b in 0..3 {
                    let mut pb = p.clone();
                    pb[b] += 1;
                    assert_eq!(mc.map(b, &pa).mul(&mc.map(a, &p)), mc.map(a, &pb).mul(&mc.map(b, &p)));
                }
            }
        }
    }

    #[test]
    fn weights_are_respected_by_maps() {
        let f = Field::Rationals;
        let spec = CubeSpec::new(vec![(0, 2), (0, 2)], 3, 6);
        let mc = MultiComplex::random(f, &spec, &mut seeded(5));
        let (lo, hi) = mc.weight_range();
        for p in mc.positions().cloned().collect::<Vec<_>>() {
            for d in 0..2 {
                let mut q = p.clone();
                q[d] += 1;
                for k in lo..=hi + 1 {
                    let img = mc.filtration(&p, k).image_under(&mc.map(d, &p));
                    assert!(mc.filtration(&q, k).contains(&img));
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_matches_betti() {
        let f = Field::Prime(7);
        let mut rng = seeded(9);
        for _ in 0..10 {
            let c = random_complex(f, -1, 3, 3, &mut rng);
            let chi: i64 = betti(&c).iter().map(|(n, b)| crate::complexes::sign(*n) * *b as i64).sum();
            assert_eq!(chi, c.euler_characteristic());
        }
    }
}
