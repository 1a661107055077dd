use std::collections::BTreeSet;
use std::fmt;

use super::SiteError;

/// A finite partial order; element `x` is identified with its index.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({:?}, covers {:?})", self.names, self.covers())
    }
}

impl Poset {
    /// From the full relation `x ≤ y`; reflexivity, antisymmetry and
    /// transitivity are verified.
    pub fn new(names: Vec<String>, leq: &[(usize, usize)]) -> Result<Poset, SiteError> {
        let n = names.len();
        check_names(&names)?;
        let mut m = vec![vec![false; n]; n];
        for &(x, y) in leq {
            if x >= n || y >= n {
                return Err(SiteError::UnknownElement(format!("#{}", x.max(y))));
            }
            m[x][y] = true;
        }
        let p = Poset { names, leq: m };
        for x in 0..n {
            if !p.leq[x][x] {
                return Err(SiteError::NotAPartialOrder(format!("{} ≤ {} missing", p.names[x], p.names[x])));
            }
            for y in 0..n {
                if x != y && p.leq[x][y] && p.leq[y][x] {
                    return Err(SiteError::NotAPartialOrder(format!("{} and {} are equivalent", p.names[x], p.names[y])));
                }
                for z in 0..n {
                    if p.leq[x][y] && p.leq[y][z] && !p.leq[x][z] {
                        return Err(SiteError::NotAPartialOrder(format!(
                            "{} ≤ {} ≤ {} but not {} ≤ {}",
                            p.names[x], p.names[y], p.names[z], p.names[x], p.names[z]
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Reflexive-transitive closure of the given relations, which must not create cycles.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Poset, SiteError> {
        let n = names.len();
        let mut m = vec![vec![false; n]; n];
        for (x, row) in m.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in covers {
            if x >= n || y >= n {
                return Err(SiteError::UnknownElement(format!("#{}", x.max(y))));
            }
            m[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        if m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| m[x][y]).collect();
        Poset::new(names, &pairs)
    }

    fn named(names: &[&str], covers: &[(usize, usize)]) -> Poset {
        Poset::from_covers(names.iter().map(|s| s.to_string()).collect(), covers).expect("built-in poset")
    }

    pub fn point() -> Poset {
        Poset::named(&["p"], &[])
    }

    /// `x0 < x1 < ... < x{n-1}`.
    pub fn chain(n: usize) -> Poset {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(names, &covers).expect("chain")
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_covers((0..n).map(|i| format!("x{i}")).collect(), &[]).expect("antichain")
    }

    /// Closed point `c` below the open point `o`.
    pub fn sierpinski() -> Poset {
        Poset::named(&["c", "o"], &[(0, 1)])
    }

    /// `a, b < x, y`: four points whose order complex is a square.
    pub fn pseudocircle() -> Poset {
        Poset::named(&["a", "b", "x", "y"], &[(0, 2), (0, 3), (1, 2), (1, 3)])
    }

    /// Three layers of two incomparable points, each layer below the next;
    /// the order complex is an octahedron.
    pub fn pseudo_sphere() -> Poset {
        Poset::named(
            &["a", "b", "c", "d", "e", "f"],
            &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)],
        )
    }

    /// A random order on `x0, …, x{n-1}` refining the index order: each pair
    /// `i < j` is a relation with probability 1/2 before closing up.
    pub fn random(n: usize, seed: u64) -> Poset {
        use rand::Rng as _;
        let mut rng = crate::random::seeded(seed);
        let rel: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).filter(|_| rng.gen_bool(0.5)).collect();
        Poset::from_covers((0..n).map(|i| format!("x{i}")).collect(), &rel).expect("relations along the index order close to an order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index(&self, name: &str) -> Result<usize, SiteError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| SiteError::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// Pairs `x < y` with nothing strictly between them.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The minimal open `↑x = {y : x ≤ y}`.
    pub fn up(&self, x: usize) -> OpenSet {
        OpenSet { members: self.elements().filter(|&y| self.leq(x, y)).collect() }
    }

    pub fn down(&self, x: usize) -> Vec<usize> {
        self.elements().filter(|&y| self.leq(y, x)).collect()
    }

    /// Minimal elements of a subset.
    pub fn minimal(&self, members: &[usize]) -> Vec<usize> {
        members.iter().copied().filter(|&x| !members.iter().any(|&y| self.lt(y, x))).collect()
    }

    /// A linear extension: every element after all elements below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| (self.down(x).len(), x));
        order
    }
}

fn check_names(names: &[String]) -> Result<(), SiteError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(SiteError::NotAPartialOrder(format!("duplicate element {n}")));
        }
    }
    Ok(())
}

/// An up-closed subset, members kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpenSet {
    members: Vec<usize>,
}

impl OpenSet {
    pub fn new(poset: &Poset, members: impl IntoIterator<Item = usize>) -> Result<OpenSet, SiteError> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&x) = set.iter().find(|&&x| x >= poset.len()) {
            return Err(SiteError::UnknownElement(format!("#{x}")));
        }
        for &x in &set {
            for y in poset.elements() {
                if poset.leq(x, y) && !set.contains(&y) {
                    return Err(SiteError::NotOpen(format!("{} ∈ U but {} ∉ U", poset.name(x), poset.name(y))));
                }
            }
        }
        Ok(OpenSet { members: set.into_iter().collect() })
    }

    pub fn empty() -> OpenSet {
        OpenSet { members: Vec::new() }
    }

    pub fn whole(poset: &Poset) -> OpenSet {
        OpenSet { members: poset.elements().collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        OpenSet { members: self.members.iter().copied().filter(|&x| other.contains(x)).collect() }
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        let s: BTreeSet<usize> = self.members.iter().chain(&other.members).copied().collect();
        OpenSet { members: s.into_iter().collect() }
    }

    pub fn label(&self, poset: &Poset) -> String {
        let names: Vec<&str> = self.members.iter().map(|&x| poset.name(x)).collect();
        format!("{{{}}}", names.join(","))
    }
}

pub const DEFAULT_OPEN_CAP: usize = 12;

/// Every open of the site, ordered by size and then lexicographically.
pub fn up_sets(poset: &Poset) -> Result<Vec<OpenSet>, SiteError> {
    up_sets_with_cap(poset, DEFAULT_OPEN_CAP)
}

pub fn up_sets_with_cap(poset: &Poset, cap: usize) -> Result<Vec<OpenSet>, SiteError> {
    let n = poset.len();
    if n > cap {
        return Err(SiteError::TooLarge { size: n, cap });
    }
    let ups: Vec<u64> =
        poset.elements().map(|x| poset.up(x).members().iter().fold(0u64, |acc, &y| acc | 1 << y)).collect();
    let mut out: Vec<OpenSet> = (0u64..1 << n)
        .filter(|mask| (0..n).all(|x| mask >> x & 1 == 0 || mask & ups[x] == ups[x]))
        .map(|mask| OpenSet { members: (0..n).filter(|x| mask >> x & 1 == 1).collect() })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

/// An order-preserving map of finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: std::sync::Arc<Poset>,
    target: std::sync::Arc<Poset>,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(
        source: std::sync::Arc<Poset>,
        target: std::sync::Arc<Poset>,
        values: Vec<usize>,
    ) -> Result<MonotoneMap, SiteError> {
        if values.len() != source.len() {
            return Err(SiteError::NotMonotone(format!("{} values for {} elements", values.len(), source.len())));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= target.len()) {
            return Err(SiteError::UnknownElement(format!("#{v}")));
        }
        for x in source.elements() {
            for y in source.elements() {
                if source.leq(x, y) && !target.leq(values[x], values[y]) {
                    return Err(SiteError::NotMonotone(format!(
                        "{} ≤ {} but {} ≰ {}",
                        source.name(x),
                        source.name(y),
                        target.name(values[x]),
                        target.name(values[y])
                    )));
                }
            }
        }
        Ok(MonotoneMap { source, target, values })
    }

    pub fn identity(p: std::sync::Arc<Poset>) -> MonotoneMap {
        let values = p.elements().collect();
        MonotoneMap { source: p.clone(), target: p, values }
    }

    /// The map to the one-point poset.
    pub fn collapse(p: std::sync::Arc<Poset>) -> MonotoneMap {
        let values = vec![0; p.len()];
        MonotoneMap { source: p, target: std::sync::Arc::new(Poset::point()), values }
    }

    pub fn source(&self) -> &std::sync::Arc<Poset> {
        &self.source
    }

    pub fn target(&self) -> &std::sync::Arc<Poset> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `f⁻¹(V)`, open because `f` is monotone.
    pub fn preimage(&self, v: &OpenSet) -> OpenSet {
        OpenSet { members: self.source.elements().filter(|&x| v.contains(self.values[x])).collect() }
    }
}
