//! Exact enumeration of lattice trees and lattice (bond) animals that contain
//! the origin.
//!
//! The search is Redelmeier's algorithm run on the bond adjacency graph with a
//! virtual root joined to every bond at the origin: connected sets containing
//! the root and `n` further nodes are exactly the `n`-bond connected
//! subgraphs that contain the origin, and each is generated exactly once.
//! Tree enumeration skips any bond whose endpoints are both already present.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Bond, LatticeSpec, Site};

/// Exact non-negative count.
pub type BigCount = BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Tree,
    Animal,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Tree => "tree",
            Kind::Animal => "animal",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Kind::Tree),
            "animal" => Ok(Kind::Animal),
            _ => Err(Error::InvalidInput(format!(
                "unknown kind {s:?}; expected tree or animal"
            ))),
        }
    }
}

/// Limits and parallelism for a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Maximum number of search nodes (bond insertions) before giving up.
    pub node_budget: u64,
    /// Worker threads; 0 means one per core, 1 runs on the calling thread.
    pub jobs: usize,
}

impl EnumOptions {
    pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            node_budget: Self::DEFAULT_NODE_BUDGET,
            jobs: 0,
        }
    }
}

/// A finite connected set of bonds containing the origin, with its vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BondSubgraph {
    bonds: BTreeSet<Bond>,
    vertices: BTreeSet<Site>,
}

impl BondSubgraph {
    /// Validates connectivity and that the origin is a vertex.
    pub fn new(dimension: usize, bonds: impl IntoIterator<Item = Bond>) -> Result<Self> {
        let g = Self::from_bonds_unchecked(dimension, bonds);
        if g.vertices.iter().any(|v| v.dimension() != dimension) {
            return Err(Error::InvalidInput("mixed site dimensions".into()));
        }
        if !g.vertices.contains(&Site::origin(dimension)) {
            return Err(Error::InvalidInput("subgraph does not contain the origin".into()));
        }
        if !g.is_connected() {
            return Err(Error::InvalidInput("subgraph is not connected".into()));
        }
        Ok(g)
    }

    pub(crate) fn from_bonds_unchecked(
        dimension: usize,
        bonds: impl IntoIterator<Item = Bond>,
    ) -> Self {
        let bonds: BTreeSet<Bond> = bonds.into_iter().collect();
        let mut vertices: BTreeSet<Site> = BTreeSet::new();
        for b in &bonds {
            vertices.insert(b.lo().clone());
            vertices.insert(b.hi().clone());
        }
        if bonds.is_empty() {
            vertices.insert(Site::origin(dimension));
        }
        BondSubgraph { bonds, vertices }
    }

    /// The lone origin vertex.
    pub fn single_vertex(dimension: usize) -> Self {
        Self::from_bonds_unchecked(dimension, [])
    }

    pub fn bonds(&self) -> &BTreeSet<Bond> {
        &self.bonds
    }

    pub fn vertices(&self) -> &BTreeSet<Site> {
        &self.vertices
    }

    /// Number of bonds.
    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    /// Cyclomatic number `|bonds| - |vertices| + 1`.
    pub fn cycles(&self) -> usize {
        self.bonds.len() + 1 - self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.cycles() == 0
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.iter().next() else {
            return true;
        };
        let mut adj: HashMap<&Site, Vec<&Site>> = HashMap::new();
        for b in &self.bonds {
            adj.entry(b.lo()).or_default().push(b.hi());
            adj.entry(b.hi()).or_default().push(b.lo());
        }
        let mut seen: BTreeSet<&Site> = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in adj.get(x).into_iter().flatten() {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

/// The finite part of the lattice reachable by `n`-bond subgraphs at the
/// origin. Bond ids follow the fixed bond order.
struct BondGraph {
    bonds: Vec<Bond>,
    ends: Vec<(u32, u32)>,
    nbrs: Vec<Vec<u32>>,
    origin_bonds: Vec<u32>,
    site_count: usize,
    origin_site: u32,
}

impl BondGraph {
    fn build(spec: &LatticeSpec, n: usize) -> Self {
        let offsets = spec.offsets();
        let origin = spec.origin();
        // Sites at graph distance <= n-1 can carry the near end of a bond.
        let mut dist: HashMap<Site, usize> = HashMap::from([(origin.clone(), 0)]);
        let mut queue = VecDeque::from([origin.clone()]);
        let mut inner = Vec::new();
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            if dx + 1 > n {
                continue;
            }
            inner.push(x.clone());
            for v in &offsets {
                let y = x.shifted(v);
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), dx + 1);
                    queue.push_back(y);
                }
            }
        }
        let mut bonds: BTreeSet<Bond> = BTreeSet::new();
        for x in &inner {
            for v in &offsets {
                bonds.insert(Bond::new(x.clone(), x.shifted(v)));
            }
        }
        let bonds: Vec<Bond> = bonds.into_iter().collect();

        fn intern<'s>(s: &'s Site, ids: &mut HashMap<&'s Site, u32>) -> u32 {
            let next = ids.len() as u32;
            *ids.entry(s).or_insert(next)
        }
        let mut site_ids: HashMap<&Site, u32> = HashMap::new();
        let origin_site = intern(&origin, &mut site_ids);
        let mut ends = Vec::with_capacity(bonds.len());
        for b in &bonds {
            let lo = intern(b.lo(), &mut site_ids);
            let hi = intern(b.hi(), &mut site_ids);
            ends.push((lo, hi));
        }
        let site_count = site_ids.len();
        let mut incident: Vec<Vec<u32>> = vec![Vec::new(); site_count];
        for (id, &(lo, hi)) in ends.iter().enumerate() {
            incident[lo as usize].push(id as u32);
            incident[hi as usize].push(id as u32);
        }
        let nbrs = ends
            .iter()
            .enumerate()
            .map(|(id, &(lo, hi))| {
                let mut v: Vec<u32> = incident[lo as usize]
                    .iter()
                    .chain(&incident[hi as usize])
                    .copied()
                    .filter(|&b| b != id as u32)
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        let origin_bonds = incident[origin_site as usize].clone();
        BondGraph {
            bonds,
            ends,
            nbrs,
            origin_bonds,
            site_count,
            origin_site,
        }
    }
}

/// A partially grown subgraph handed to a worker.
struct Task {
    chosen: Vec<u32>,
    untried: Vec<u32>,
    marked: Vec<u32>,
}

struct Search<'a> {
    graph: &'a BondGraph,
    kind: Kind,
    n_max: usize,
    seen: Vec<bool>,
    site_deg: Vec<u32>,
    chosen: Vec<u32>,
    marked: Vec<u32>,
    levels: Vec<Vec<u32>>,
    counts: Vec<u64>,
    budget: u64,
    spent: &'a AtomicU64,
    local: u64,
    split: Option<(usize, Vec<Task>)>,
}

const FLUSH: u64 = 1 << 14;

impl<'a> Search<'a> {
    fn new(graph: &'a BondGraph, kind: Kind, n_max: usize, budget: u64, spent: &'a AtomicU64) -> Self {
        let mut site_deg = vec![0; graph.site_count];
        // The origin is present even with no bonds.
        site_deg[graph.origin_site as usize] = 1;
        let mut seen = vec![false; graph.bonds.len()];
        for &b in &graph.origin_bonds {
            seen[b as usize] = true;
        }
        Search {
            graph,
            kind,
            n_max,
            seen,
            site_deg,
            chosen: Vec::with_capacity(n_max),
            marked: Vec::new(),
            levels: vec![Vec::new(); n_max + 1],
            counts: vec![0; n_max + 1],
            budget,
            spent,
            local: 0,
            split: None,
        }
    }

    fn resume(graph: &'a BondGraph, kind: Kind, n_max: usize, budget: u64, spent: &'a AtomicU64, task: Task) -> Self {
        let mut s = Search::new(graph, kind, n_max, budget, spent);
        for &b in &task.marked {
            s.seen[b as usize] = true;
        }
        s.marked = task.marked;
        for &b in &task.chosen {
            s.add(b);
        }
        s.levels[task.chosen.len()] = task.untried;
        s
    }

    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local == FLUSH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let total = self.spent.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if total > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    #[inline]
    fn closes_cycle(&self, b: u32) -> bool {
        let (lo, hi) = self.graph.ends[b as usize];
        self.site_deg[lo as usize] > 0 && self.site_deg[hi as usize] > 0
    }

    #[inline]
    fn add(&mut self, b: u32) {
        let (lo, hi) = self.graph.ends[b as usize];
        self.site_deg[lo as usize] += 1;
        self.site_deg[hi as usize] += 1;
        self.chosen.push(b);
    }

    #[inline]
    fn remove(&mut self, b: u32) {
        let (lo, hi) = self.graph.ends[b as usize];
        self.site_deg[lo as usize] -= 1;
        self.site_deg[hi as usize] -= 1;
        self.chosen.pop();
    }

    fn grow(&mut self, depth: usize, visit: &mut dyn FnMut(&[u32])) -> Result<()> {
        let mut untried = std::mem::take(&mut self.levels[depth]);
        while let Some(b) = untried.pop() {
            if self.kind == Kind::Tree && self.closes_cycle(b) {
                continue;
            }
            self.tick()?;
            self.add(b);
            let size = depth + 1;
            self.counts[size] += 1;
            if size == self.n_max {
                visit(&self.chosen);
            } else {
                let mut next = std::mem::take(&mut self.levels[size]);
                next.clear();
                next.extend_from_slice(&untried);
                let mark = self.marked.len();
                for &nb in &self.graph.nbrs[b as usize] {
                    if !self.seen[nb as usize] {
                        self.seen[nb as usize] = true;
                        next.push(nb);
                        self.marked.push(nb);
                    }
                }
                match &mut self.split {
                    Some((at, tasks)) if *at == size => {
                        tasks.push(Task {
                            chosen: self.chosen.clone(),
                            untried: next.clone(),
                            marked: self.marked.clone(),
                        });
                        self.levels[size] = next;
                    }
                    _ => {
                        self.levels[size] = next;
                        self.grow(size, visit)?;
                    }
                }
                for nb in self.marked.drain(mark..) {
                    self.seen[nb as usize] = false;
                }
            }
            self.remove(b);
        }
        self.levels[depth] = untried;
        Ok(())
    }

    fn run_from_root(&mut self, visit: &mut dyn FnMut(&[u32])) -> Result<()> {
        self.levels[0] = self.graph.origin_bonds.clone();
        self.counts[0] = 1;
        if self.n_max == 0 {
            visit(&[]);
            return self.flush();
        }
        self.grow(0, visit)?;
        self.flush()
    }
}

fn to_subgraph(graph: &BondGraph, d: usize, ids: &[u32]) -> BondSubgraph {
    BondSubgraph::from_bonds_unchecked(d, ids.iter().map(|&b| graph.bonds[b as usize].clone()))
}

/// Counts of `kind` objects with `0..=n_max` bonds containing the origin.
pub fn count_subgraphs(
    spec: &LatticeSpec,
    kind: Kind,
    n_max: usize,
    opts: &EnumOptions,
) -> Result<Vec<BigCount>> {
    let graph = BondGraph::build(spec, n_max);
    let spent = AtomicU64::new(0);
    let split_at = 2;
    let sequential = opts.jobs == 1 || n_max < split_at + 2;

    let mut root = Search::new(&graph, kind, n_max, opts.node_budget, &spent);
    if !sequential {
        root.split = Some((split_at, Vec::new()));
    }
    root.run_from_root(&mut |_| {})?;
    let mut totals: Vec<BigCount> = root.counts.iter().map(|&c| BigCount::from(c)).collect();
    let Some((_, tasks)) = root.split.take() else {
        return Ok(totals);
    };

    let work = || -> Result<Vec<Vec<u64>>> {
        tasks
            .into_par_iter()
            .map(|task| {
                let mut s = Search::resume(&graph, kind, n_max, opts.node_budget, &spent, task);
                s.grow(split_at, &mut |_| {})?;
                s.flush()?;
                Ok(s.counts)
            })
            .collect()
    };
    let partials = if opts.jobs == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(work)?
    };
    for counts in partials {
        for (t, c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    Ok(totals)
}

/// Visits every `kind` subgraph with exactly `n` bonds containing the origin,
/// in a fixed order.
pub fn for_each_subgraph(
    spec: &LatticeSpec,
    n: usize,
    kind: Kind,
    opts: &EnumOptions,
    mut visit: impl FnMut(&BondSubgraph),
) -> Result<()> {
    let graph = BondGraph::build(spec, n);
    let spent = AtomicU64::new(0);
    let d = spec.dimension();
    let mut s = Search::new(&graph, kind, n, opts.node_budget, &spent);
    s.run_from_root(&mut |ids| visit(&to_subgraph(&graph, d, ids)))
}

/// All `kind` subgraphs with exactly `n` bonds containing the origin.
pub fn enumerate_subgraphs(
    spec: &LatticeSpec,
    n: usize,
    kind: Kind,
    opts: &EnumOptions,
) -> Result<Vec<BondSubgraph>> {
    let mut out = Vec::new();
    for_each_subgraph(spec, n, kind, opts, |g| out.push(g.clone()))?;
    Ok(out)
}

/// `t_n`, with default options and no cache.
pub fn count_trees(spec: &LatticeSpec, n: usize) -> Result<BigCount> {
    Ok(count_subgraphs(spec, Kind::Tree, n, &EnumOptions::default())?.swap_remove(n))
}

/// `a_n`, with default options and no cache.
pub fn count_animals(spec: &LatticeSpec, n: usize) -> Result<BigCount> {
    Ok(count_subgraphs(spec, Kind::Animal, n, &EnumOptions::default())?.swap_remove(n))
}

/// Cyclomatic number of a connected subgraph.
pub fn cycles(g: &BondSubgraph) -> usize {
    g.cycles()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i32]) -> Site {
        Site::new(c.to_vec())
    }

    fn nn(d: usize) -> LatticeSpec {
        LatticeSpec::nearest_neighbour(d).unwrap()
    }

    fn seq() -> EnumOptions {
        EnumOptions {
            jobs: 1,
            ..EnumOptions::default()
        }
    }

    /// Every connected `n`-bond set at the origin, by brute force over all
    /// `n`-subsets of bonds near the origin.
    fn brute_force(spec: &LatticeSpec, n: usize, kind: Kind) -> BTreeSet<BondSubgraph> {
        let d = spec.dimension();
        let mut region: BTreeSet<Site> = BTreeSet::from([spec.origin()]);
        for _ in 0..n {
            let grown: Vec<Site> = region
                .iter()
                .flat_map(|x| spec.neighbors(x).unwrap())
                .collect();
            region.extend(grown);
        }
        let mut bonds: BTreeSet<Bond> = BTreeSet::new();
        for x in &region {
            for y in spec.neighbors(x).unwrap() {
                if region.contains(&y) {
                    bonds.insert(Bond::new(x.clone(), y));
                }
            }
        }
        let bonds: Vec<Bond> = bonds.into_iter().collect();
        let mut out = BTreeSet::new();
        let mut pick = Vec::new();
        fn rec(
            i: usize,
            n: usize,
            bonds: &[Bond],
            pick: &mut Vec<Bond>,
            d: usize,
            kind: Kind,
            out: &mut BTreeSet<BondSubgraph>,
        ) {
            if pick.len() == n {
                if let Ok(g) = BondSubgraph::new(d, pick.iter().cloned()) {
                    if kind == Kind::Animal || g.is_tree() {
                        out.insert(g);
                    }
                }
                return;
            }
            if i == bonds.len() || bonds.len() - i < n - pick.len() {
                return;
            }
            pick.push(bonds[i].clone());
            rec(i + 1, n, bonds, pick, d, kind, out);
            pick.pop();
            rec(i + 1, n, bonds, pick, d, kind, out);
        }
        rec(0, n, &bonds, &mut pick, d, kind, &mut out);
        out
    }

    #[test]
    fn one_dimensional_segments() {
        let got = enumerate_subgraphs(&nn(1), 2, Kind::Tree, &seq()).unwrap();
        assert_eq!(got.len(), 3);
        let set: BTreeSet<_> = got.into_iter().collect();
        for start in [-2, -1, 0] {
            let seg = BondSubgraph::new(
                1,
                [
                    Bond::new(s(&[start]), s(&[start + 1])),
                    Bond::new(s(&[start + 1]), s(&[start + 2])),
                ],
            )
            .unwrap();
            assert!(set.contains(&seg));
        }
        let counts = count_subgraphs(&nn(1), Kind::Animal, 20, &seq()).unwrap();
        for (n, c) in counts.iter().enumerate() {
            assert_eq!(*c, BigCount::from(n + 1));
        }
    }

    #[test]
    fn empty_subgraph_is_the_origin() {
        let got = enumerate_subgraphs(&nn(2), 0, Kind::Animal, &seq()).unwrap();
        assert_eq!(got, vec![BondSubgraph::single_vertex(2)]);
        assert_eq!(got[0].vertices().len(), 1);
        assert_eq!(count_trees(&nn(2), 0).unwrap(), BigCount::from(1u32));
    }

    #[test]
    fn small_counts_match_brute_force() {
        let cases = [
            (nn(2), 4),
            (nn(3), 3),
            (LatticeSpec::spread_out(2, 1).unwrap(), 3),
            (LatticeSpec::spread_out(1, 2).unwrap(), 4),
        ];
        for (spec, n_max) in cases {
            for kind in [Kind::Tree, Kind::Animal] {
                for n in 0..=n_max {
                    let oracle = brute_force(&spec, n, kind);
                    let got = enumerate_subgraphs(&spec, n, kind, &seq()).unwrap();
                    let set: BTreeSet<_> = got.iter().cloned().collect();
                    assert_eq!(set.len(), got.len(), "duplicates for {spec} {kind} n={n}");
                    assert_eq!(set, oracle, "{spec} {kind} n={n}");
                }
            }
        }
    }

    #[test]
    fn square_lattice_small_values() {
        // Frozen from `brute_force` above.
        let trees = count_subgraphs(&nn(2), Kind::Tree, 4, &seq()).unwrap();
        let animals = count_subgraphs(&nn(2), Kind::Animal, 4, &seq()).unwrap();
        assert_eq!(trees[1], BigCount::from(4u32));
        assert_eq!(trees[2], BigCount::from(18u32));
        assert_eq!(animals[3], trees[3]);
        assert_eq!(animals[4], &trees[4] + 4u32);
        let cyclic: Vec<_> = enumerate_subgraphs(&nn(2), 4, Kind::Animal, &seq())
            .unwrap()
            .into_iter()
            .filter(|g| g.cycles() > 0)
            .collect();
        assert_eq!(cyclic.len(), 4);
        assert!(cyclic.iter().all(|g| g.cycles() == 1 && g.vertices().len() == 4));
    }

    #[test]
    fn parallel_agrees_with_sequential() {
        for spec in [nn(2), LatticeSpec::spread_out(2, 1).unwrap()] {
            for kind in [Kind::Tree, Kind::Animal] {
                let a = count_subgraphs(&spec, kind, 6, &seq()).unwrap();
                for jobs in [0, 2, 3] {
                    let opts = EnumOptions { jobs, ..seq() };
                    assert_eq!(count_subgraphs(&spec, kind, 6, &opts).unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn enumeration_order_is_deterministic() {
        let a = enumerate_subgraphs(&nn(2), 4, Kind::Animal, &seq()).unwrap();
        let b = enumerate_subgraphs(&nn(2), 4, Kind::Animal, &seq()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = EnumOptions {
            node_budget: 1000,
            jobs: 1,
        };
        let err = count_subgraphs(&nn(2), Kind::Animal, 8, &opts).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1000 }));
        let opts = EnumOptions {
            node_budget: 1000,
            jobs: 2,
        };
        assert!(count_subgraphs(&nn(2), Kind::Animal, 8, &opts).is_err());
    }

    #[test]
    fn cyclomatic_numbers() {
        let sq = BondSubgraph::new(
            2,
            [
                Bond::new(s(&[0, 0]), s(&[1, 0])),
                Bond::new(s(&[0, 0]), s(&[0, 1])),
                Bond::new(s(&[1, 0]), s(&[1, 1])),
                Bond::new(s(&[0, 1]), s(&[1, 1])),
            ],
        )
        .unwrap();
        assert_eq!(cycles(&sq), 1);
        let mut two = sq.bonds().clone();
        two.insert(Bond::new(s(&[1, 0]), s(&[2, 0])));
        two.insert(Bond::new(s(&[2, 0]), s(&[2, 1])));
        two.insert(Bond::new(s(&[1, 1]), s(&[2, 1])));
        let two = BondSubgraph::new(2, two).unwrap();
        assert_eq!((two.len(), two.vertices().len()), (7, 6));
        assert_eq!(cycles(&two), 2);
    }

    #[test]
    fn subgraph_validation() {
        let far = Bond::new(s(&[3, 0]), s(&[4, 0]));
        assert!(BondSubgraph::new(2, [far.clone()]).is_err());
        let near = Bond::new(s(&[0, 0]), s(&[1, 0]));
        assert!(BondSubgraph::new(2, [near, far]).is_err());
    }

    #[test]
    fn axis_relabelling_preserves_counts() {
        // Reflecting coordinates changes the enumeration order but not the set.
        let spec = nn(3);
        let set: BTreeSet<_> = enumerate_subgraphs(&spec, 3, Kind::Animal, &seq())
            .unwrap()
            .into_iter()
            .collect();
        let swap = |x: &Site| Site::new(vec![x.coords()[2], x.coords()[0], x.coords()[1]]);
        let mapped: BTreeSet<_> = set
            .iter()
            .map(|g| {
                BondSubgraph::new(3, g.bonds().iter().map(|b| Bond::new(swap(b.lo()), swap(b.hi()))))
                    .unwrap()
            })
            .collect();
        assert_eq!(mapped, set);
    }
}
