//! Mean-field configurations `(T, phi)`: a plane tree together with a map
//! sending its root to a fixed site and each other vertex to a lattice
//! neighbour of its parent's image. There is no self-avoidance, so a tree
//! with `n` edges has exactly `K^n` maps.
//!
//! The folding checks count the configurations whose edges land one-to-one on
//! a target: the bonds of a lattice tree, or the full bonds and half-bonds of
//! a cut-tree. An edge lands on a half-bond only when it runs from the
//! retained end to the removed end, and then its child must be a leaf.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cuttree::CutTree;
use crate::enumeration::{BigCount, BondSubgraph};
use crate::error::{Error, Result};
use crate::lattice::{Bond, LatticeSpec, Site};
use crate::planetree::{
    degree_factorial_product, enumerate_plane_trees, weight, w_closed_form, ExactRational,
    PlaneTree,
};

/// Work limit for folding searches and map enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldOptions {
    /// Maximum number of `(T, phi)` search nodes per call.
    pub pair_budget: u64,
}

impl FoldOptions {
    pub const DEFAULT_PAIR_BUDGET: u64 = 100_000_000;
}

impl Default for FoldOptions {
    fn default() -> Self {
        FoldOptions {
            pair_budget: Self::DEFAULT_PAIR_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanFieldConfig {
    pub tree: PlaneTree,
    /// Image of each tree vertex, in preorder.
    pub phi: Vec<Site>,
}

/// Image multigraph of a configuration, collapsed to simple bonds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub subgraph: BondSubgraph,
    pub multiplicity: BTreeMap<Bond, usize>,
}

impl MeanFieldConfig {
    /// Directed tree edges as `(parent image, child image, child vertex)`.
    fn edges(&self) -> impl Iterator<Item = (&Site, &Site, usize)> + '_ {
        self.tree
            .parents()
            .into_iter()
            .enumerate()
            .filter_map(move |(v, p)| p.map(|p| (&self.phi[p], &self.phi[v], v)))
    }

    pub fn image(&self) -> Image {
        let mut multiplicity: BTreeMap<Bond, usize> = BTreeMap::new();
        for (a, b, _) in self.edges() {
            *multiplicity.entry(Bond::new(a.clone(), b.clone())).or_default() += 1;
        }
        let d = self.phi[0].dimension();
        Image {
            subgraph: BondSubgraph::from_bonds_unchecked(d, multiplicity.keys().cloned()),
            multiplicity,
        }
    }

    /// The edge map is a bijection onto the bonds of `target`.
    pub fn folds_onto_tree(&self, target: &BondSubgraph) -> bool {
        let img = self.image();
        img.multiplicity.len() == target.len()
            && img.multiplicity.values().all(|&m| m == 1)
            && img.subgraph.bonds() == target.bonds()
    }

    /// Every full bond and half-bond of `target` is the image of exactly one
    /// edge, and edges on half-bonds point at the removed end from a leaf.
    pub fn folds_onto_cuttree(&self, target: &CutTree) -> bool {
        if self.tree.edges() != target.len() {
            return false;
        }
        let mut used: HashMap<Bond, bool> = HashMap::new();
        for (a, b, child) in self.edges() {
            let bond = Bond::new(a.clone(), b.clone());
            let ok = if target.full_bonds().contains(&bond) {
                true
            } else {
                target.half_bonds().iter().any(|h| {
                    h.bond == bond && h.retained_site() == a && self.tree.is_leaf(child)
                })
            };
            if !ok || used.insert(bond, true).is_some() {
                return false;
            }
        }
        true
    }
}

fn check_budget(count: u64, opts: &FoldOptions) -> Result<()> {
    if count > opts.pair_budget {
        return Err(Error::BudgetExceeded {
            budget: opts.pair_budget,
        });
    }
    Ok(())
}

/// Calls `visit` with every `phi` in `Phi(T)`, root at the origin.
pub fn for_each_map(
    spec: &LatticeSpec,
    tree: &PlaneTree,
    opts: &FoldOptions,
    mut visit: impl FnMut(&[Site]),
) -> Result<()> {
    let k = spec.degree();
    let total = k
        .checked_pow(tree.edges() as u32)
        .unwrap_or(u64::MAX);
    check_budget(total, opts)?;
    let offsets = spec.offsets();
    let parents = tree.parents();
    let mut phi = vec![spec.origin(); tree.vertex_count()];
    fn rec(
        v: usize,
        parents: &[Option<usize>],
        offsets: &[Vec<i32>],
        phi: &mut Vec<Site>,
        visit: &mut dyn FnMut(&[Site]),
    ) {
        if v == phi.len() {
            visit(phi);
            return;
        }
        let p = parents[v].expect("non-root vertex");
        for off in offsets {
            phi[v] = phi[p].shifted(off);
            rec(v + 1, parents, offsets, phi, visit);
        }
    }
    rec(1, &parents, &offsets, &mut phi, &mut visit);
    Ok(())
}

/// All `K^n` configurations over `tree`.
pub fn enumerate_maps(
    spec: &LatticeSpec,
    tree: &PlaneTree,
    opts: &FoldOptions,
) -> Result<Vec<MeanFieldConfig>> {
    let mut out = Vec::new();
    for_each_map(spec, tree, opts, |phi| {
        out.push(MeanFieldConfig {
            tree: tree.clone(),
            phi: phi.to_vec(),
        })
    })?;
    Ok(out)
}

/// `f_n` by direct enumeration: each tree weight times `|Phi(T)|`.
pub fn f_count_by_configurations(
    spec: &LatticeSpec,
    n: usize,
    opts: &FoldOptions,
) -> Result<ExactRational> {
    let mut total = ExactRational::zero();
    for tree in enumerate_plane_trees(n) {
        let mut maps: u64 = 0;
        for_each_map(spec, &tree, opts, |_| maps += 1)?;
        total += weight(&tree) * BigRational::from_integer(BigInt::from(maps));
    }
    Ok(total)
}

/// Elements a tree edge may land on, indexed by the parent's image site.
struct FoldTarget {
    /// `(element, child image, child must be a leaf)`
    steps: HashMap<Site, Vec<(usize, Site, bool)>>,
    size: usize,
}

impl FoldTarget {
    fn from_bonds<'a>(bonds: impl IntoIterator<Item = &'a Bond>) -> Self {
        let mut t = FoldTarget {
            steps: HashMap::new(),
            size: 0,
        };
        for b in bonds {
            t.add_full(b);
        }
        t
    }

    fn add_full(&mut self, b: &Bond) {
        let id = self.size;
        self.size += 1;
        self.steps
            .entry(b.lo().clone())
            .or_default()
            .push((id, b.hi().clone(), false));
        self.steps
            .entry(b.hi().clone())
            .or_default()
            .push((id, b.lo().clone(), false));
    }

    fn from_cuttree(x: &CutTree) -> Self {
        let mut t = FoldTarget::from_bonds(x.full_bonds());
        for h in x.half_bonds() {
            let id = t.size;
            t.size += 1;
            t.steps
                .entry(h.retained_site().clone())
                .or_default()
                .push((id, h.removed_site().clone(), true));
        }
        t
    }
}

/// Number of `phi` with root at `root` folding `tree` onto `target`.
fn count_folds(
    tree: &PlaneTree,
    target: &FoldTarget,
    root: &Site,
    spent: &mut u64,
    opts: &FoldOptions,
) -> Result<u64> {
    if tree.edges() != target.size {
        return Ok(0);
    }
    struct State<'a> {
        parents: Vec<Option<usize>>,
        leaf: Vec<bool>,
        target: &'a FoldTarget,
        phi: Vec<Site>,
        used: Vec<bool>,
        spent: &'a mut u64,
        budget: &'a FoldOptions,
    }
    fn rec(s: &mut State<'_>, v: usize) -> Result<u64> {
        *s.spent += 1;
        check_budget(*s.spent, s.budget)?;
        if v == s.phi.len() {
            return Ok(1);
        }
        let p = s.parents[v].expect("non-root vertex");
        let Some(steps) = s.target.steps.get(&s.phi[p]) else {
            return Ok(0);
        };
        let mut total = 0;
        for (id, next, leaf_only) in steps.clone() {
            if s.used[id] || (leaf_only && !s.leaf[v]) {
                continue;
            }
            s.used[id] = true;
            s.phi[v] = next;
            total += rec(s, v + 1)?;
            s.used[id] = false;
        }
        Ok(total)
    }
    let mut state = State {
        parents: tree.parents(),
        leaf: (0..tree.vertex_count()).map(|v| tree.is_leaf(v)).collect(),
        target,
        phi: vec![root.clone(); tree.vertex_count()],
        used: vec![false; target.size],
        spent,
        budget: opts,
    };
    rec(&mut state, 1)
}

/// Weighted number of configurations whose edges map bijectively onto the
/// bonds of the lattice tree `target`. Equals 1 for every lattice tree.
pub fn maps_onto_tree(
    _spec: &LatticeSpec,
    target: &BondSubgraph,
    opts: &FoldOptions,
) -> Result<ExactRational> {
    if !target.is_tree() {
        return Err(Error::InvalidInput("target has a cycle".into()));
    }
    let fold = FoldTarget::from_bonds(target.bonds());
    let root = Site::origin(target.vertices().iter().next().map_or(0, Site::dimension));
    let mut spent = 0;
    let mut total = ExactRational::zero();
    for tree in enumerate_plane_trees(target.len()) {
        let c = count_folds(&tree, &fold, &root, &mut spent, opts)?;
        if c > 0 {
            total += weight(&tree) * BigRational::from_integer(BigInt::from(c));
        }
    }
    Ok(total)
}

/// `nu(X)`: the number of configurations folding onto the cut-tree `x`.
pub fn maps_onto_cuttree(spec: &LatticeSpec, x: &CutTree, opts: &FoldOptions) -> Result<BigCount> {
    maps_onto_cuttree_at(spec, x, &spec.origin(), opts)
}

/// `nu` for a cut-tree rooted at an arbitrary site.
pub fn maps_onto_cuttree_at(
    _spec: &LatticeSpec,
    x: &CutTree,
    root: &Site,
    opts: &FoldOptions,
) -> Result<BigCount> {
    let fold = FoldTarget::from_cuttree(x);
    let mut spent = 0;
    let mut total = BigCount::zero();
    for tree in enumerate_plane_trees(x.len()) {
        total += count_folds(&tree, &fold, root, &mut spent, opts)?;
    }
    Ok(total)
}

/// Weighted sum of folding configurations onto `x`; equals 1.
pub fn cuttree_weight_sum(spec: &LatticeSpec, x: &CutTree, opts: &FoldOptions) -> Result<ExactRational> {
    let fold = FoldTarget::from_cuttree(x);
    let root = spec.origin();
    let mut spent = 0;
    let mut total = ExactRational::zero();
    for tree in enumerate_plane_trees(x.len()) {
        let c = count_folds(&tree, &fold, &root, &mut spent, opts)?;
        if c > 0 {
            total += weight(&tree) * BigRational::from_integer(BigInt::from(c));
        }
    }
    Ok(total)
}

/// `prod_x b_x!` over the forward degrees of `x` rooted at `root`.
pub fn degree_product(x: &CutTree, root: &Site) -> BigCount {
    let degs: Vec<u32> = x.degrees_from(root).into_values().collect();
    degree_factorial_product(&degs)
}

/// Root recursion `nu(X) = b_0! * prod_a nu(X_a)`, evaluated with
/// [`maps_onto_cuttree_at`] on each branch.
pub fn nu_by_root_recursion(
    spec: &LatticeSpec,
    x: &CutTree,
    root: &Site,
    opts: &FoldOptions,
) -> Result<BigCount> {
    let branches = x.branches(root);
    let mut total = crate::planetree::factorial(branches.len());
    for (child, sub) in &branches {
        total *= maps_onto_cuttree_at(spec, sub, child, opts)?;
    }
    Ok(total)
}

fn falling_factorial(k: u64, n: usize) -> BigUint {
    if n as u64 > k {
        return BigUint::zero();
    }
    (0..n as u64).map(|j| BigUint::from(k - j)).product()
}

/// Bounds `K(K-1)...(K-n+1) w_n <= t_n <= K^n w_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sandwich {
    pub lower: ExactRational,
    pub t_n: BigCount,
    pub upper: ExactRational,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        let t = BigRational::from_integer(BigInt::from(self.t_n.clone()));
        self.lower <= t && t <= self.upper
    }
}

pub fn tn_sandwich(spec: &LatticeSpec, n: usize, t_n: &BigCount) -> Sandwich {
    let k = spec.degree();
    let w = w_closed_form(n);
    let int = |u: BigUint| BigRational::from_integer(BigInt::from(u));
    Sandwich {
        lower: int(falling_factorial(k, n)) * &w,
        t_n: t_n.clone(),
        upper: int(num_traits::pow(BigUint::from(k), n)) * w,
    }
}

/// `t_n / K^n`.
pub fn tn_over_kn(spec: &LatticeSpec, n: usize, t_n: &BigCount) -> ExactRational {
    BigRational::new(
        BigInt::from(t_n.clone()),
        BigInt::from(num_traits::pow(BigUint::from(spec.degree()), n)),
    )
}

/// `(w_n (1 - n(n-1)/(2K)), w_n)`, the window containing `t_n / K^n`.
pub fn tn_over_kn_window(spec: &LatticeSpec, n: usize) -> (ExactRational, ExactRational) {
    let w = w_closed_form(n);
    let pairs = BigRational::new(
        BigInt::from(n * n.saturating_sub(1)),
        BigInt::from(2 * spec.degree()),
    );
    ((BigRational::one() - pairs) * &w, w)
}
