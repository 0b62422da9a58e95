//! The cut-tree transform: cycles of a lattice animal are broken one at a
//! time by cutting the smallest bond that lies on a cycle and discarding its
//! minimal half. The surviving half stays attached at the bond's `hi` end.
//!
//! Canonical text form (used in fixtures and reports):
//!
//! ```text
//! full=[(0,0)-(1,0);(0,1)-(1,1);(1,0)-(1,1)] half=[(0,0)-(0,1)@max]
//! ```
//!
//! Full bonds come first, then half-bonds, each list sorted in the fixed bond
//! order and separated by `;`. A half-bond carries `@min` or `@max` naming the
//! end it remains attached to.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::enumeration::{for_each_subgraph, BigCount, BondSubgraph, EnumOptions, Kind};
use crate::error::{Error, Result};
use crate::lattice::{Bond, BondEnd, HalfBond, LatticeSpec, Site};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutTree {
    full_bonds: BTreeSet<Bond>,
    half_bonds: BTreeSet<HalfBond>,
}

impl CutTree {
    pub fn from_parts(full_bonds: BTreeSet<Bond>, half_bonds: BTreeSet<HalfBond>) -> Self {
        CutTree {
            full_bonds,
            half_bonds,
        }
    }

    pub fn full_bonds(&self) -> &BTreeSet<Bond> {
        &self.full_bonds
    }

    pub fn half_bonds(&self) -> &BTreeSet<HalfBond> {
        &self.half_bonds
    }

    /// Full bonds plus half-bonds.
    pub fn len(&self) -> usize {
        self.full_bonds.len() + self.half_bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sites of the topological object: endpoints of full bonds and retained
    /// ends of half-bonds.
    pub fn sites(&self) -> BTreeSet<Site> {
        let mut out = BTreeSet::new();
        for b in &self.full_bonds {
            out.insert(b.lo().clone());
            out.insert(b.hi().clone());
        }
        for h in &self.half_bonds {
            out.insert(h.retained_site().clone());
        }
        out
    }

    /// Degree of every site, counting half-bonds at their retained end.
    fn raw_degrees(&self) -> BTreeMap<Site, u32> {
        let mut deg: BTreeMap<Site, u32> = BTreeMap::new();
        for b in &self.full_bonds {
            *deg.entry(b.lo().clone()).or_default() += 1;
            *deg.entry(b.hi().clone()).or_default() += 1;
        }
        for h in &self.half_bonds {
            *deg.entry(h.retained_site().clone()).or_default() += 1;
        }
        deg
    }

    /// Forward degrees `b_x` with respect to `root`: the full degree at the
    /// root, degree minus one elsewhere.
    pub fn degrees_from(&self, root: &Site) -> BTreeMap<Site, u32> {
        let mut deg = self.raw_degrees();
        deg.entry(root.clone()).or_insert(0);
        for (x, b) in deg.iter_mut() {
            if x != root {
                *b -= 1;
            }
        }
        deg
    }

    /// Whether full bonds and dangling half-bonds form a single tree.
    pub fn is_tree_shaped(&self, root: &Site) -> bool {
        let sites = self.sites();
        if !sites.is_empty() && !sites.contains(root) {
            return false;
        }
        if self.full_bonds.is_empty() {
            return sites.len() <= 1;
        }
        if self.full_bonds.len() + 1 != sites.len() {
            return false;
        }
        let sub = BondSubgraph::from_bonds_unchecked(root.dimension(), self.full_bonds.iter().cloned());
        sub.vertices() == &sites && sub.is_connected()
    }

    /// Subtrees hanging off `root`, each paired with its own root: the far
    /// end of the deleted bond, or the free end of a half-bond attached at
    /// `root`.
    pub fn branches(&self, root: &Site) -> Vec<(Site, CutTree)> {
        let mut adj: HashMap<&Site, Vec<&Bond>> = HashMap::new();
        for b in &self.full_bonds {
            adj.entry(b.lo()).or_default().push(b);
            adj.entry(b.hi()).or_default().push(b);
        }
        let mut halves_at: HashMap<&Site, Vec<&HalfBond>> = HashMap::new();
        for h in &self.half_bonds {
            halves_at.entry(h.retained_site()).or_default().push(h);
        }
        let mut out = Vec::new();
        for b in adj.get(root).into_iter().flatten() {
            let child = b.other(root).expect("incident bond");
            let mut full = BTreeSet::new();
            let mut half = BTreeSet::new();
            let mut seen: BTreeSet<&Site> = BTreeSet::from([root, child]);
            let mut queue = VecDeque::from([child]);
            while let Some(x) = queue.pop_front() {
                for h in halves_at.get(x).into_iter().flatten() {
                    half.insert((*h).clone());
                }
                for e in adj.get(x).into_iter().flatten() {
                    let y = e.other(x).expect("incident bond");
                    if y == root {
                        continue;
                    }
                    full.insert((*e).clone());
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            out.push((child.clone(), CutTree::from_parts(full, half)));
        }
        for h in halves_at.get(root).into_iter().flatten() {
            out.push((h.removed_site().clone(), CutTree::default()));
        }
        out.sort();
        out
    }
}

impl Default for CutTree {
    fn default() -> Self {
        CutTree::from_parts(BTreeSet::new(), BTreeSet::new())
    }
}

/// Removing `bond` leaves its endpoints connected.
fn on_cycle(bonds: &BTreeSet<Bond>, bond: &Bond) -> bool {
    let mut adj: HashMap<&Site, Vec<&Site>> = HashMap::new();
    for b in bonds.iter().filter(|b| *b != bond) {
        adj.entry(b.lo()).or_default().push(b.hi());
        adj.entry(b.hi()).or_default().push(b.lo());
    }
    let target = bond.hi();
    let mut seen: BTreeSet<&Site> = BTreeSet::from([bond.lo()]);
    let mut queue = VecDeque::from([bond.lo()]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            return true;
        }
        for y in adj.get(x).into_iter().flatten() {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// The cut-tree `A*` of a lattice animal.
pub fn cut_tree(_spec: &LatticeSpec, animal: &BondSubgraph) -> CutTree {
    let mut full: BTreeSet<Bond> = animal.bonds().clone();
    let mut half = BTreeSet::new();
    for _ in 0..animal.cycles() {
        let cut = full
            .iter()
            .find(|b| on_cycle(&full, b))
            .cloned()
            .expect("a graph with positive cyclomatic number has a cycle bond");
        full.remove(&cut);
        half.insert(HalfBond {
            bond: cut,
            retained_end: BondEnd::Max,
        });
    }
    CutTree::from_parts(full, half)
}

/// The animal whose cut-tree is `x`.
pub fn reconstruct(spec: &LatticeSpec, x: &CutTree) -> Result<BondSubgraph> {
    let bonds = x
        .full_bonds
        .iter()
        .cloned()
        .chain(x.half_bonds.iter().map(|h| h.bond.clone()));
    let animal = BondSubgraph::new(spec.dimension(), bonds)
        .map_err(|e| Error::InvalidCutTree(e.to_string()))?;
    if animal.len() != x.len() {
        return Err(Error::InvalidCutTree("half-bond duplicates a full bond".into()));
    }
    if &cut_tree(spec, &animal) != x {
        return Err(Error::InvalidCutTree(format!(
            "{x} is not the cut-tree of its completion"
        )));
    }
    Ok(animal)
}

/// `b_x` for every site of `x`, rooted at the origin.
pub fn degrees(x: &CutTree) -> BTreeMap<Site, u32> {
    let d = x
        .sites()
        .iter()
        .next()
        .map(Site::dimension)
        .unwrap_or(0);
    x.degrees_from(&Site::origin(d))
}

/// Number of distinct cut-trees over all `n`-bond animals at the origin.
pub fn count_cut_trees(spec: &LatticeSpec, n: usize, opts: &EnumOptions) -> Result<BigCount> {
    let mut set = BTreeSet::new();
    for_each_subgraph(spec, n, Kind::Animal, opts, |a| {
        set.insert(cut_tree(spec, a));
    })?;
    Ok(BigCount::from(set.len()))
}

impl fmt::Display for CutTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("full=[")?;
        for (i, b) in self.full_bonds.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("] half=[")?;
        for (i, h) in self.half_bonds.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            let end = match h.retained_end {
                BondEnd::Min => "min",
                BondEnd::Max => "max",
            };
            write!(f, "{}@{end}", h.bond)?;
        }
        f.write_str("]")
    }
}

fn parse_site(s: &str) -> Option<Site> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let coords: Option<Vec<i32>> = inner.split(',').map(|c| c.trim().parse().ok()).collect();
    Some(Site::new(coords?))
}

fn parse_bond(s: &str) -> Option<Bond> {
    let (a, b) = s.trim().split_once(")-(")?;
    let lo = parse_site(&format!("{a})"))?;
    let hi = parse_site(&format!("({b}"))?;
    (lo != hi).then(|| Bond::new(lo, hi))
}

fn parse_list(s: &str) -> Option<Vec<&str>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    Some(if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(';').collect()
    })
}

impl FromStr for CutTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCutTree(format!("cannot parse {s:?}"));
        let (full, half) = s.trim().split_once(" half=").ok_or_else(bad)?;
        let full = full.strip_prefix("full=").ok_or_else(bad)?;
        let full_bonds = parse_list(full)
            .ok_or_else(bad)?
            .into_iter()
            .map(|b| parse_bond(b).ok_or_else(bad))
            .collect::<Result<BTreeSet<_>>>()?;
        let half_bonds = parse_list(half)
            .ok_or_else(bad)?
            .into_iter()
            .map(|h| {
                let (b, end) = h.rsplit_once('@').ok_or_else(bad)?;
                let retained_end = match end {
                    "min" => BondEnd::Min,
                    "max" => BondEnd::Max,
                    _ => return Err(bad()),
                };
                Ok(HalfBond {
                    bond: parse_bond(b).ok_or_else(bad)?,
                    retained_end,
                })
            })
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(CutTree::from_parts(full_bonds, half_bonds))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i32]) -> Site {
        Site::new(c.to_vec())
    }

    fn b(x: &[i32], y: &[i32]) -> Bond {
        Bond::new(s(x), s(y))
    }

    fn nn2() -> LatticeSpec {
        LatticeSpec::nearest_neighbour(2).unwrap()
    }

    fn unit_square() -> BondSubgraph {
        BondSubgraph::new(
            2,
            [
                b(&[0, 0], &[1, 0]),
                b(&[0, 0], &[0, 1]),
                b(&[1, 0], &[1, 1]),
                b(&[0, 1], &[1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn trees_are_unchanged() {
        let tree = BondSubgraph::new(2, [b(&[0, 0], &[1, 0]), b(&[1, 0], &[1, 1])]).unwrap();
        let x = cut_tree(&nn2(), &tree);
        assert!(x.half_bonds().is_empty());
        assert_eq!(x.full_bonds(), tree.bonds());
    }

    #[test]
    fn square_cuts_its_smallest_bond() {
        let x = cut_tree(&nn2(), &unit_square());
        let cut = b(&[0, 0], &[0, 1]);
        assert_eq!(x.full_bonds().len(), 3);
        assert!(!x.full_bonds().contains(&cut));
        let h = x.half_bonds().iter().next().unwrap();
        assert_eq!(h.bond, cut);
        assert_eq!(h.retained_site(), &s(&[0, 1]));
        assert_eq!(
            x.to_string(),
            "full=[(0,0)-(1,0);(0,1)-(1,1);(1,0)-(1,1)] half=[(0,0)-(0,1)@max]"
        );
        assert_eq!(reconstruct(&nn2(), &x).unwrap(), unit_square());
        assert_eq!(x.to_string().parse::<CutTree>().unwrap(), x);
    }

    #[test]
    fn square_degrees() {
        let x = cut_tree(&nn2(), &unit_square());
        let deg = degrees(&x);
        let expect: BTreeMap<Site, u32> = [
            (s(&[0, 0]), 1),
            (s(&[0, 1]), 1),
            (s(&[1, 0]), 1),
            (s(&[1, 1]), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(deg, expect);
    }

    #[test]
    fn star_and_bond_degrees() {
        let single = cut_tree(&nn2(), &BondSubgraph::new(2, [b(&[0, 0], &[1, 0])]).unwrap());
        assert_eq!(
            degrees(&single),
            [(s(&[0, 0]), 1), (s(&[1, 0]), 0)].into_iter().collect()
        );
        let star = BondSubgraph::new(
            2,
            [b(&[0, 0], &[1, 0]), b(&[0, 0], &[0, 1]), b(&[0, 0], &[-1, 0])],
        )
        .unwrap();
        let deg = degrees(&cut_tree(&nn2(), &star));
        assert_eq!(deg[&s(&[0, 0])], 3);
        assert_eq!(deg.values().filter(|&&v| v == 0).count(), 3);
    }

    #[test]
    fn two_squares_need_two_cuts() {
        let mut bonds = unit_square().bonds().clone();
        bonds.extend([b(&[1, 0], &[2, 0]), b(&[2, 0], &[2, 1]), b(&[1, 1], &[2, 1])]);
        let a = BondSubgraph::new(2, bonds).unwrap();
        let x = cut_tree(&nn2(), &a);
        assert_eq!(x.half_bonds().len(), 2);
        assert!(x.is_tree_shaped(&s(&[0, 0])));
        assert_eq!(reconstruct(&nn2(), &x).unwrap(), a);
    }

    #[test]
    fn wrong_cut_is_rejected() {
        // Cut the square's largest bond instead of its smallest.
        let sq = unit_square();
        let wrong = b(&[1, 0], &[1, 1]);
        let full: BTreeSet<Bond> = sq.bonds().iter().filter(|x| **x != wrong).cloned().collect();
        let half = BTreeSet::from([HalfBond {
            bond: wrong,
            retained_end: BondEnd::Max,
        }]);
        let x = CutTree::from_parts(full, half);
        assert!(matches!(reconstruct(&nn2(), &x), Err(Error::InvalidCutTree(_))));
    }

    #[test]
    fn count_matches_animals_small() {
        let opts = EnumOptions::default();
        let nn1 = LatticeSpec::nearest_neighbour(1).unwrap();
        assert_eq!(count_cut_trees(&nn1, 3, &opts).unwrap(), BigCount::from(4u32));
        let a4 = crate::enumeration::count_animals(&nn2(), 4).unwrap();
        assert_eq!(count_cut_trees(&nn2(), 4, &opts).unwrap(), a4);
    }

    #[test]
    fn branches_of_cut_square() {
        let x = cut_tree(&nn2(), &unit_square());
        let br = x.branches(&s(&[0, 0]));
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].0, s(&[1, 0]));
        assert_eq!(br[0].1.len(), 3);
        // From (0,1), whose half-bond dangles toward the origin.
        let br = x.branches(&s(&[0, 1]));
        assert_eq!(br.len(), 2);
        assert_eq!(br[0], (s(&[0, 0]), CutTree::default()));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "full=[]", "full=[(0,0)-(0,0)] half=[]", "full=[] half=[(0,0)-(0,1)@mid]"] {
            assert!(bad.parse::<CutTree>().is_err(), "{bad}");
        }
        let neg: CutTree = "full=[(-1,0)-(0,0)] half=[]".parse().unwrap();
        assert_eq!(neg.full_bonds().iter().next().unwrap(), &b(&[-1, 0], &[0, 0]));
    }
}
