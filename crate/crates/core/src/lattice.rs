//! The two lattice graph families on `Z^d`, their sites and bonds, and the
//! fixed orderings that the cut-tree transform depends on.
//!
//! Sites are ordered coordinate-lexicographically. Bonds are stored with
//! `lo < hi` and ordered by the pair `(lo, hi)`. The "minimal half" of a bond
//! is the half-arc incident to `lo`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    NearestNeighbour,
    SpreadOut,
}

/// A lattice family together with its dimension and range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSpec {
    family: Family,
    d: usize,
    range: u32,
}

impl LatticeSpec {
    pub fn nearest_neighbour(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        Ok(LatticeSpec {
            family: Family::NearestNeighbour,
            d,
            range: 1,
        })
    }

    pub fn spread_out(d: usize, range: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        if range == 0 {
            return Err(Error::InvalidSpec("range L must be at least 1".into()));
        }
        let spec = LatticeSpec {
            family: Family::SpreadOut,
            d,
            range,
        };
        if spec.checked_degree().is_none() {
            return Err(Error::InvalidSpec(format!(
                "degree (2L+1)^d - 1 overflows for d={d}, L={range}"
            )));
        }
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Range `L`; always 1 for the nearest-neighbour family.
    pub fn range(&self) -> u32 {
        self.range
    }

    fn checked_degree(&self) -> Option<u64> {
        match self.family {
            Family::NearestNeighbour => (2 * self.d as u64).into(),
            Family::SpreadOut => (2 * self.range as u64 + 1)
                .checked_pow(self.d.try_into().ok()?)
                .map(|v| v - 1),
        }
    }

    /// The vertex degree `K`.
    pub fn degree(&self) -> u64 {
        self.checked_degree().expect("validated at construction")
    }

    /// Length of the shortest cycle in the lattice graph, if any.
    pub fn girth(&self) -> Option<usize> {
        match (self.family, self.d) {
            (Family::NearestNeighbour, 1) => None,
            (Family::NearestNeighbour, _) => Some(4),
            (Family::SpreadOut, 1) if self.range == 1 => None,
            (Family::SpreadOut, _) => Some(3),
        }
    }

    /// Offsets `y - x` over all neighbours `y` of a site `x`, sorted.
    pub fn offsets(&self) -> Vec<Vec<i32>> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        match self.family {
            Family::NearestNeighbour => {
                for i in 0..self.d {
                    for s in [-1, 1] {
                        let mut v = vec![0; self.d];
                        v[i] = s;
                        out.push(v);
                    }
                }
            }
            Family::SpreadOut => {
                let l = self.range as i32;
                let mut v = vec![-l; self.d];
                loop {
                    if v.iter().any(|&c| c != 0) {
                        out.push(v.clone());
                    }
                    // odometer increment
                    let mut i = self.d;
                    loop {
                        if i == 0 {
                            out.sort();
                            return out;
                        }
                        i -= 1;
                        if v[i] < l {
                            v[i] += 1;
                            break;
                        }
                        v[i] = -l;
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn origin(&self) -> Site {
        Site::origin(self.d)
    }

    fn check_dim(&self, x: &Site) -> Result<()> {
        if x.dimension() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: x.dimension(),
            });
        }
        Ok(())
    }

    /// All `K` neighbours of `x`, in lexicographic order.
    pub fn neighbors(&self, x: &Site) -> Result<Vec<Site>> {
        self.check_dim(x)?;
        Ok(self.offsets().iter().map(|v| x.shifted(v)).collect())
    }

    pub fn is_adjacent(&self, x: &Site, y: &Site) -> bool {
        if x.dimension() != self.d || y.dimension() != self.d {
            return false;
        }
        let diffs = x.0.iter().zip(&y.0).map(|(a, b)| (*a as i64 - *b as i64).abs());
        match self.family {
            Family::NearestNeighbour => diffs.sum::<i64>() == 1,
            Family::SpreadOut => {
                let m = diffs.max().unwrap_or(0);
                m > 0 && m <= self.range as i64
            }
        }
    }

    /// Builds the canonical bond between two adjacent sites.
    pub fn bond(&self, x: Site, y: Site) -> Result<Bond> {
        self.check_dim(&x)?;
        self.check_dim(&y)?;
        if !self.is_adjacent(&x, &y) {
            return Err(Error::InvalidInput(format!("{x} and {y} are not adjacent")));
        }
        Ok(Bond::new(x, y))
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::NearestNeighbour => write!(f, "nn:d={}", self.d),
            Family::SpreadOut => write!(f, "so:d={}:L={}", self.d, self.range),
        }
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    /// Parses `nn:d=<d>` or `so:d=<d>:L=<L>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse {s:?}; expected nn:d=<d> or so:d=<d>:L=<L>"));
        let num = |part: Option<&str>, key: &str| -> Result<u64> {
            part.and_then(|p| p.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(bad)
        };
        let mut parts = s.split(':');
        match parts.next() {
            Some("nn") => {
                let d = num(parts.next(), "d=")?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                LatticeSpec::nearest_neighbour(d as usize)
            }
            Some("so") => {
                let d = num(parts.next(), "d=")?;
                let l = num(parts.next(), "L=")?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                LatticeSpec::spread_out(d as usize, u32::try_from(l).map_err(|_| bad())?)
            }
            _ => Err(bad()),
        }
    }
}

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site(Vec<i32>);

impl Site {
    pub fn new(coords: Vec<i32>) -> Self {
        Site(coords)
    }

    pub fn origin(d: usize) -> Self {
        Site(vec![0; d])
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn shifted(&self, v: &[i32]) -> Site {
        debug_assert_eq!(v.len(), self.0.len());
        Site(
            self.0
                .iter()
                .zip(v)
                .map(|(a, b)| a.checked_add(*b).expect("site coordinate overflow"))
                .collect(),
        )
    }
}

impl From<Vec<i32>> for Site {
    fn from(v: Vec<i32>) -> Self {
        Site(v)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A lattice bond in canonical form (`lo < hi`). The derived ordering is the
/// fixed bond order: compare `lo` first, then `hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bond {
    lo: Site,
    hi: Site,
}

impl Bond {
    /// Canonicalises the endpoint order. Adjacency is not checked here; use
    /// [`LatticeSpec::bond`] for validated construction.
    pub fn new(a: Site, b: Site) -> Self {
        assert_ne!(a, b, "a bond needs two distinct endpoints");
        if a < b {
            Bond { lo: a, hi: b }
        } else {
            Bond { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Site {
        &self.lo
    }

    pub fn hi(&self) -> &Site {
        &self.hi
    }

    pub fn end(&self, which: BondEnd) -> &Site {
        match which {
            BondEnd::Min => &self.lo,
            BondEnd::Max => &self.hi,
        }
    }

    pub fn contains(&self, x: &Site) -> bool {
        &self.lo == x || &self.hi == x
    }

    /// The endpoint other than `x`, if `x` is an endpoint.
    pub fn other(&self, x: &Site) -> Option<&Site> {
        if &self.lo == x {
            Some(&self.hi)
        } else if &self.hi == x {
            Some(&self.lo)
        } else {
            None
        }
    }
}

/// Compares two canonical bonds in the fixed bond order.
pub fn bond_compare(a: &Bond, b: &Bond) -> std::cmp::Ordering {
    a.cmp(b)
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondEnd {
    Min,
    Max,
}

impl BondEnd {
    pub fn opposite(self) -> BondEnd {
        match self {
            BondEnd::Min => BondEnd::Max,
            BondEnd::Max => BondEnd::Min,
        }
    }
}

/// The half of a bond's arc that survives a cut, attached at `retained_end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfBond {
    pub bond: Bond,
    pub retained_end: BondEnd,
}

impl HalfBond {
    pub fn retained_site(&self) -> &Site {
        self.bond.end(self.retained_end)
    }

    pub fn removed_site(&self) -> &Site {
        self.bond.end(self.retained_end.opposite())
    }
}
