//! Rooted plane trees, their reciprocal-factorial weights, and the
//! mean-field counts `f_n`.
//!
//! A plane tree is stored as its preorder sequence of forward degrees
//! (number of children), root first. A sequence of non-negative integers of
//! length `n + 1` encodes an `n`-edge tree exactly when it sums to `n` and
//! every proper prefix of length `k` sums to at least `k`.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::real::Real;

/// Exact rational value.
pub type ExactRational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    xi: Vec<u32>,
}

impl PlaneTree {
    pub fn new(xi: Vec<u32>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidInput("empty degree sequence".into()));
        }
        let mut sum: u64 = 0;
        for (k, &x) in xi.iter().enumerate() {
            if k > 0 && sum < k as u64 {
                return Err(Error::InvalidInput(format!(
                    "degree sequence {xi:?} closes after {k} vertices"
                )));
            }
            sum += x as u64;
        }
        if sum + 1 != xi.len() as u64 {
            return Err(Error::InvalidInput(format!(
                "degree sequence {xi:?} sums to {sum}, needs {}",
                xi.len() - 1
            )));
        }
        Ok(PlaneTree { xi })
    }

    /// The single-vertex tree.
    pub fn root_only() -> Self {
        PlaneTree { xi: vec![0] }
    }

    /// Forward degrees in preorder.
    pub fn xi(&self) -> &[u32] {
        &self.xi
    }

    /// `|T|`, the number of edges.
    pub fn edges(&self) -> usize {
        self.xi.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.xi.len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.xi[v] == 0
    }

    /// Parent of each vertex in preorder; `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.xi.len()];
        // (vertex, children still to attach)
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for (v, &x) in self.xi.iter().enumerate() {
            while let Some(top) = stack.last_mut() {
                if top.1 == 0 {
                    stack.pop();
                } else {
                    top.1 -= 1;
                    parents[v] = Some(top.0);
                    break;
                }
            }
            stack.push((v, x));
        }
        parents
    }

    /// Children of each vertex, in plane order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.xi.len()];
        for (v, p) in self.parents().into_iter().enumerate() {
            if let Some(p) = p {
                out[p].push(v);
            }
        }
        out
    }
}

/// Calls `visit` with the degree sequence of every `n`-edge plane tree, in
/// lexicographic order.
pub fn for_each_plane_tree(n: usize, mut visit: impl FnMut(&[u32])) {
    fn rec(pos: usize, sum: usize, n: usize, buf: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if pos == n + 1 {
            if sum == n {
                visit(buf);
            }
            return;
        }
        for x in 0..=(n - sum) {
            let s = sum + x;
            if pos < n && s < pos + 1 {
                continue;
            }
            buf.push(x as u32);
            rec(pos + 1, s, n, buf, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(n + 1);
    rec(0, 0, n, &mut buf, &mut visit);
}

/// Every element of `T_n`.
pub fn enumerate_plane_trees(n: usize) -> Vec<PlaneTree> {
    let mut out = Vec::new();
    for_each_plane_tree(n, |xi| out.push(PlaneTree { xi: xi.to_vec() }));
    out
}

static FACTORIALS: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());

/// `n!`, memoised.
pub fn factorial(n: usize) -> BigUint {
    let mut table = FACTORIALS.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigUint::from(k);
        table.push(next);
    }
    table[n].clone()
}

pub fn catalan(n: usize) -> BigUint {
    factorial(2 * n) / (factorial(n) * factorial(n + 1))
}

fn ratio(num: BigUint, den: BigUint) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `prod_i xi_i!` over the vertices of a tree.
pub fn degree_factorial_product(xi: &[u32]) -> BigUint {
    xi.iter().map(|&x| factorial(x as usize)).product()
}

/// `prod_i 1/xi_i!`.
pub fn weight(tree: &PlaneTree) -> ExactRational {
    ratio(BigUint::one(), degree_factorial_product(&tree.xi))
}

/// `w_n`: the sum of [`weight`] over all `n`-edge plane trees, by enumeration.
pub fn w_sum(n: usize) -> ExactRational {
    // Trees are grouped by their factorial product.
    let mut by_den: BTreeMap<u128, u64> = BTreeMap::new();
    for_each_plane_tree(n, |xi| {
        let den: u128 = xi.iter().map(|&x| (1..=x as u128).product::<u128>()).product();
        *by_den.entry(den).or_default() += 1;
    });
    by_den
        .into_iter()
        .map(|(den, count)| ratio(BigUint::from(count), BigUint::from(den)))
        .fold(ExactRational::zero(), |acc, r| acc + r)
}

/// `w_n = (n+1)^(n-1) / n!`.
pub fn w_closed_form(n: usize) -> ExactRational {
    let base = BigInt::from(n + 1);
    let num = if n == 0 {
        // (1)^(-1) = 1
        BigRational::one()
    } else {
        BigRational::from_integer(num_traits::pow(base, n - 1))
    };
    num / BigRational::from_integer(BigInt::from(factorial(n)))
}

/// `f_n = K^n w_n`.
pub fn f_count(spec: &LatticeSpec, n: usize) -> ExactRational {
    f_count_for_degree(spec.degree(), n)
}

pub fn f_count_for_degree(k: u64, n: usize) -> ExactRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(k), n)) * w_closed_form(n)
}

/// Galton-Watson probability of a tree under critical Poisson offspring,
/// held as `rational * e^(-e_power)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwProbability {
    pub rational: ExactRational,
    pub e_power: usize,
}

impl GwProbability {
    pub fn to_real(&self, prec: crate::real::Precision) -> Real {
        let e_pow = Real::e(prec).powi(self.e_power);
        &Real::from_ratio(&self.rational, prec) / &e_pow
    }
}

pub fn gw_probability(tree: &PlaneTree) -> GwProbability {
    GwProbability {
        rational: weight(tree),
        e_power: tree.vertex_count(),
    }
}

/// `sum_{n=0}^{N} f_n z^n` at the precision of `z`.
pub fn f_partial_sum(spec: &LatticeSpec, n_terms: usize, z: &Real) -> Real {
    f_partial_sums(spec.degree(), n_terms, z)
        .pop()
        .expect("at least one term")
}

/// Running partial sums for `N = 0..=n_terms`.
pub fn f_partial_sums(k: u64, n_terms: usize, z: &Real) -> Vec<Real> {
    let prec = z.precision();
    let kz = &Real::from_u64(k, prec) * z;
    let mut power = Real::one(prec);
    let mut acc = Real::zero(prec);
    let mut out = Vec::with_capacity(n_terms + 1);
    for n in 0..=n_terms {
        let term = &Real::from_ratio(&w_closed_form(n), prec) * &power;
        acc = &acc + &term;
        out.push(acc.clone());
        power = &power * &kz;
    }
    out
}
