// SPDX-License-Identifier: Apache-2.0

//! Finite abelian groups described by their invariant factors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::nt;

/// Invariant factors `n1, n2, …` with `n_{i+1} | n_i`, largest first.
/// The trivial group is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants(Vec<u64>);

impl AbelianInvariants {
    /// Normalizes an arbitrary direct sum `ℤ/m1 ⊕ ℤ/m2 ⊕ …`.
    pub fn from_cyclic_factors(factors: &[u64]) -> Result<Self> {
        // prime → exponents of the primary components
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in factors {
            if m == 0 {
                return Err(Error::Precondition("cyclic factor of order 0".into()));
            }
            for (p, e) in nt::factorize(m)? {
                primary.entry(p).or_default().push(e);
            }
        }
        Ok(Self::assemble(primary))
    }

    /// Reconstructs the group from the multiset of its element orders.
    ///
    /// For each prime `q`, `#{g : q^j·g = 0}` determines how many cyclic
    /// factors have order at least `q^j`.
    pub fn from_element_orders(orders: &[u64]) -> Result<Self> {
        let n = orders.len() as u64;
        if n == 0 {
            return Err(Error::NotAGroup("empty set".into()));
        }
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (q, e) in nt::factorize(n)? {
            let mut prev = 1u64;
            let mut at_least = Vec::new();
            for j in 1..=e {
                let qj = q.pow(j);
                let count = orders.iter().filter(|&&o| qj % o == 0).count() as u64;
                let mut ratio = count / prev;
                if count % prev != 0 || ratio == 0 {
                    return Err(Error::NotAGroup(format!("{q}-torsion counts {prev} → {count}")));
                }
                let mut rank = 0u32;
                while ratio % q == 0 {
                    ratio /= q;
                    rank += 1;
                }
                if ratio != 1 {
                    return Err(Error::NotAGroup(format!("{q}-torsion count {count} is not a power of {q}")));
                }
                at_least.push(rank);
                prev = count;
            }
            // factors with exponent exactly j: at_least[j-1] − at_least[j]
            let mut exps = Vec::new();
            for j in 0..at_least.len() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..at_least[j].saturating_sub(next) {
                    exps.push(j as u32 + 1);
                }
            }
            primary.insert(q, exps);
        }
        let inv = Self::assemble(primary);
        if inv.order() != n {
            return Err(Error::NotAGroup(format!("orders of {n} elements do not fit a group of order {n}")));
        }
        Ok(inv)
    }

    fn assemble(mut primary: BTreeMap<u64, Vec<u32>>) -> Self {
        let mut out = Vec::new();
        loop {
            let mut factor = 1u64;
            for (p, exps) in primary.iter_mut() {
                exps.sort_unstable();
                if let Some(e) = exps.pop() {
                    factor *= p.pow(e);
                }
            }
            if factor == 1 {
                break;
            }
            out.push(factor);
        }
        AbelianInvariants(out)
    }

    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.len() <= 1
    }

    /// Order of the subgroup of squares.
    pub fn squares_order(&self) -> u64 {
        self.0.iter().map(|&n| if n % 2 == 0 { n / 2 } else { n }).product()
    }

    /// Order of the 2-torsion of the subgroup of squares.
    pub fn two_torsion_of_squares(&self) -> u64 {
        self.0.iter().map(|&n| if n % 4 == 0 { 2 } else { 1 }).product()
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
