//! Iterated kernel/range lattices of a square rational matrix.
//!
//! For `T` on `Q^n` the chains `N(T^0) ⊆ N(T^1) ⊆ ...` and
//! `R(T^0) ⊇ R(T^1) ⊇ ...` stabilize after at most `n` steps. Everything the
//! invariant layer needs is read off the stored prefix: `α_n` is the kernel
//! dimension of `T` restricted to `R(T^n)`, `β_n` the codimension of
//! `R(T^{n+1})` inside `R(T^n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::{image, kernel, RatMatrix, RatSubspace};

/// A sequence that is constant after its stored prefix.
///
/// Indexing past the prefix returns the last stored value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventualSeq<T> {
    values: Vec<T>,
}

impl<T: Clone + PartialEq> EventualSeq<T> {
    /// Panics on an empty prefix.
    pub fn new(values: Vec<T>) -> Self {
        assert!(!values.is_empty(), "eventually-constant sequence needs a value");
        EventualSeq { values }
    }

    pub fn constant(value: T) -> Self {
        EventualSeq {
            values: vec![value],
        }
    }

    pub fn get(&self, n: usize) -> &T {
        &self.values[n.min(self.values.len() - 1)]
    }

    pub fn prefix(&self) -> &[T] {
        &self.values
    }

    /// Index from which every later entry equals the last stored value.
    pub fn constant_from(&self) -> usize {
        let last = self.values.last().expect("nonempty");
        let mut i = self.values.len() - 1;
        while i > 0 && self.values[i - 1] == *last {
            i -= 1;
        }
        i
    }

    pub fn limit(&self) -> &T {
        self.values.last().expect("nonempty")
    }

    pub fn map<U: Clone + PartialEq>(&self, f: impl Fn(&T) -> U) -> EventualSeq<U> {
        EventualSeq::new(self.values.iter().map(f).collect())
    }

    /// Pointwise combination; the prefix length is the longer of the two.
    pub fn zip_with<U: Clone + PartialEq, V: Clone + PartialEq>(
        &self,
        other: &EventualSeq<U>,
        f: impl Fn(&T, &U) -> V,
    ) -> EventualSeq<V> {
        let len = self.values.len().max(other.values.len());
        EventualSeq::new((0..len).map(|n| f(self.get(n), other.get(n))).collect())
    }

    /// Drops redundant trailing repeats, keeping the first index of the
    /// constant tail as the final stored entry.
    pub fn trimmed(&self) -> Self {
        EventualSeq::new(self.values[..=self.constant_from()].to_vec())
    }
}

/// Kernels and ranges of `T^0 .. T^stab`, where `stab` is the first power at
/// which both chains stop moving.
#[derive(Clone, Debug)]
pub struct IterLattice {
    operator: RatMatrix,
    kernels: Vec<RatSubspace>,
    ranges: Vec<RatSubspace>,
    stab: usize,
}

/// Computes the lattice up to joint stabilization by repeated multiplication.
pub fn iterate(t: &RatMatrix) -> Result<IterLattice> {
    let n = t.ensure_square()?;
    let mut power = RatMatrix::identity(n);
    let mut kernels = vec![RatSubspace::zero(n)];
    let mut ranges = vec![RatSubspace::full(n)];
    loop {
        power = power.mul(t)?;
        let k = kernel(&power);
        let r = image(&power);
        let last = kernels.len() - 1;
        // dims determine equality along a monotone chain
        if k.dim() == kernels[last].dim() && r.dim() == ranges[last].dim() {
            break;
        }
        kernels.push(k);
        ranges.push(r);
    }
    let stab = kernels.len() - 1;
    debug_assert!(stab <= n);
    Ok(IterLattice {
        operator: t.clone(),
        kernels,
        ranges,
        stab,
    })
}

impl IterLattice {
    pub fn operator(&self) -> &RatMatrix {
        &self.operator
    }

    pub fn dim(&self) -> usize {
        self.operator.rows()
    }

    pub fn stab(&self) -> usize {
        self.stab
    }

    /// `N(T^n)` for any `n`, using stabilization past the stored prefix.
    pub fn kernel_of_power(&self, n: usize) -> &RatSubspace {
        &self.kernels[n.min(self.stab)]
    }

    /// `R(T^n)` for any `n`.
    pub fn range_of_power(&self, n: usize) -> &RatSubspace {
        &self.ranges[n.min(self.stab)]
    }

    pub fn kernels(&self) -> &[RatSubspace] {
        &self.kernels
    }

    pub fn ranges(&self) -> &[RatSubspace] {
        &self.ranges
    }

    /// `N(T)`.
    pub fn null_space(&self) -> &RatSubspace {
        self.kernel_of_power(1)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.kernels[self.stab].is_full()
    }
}

/// `α_n = dim(N(T) ∩ R(T^n))` for `n = 0..=stab`.
pub fn alpha_seq(lattice: &IterLattice) -> EventualSeq<usize> {
    let null = lattice.null_space();
    let values: Vec<usize> = lattice
        .ranges
        .iter()
        .map(|r| {
            null.intersect(r)
                .expect("lattice subspaces share the ambient space")
                .dim()
        })
        .collect();
    debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
    EventualSeq::new(values)
}

/// `β_n = dim R(T^n) - dim R(T^{n+1})` for `n = 0..=stab`.
pub fn beta_seq(lattice: &IterLattice) -> EventualSeq<usize> {
    let values: Vec<usize> = (0..=lattice.stab)
        .map(|n| lattice.range_of_power(n).dim() - lattice.range_of_power(n + 1).dim())
        .collect();
    debug_assert_eq!(values, alpha_seq(lattice).values, "rank-nullity forces β = α");
    EventualSeq::new(values)
}

/// `k_n = α_n - α_{n+1}` for `n = 0..stab`.
pub fn k_seq(lattice: &IterLattice) -> Vec<usize> {
    let alpha = alpha_seq(lattice);
    (0..lattice.stab)
        .map(|n| alpha.get(n) - alpha.get(n + 1))
        .collect()
}

/// Matrix of `S_{n,m}(x, y) = T^m x + y` on `X × N(T^n)`: the columns of
/// `T^m` followed by the basis of `N(T^n)`.
pub fn snm_operator(t: &RatMatrix, n: usize, m: usize) -> Result<RatMatrix> {
    let dim = t.ensure_square()?;
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    let tm = t.pow(m)?;
    let kern = kernel(&t.pow(n)?);
    let mut columns: Vec<_> = (0..dim).map(|j| tm.column(j)).collect();
    columns.extend(kern.basis().iter().cloned());
    RatMatrix::from_columns(dim, &columns)
}

/// Codimension of the range of `S_{n,m}`.
pub fn snm_codim(t: &RatMatrix, n: usize, m: usize) -> Result<usize> {
    let s = snm_operator(t, n, m)?;
    Ok(s.rows() - s.rank())
}

/// Finite-dimensional dual: the transpose.
pub fn dual(t: &RatMatrix) -> RatMatrix {
    t.transpose()
}
