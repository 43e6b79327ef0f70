//! Symbolic operators built from atoms by direct sum and power.
//!
//! Leaf tables (each a one-line kernel/range computation on one-sided
//! sequence space):
//!
//! | atom               | α_n              | β_n              | v   |
//! |--------------------|------------------|------------------|-----|
//! | `ForwardShift(k)`  | 0                | k                | ∞   |
//! | `BackwardShift(k)` | k                | 0                | ∞   |
//! | `ZeroInf`          | ∞, then 0        | ∞, then 0        | 1   |
//! | `IdentityInf`      | 0                | 0                | ∞   |
//! | `Finite(A)`        | from [`chains`]  | from [`chains`]  | exact |
//!
//! `S^k` is injective with range of codimension `k`; its adjoint is onto with
//! a `k`-dimensional kernel already inside every range. The zero operator has
//! everything as kernel and `{0}` as range, after which all restrictions act
//! on the zero space. Direct sums add α and β pointwise and take the minimum
//! of `v`, since kernels and ranges split along summands.
//!
//! [`chains`]: crate::chains

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::chains::{alpha_seq, beta_seq, iterate, EventualSeq};
use crate::error::{Error, Result};
use crate::invariants::{v_degree, ExtNat, IndexValue, InvariantReport};
use crate::kato::{kato_decompose, KatoCertificate};
use crate::qlinalg::{restrict, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomTree {
    Finite(RatMatrix),
    ForwardShift(usize),
    BackwardShift(usize),
    ZeroInf,
    IdentityInf,
    DirectSum(Vec<AtomTree>),
    Power(Box<AtomTree>, usize),
}

/// Same shape as [`InvariantReport`], with `∞` allowed everywhere.
pub type SymbolicReport = InvariantReport;

impl AtomTree {
    pub fn power(self, exponent: usize) -> AtomTree {
        AtomTree::Power(Box::new(self), exponent)
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self, AtomTree::DirectSum(_) | AtomTree::Power(..))
    }

    /// Leaves in left-to-right order (of the tree as given).
    pub fn leaves(&self) -> Vec<&AtomTree> {
        match self {
            AtomTree::DirectSum(children) => children.iter().flat_map(AtomTree::leaves).collect(),
            AtomTree::Power(child, _) => child.leaves(),
            leaf => vec![leaf],
        }
    }

    /// Whether the tree has only `Finite` leaves.
    pub fn is_finite_only(&self) -> bool {
        self.leaves().iter().all(|l| matches!(l, AtomTree::Finite(_)))
    }

    /// Pushes powers to the leaves and flattens nested sums.
    pub fn normalize(&self) -> Result<AtomTree> {
        match self {
            AtomTree::Finite(m) => {
                m.ensure_square()?;
                Ok(self.clone())
            }
            AtomTree::ForwardShift(k) | AtomTree::BackwardShift(k) if *k == 0 => {
                Err(Error::ZeroExponent)
            }
            AtomTree::ForwardShift(_)
            | AtomTree::BackwardShift(_)
            | AtomTree::ZeroInf
            | AtomTree::IdentityInf => Ok(self.clone()),
            AtomTree::DirectSum(children) => {
                if children.is_empty() {
                    return Err(Error::EmptySum);
                }
                let mut flat = Vec::new();
                for c in children {
                    match c.normalize()? {
                        AtomTree::DirectSum(inner) => flat.extend(inner),
                        leaf => flat.push(leaf),
                    }
                }
                Ok(if flat.len() == 1 {
                    flat.pop().expect("one element")
                } else {
                    AtomTree::DirectSum(flat)
                })
            }
            AtomTree::Power(child, e) => {
                if *e == 0 {
                    return Err(Error::ZeroExponent);
                }
                child.normalize()?.raise_normalized(*e)
            }
        }
    }

    fn raise_normalized(self, e: usize) -> Result<AtomTree> {
        Ok(match self {
            AtomTree::Finite(m) => AtomTree::Finite(m.pow(e)?),
            AtomTree::ForwardShift(j) => AtomTree::ForwardShift(j * e),
            AtomTree::BackwardShift(j) => AtomTree::BackwardShift(j * e),
            AtomTree::ZeroInf => AtomTree::ZeroInf,
            AtomTree::IdentityInf => AtomTree::IdentityInf,
            AtomTree::DirectSum(children) => AtomTree::DirectSum(
                children
                    .into_iter()
                    .map(|c| c.raise_normalized(e))
                    .collect::<Result<_>>()?,
            ),
            AtomTree::Power(..) => unreachable!("normalized trees have no power nodes"),
        })
    }

    /// Block-diagonal matrix of a finite-only tree.
    pub fn assemble_finite(&self) -> Option<RatMatrix> {
        let normalized = self.normalize().ok()?;
        let mut blocks = Vec::new();
        for leaf in normalized.leaves() {
            match leaf {
                AtomTree::Finite(m) => blocks.push(m.clone()),
                _ => return None,
            }
        }
        Some(RatMatrix::block_diag(&blocks))
    }

    /// JSON node in the operator file encoding.
    pub fn to_json(&self) -> Value {
        match self {
            AtomTree::Finite(m) => json!({ "type": "matrix", "entries": m }),
            AtomTree::ForwardShift(k) => json!({ "type": "forward_shift", "power": k }),
            AtomTree::BackwardShift(k) => json!({ "type": "backward_shift", "power": k }),
            AtomTree::ZeroInf => json!({ "type": "zero_inf" }),
            AtomTree::IdentityInf => json!({ "type": "identity_inf" }),
            AtomTree::DirectSum(children) => json!({
                "type": "direct_sum",
                "summands": children.iter().map(AtomTree::to_json).collect::<Vec<_>>(),
            }),
            AtomTree::Power(base, e) => json!({
                "type": "power",
                "base": base.to_json(),
                "exponent": e,
            }),
        }
    }
}

impl Serialize for AtomTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

type Seq = EventualSeq<ExtNat>;

struct LeafData {
    alpha: Seq,
    beta: Seq,
    v: ExtNat,
    dim: ExtNat,
    nilpotent: bool,
}

fn leaf_data(leaf: &AtomTree) -> Result<LeafData> {
    let c = |n: usize| Seq::constant(ExtNat::Finite(n));
    let data = match leaf {
        AtomTree::Finite(m) => {
            let lattice = iterate(m)?;
            LeafData {
                alpha: alpha_seq(&lattice).map(|&x| ExtNat::Finite(x)),
                beta: beta_seq(&lattice).map(|&x| ExtNat::Finite(x)),
                v: v_degree(&lattice),
                dim: ExtNat::Finite(m.rows()),
                nilpotent: lattice.is_nilpotent(),
            }
        }
        AtomTree::ForwardShift(k) => LeafData {
            alpha: c(0),
            beta: c(*k),
            v: ExtNat::Infinite,
            dim: ExtNat::Infinite,
            nilpotent: false,
        },
        AtomTree::BackwardShift(k) => LeafData {
            alpha: c(*k),
            beta: c(0),
            v: ExtNat::Infinite,
            dim: ExtNat::Infinite,
            nilpotent: false,
        },
        AtomTree::ZeroInf => {
            let s = Seq::new(vec![ExtNat::Infinite, ExtNat::Finite(0)]);
            LeafData {
                alpha: s.clone(),
                beta: s,
                v: ExtNat::Finite(1),
                dim: ExtNat::Infinite,
                nilpotent: true,
            }
        }
        AtomTree::IdentityInf => LeafData {
            alpha: c(0),
            beta: c(0),
            v: ExtNat::Infinite,
            dim: ExtNat::Infinite,
            nilpotent: false,
        },
        AtomTree::DirectSum(_) | AtomTree::Power(..) => {
            unreachable!("leaf_data is only called on leaves")
        }
    };
    Ok(data)
}

fn combined(t: &AtomTree) -> Result<LeafData> {
    let normalized = t.normalize()?;
    let mut acc: Option<LeafData> = None;
    for leaf in normalized.leaves() {
        let d = leaf_data(leaf)?;
        acc = Some(match acc {
            None => d,
            Some(a) => LeafData {
                alpha: a.alpha.zip_with(&d.alpha, |x, y| *x + *y),
                beta: a.beta.zip_with(&d.beta, |x, y| *x + *y),
                v: a.v.min(d.v),
                dim: a.dim + d.dim,
                nilpotent: a.nilpotent && d.nilpotent,
            },
        });
    }
    let mut acc = acc.ok_or(Error::EmptySum)?;
    acc.alpha = acc.alpha.trimmed();
    acc.beta = acc.beta.trimmed();
    Ok(acc)
}

/// Pointwise-summed α and β sequences.
pub fn symbolic_sequences(t: &AtomTree) -> Result<(Seq, Seq)> {
    let d = combined(t)?;
    Ok((d.alpha, d.beta))
}

pub fn symbolic_invariants(t: &AtomTree) -> Result<SymbolicReport> {
    let d = combined(t)?;
    InvariantReport::from_sequences(d.dim, d.alpha, d.beta, d.v, Some(d.nilpotent))
}

/// How one leaf was split between the core `M` and the nilpotent part `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafSplit {
    pub leaf: AtomTree,
    pub core: Option<AtomTree>,
    pub nilpotent: Option<AtomTree>,
    pub nilpotent_degree: usize,
    pub nilpotent_dim: ExtNat,
    #[serde(skip)]
    pub certificate: Option<KatoCertificate>,
}

/// Structural decomposition of an atom tree into `M ⊕ N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralKato {
    pub core: Option<AtomTree>,
    pub nilpotent: Option<AtomTree>,
    pub degree: usize,
    pub dim_m: ExtNat,
    pub dim_n: ExtNat,
    /// `false` when an infinite-dimensional nilpotent summand (`ZeroInf`) is
    /// present, i.e. the split lies outside the finite-dimensional-`N` regime.
    pub nilpotent_part_finite: bool,
    pub index_t: Option<IndexValue>,
    pub index_m: Option<IndexValue>,
    pub leaves: Vec<LeafSplit>,
}

fn join(parts: Vec<AtomTree>) -> Option<AtomTree> {
    match parts.len() {
        0 => None,
        1 => parts.into_iter().next(),
        _ => Some(AtomTree::DirectSum(parts)),
    }
}

fn zero_space_index() -> IndexValue {
    IndexValue::Finite(0)
}

/// Splits every leaf: finite leaves through [`kato_decompose`], shifts and
/// `IdentityInf` wholly into `M`, `ZeroInf` wholly into `N` with degree 1.
pub fn symbolic_kato(t: &AtomTree) -> Result<StructuralKato> {
    let report = symbolic_invariants(t)?;
    if !report.flags.semi_b_fredholm {
        return Err(Error::NotSemiBFredholm);
    }
    let normalized = t.normalize()?;
    let mut leaves = Vec::new();
    for leaf in normalized.leaves() {
        let split = match leaf {
            AtomTree::Finite(m) => {
                let cert = kato_decompose(m)?;
                let core = (!cert.m_basis.is_zero())
                    .then(|| restrict(m, &cert.m_basis).map(AtomTree::Finite))
                    .transpose()?;
                let nilpotent = (!cert.n_basis.is_zero())
                    .then(|| restrict(m, &cert.n_basis).map(AtomTree::Finite))
                    .transpose()?;
                LeafSplit {
                    leaf: leaf.clone(),
                    core,
                    nilpotent,
                    nilpotent_degree: cert.degree,
                    nilpotent_dim: ExtNat::Finite(cert.n_basis.dim()),
                    certificate: Some(cert),
                }
            }
            AtomTree::ZeroInf => LeafSplit {
                leaf: leaf.clone(),
                core: None,
                nilpotent: Some(AtomTree::ZeroInf),
                nilpotent_degree: 1,
                nilpotent_dim: ExtNat::Infinite,
                certificate: None,
            },
            other => LeafSplit {
                leaf: other.clone(),
                core: Some(other.clone()),
                nilpotent: None,
                nilpotent_degree: 0,
                nilpotent_dim: ExtNat::Finite(0),
                certificate: None,
            },
        };
        leaves.push(split);
    }
    let core = join(leaves.iter().filter_map(|l| l.core.clone()).collect());
    let nilpotent = join(leaves.iter().filter_map(|l| l.nilpotent.clone()).collect());
    let degree = leaves.iter().map(|l| l.nilpotent_degree).max().unwrap_or(0);
    if report.dis != ExtNat::Finite(degree) {
        return Err(Error::Inconsistent(format!(
            "nilpotent degree {degree} differs from dis = {}",
            report.dis
        )));
    }
    let dim_n: ExtNat = leaves.iter().map(|l| l.nilpotent_dim).sum();
    let (dim_m, index_m) = match &core {
        Some(c) => {
            let r = symbolic_invariants(c)?;
            (r.dim, r.index)
        }
        None => (ExtNat::Finite(0), Some(zero_space_index())),
    };
    Ok(StructuralKato {
        core,
        nilpotent,
        degree,
        dim_m,
        dim_n,
        nilpotent_part_finite: dim_n.is_finite(),
        index_t: report.index,
        index_m,
        leaves,
    })
}
