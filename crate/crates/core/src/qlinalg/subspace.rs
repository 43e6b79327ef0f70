use serde::{Deserialize, Serialize};

use super::matrix::{is_zero_vector, rref_with_pivots, RatMatrix, RatVector};
use super::Rat;
use crate::error::{Error, Result};

/// Subspace of `Q^n` stored by its reduced row echelon basis.
///
/// The basis rows are in strict RREF, so two subspaces are equal exactly when
/// their stored bases are equal entry-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SubspaceRepr", try_from = "SubspaceRepr")]
pub struct RatSubspace {
    ambient_dim: usize,
    basis: Vec<RatVector>,
    pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<RatVector>,
}

impl From<RatSubspace> for SubspaceRepr {
    fn from(s: RatSubspace) -> Self {
        SubspaceRepr {
            ambient_dim: s.ambient_dim,
            basis: s.basis,
        }
    }
}

impl TryFrom<SubspaceRepr> for RatSubspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        RatSubspace::span(r.ambient_dim, r.basis)
    }
}

impl RatSubspace {
    pub fn zero(ambient_dim: usize) -> Self {
        RatSubspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_rref_matrix(&RatMatrix::identity(ambient_dim))
    }

    /// Canonical span of arbitrary vectors of length `ambient_dim`.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = RatVector>,
    {
        let rows: Vec<RatVector> = vectors.into_iter().collect();
        let m = RatMatrix::from_rows_with_cols(rows, ambient_dim)?;
        Ok(Self::row_space(&m))
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &RatMatrix) -> Self {
        let (r, _) = rref_with_pivots(m);
        Self::from_rref_matrix(&r)
    }

    fn from_rref_matrix(r: &RatMatrix) -> Self {
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        for i in 0..r.rows() {
            let row = r.row(i);
            match row.iter().position(|x| !x.is_zero()) {
                Some(p) => {
                    pivots.push(p);
                    basis.push(row.to_vec());
                }
                None => break,
            }
        }
        RatSubspace {
            ambient_dim: r.cols(),
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the rows of a `dim x ambient_dim` matrix.
    pub fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows_with_cols(self.basis.clone(), self.ambient_dim)
            .expect("basis rows have ambient length")
    }

    fn check_ambient(&self, other: &RatSubspace) -> Result<()> {
        if self.ambient_dim == other.ambient_dim {
            Ok(())
        } else {
            Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            })
        }
    }

    /// Coordinates of `v` in the stored basis, or `None` when `v` lies outside.
    ///
    /// Because pivot columns of an RREF basis are unit vectors, the
    /// coordinates are just the entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[Rat]) -> Result<Option<RatVector>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        let coords: RatVector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, b) in residual.iter_mut().zip(row) {
                if !b.is_zero() {
                    *r -= &(c * b);
                }
            }
        }
        Ok(is_zero_vector(&residual).then_some(coords))
    }

    pub fn contains_vector(&self, v: &[Rat]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Whether `inner` is a subspace of `self`.
    pub fn contains(&self, inner: &RatSubspace) -> Result<bool> {
        self.check_ambient(inner)?;
        for b in &inner.basis {
            if !self.contains_vector(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn lift(&self, coords: &[Rat]) -> Result<RatVector> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        let mut v = vec![Rat::zero(); self.ambient_dim];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x += &(c * b);
                }
            }
        }
        Ok(v)
    }

    pub fn sum(&self, other: &RatSubspace) -> Result<RatSubspace> {
        self.check_ambient(other)?;
        RatSubspace::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Intersection via the stacked coefficient system: `c_a A + c_b B = 0`
    /// gives `c_a A` in both subspaces.
    pub fn intersect(&self, other: &RatSubspace) -> Result<RatSubspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(RatSubspace::zero(self.ambient_dim));
        }
        let stacked = RatMatrix::from_rows_with_cols(
            self.basis.iter().chain(&other.basis).cloned().collect(),
            self.ambient_dim,
        )?;
        let relations = kernel(&stacked.transpose());
        let ka = self.dim();
        let mut vectors = Vec::with_capacity(relations.dim());
        for c in relations.basis() {
            vectors.push(self.lift(&c[..ka])?);
        }
        RatSubspace::span(self.ambient_dim, vectors)
    }

    /// Vectors from this subspace's RREF basis, greedily in pivot order, that
    /// extend a basis of `inner` to a basis of `self`.
    pub fn extend_basis(&self, inner: &RatSubspace) -> Result<Vec<RatVector>> {
        if !self.contains(inner)? {
            return Err(Error::NotContained);
        }
        let mut current = inner.clone();
        let mut chosen = Vec::new();
        for row in &self.basis {
            if current.dim() == self.dim() {
                break;
            }
            if !current.contains_vector(row)? {
                chosen.push(row.clone());
                current = RatSubspace::span(
                    self.ambient_dim,
                    current.basis.iter().cloned().chain(std::iter::once(row.clone())),
                )?;
            }
        }
        Ok(chosen)
    }

    /// Image of the subspace under `t`.
    pub fn map(&self, t: &RatMatrix) -> Result<RatSubspace> {
        let mut images = Vec::with_capacity(self.dim());
        for b in &self.basis {
            images.push(t.apply(b)?);
        }
        RatSubspace::span(t.rows(), images)
    }

    pub fn is_invariant_under(&self, t: &RatMatrix) -> Result<bool> {
        t.ensure_square()?;
        if t.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: t.rows(),
            });
        }
        for b in &self.basis {
            if !self.contains_vector(&t.apply(b)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Null space of `m` as a subspace of `Q^cols`.
pub fn kernel(m: &RatMatrix) -> RatSubspace {
    let (r, pivots) = rref_with_pivots(m);
    let n = m.cols();
    let mut vectors = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free);
        }
        vectors.push(v);
    }
    RatSubspace::span(n, vectors).expect("kernel vectors have ambient length")
}

/// Column space of `m` as a subspace of `Q^rows`.
pub fn image(m: &RatMatrix) -> RatSubspace {
    RatSubspace::row_space(&m.transpose())
}

/// Matrix of `t` restricted to the invariant subspace `sub`, written in the
/// stored RREF basis of `sub`.
pub fn restrict(t: &RatMatrix, sub: &RatSubspace) -> Result<RatMatrix> {
    if !sub.is_invariant_under(t)? {
        return Err(Error::NotInvariant);
    }
    let k = sub.dim();
    let mut out = RatMatrix::zeros(k, k);
    for (j, b) in sub.basis().iter().enumerate() {
        let image = t.apply(b)?;
        for (i, &p) in sub.pivots().iter().enumerate() {
            out.set(i, j, image[p].clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::unit_vector;

    fn e(n: usize, i: usize) -> RatVector {
        unit_vector(n, i)
    }

    fn span(n: usize, vs: Vec<RatVector>) -> RatSubspace {
        RatSubspace::span(n, vs).unwrap()
    }

    fn ints(v: &[i64]) -> RatVector {
        v.iter().copied().map(Rat::from_int).collect()
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&RatMatrix::identity(4)).is_zero());
        assert!(kernel(&RatMatrix::zeros(3, 3)).is_full());
        assert_eq!(kernel(&RatMatrix::jordan_block(3)), span(3, vec![e(3, 0)]));
    }

    #[test]
    fn image_examples() {
        assert!(image(&RatMatrix::identity(3)).is_full());
        assert_eq!(
            image(&RatMatrix::jordan_block(3)),
            span(3, vec![e(3, 0), e(3, 1)])
        );
        let rank_one = RatMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        let im = image(&rank_one);
        assert_eq!(im.basis(), &[ints(&[1, 2])]);
    }

    #[test]
    fn sum_and_intersect_examples() {
        let a = span(3, vec![ints(&[1, 2, 3])]);
        assert_eq!(a.sum(&RatSubspace::zero(3)).unwrap(), a);
        assert_eq!(
            span(3, vec![e(3, 0)]).sum(&span(3, vec![e(3, 1)])).unwrap(),
            span(3, vec![e(3, 0), e(3, 1)])
        );
        assert_eq!(a.intersect(&RatSubspace::full(3)).unwrap(), a);
        assert!(span(3, vec![e(3, 0)])
            .intersect(&span(3, vec![e(3, 1)]))
            .unwrap()
            .is_zero());
        let x = span(3, vec![e(3, 0), e(3, 1)]);
        let y = span(3, vec![e(3, 1), e(3, 2)]);
        assert_eq!(x.intersect(&y).unwrap(), span(3, vec![e(3, 1)]));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = RatSubspace::full(2);
        let b = RatSubspace::full(3);
        assert!(matches!(a.sum(&b), Err(Error::AmbientMismatch { .. })));
        assert!(a.intersect(&b).is_err());
        assert!(a.contains(&b).is_err());
    }

    #[test]
    fn contains_examples() {
        let zero = RatSubspace::zero(3);
        assert!(span(3, vec![e(3, 2)]).contains(&zero).unwrap());
        assert!(!span(3, vec![e(3, 1)]).contains(&span(3, vec![e(3, 0)])).unwrap());
        let j3 = RatMatrix::jordan_block(3);
        let n = kernel(&j3);
        let r2 = image(&j3.pow(2).unwrap());
        assert!(r2.contains(&n).unwrap());
    }

    #[test]
    fn extend_basis_examples() {
        let full = RatSubspace::full(2);
        assert!(full.extend_basis(&full).unwrap().is_empty());
        assert_eq!(
            full.extend_basis(&RatSubspace::zero(2)).unwrap(),
            vec![e(2, 0), e(2, 1)]
        );
        let diag = span(2, vec![ints(&[1, 1])]);
        assert_eq!(full.extend_basis(&diag).unwrap(), vec![e(2, 0)]);
        let line = span(2, vec![e(2, 0)]);
        assert_eq!(line.extend_basis(&full), Err(Error::NotContained));
    }

    #[test]
    fn restrict_examples() {
        let t = RatMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(restrict(&t, &RatSubspace::full(2)).unwrap(), t);
        let j3 = RatMatrix::jordan_block(3);
        assert_eq!(
            restrict(&j3, &span(3, vec![e(3, 0), e(3, 1)])).unwrap(),
            RatMatrix::jordan_block(2)
        );
        let d = RatMatrix::from_ints(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            restrict(&d, &span(2, vec![e(2, 1)])).unwrap(),
            RatMatrix::from_ints(&[&[3]])
        );
        assert_eq!(
            restrict(&j3, &span(3, vec![e(3, 2)])),
            Err(Error::NotInvariant)
        );
    }

    #[test]
    fn serde_canonicalizes() {
        let json = r#"{"ambient_dim":2,"basis":[["2","4"],["1","2"]]}"#;
        let s: RatSubspace = serde_json::from_str(json).unwrap();
        assert_eq!(s.basis(), &[ints(&[1, 2])]);
        let back = serde_json::to_string(&s).unwrap();
        assert_eq!(back, r#"{"ambient_dim":2,"basis":[["1","2"]]}"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_rows(n: usize, max_rows: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), 0..=max_rows)
        }

        fn subspace(rows: &[Vec<i64>], n: usize) -> RatSubspace {
            RatSubspace::span(n, rows.iter().map(|r| ints(r))).unwrap()
        }

        proptest! {
            #[test]
            fn sum_intersection_dimension_formula(a in int_rows(4, 3), b in int_rows(4, 3)) {
                let (a, b) = (subspace(&a, 4), subspace(&b, 4));
                let s = a.sum(&b).unwrap();
                let i = a.intersect(&b).unwrap();
                prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
                prop_assert!(s.contains(&a).unwrap() && s.contains(&b).unwrap());
                prop_assert!(a.contains(&i).unwrap() && b.contains(&i).unwrap());
            }

            #[test]
            fn canonical_form_is_idempotent(a in int_rows(5, 4)) {
                let s = subspace(&a, 5);
                let again = RatSubspace::span(5, s.basis().to_vec()).unwrap();
                prop_assert_eq!(again, s);
            }

            #[test]
            fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 1..5)) {
                let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                let m = RatMatrix::from_ints(&refs);
                prop_assert_eq!(kernel(&m).dim() + image(&m).dim(), m.cols());
                for v in kernel(&m).basis() {
                    prop_assert!(is_zero_vector(&m.apply(v).unwrap()));
                }
            }

            #[test]
            fn restrict_then_embed_reproduces_action(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 4)) {
                let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                let t = RatMatrix::from_ints(&refs);
                let sub = image(&t.pow(2).unwrap());
                let r = restrict(&t, &sub).unwrap();
                for (j, b) in sub.basis().iter().enumerate() {
                    let embedded = sub.lift(&r.column(j)).unwrap();
                    prop_assert_eq!(embedded, t.apply(b).unwrap());
                }
            }
        }
    }
}
