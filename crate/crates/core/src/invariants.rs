//! Scalar invariants and classification flags computed from α/β sequences.
//!
//! The same [`InvariantReport`] is produced for finite matrices (from an
//! [`IterLattice`]) and for symbolic atom trees, whose sequences may contain
//! `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chains::{alpha_seq, beta_seq, iterate, EventualSeq, IterLattice};
use crate::error::{Error, Result};
use crate::qlinalg::RatMatrix;

/// A natural number or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(usize),
    Infinite,
}

pub use ExtNat::{Finite, Infinite};

impl ExtNat {
    pub const ZERO: ExtNat = Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Finite(n) => Some(n),
            Infinite => None,
        }
    }

    /// `∞ - n = ∞`; `n - ∞`, `∞ - ∞` and negative results are errors.
    pub fn checked_sub(self, rhs: ExtNat) -> Result<ExtNat> {
        match (self, rhs) {
            (Finite(a), Finite(b)) if a >= b => Ok(Finite(a - b)),
            (Infinite, Finite(_)) => Ok(Infinite),
            _ => Err(Error::ExtNatSub(self.to_string(), rhs.to_string())),
        }
    }

    /// `k * self` with the convention `0 * ∞ = 0`.
    pub fn scale(self, k: usize) -> ExtNat {
        match self {
            _ if k == 0 => Finite(0),
            Finite(n) => Finite(n * k),
            Infinite => Infinite,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinite,
        }
    }
}

impl std::iter::Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(Finite(0), Add::add)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => Ordering::Less,
            (Infinite, Finite(_)) => Ordering::Greater,
            (Infinite, Infinite) => Ordering::Equal,
        }
    }
}

impl From<usize> for ExtNat {
    fn from(n: usize) -> Self {
        Finite(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(n) => write!(f, "{n}"),
            Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finite(n) => s.serialize_u64(*n as u64),
            Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(i64),
    Str(String),
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(n) if n >= 0 => Ok(Finite(n as usize)),
            NumOrStr::Str(s) if s == "inf" => Ok(Infinite),
            _ => Err(serde::de::Error::custom("expected a natural number or \"inf\"")),
        }
    }
}

/// Index value in `Z ∪ {-∞, +∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexValue {
    Finite(i64),
    PlusInfinity,
    MinusInfinity,
}

impl IndexValue {
    pub fn scale(self, k: i64) -> IndexValue {
        match self {
            IndexValue::Finite(v) => IndexValue::Finite(v * k),
            _ if k == 0 => IndexValue::Finite(0),
            inf if k > 0 => inf,
            IndexValue::PlusInfinity => IndexValue::MinusInfinity,
            IndexValue::MinusInfinity => IndexValue::PlusInfinity,
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Finite(v) => write!(f, "{v}"),
            IndexValue::PlusInfinity => f.write_str("inf"),
            IndexValue::MinusInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for IndexValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IndexValue::Finite(v) => s.serialize_i64(*v),
            IndexValue::PlusInfinity => s.serialize_str("inf"),
            IndexValue::MinusInfinity => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for IndexValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(n) => Ok(IndexValue::Finite(n)),
            NumOrStr::Str(s) if s == "inf" => Ok(IndexValue::PlusInfinity),
            NumOrStr::Str(s) if s == "-inf" => Ok(IndexValue::MinusInfinity),
            _ => Err(serde::de::Error::custom("expected an integer, \"inf\" or \"-inf\"")),
        }
    }
}

/// Essential degree together with essential ascent and descent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialDegrees {
    pub m_t: ExtNat,
    pub a_e: ExtNat,
    pub d_e: ExtNat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Flags {
    pub semi_regular: bool,
    pub quasi_fredholm: bool,
    pub upper_semi_fredholm: bool,
    pub lower_semi_fredholm: bool,
    pub upper_semi_b_fredholm: bool,
    pub lower_semi_b_fredholm: bool,
    pub semi_b_fredholm: bool,
    pub b_fredholm: bool,
    pub fredholm: bool,
    pub drazin_invertible: bool,
    /// Only decided for models that can tell (finite matrices, atom trees).
    pub nilpotent: Option<bool>,
    /// Closedness of every `R(T^n)`; holds structurally in both models.
    pub ranges_closed: bool,
}

/// Every scalar and sequence invariant of one operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub dim: ExtNat,
    pub alpha: EventualSeq<ExtNat>,
    pub beta: EventualSeq<ExtNat>,
    pub k: Vec<ExtNat>,
    pub dis: ExtNat,
    pub v: ExtNat,
    pub m_t: ExtNat,
    pub a_e: ExtNat,
    pub d_e: ExtNat,
    pub ascent: ExtNat,
    pub descent: ExtNat,
    /// `None` when the operator is not semi-B-Fredholm.
    pub jump: Option<ExtNat>,
    /// `None` when the operator is not semi-B-Fredholm.
    pub index: Option<IndexValue>,
    pub flags: Flags,
}

fn first_index(seq: &EventualSeq<ExtNat>, pred: impl Fn(ExtNat) -> bool) -> ExtNat {
    match seq.prefix().iter().position(|&x| pred(x)) {
        Some(i) => Finite(i),
        None => Infinite,
    }
}

/// Least `m` from which the α-sequence is constant.
pub fn dis(alpha: &EventualSeq<ExtNat>) -> ExtNat {
    Finite(alpha.constant_from())
}

/// Least `n` with `N(T) ⊄ R(T^n)`, `∞` if no such `n`.
pub fn v_degree(lattice: &IterLattice) -> ExtNat {
    let null = lattice.null_space();
    for n in 0..=lattice.stab() {
        let inside = lattice
            .range_of_power(n)
            .contains(null)
            .expect("lattice subspaces share the ambient space");
        if !inside {
            return Finite(n);
        }
    }
    Infinite
}

pub fn essential_degrees(
    alpha: &EventualSeq<ExtNat>,
    beta: &EventualSeq<ExtNat>,
) -> EssentialDegrees {
    let a_e = first_index(alpha, ExtNat::is_finite);
    let d_e = first_index(beta, ExtNat::is_finite);
    EssentialDegrees {
        m_t: a_e.min(d_e),
        a_e,
        d_e,
    }
}

/// First indices at which α and β vanish.
pub fn ascent_descent(
    alpha: &EventualSeq<ExtNat>,
    beta: &EventualSeq<ExtNat>,
) -> (ExtNat, ExtNat) {
    (
        first_index(alpha, |x| x == ExtNat::ZERO),
        first_index(beta, |x| x == ExtNat::ZERO),
    )
}

/// `α_{m_T} - α_dis` for upper semi-B-Fredholm operators, otherwise
/// `β_{m_T} - β_dis`. When both forms apply they must agree.
pub fn jump(alpha: &EventualSeq<ExtNat>, beta: &EventualSeq<ExtNat>) -> Result<ExtNat> {
    let ess = essential_degrees(alpha, beta);
    let Finite(m) = ess.m_t else {
        return Err(Error::NotSemiBFredholm);
    };
    let Finite(d) = dis(alpha) else {
        return Err(Error::NotSemiBFredholm);
    };
    let upper = alpha.get(m).is_finite();
    let lower = beta.get(m).is_finite();
    let from_alpha = || alpha.get(m).checked_sub(*alpha.get(d));
    let from_beta = || beta.get(m).checked_sub(*beta.get(d));
    match (upper, lower) {
        (true, true) => {
            let a = from_alpha()?;
            let b = from_beta()?;
            if a != b {
                return Err(Error::Inconsistent(format!(
                    "jump via alpha is {a} but via beta is {b}"
                )));
            }
            Ok(a)
        }
        (true, false) => from_alpha(),
        (false, true) => from_beta(),
        (false, false) => Err(Error::NotSemiBFredholm),
    }
}

/// `α_{m_T} - β_{m_T}`.
pub fn index(alpha: &EventualSeq<ExtNat>, beta: &EventualSeq<ExtNat>) -> Result<IndexValue> {
    let Finite(m) = essential_degrees(alpha, beta).m_t else {
        return Err(Error::NotSemiBFredholm);
    };
    match (*alpha.get(m), *beta.get(m)) {
        (Finite(a), Finite(b)) => Ok(IndexValue::Finite(a as i64 - b as i64)),
        (Finite(_), Infinite) => Ok(IndexValue::MinusInfinity),
        (Infinite, Finite(_)) => Ok(IndexValue::PlusInfinity),
        (Infinite, Infinite) => Err(Error::NotSemiBFredholm),
    }
}

pub fn classify(
    alpha: &EventualSeq<ExtNat>,
    beta: &EventualSeq<ExtNat>,
    nilpotent: Option<bool>,
) -> Flags {
    let d = dis(alpha);
    let ess = essential_degrees(alpha, beta);
    let (ascent, descent) = ascent_descent(alpha, beta);
    let upper_sf = alpha.get(0).is_finite();
    let lower_sf = beta.get(0).is_finite();
    let upper_sbf = ess.a_e.is_finite();
    let lower_sbf = ess.d_e.is_finite();
    Flags {
        semi_regular: d == ExtNat::ZERO,
        quasi_fredholm: d.is_finite(),
        upper_semi_fredholm: upper_sf,
        lower_semi_fredholm: lower_sf,
        upper_semi_b_fredholm: upper_sbf,
        lower_semi_b_fredholm: lower_sbf,
        semi_b_fredholm: upper_sbf || lower_sbf,
        b_fredholm: upper_sbf && lower_sbf,
        fredholm: upper_sf && lower_sf,
        drazin_invertible: ascent.is_finite() && descent.is_finite(),
        nilpotent,
        ranges_closed: true,
    }
}

impl InvariantReport {
    /// Assembles a report from the two dimension sequences plus the inputs
    /// that are not determined by them (`v` and nilpotency).
    pub fn from_sequences(
        dim: ExtNat,
        alpha: EventualSeq<ExtNat>,
        beta: EventualSeq<ExtNat>,
        v: ExtNat,
        nilpotent: Option<bool>,
    ) -> Result<Self> {
        let len = alpha.prefix().len().max(beta.prefix().len());
        let alpha = alpha.trimmed();
        let beta = beta.trimmed();
        let k = (0..len.saturating_sub(1))
            .map(|n| alpha.get(n).checked_sub(*alpha.get(n + 1)))
            .collect::<Result<Vec<_>>>()?;
        let ess = essential_degrees(&alpha, &beta);
        let (ascent, descent) = ascent_descent(&alpha, &beta);
        let flags = classify(&alpha, &beta, nilpotent);
        let (jump, index) = if flags.semi_b_fredholm {
            (Some(jump(&alpha, &beta)?), Some(index(&alpha, &beta)?))
        } else {
            (None, None)
        };
        Ok(InvariantReport {
            dim,
            dis: dis(&alpha),
            alpha,
            beta,
            k,
            v,
            m_t: ess.m_t,
            a_e: ess.a_e,
            d_e: ess.d_e,
            ascent,
            descent,
            jump,
            index,
            flags,
        })
    }

    pub fn from_lattice(lattice: &IterLattice) -> Result<Self> {
        let alpha = alpha_seq(lattice).map(|&x| Finite(x));
        let beta = beta_seq(lattice).map(|&x| Finite(x));
        let report = Self::from_sequences(
            Finite(lattice.dim()),
            alpha,
            beta,
            v_degree(lattice),
            Some(lattice.is_nilpotent()),
        )?;
        debug_assert_eq!(report.k.len(), lattice.stab());
        Ok(report)
    }

    pub fn essential_degrees(&self) -> EssentialDegrees {
        EssentialDegrees {
            m_t: self.m_t,
            a_e: self.a_e,
            d_e: self.d_e,
        }
    }

    pub fn jump(&self) -> Result<ExtNat> {
        self.jump.ok_or(Error::NotSemiBFredholm)
    }

    pub fn index(&self) -> Result<IndexValue> {
        self.index.ok_or(Error::NotSemiBFredholm)
    }
}

/// Full report for a square rational matrix.
pub fn analyze_matrix(t: &RatMatrix) -> Result<InvariantReport> {
    InvariantReport::from_lattice(&iterate(t)?)
}

/// Closed forms for `α(T^n)` and `β(T^n)`:
/// `n·α(T)` when `n ≤ d`, else `d·α(T) + (n-d)·α_d` (same shape for β).
///
/// These agree with the true kernel dimensions when `α_k = α_0` for every
/// `k < d`, which in finite dimensions means all nilpotent Jordan blocks have
/// the same size. See `closed_form_differs_for_unequal_blocks` below.
pub fn predicted_power_dims(report: &InvariantReport, n: usize) -> Result<(ExtNat, ExtNat)> {
    if !(report.flags.upper_semi_fredholm || report.flags.lower_semi_fredholm) {
        return Err(Error::NotSemiFredholm);
    }
    let Finite(d) = report.dis else {
        return Err(Error::NotSemiFredholm);
    };
    let form = |seq: &EventualSeq<ExtNat>| {
        if n <= d {
            seq.get(0).scale(n)
        } else {
            seq.get(0).scale(d) + seq.get(d).scale(n - d)
        }
    };
    Ok((form(&report.alpha), form(&report.beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{image, kernel};

    fn seq(v: &[ExtNat]) -> EventualSeq<ExtNat> {
        EventualSeq::new(v.to_vec())
    }

    fn j2_plus_2() -> RatMatrix {
        RatMatrix::block_diag(&[
            RatMatrix::jordan_block(2),
            RatMatrix::from_ints(&[&[2]]),
        ])
    }

    fn invertible() -> RatMatrix {
        RatMatrix::from_ints(&[&[2, 1], &[1, 1]])
    }

    #[test]
    fn ext_nat_arithmetic() {
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        assert_eq!(Finite(2) + Infinite, Infinite);
        assert!(Finite(1_000_000) < Infinite);
        assert_eq!(Infinite.checked_sub(Finite(4)).unwrap(), Infinite);
        assert_eq!(Finite(4).checked_sub(Finite(1)).unwrap(), Finite(3));
        assert!(Finite(1).checked_sub(Finite(4)).is_err());
        assert!(Finite(1).checked_sub(Infinite).is_err());
        assert!(Infinite.checked_sub(Infinite).is_err());
        assert_eq!(Infinite.scale(0), Finite(0));
    }

    #[test]
    fn ext_nat_serde() {
        assert_eq!(serde_json::to_string(&Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Finite(3)).unwrap(), "3");
        let back: Vec<ExtNat> = serde_json::from_str(r#"[0, "inf", 7]"#).unwrap();
        assert_eq!(back, vec![Finite(0), Infinite, Finite(7)]);
        assert!(serde_json::from_str::<ExtNat>("-1").is_err());
        let idx: Vec<IndexValue> = serde_json::from_str(r#"[-2, "inf", "-inf"]"#).unwrap();
        assert_eq!(
            idx,
            vec![
                IndexValue::Finite(-2),
                IndexValue::PlusInfinity,
                IndexValue::MinusInfinity
            ]
        );
    }

    #[test]
    fn dis_examples() {
        assert_eq!(analyze_matrix(&RatMatrix::jordan_block(3)).unwrap().dis, Finite(3));
        assert_eq!(analyze_matrix(&RatMatrix::identity(3)).unwrap().dis, Finite(0));
        assert_eq!(analyze_matrix(&RatMatrix::zeros(2, 2)).unwrap().dis, Finite(1));
    }

    #[test]
    fn v_examples() {
        assert_eq!(analyze_matrix(&RatMatrix::jordan_block(3)).unwrap().v, Finite(3));
        assert_eq!(analyze_matrix(&invertible()).unwrap().v, Infinite);
        assert_eq!(analyze_matrix(&RatMatrix::zeros(2, 2)).unwrap().v, Finite(1));
    }

    #[test]
    fn essential_degree_examples() {
        let r = analyze_matrix(&j2_plus_2()).unwrap();
        assert_eq!(
            r.essential_degrees(),
            EssentialDegrees {
                m_t: Finite(0),
                a_e: Finite(0),
                d_e: Finite(0)
            }
        );
        // ZeroInf ⊕ ForwardShift
        let alpha = seq(&[Infinite, Finite(0)]);
        let beta = seq(&[Infinite, Finite(1)]);
        let e = essential_degrees(&alpha, &beta);
        assert_eq!((e.m_t, e.a_e, e.d_e), (Finite(1), Finite(1), Finite(1)));
        // IdentityInf
        let e = essential_degrees(&seq(&[Finite(0)]), &seq(&[Finite(0)]));
        assert_eq!(e.m_t, Finite(0));
    }

    #[test]
    fn ascent_descent_examples() {
        let r = analyze_matrix(&RatMatrix::jordan_block(3)).unwrap();
        assert_eq!((r.ascent, r.descent), (Finite(3), Finite(3)));
        let fs = ascent_descent(&seq(&[Finite(0)]), &seq(&[Finite(1)]));
        assert_eq!(fs, (Finite(0), Infinite));
        let r = analyze_matrix(&invertible()).unwrap();
        assert_eq!((r.ascent, r.descent), (Finite(0), Finite(0)));
    }

    #[test]
    fn jump_examples() {
        assert_eq!(analyze_matrix(&RatMatrix::jordan_block(3)).unwrap().jump, Some(Finite(1)));
        assert_eq!(analyze_matrix(&RatMatrix::zeros(2, 2)).unwrap().jump, Some(Finite(2)));
        let forward_shift = jump(&seq(&[Finite(0)]), &seq(&[Finite(1)])).unwrap();
        assert_eq!(forward_shift, Finite(0));
        let neither = jump(&seq(&[Infinite]), &seq(&[Infinite]));
        assert_eq!(neither, Err(Error::NotSemiBFredholm));
    }

    #[test]
    fn index_examples() {
        for t in [RatMatrix::jordan_block(4), j2_plus_2(), invertible()] {
            assert_eq!(analyze_matrix(&t).unwrap().index, Some(IndexValue::Finite(0)));
        }
        let fwd = index(&seq(&[Finite(0)]), &seq(&[Finite(1)])).unwrap();
        let bwd = index(&seq(&[Finite(1)]), &seq(&[Finite(0)])).unwrap();
        assert_eq!((fwd, bwd), (IndexValue::Finite(-1), IndexValue::Finite(1)));
        let zs = index(&seq(&[Infinite, Finite(0)]), &seq(&[Infinite, Finite(1)])).unwrap();
        assert_eq!(zs, IndexValue::Finite(-1));
        let upper_only = index(&seq(&[Finite(2)]), &seq(&[Infinite])).unwrap();
        assert_eq!(upper_only, IndexValue::MinusInfinity);
        assert_eq!(
            index(&seq(&[Infinite]), &seq(&[Infinite])),
            Err(Error::NotSemiBFredholm)
        );
    }

    #[test]
    fn classify_examples() {
        let f = analyze_matrix(&invertible()).unwrap().flags;
        assert!(f.semi_regular && f.fredholm && f.drazin_invertible);
        assert_eq!(f.nilpotent, Some(false));

        // ZeroInf: α = β = (∞, 0, 0, ...)
        let z = seq(&[Infinite, Finite(0)]);
        let f = classify(&z, &z, Some(true));
        assert!(f.upper_semi_b_fredholm && f.lower_semi_b_fredholm && f.b_fredholm);
        assert!(!f.fredholm && !f.upper_semi_fredholm);

        // J2 ⊕ ForwardShift: α = (1, 1, 0), β = (2, 2, 1)
        let r = InvariantReport::from_sequences(
            Infinite,
            seq(&[Finite(1), Finite(1), Finite(0)]),
            seq(&[Finite(2), Finite(2), Finite(1)]),
            Finite(2),
            Some(false),
        )
        .unwrap();
        assert!(r.flags.upper_semi_fredholm && r.flags.fredholm);
        assert!(!r.flags.semi_regular);
        assert_eq!(r.dis, Finite(2));
        assert_eq!(r.index, Some(IndexValue::Finite(-1)));
        assert_eq!(r.jump, Some(Finite(1)));
    }

    #[test]
    fn predicted_power_dims_examples() {
        let r = analyze_matrix(&RatMatrix::jordan_block(3)).unwrap();
        assert_eq!(predicted_power_dims(&r, 2).unwrap(), (Finite(2), Finite(2)));
        assert_eq!(predicted_power_dims(&r, 5).unwrap(), (Finite(3), Finite(3)));
        let inv = analyze_matrix(&invertible()).unwrap();
        for n in 0..5 {
            assert_eq!(predicted_power_dims(&inv, n).unwrap(), (Finite(0), Finite(0)));
        }
        // direct cross-check on J3
        let j3 = RatMatrix::jordan_block(3);
        assert_eq!(kernel(&j3.pow(2).unwrap()).dim(), 2);
        assert_eq!(kernel(&j3.pow(5).unwrap()).dim(), 3);
    }

    #[test]
    fn predicted_power_dims_requires_semi_fredholm() {
        let z = seq(&[Infinite, Finite(0)]);
        let r = InvariantReport::from_sequences(Infinite, z.clone(), z, Finite(1), None).unwrap();
        assert_eq!(predicted_power_dims(&r, 2), Err(Error::NotSemiFredholm));
    }

    /// J2 ⊕ J3: α = (2, 2, 1, 0), dis = 3 but v = 2, and the closed form
    /// predicts α(T^3) = 6 while dim N(T^3) = 5.
    #[test]
    fn closed_form_differs_for_unequal_blocks() {
        let t = RatMatrix::block_diag(&[RatMatrix::jordan_block(2), RatMatrix::jordan_block(3)]);
        let r = analyze_matrix(&t).unwrap();
        assert_eq!(r.alpha.prefix(), &[Finite(2), Finite(2), Finite(1), Finite(0)]);
        assert_eq!((r.dis, r.v), (Finite(3), Finite(2)));
        let (predicted, _) = predicted_power_dims(&r, 3).unwrap();
        assert_eq!(predicted, Finite(6));
        assert_eq!(kernel(&t.pow(3).unwrap()).dim(), 5);
        assert_eq!(5 - image(&t.pow(3).unwrap()).dim(), 5);
    }

    #[test]
    fn transpose_swaps_sequences() {
        let t = RatMatrix::from_ints(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 1]]);
        let r = analyze_matrix(&t).unwrap();
        let rt = analyze_matrix(&t.transpose()).unwrap();
        assert_eq!(r.alpha, rt.beta);
        assert_eq!(r.beta, rt.alpha);
        assert_eq!(r.dis, rt.dis);
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = analyze_matrix(&j2_plus_2()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: InvariantReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
