//! Generalized Kato decomposition of a square rational matrix by cascade
//! peeling, an independent Fitting-decomposition oracle, and a from-scratch
//! certificate verifier.
//!
//! One peel, for `T` with degree of stable iteration `d > 0`:
//!
//! 1. pick `y ∈ N(T^d) \ (N(T^{d-1}) + R(T))` deterministically
//!    ([`pick_cascade_seed`]);
//! 2. solve for a covector `f` vanishing on `R(T^d)` with
//!    `f(T^m y) = [m = d-1]` ([`adjoint_cascade`]);
//! 3. form `P = Σ_i (T^{d-i-1} y) ⊗ (f T^i)`, a rank-`d` projection commuting
//!    with `T` ([`cascade_projection`]);
//! 4. continue on `T` restricted to `N(P)`.
//!
//! The loop stops once the restricted operator has degree 0. The ranges of the
//! projections, lifted back to ambient coordinates, span `N`; the final core
//! is `M`.

use serde::{Deserialize, Serialize};

use crate::chains::iterate;
use crate::error::{Error, Result};
use crate::invariants::{analyze_matrix, ExtNat, InvariantReport};
use crate::qlinalg::{
    dot, image, is_zero_vector, kernel, restrict, solve_canonical, Rat, RatMatrix, RatSubspace,
    RatVector,
};

/// The chain `y, Ty, ..., T^{d-1} y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascade {
    pub seed: RatVector,
    pub vectors: Vec<RatVector>,
    pub degree: usize,
}

impl Cascade {
    /// Builds the chain and checks `T^d y = 0`, `T^{d-1} y ≠ 0`.
    pub fn new(t: &RatMatrix, seed: RatVector, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut vectors = Vec::with_capacity(degree);
        let mut current = seed.clone();
        for _ in 0..degree {
            let next = t.apply(&current)?;
            vectors.push(current);
            current = next;
        }
        if !is_zero_vector(&current) {
            return Err(Error::InvalidSeed(format!("T^{degree} y is nonzero")));
        }
        if is_zero_vector(&vectors[degree - 1]) {
            return Err(Error::InvalidSeed(format!("T^{} y is zero", degree - 1)));
        }
        Ok(Cascade {
            seed,
            vectors,
            degree,
        })
    }

    pub fn span(&self) -> Result<RatSubspace> {
        RatSubspace::span(self.seed.len(), self.vectors.iter().cloned())
    }
}

/// The covector chain `f, fT, ..., fT^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointCascade {
    pub functional: RatVector,
    pub covectors: Vec<RatVector>,
}

/// One step of the peeling loop, in the coordinates of the operator being
/// peeled at that step (the RREF basis of the previous core).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelRecord {
    pub seed: RatVector,
    pub functional: RatVector,
    pub projection_rank: usize,
    pub degree: usize,
}

/// Claimed decomposition `Q^n = M ⊕ N`. Nothing in here is trusted by
/// [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatoCertificate {
    pub ambient_dim: usize,
    pub m_basis: RatSubspace,
    pub n_basis: RatSubspace,
    pub degree: usize,
    pub iterations: usize,
    pub trace: Vec<PeelRecord>,
}

fn degree_of(report: &InvariantReport) -> Result<usize> {
    report
        .dis
        .finite()
        .ok_or_else(|| Error::Inconsistent("finite matrix with infinite dis".into()))
}

/// First vector, in pivot order, of `N(T^d)`'s RREF basis that lies outside
/// `N(T^{d-1}) + R(T)`.
pub fn pick_cascade_seed(t: &RatMatrix, d: usize) -> Result<RatVector> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let lattice = iterate(t)?;
    let w = lattice.kernel_of_power(d);
    let r = lattice.range_of_power(1);
    let u = lattice.kernel_of_power(d - 1).sum(r)?.intersect(w)?;
    lattice_seed(w, &u)
}

fn lattice_seed(w: &RatSubspace, u: &RatSubspace) -> Result<RatVector> {
    w.extend_basis(u)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidSeed("N(T^d) ⊆ N(T^{d-1}) + R(T); dis miscomputed".into()))
}

/// Canonical covector `f` with `f|R(T^d) = 0` and `f(T^m y) = [m = d-1]`.
pub fn adjoint_cascade(t: &RatMatrix, cascade: &Cascade) -> Result<AdjointCascade> {
    let n = t.ensure_square()?;
    let d = cascade.degree;
    let range = image(&t.pow(d)?);
    let mut rows: Vec<RatVector> = range.basis().to_vec();
    let mut rhs = vec![Rat::zero(); rows.len()];
    for (m, v) in cascade.vectors.iter().enumerate() {
        rows.push(v.clone());
        rhs.push(if m + 1 == d {
            Rat::one()
        } else {
            Rat::zero()
        });
    }
    let system = RatMatrix::from_rows_with_cols(rows, n)?;
    let functional = solve_canonical(&system, &rhs)?
        .ok_or_else(|| Error::InvalidSeed("adjoint system is inconsistent".into()))?;
    let mut covectors = Vec::with_capacity(d);
    let mut current = functional.clone();
    for _ in 0..d {
        let next = t.apply_left(&current)?;
        covectors.push(current);
        current = next;
    }
    Ok(AdjointCascade {
        functional,
        covectors,
    })
}

/// `P = Σ_{i<d} (T^{d-i-1} y) ⊗ (f T^i)`.
pub fn cascade_projection(cascade: &Cascade, adjoint: &AdjointCascade) -> RatMatrix {
    let n = cascade.seed.len();
    let d = cascade.degree;
    let mut p = RatMatrix::zeros(n, n);
    for i in 0..d {
        let col = &cascade.vectors[d - i - 1];
        let row = &adjoint.covectors[i];
        for (r, a) in col.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, b) in row.iter().enumerate() {
                if !b.is_zero() {
                    let v = p.get(r, c) + &(a * b);
                    p.set(r, c, v);
                }
            }
        }
    }
    p
}

/// `(f T^i)(T^{d-j-1} y) = [i = j]` for all `i, j < d`.
pub fn delta_pattern_holds(cascade: &Cascade, adjoint: &AdjointCascade) -> bool {
    let d = cascade.degree;
    (0..d).all(|i| {
        (0..d).all(|j| {
            let v = dot(&adjoint.covectors[i], &cascade.vectors[d - j - 1]);
            if i == j {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    })
}

/// Whether the cascade stacked with a basis of `R(T^d)` has full rank.
pub fn cascade_independent_mod_range(t: &RatMatrix, cascade: &Cascade) -> Result<bool> {
    let range = image(&t.pow(cascade.degree)?);
    let stacked = RatSubspace::span(
        t.rows(),
        range.basis().iter().cloned().chain(cascade.vectors.iter().cloned()),
    )?;
    Ok(stacked.dim() == range.dim() + cascade.degree)
}

fn internal(iteration: usize, detail: impl Into<String>) -> Error {
    Error::Internal {
        iteration,
        detail: detail.into(),
    }
}

/// Runs the peeling loop to completion.
pub fn kato_decompose(t: &RatMatrix) -> Result<KatoCertificate> {
    let n = t.ensure_square()?;
    let report = analyze_matrix(t)?;
    let total_jump = report
        .jump
        .and_then(ExtNat::finite)
        .ok_or_else(|| internal(0, "finite matrix without finite jump"))?;
    let degree = degree_of(&report)?;

    let mut current = t.clone();
    // rows: basis of the current core in ambient coordinates
    let mut core_basis = RatMatrix::identity(n);
    let mut nil_vectors: Vec<RatVector> = Vec::new();
    let mut trace = Vec::new();
    let mut previous_degree = degree;

    for iteration in 0.. {
        if iteration > total_jump {
            return Err(internal(iteration, "iteration cap exceeded"));
        }
        let local = if iteration == 0 {
            report.clone()
        } else {
            analyze_matrix(&current)?
        };
        let d = degree_of(&local)?;
        let expected = ExtNat::Finite(total_jump - iteration);
        if local.jump != Some(expected) {
            return Err(internal(
                iteration,
                format!("jump of core is {:?}, expected {expected}", local.jump),
            ));
        }
        if d == 0 {
            break;
        }
        if d > previous_degree {
            return Err(internal(iteration, "cascade degree increased"));
        }
        previous_degree = d;

        let seed = pick_cascade_seed(&current, d)?;
        let cascade = Cascade::new(&current, seed, d)?;
        let adjoint = adjoint_cascade(&current, &cascade)?;
        let p = cascade_projection(&cascade, &adjoint);

        if p.mul(&p)? != p {
            return Err(internal(iteration, "P is not idempotent"));
        }
        if p.mul(&current)? != current.mul(&p)? {
            return Err(internal(iteration, "P does not commute with T"));
        }
        let rank = p.rank();
        if rank != d {
            return Err(internal(iteration, format!("rank P = {rank}, expected {d}")));
        }

        let peeled = image(&p);
        let next_core = kernel(&p);
        for v in peeled.basis() {
            nil_vectors.push(core_basis.apply_left(v)?);
        }
        trace.push(PeelRecord {
            seed: cascade.seed.clone(),
            functional: adjoint.functional.clone(),
            projection_rank: rank,
            degree: d,
        });
        core_basis = next_core.basis_matrix().mul(&core_basis)?;
        current = restrict(&current, &next_core)?;
    }

    Ok(KatoCertificate {
        ambient_dim: n,
        m_basis: RatSubspace::row_space(&core_basis),
        n_basis: RatSubspace::span(n, nil_vectors)?,
        degree,
        iterations: trace.len(),
        trace,
    })
}

/// Classical Fitting splitting `(R(T^s), N(T^s))` at stabilization.
pub fn fitting_oracle(t: &RatMatrix) -> Result<(RatSubspace, RatSubspace)> {
    let lattice = iterate(t)?;
    let s = lattice.stab();
    Ok((
        lattice.range_of_power(s).clone(),
        lattice.kernel_of_power(s).clone(),
    ))
}

pub const CHECK_SHAPE: &str = "shape";
pub const CHECK_INVARIANCE: &str = "invariance";
pub const CHECK_DIRECT_SUM: &str = "direct-sum";
pub const CHECK_NILPOTENCY: &str = "nilpotency-degree";
pub const CHECK_DEGREE_IS_DIS: &str = "degree-equals-dis";
pub const CHECK_CORE_JUMP: &str = "core-jump";
pub const CHECK_INDEX: &str = "index-preserved";
pub const CHECK_ITERATIONS: &str = "iteration-count";
pub const CHECK_DIMENSION_BOUNDS: &str = "dimension-bounds";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

struct Checks(Vec<CheckResult>);

impl Checks {
    fn record(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckResult {
            name,
            passed,
            detail: detail.into(),
        });
    }

    fn skip(&mut self, name: &'static str, why: &str) {
        self.record(name, false, format!("not checked: {why}"));
    }
}

/// Re-derives every side condition of the decomposition from `t` alone.
pub fn verify_certificate(t: &RatMatrix, cert: &KatoCertificate) -> VerificationReport {
    let mut out = Checks(Vec::new());
    let n = cert.ambient_dim;
    let shape_ok = t.is_square()
        && t.rows() == n
        && cert.m_basis.ambient_dim() == n
        && cert.n_basis.ambient_dim() == n;
    out.record(
        CHECK_SHAPE,
        shape_ok,
        format!(
            "operator {}x{}, certificate ambient {n}",
            t.rows(),
            t.cols()
        ),
    );
    let rest = [
        CHECK_INVARIANCE,
        CHECK_DIRECT_SUM,
        CHECK_NILPOTENCY,
        CHECK_DEGREE_IS_DIS,
        CHECK_CORE_JUMP,
        CHECK_INDEX,
        CHECK_ITERATIONS,
        CHECK_DIMENSION_BOUNDS,
    ];
    if !shape_ok {
        for name in rest {
            out.skip(name, "shape mismatch");
        }
        return VerificationReport { checks: out.0 };
    }
    let (m, nil) = (&cert.m_basis, &cert.n_basis);

    let m_inv = m.is_invariant_under(t).unwrap_or(false);
    let n_inv = nil.is_invariant_under(t).unwrap_or(false);
    out.record(
        CHECK_INVARIANCE,
        m_inv && n_inv,
        format!("T(M) ⊆ M: {m_inv}, T(N) ⊆ N: {n_inv}"),
    );

    let meet = m.intersect(nil).map(|s| s.dim()).unwrap_or(usize::MAX);
    let direct = meet == 0 && m.dim() + nil.dim() == n;
    out.record(
        CHECK_DIRECT_SUM,
        direct,
        format!("dim M = {}, dim N = {}, dim M∩N = {meet}, n = {n}", m.dim(), nil.dim()),
    );

    let d = cert.degree;
    if n_inv {
        let on_n = restrict(t, nil).expect("invariance checked");
        let kills = on_n.pow(d).map(|p| p.is_zero()).unwrap_or(false);
        let exact = d == 0 || !on_n.pow(d - 1).map(|p| p.is_zero()).unwrap_or(true);
        out.record(
            CHECK_NILPOTENCY,
            kills && exact,
            format!("(T|N)^{d} = 0: {kills}, degree exactly {d}: {exact}"),
        );
    } else {
        out.skip(CHECK_NILPOTENCY, "N is not invariant");
    }

    let report = match analyze_matrix(t) {
        Ok(r) => r,
        Err(e) => {
            for name in [
                CHECK_DEGREE_IS_DIS,
                CHECK_CORE_JUMP,
                CHECK_INDEX,
                CHECK_ITERATIONS,
                CHECK_DIMENSION_BOUNDS,
            ] {
                out.skip(name, &e.to_string());
            }
            return VerificationReport { checks: out.0 };
        }
    };
    out.record(
        CHECK_DEGREE_IS_DIS,
        report.dis == ExtNat::Finite(d),
        format!("certificate d = {d}, dis(T) = {}", report.dis),
    );

    if m_inv {
        let core = restrict(t, m)
            .and_then(|c| analyze_matrix(&c))
            .expect("invariance checked");
        out.record(
            CHECK_CORE_JUMP,
            core.jump == Some(ExtNat::Finite(0)),
            format!(
                "jump(T|M) = {}",
                core.jump.map_or("undefined".into(), |j| j.to_string())
            ),
        );
        out.record(
            CHECK_INDEX,
            core.index.is_some() && core.index == report.index,
            format!(
                "ind(T) = {}, ind(T|M) = {}",
                report.index.map_or("undefined".into(), |i| i.to_string()),
                core.index.map_or("undefined".into(), |i| i.to_string())
            ),
        );
    } else {
        out.skip(CHECK_CORE_JUMP, "M is not invariant");
        out.skip(CHECK_INDEX, "M is not invariant");
    }

    let k = cert.iterations;
    out.record(
        CHECK_ITERATIONS,
        report.jump == Some(ExtNat::Finite(k)),
        format!(
            "k = {k}, jump(T) = {}",
            report.jump.map_or("undefined".into(), |j| j.to_string())
        ),
    );

    let dim_n = nil.dim();
    let bounds = match (k, report.m_t) {
        (0, _) => dim_n == 0,
        (k, ExtNat::Finite(m_t)) => d + (k - 1) * m_t <= dim_n && dim_n <= k * d,
        _ => false,
    };
    out.record(
        CHECK_DIMENSION_BOUNDS,
        bounds,
        format!("d = {d}, k = {k}, m_T = {}, dim N = {dim_n}", report.m_t),
    );

    VerificationReport { checks: out.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::unit_vector;

    fn e(n: usize, i: usize) -> RatVector {
        unit_vector(n, i)
    }

    fn ints(v: &[i64]) -> RatVector {
        v.iter().copied().map(Rat::from_int).collect()
    }

    fn j2_plus_2() -> RatMatrix {
        RatMatrix::block_diag(&[
            RatMatrix::jordan_block(2),
            RatMatrix::from_ints(&[&[2]]),
        ])
    }

    fn span(n: usize, v: Vec<RatVector>) -> RatSubspace {
        RatSubspace::span(n, v).unwrap()
    }

    #[test]
    fn seed_examples() {
        assert_eq!(pick_cascade_seed(&RatMatrix::jordan_block(3), 3).unwrap(), e(3, 2));
        assert_eq!(pick_cascade_seed(&RatMatrix::zeros(2, 2), 1).unwrap(), e(2, 0));
        assert_eq!(pick_cascade_seed(&j2_plus_2(), 2).unwrap(), e(3, 1));
    }

    #[test]
    fn seed_errors() {
        assert_eq!(
            pick_cascade_seed(&RatMatrix::jordan_block(3), 0),
            Err(Error::ZeroDegree)
        );
        // J3 with a wrong degree: N(T^2) = N(T) + span{e2}, R(T) ⊇ it
        assert!(matches!(
            pick_cascade_seed(&RatMatrix::jordan_block(3), 2),
            Err(Error::InvalidSeed(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let j3 = RatMatrix::jordan_block(3);
        let c = Cascade::new(&j3, e(3, 2), 3).unwrap();
        let a = adjoint_cascade(&j3, &c).unwrap();
        assert_eq!(a.functional, ints(&[1, 0, 0]));
        assert!(delta_pattern_holds(&c, &a));

        let z = RatMatrix::zeros(2, 2);
        let c = Cascade::new(&z, e(2, 0), 1).unwrap();
        let a = adjoint_cascade(&z, &c).unwrap();
        assert_eq!(a.functional, ints(&[1, 0]));
    }

    #[test]
    fn cascade_rejects_bad_seed() {
        let j3 = RatMatrix::jordan_block(3);
        assert!(Cascade::new(&j3, e(3, 1), 3).is_err());
        assert!(Cascade::new(&j3, e(3, 2), 2).is_err());
    }

    #[test]
    fn projection_examples() {
        let j3 = RatMatrix::jordan_block(3);
        let c = Cascade::new(&j3, e(3, 2), 3).unwrap();
        let a = adjoint_cascade(&j3, &c).unwrap();
        assert_eq!(cascade_projection(&c, &a), RatMatrix::identity(3));

        let z = RatMatrix::zeros(2, 2);
        let c = Cascade::new(&z, e(2, 0), 1).unwrap();
        let a = adjoint_cascade(&z, &c).unwrap();
        assert_eq!(
            cascade_projection(&c, &a),
            RatMatrix::diag(&[Rat::one(), Rat::zero()])
        );
    }

    #[test]
    fn projection_identities_on_conjugated_block() {
        // J2 ⊕ J1 ⊕ [3], conjugated by a unimodular shear
        let d = RatMatrix::block_diag(&[
            RatMatrix::jordan_block(2),
            RatMatrix::zeros(1, 1),
            RatMatrix::from_ints(&[&[3]]),
        ]);
        let u = RatMatrix::from_ints(&[&[1, 2, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, -1], &[0, 0, 0, 1]]);
        let u_inv =
            RatMatrix::from_ints(&[&[1, -2, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]);
        assert_eq!(u.mul(&u_inv).unwrap(), RatMatrix::identity(4));
        let t = u.mul(&d).unwrap().mul(&u_inv).unwrap();
        let y = pick_cascade_seed(&t, 2).unwrap();
        let c = Cascade::new(&t, y, 2).unwrap();
        assert!(cascade_independent_mod_range(&t, &c).unwrap());
        let a = adjoint_cascade(&t, &c).unwrap();
        assert!(delta_pattern_holds(&c, &a));
        let p = cascade_projection(&c, &a);
        assert_eq!(p.mul(&p).unwrap(), p);
        assert_eq!(p.mul(&t).unwrap(), t.mul(&p).unwrap());
        assert_eq!(p.rank(), 2);
        assert_eq!(image(&p), c.span().unwrap());
        // N(P) = {x : f T^i x = 0 for i < d}
        let annihilated = kernel(&RatMatrix::from_rows(a.covectors.clone()).unwrap());
        assert_eq!(kernel(&p), annihilated);
    }

    #[test]
    fn decompose_examples() {
        let inv = RatMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let c = kato_decompose(&inv).unwrap();
        assert!(c.m_basis.is_full() && c.n_basis.is_zero());
        assert_eq!((c.degree, c.iterations), (0, 0));

        let c = kato_decompose(&j2_plus_2()).unwrap();
        assert_eq!(c.m_basis, span(3, vec![e(3, 2)]));
        assert_eq!(c.n_basis, span(3, vec![e(3, 0), e(3, 1)]));
        assert_eq!((c.degree, c.iterations), (2, 1));

        let c = kato_decompose(&RatMatrix::zeros(2, 2)).unwrap();
        assert!(c.m_basis.is_zero() && c.n_basis.is_full());
        assert_eq!((c.degree, c.iterations), (1, 2));
        assert_eq!(c.trace.iter().map(|r| r.degree).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn fitting_examples() {
        let (m, n) = fitting_oracle(&RatMatrix::jordan_block(3)).unwrap();
        assert!(m.is_zero() && n.is_full());
        let (m, n) = fitting_oracle(&j2_plus_2()).unwrap();
        assert_eq!(m, span(3, vec![e(3, 2)]));
        assert_eq!(n, span(3, vec![e(3, 0), e(3, 1)]));
        let (m, n) = fitting_oracle(&RatMatrix::identity(2)).unwrap();
        assert!(m.is_full() && n.is_zero());
    }

    #[test]
    fn mixed_blocks_peel_largest_first() {
        let t = RatMatrix::block_diag(&[
            RatMatrix::jordan_block(1),
            RatMatrix::jordan_block(3),
            RatMatrix::jordan_block(2),
            RatMatrix::from_ints(&[&[-1, 1], &[0, -1]]),
        ]);
        let c = kato_decompose(&t).unwrap();
        let degrees: Vec<usize> = c.trace.iter().map(|r| r.degree).collect();
        assert_eq!(degrees, vec![3, 2, 1]);
        assert_eq!(c.n_basis.dim(), 6);
        let (m, n) = fitting_oracle(&t).unwrap();
        assert_eq!((c.m_basis.clone(), c.n_basis.clone()), (m, n));
        assert!(verify_certificate(&t, &c).all_passed());
    }

    #[test]
    fn verifier_catches_tampering() {
        let t = j2_plus_2();
        let good = kato_decompose(&t).unwrap();
        assert!(verify_certificate(&t, &good).all_passed());

        let mut dropped = good.clone();
        let rows = dropped.n_basis.basis()[1..].to_vec();
        dropped.n_basis = span(3, rows);
        assert_eq!(
            verify_certificate(&t, &dropped).passed(CHECK_DIRECT_SUM),
            Some(false)
        );

        let mut inflated = good.clone();
        inflated.degree += 1;
        assert_eq!(
            verify_certificate(&t, &inflated).passed(CHECK_NILPOTENCY),
            Some(false)
        );

        let wrong = RatMatrix::jordan_block(3);
        assert_eq!(
            verify_certificate(&wrong, &good).passed(CHECK_INVARIANCE),
            Some(false)
        );

        let shape = verify_certificate(&RatMatrix::identity(2), &good);
        assert_eq!(shape.failed()[0], CHECK_SHAPE);
        assert!(!shape.all_passed());
    }
}
