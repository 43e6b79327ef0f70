//! Seeded property suite run by `opkit props`.
//!
//! Trial `t` under seed `s` draws a matrix from stream `derive_seed(s, t)` and
//! two atom trees (one unrestricted, one finite-only) from streams derived from
//! that. Trials run in parallel; results are gathered in trial order, so the
//! summary depends only on `(seed, trials, max_dim)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::atoms::{symbolic_invariants, symbolic_kato, symbolic_sequences, AtomTree, SymbolicReport};
use crate::chains::{alpha_seq, beta_seq, dual, iterate, snm_codim, IterLattice};
use crate::gen::{derive_seed, gen_atom_tree, gen_matrix_record, GenProfile, MatrixConstruction};
use crate::invariants::{predicted_power_dims, ExtNat, InvariantReport};
use crate::kato::{fitting_oracle, kato_decompose, verify_certificate, KatoCertificate};
use crate::qlinalg::{image, kernel, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    NotApplicable,
}

pub type Outcome = Result<Verdict, String>;

/// Everything a matrix property may look at, computed once per trial.
pub struct MatrixCase {
    pub construction: MatrixConstruction,
    pub lattice: IterLattice,
    pub report: InvariantReport,
    pub certificate: Result<KatoCertificate, String>,
}

impl MatrixCase {
    pub fn new(construction: MatrixConstruction) -> crate::Result<Self> {
        let lattice = iterate(&construction.matrix)?;
        let report = InvariantReport::from_lattice(&lattice)?;
        let certificate = kato_decompose(&construction.matrix).map_err(|e| e.to_string());
        Ok(MatrixCase {
            construction,
            lattice,
            report,
            certificate,
        })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.construction.matrix
    }

    fn alpha(&self, n: usize) -> usize {
        self.report.alpha.get(n).finite().expect("finite matrix")
    }

    fn beta(&self, n: usize) -> usize {
        self.report.beta.get(n).finite().expect("finite matrix")
    }

    /// `0..=stab+2`, the window every sequence identity is checked on.
    fn window(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.lattice.stab() + 2
    }
}

pub struct TreeCase {
    pub tree: AtomTree,
    pub report: SymbolicReport,
    pub finite_tree: AtomTree,
}

impl TreeCase {
    pub fn new(tree: AtomTree, finite_tree: AtomTree) -> crate::Result<Self> {
        let report = symbolic_invariants(&tree)?;
        Ok(TreeCase {
            tree,
            report,
            finite_tree,
        })
    }
}

#[derive(Clone, Copy)]
pub enum Check {
    Matrix(fn(&MatrixCase) -> Outcome),
    Tree(fn(&TreeCase) -> Outcome),
}

#[derive(Clone, Copy)]
pub struct Property {
    pub name: &'static str,
    pub check: Check,
}

impl Property {
    pub const fn matrix(name: &'static str, f: fn(&MatrixCase) -> Outcome) -> Self {
        Property {
            name,
            check: Check::Matrix(f),
        }
    }

    pub const fn tree(name: &'static str, f: fn(&TreeCase) -> Outcome) -> Self {
        Property {
            name,
            check: Check::Tree(f),
        }
    }

    pub fn domain(&self) -> &'static str {
        match self.check {
            Check::Matrix(_) => "matrix",
            Check::Tree(_) => "tree",
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cert(c: &MatrixCase) -> Result<&KatoCertificate, String> {
    c.certificate.as_ref().map_err(|e| format!("kato_decompose failed: {e}"))
}

fn kato_matches_fitting(c: &MatrixCase) -> Outcome {
    let cert = cert(c)?;
    let (m, n) = fitting_oracle(c.matrix()).map_err(err)?;
    ensure!(cert.m_basis == m, "M differs: kato {:?}, fitting {:?}", cert.m_basis.basis(), m.basis());
    ensure!(cert.n_basis == n, "N differs: kato {:?}, fitting {:?}", cert.n_basis.basis(), n.basis());
    Ok(Verdict::Pass)
}

fn kato_side_conditions(c: &MatrixCase) -> Outcome {
    let v = verify_certificate(c.matrix(), cert(c)?);
    ensure!(v.all_passed(), "failed checks: {:?}", v.failed());
    Ok(Verdict::Pass)
}

fn kato_trace(c: &MatrixCase) -> Outcome {
    let cert = cert(c)?;
    let degrees: Vec<usize> = cert.trace.iter().map(|r| r.degree).collect();
    ensure!(degrees.windows(2).all(|w| w[0] >= w[1]), "d_i increases: {degrees:?}");
    ensure!(
        degrees.first().copied().unwrap_or(0) == cert.degree,
        "d_0 = {:?}, d = {}",
        degrees.first(),
        cert.degree
    );
    let total: usize = degrees.iter().sum();
    ensure!(total == cert.n_basis.dim(), "Σ d_i = {total}, dim N = {}", cert.n_basis.dim());
    ensure!(
        cert.trace.iter().all(|r| r.projection_rank == r.degree),
        "projection rank differs from d_i"
    );
    Ok(Verdict::Pass)
}

fn construction_record(c: &MatrixCase) -> Outcome {
    let k = &c.construction;
    let r = &c.report;
    ensure!(r.dis == ExtNat::Finite(k.expected_dis()), "dis = {}, largest block {}", r.dis, k.expected_dis());
    ensure!(
        r.jump == Some(ExtNat::Finite(k.expected_jump())),
        "jump = {:?}, nilpotent blocks {}",
        r.jump,
        k.expected_jump()
    );
    ensure!(r.flags.nilpotent == Some(k.is_nilpotent()), "nilpotent flag disagrees with blocks");
    Ok(Verdict::Pass)
}

fn non_invertible(c: &MatrixCase) -> bool {
    c.alpha(0) > 0
}

fn dis_equals_v(c: &MatrixCase) -> Outcome {
    if !non_invertible(c) {
        return Ok(Verdict::NotApplicable);
    }
    ensure!(
        c.report.dis == c.report.v,
        "dis = {}, v = {} (nilpotent blocks {:?})",
        c.report.dis,
        c.report.v,
        c.construction.nilpotent_sizes()
    );
    Ok(Verdict::Pass)
}

fn dis_v_block_sizes(c: &MatrixCase) -> Outcome {
    if !non_invertible(c) {
        return Ok(Verdict::NotApplicable);
    }
    let sizes = c.construction.nilpotent_sizes();
    let (lo, hi) = (sizes.iter().min(), sizes.iter().max());
    ensure!(c.report.v == ExtNat::Finite(*lo.unwrap()), "v = {}, smallest block {lo:?}", c.report.v);
    ensure!(c.report.dis == ExtNat::Finite(*hi.unwrap()), "dis = {}, largest block {hi:?}", c.report.dis);
    ensure!((c.report.dis == c.report.v) == (lo == hi), "dis = v does not track equal block sizes");
    Ok(Verdict::Pass)
}

fn nilpotent_degree(c: &MatrixCase) -> Outcome {
    if c.report.flags.nilpotent != Some(true) {
        return Ok(Verdict::NotApplicable);
    }
    let mut p = 0;
    let mut power = RatMatrix::identity(c.matrix().rows());
    while !power.is_zero() {
        power = power.mul(c.matrix()).map_err(err)?;
        p += 1;
    }
    ensure!(c.report.dis == ExtNat::Finite(p), "dis = {}, nilpotency degree {p}", c.report.dis);
    Ok(Verdict::Pass)
}

fn alpha_k_recurrence(c: &MatrixCase) -> Outcome {
    // k_n from the range-side quotient (R(T) + N(T^{n+1})) / (R(T) + N(T^n))
    let t = c.matrix();
    let range = image(t);
    let mut prev = range.sum(&kernel(&t.pow(0).map_err(err)?)).map_err(err)?.dim();
    for n in c.window() {
        let next = range.sum(&kernel(&t.pow(n + 1).map_err(err)?)).map_err(err)?.dim();
        let k_n = next - prev;
        ensure!(
            c.alpha(n) == c.alpha(n + 1) + k_n,
            "n = {n}: α_n = {}, α_(n+1) = {}, k_n = {k_n}",
            c.alpha(n),
            c.alpha(n + 1)
        );
        prev = next;
    }
    Ok(Verdict::Pass)
}

fn power_dims(t: &RatMatrix, n: usize) -> Result<(usize, usize), String> {
    let p = t.pow(n).map_err(err)?;
    let rank = p.rank();
    Ok((p.rows() - rank, p.rows() - rank))
}

fn power_dims_closed_form(c: &MatrixCase) -> Outcome {
    for n in c.window().skip(1) {
        let (a, b) = predicted_power_dims(&c.report, n).map_err(err)?;
        let (na, rb) = power_dims(c.matrix(), n)?;
        ensure!(
            a == ExtNat::Finite(na) && b == ExtNat::Finite(rb),
            "n = {n}: predicted (α, β)(T^n) = ({a}, {b}), actual ({na}, {rb})"
        );
    }
    Ok(Verdict::Pass)
}

fn power_dims_partial_sums(c: &MatrixCase) -> Outcome {
    for n in c.window() {
        let sa: usize = (0..n).map(|i| c.alpha(i)).sum();
        let sb: usize = (0..n).map(|i| c.beta(i)).sum();
        let (na, rb) = power_dims(c.matrix(), n)?;
        ensure!(na == sa && rb == sb, "n = {n}: (α, β)(T^n) = ({na}, {rb}), partial sums ({sa}, {sb})");
    }
    Ok(Verdict::Pass)
}

fn snm_codimension(c: &MatrixCase) -> Outcome {
    for n in c.window() {
        for m in 1..=3 {
            let got = snm_codim(c.matrix(), n, m).map_err(err)?;
            let want: usize = (n..n + m).map(|i| c.beta(i)).sum();
            ensure!(got == want, "n = {n}, m = {m}: β(S) = {got}, Σβ_i = {want}");
        }
    }
    Ok(Verdict::Pass)
}

fn duality(c: &MatrixCase) -> Outcome {
    let l = iterate(&dual(c.matrix())).map_err(err)?;
    let r = InvariantReport::from_lattice(&l).map_err(err)?;
    ensure!(r.dis == c.report.dis, "dis(T) = {}, dis(Tᵗ) = {}", c.report.dis, r.dis);
    ensure!(r.alpha == c.report.beta, "α(Tᵗ) ≠ β(T)");
    ensure!(r.beta == c.report.alpha, "β(Tᵗ) ≠ α(T)");
    Ok(Verdict::Pass)
}

fn semi_regular_criterion(c: &MatrixCase) -> Outcome {
    let d = c.report.dis.finite().expect("finite matrix");
    let inside = c
        .lattice
        .range_of_power(d)
        .contains(c.lattice.null_space())
        .map_err(err)?;
    ensure!(
        c.report.flags.semi_regular == inside,
        "semi_regular = {}, N(T) ⊆ R(T^d) = {inside}",
        c.report.flags.semi_regular
    );
    Ok(Verdict::Pass)
}

fn index_power_law(c: &TreeCase) -> Outcome {
    let Some(ind) = c.report.index else {
        return Ok(Verdict::NotApplicable);
    };
    for n in 1..=4usize {
        let r = symbolic_invariants(&c.tree.clone().power(n)).map_err(err)?;
        let want = ind.scale(n as i64);
        ensure!(r.index == Some(want), "n = {n}: ind(T^n) = {:?}, n·ind(T) = {want}", r.index);
    }
    Ok(Verdict::Pass)
}

fn fredholm_flag_equivalences(c: &TreeCase) -> Outcome {
    let f = c.report.flags;
    let a = f.upper_semi_fredholm && f.lower_semi_b_fredholm;
    let b = f.lower_semi_fredholm && f.upper_semi_b_fredholm;
    ensure!(f.fredholm == a && a == b, "fredholm = {}, sF+ ∧ sBF- = {a}, sF- ∧ sBF+ = {b}", f.fredholm);
    Ok(Verdict::Pass)
}

fn jump_zero_iff_dis_is_mt(c: &TreeCase) -> Outcome {
    let Some(j) = c.report.jump else {
        return Ok(Verdict::NotApplicable);
    };
    let lhs = j == ExtNat::ZERO;
    let rhs = c.report.dis == c.report.m_t;
    ensure!(lhs == rhs, "jump = {j}, dis = {}, m_T = {}", c.report.dis, c.report.m_t);
    Ok(Verdict::Pass)
}

fn essential_degrees_agree(c: &TreeCase) -> Outcome {
    let r = &c.report;
    if !(r.a_e.is_finite() && r.d_e.is_finite()) {
        return Ok(Verdict::NotApplicable);
    }
    ensure!(r.m_t == r.a_e && r.a_e == r.d_e, "m_T = {}, a_e = {}, d_e = {}", r.m_t, r.a_e, r.d_e);
    Ok(Verdict::Pass)
}

fn kato_preserves_index(c: &TreeCase) -> Outcome {
    if !c.report.flags.semi_b_fredholm {
        return Ok(Verdict::NotApplicable);
    }
    let k = symbolic_kato(&c.tree).map_err(err)?;
    ensure!(k.index_t == k.index_m, "ind(T) = {:?}, ind(T_M) = {:?}", k.index_t, k.index_m);
    ensure!(ExtNat::Finite(k.degree) == c.report.dis, "d = {}, dis = {}", k.degree, c.report.dis);
    Ok(Verdict::Pass)
}

fn finite_symbolic_consistency(c: &TreeCase) -> Outcome {
    let block = c
        .finite_tree
        .assemble_finite()
        .ok_or("finite-only tree did not assemble")?;
    let l = iterate(&block).map_err(err)?;
    let (a, b) = symbolic_sequences(&c.finite_tree).map_err(err)?;
    let (ca, cb) = (alpha_seq(&l), beta_seq(&l));
    let upto = l.stab() + 2;
    for n in 0..=upto {
        ensure!(*a.get(n) == ExtNat::Finite(*ca.get(n)), "α_{n}: symbolic {}, chains {}", a.get(n), ca.get(n));
        ensure!(*b.get(n) == ExtNat::Finite(*cb.get(n)), "β_{n}: symbolic {}, chains {}", b.get(n), cb.get(n));
    }
    Ok(Verdict::Pass)
}

/// Properties whose statement is known not to hold for every finite matrix;
/// they are registered anyway and expected to report failures.
pub const KNOWN_COUNTEREXAMPLES: [&str; 2] = ["dis-equals-v", "power-dims-closed-form"];

pub fn registry() -> Vec<Property> {
    vec![
        Property::matrix("kato-matches-fitting", kato_matches_fitting),
        Property::matrix("kato-side-conditions", kato_side_conditions),
        Property::matrix("kato-trace", kato_trace),
        Property::matrix("construction-record", construction_record),
        Property::matrix("dis-equals-v", dis_equals_v),
        Property::matrix("dis-v-block-sizes", dis_v_block_sizes),
        Property::matrix("nilpotent-degree", nilpotent_degree),
        Property::matrix("alpha-k-recurrence", alpha_k_recurrence),
        Property::matrix("power-dims-closed-form", power_dims_closed_form),
        Property::matrix("power-dims-partial-sums", power_dims_partial_sums),
        Property::matrix("snm-codimension", snm_codimension),
        Property::matrix("duality", duality),
        Property::matrix("semi-regular-criterion", semi_regular_criterion),
        Property::tree("index-power-law", index_power_law),
        Property::tree("fredholm-flag-equivalences", fredholm_flag_equivalences),
        Property::tree("jump-zero-iff-dis-is-mt", jump_zero_iff_dis_is_mt),
        Property::tree("essential-degrees-agree", essential_degrees_agree),
        Property::tree("kato-preserves-index", kato_preserves_index),
        Property::tree("finite-symbolic-consistency", finite_symbolic_consistency),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_dim: usize,
}

impl SuiteConfig {
    pub fn matrix_profile(&self, trial: u64) -> GenProfile {
        GenProfile::new(derive_seed(self.seed, trial), self.max_dim)
    }

    pub fn tree_profile(&self, trial: u64) -> GenProfile {
        GenProfile::new(derive_seed(derive_seed(self.seed, trial), 1), self.max_dim)
    }

    pub fn finite_tree_profile(&self, trial: u64) -> GenProfile {
        GenProfile {
            max_infinite_atoms: 0,
            ..GenProfile::new(derive_seed(derive_seed(self.seed, trial), 2), self.max_dim)
        }
    }

    pub fn reproduce_command(&self, trial: u64) -> String {
        format!(
            "opkit props --seed {} --trials {} --max-dim {}",
            self.seed,
            trial + 1,
            self.max_dim
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub instance_seed: u64,
    pub message: String,
    pub reproduce: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertySummary {
    pub name: &'static str,
    pub domain: &'static str,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub not_applicable: u64,
    pub first_failure: Option<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: u64,
    pub max_dim: usize,
    pub all_passed: bool,
    pub warnings: Vec<String>,
    pub properties: Vec<PropertySummary>,
}

impl SuiteSummary {
    pub fn property(&self, name: &str) -> Option<&PropertySummary> {
        self.properties.iter().find(|p| p.name == name)
    }
}

fn run_trial(cfg: &SuiteConfig, props: &[Property], trial: u64) -> Vec<Outcome> {
    let matrix_case = gen_matrix_record(&cfg.matrix_profile(trial))
        .and_then(MatrixCase::new)
        .map_err(|e| format!("building matrix instance: {e}"));
    let tree_case = gen_atom_tree(&cfg.tree_profile(trial))
        .and_then(|t| Ok((t, gen_atom_tree(&cfg.finite_tree_profile(trial))?)))
        .and_then(|(t, f)| TreeCase::new(t, f))
        .map_err(|e| format!("building tree instance: {e}"));
    props
        .iter()
        .map(|p| match p.check {
            Check::Matrix(f) => matrix_case.as_ref().map_err(Clone::clone).and_then(f),
            Check::Tree(f) => tree_case.as_ref().map_err(Clone::clone).and_then(f),
        })
        .collect()
}

/// Runs `props` over `cfg.trials` trials.
pub fn run_suite(cfg: &SuiteConfig, props: &[Property]) -> crate::Result<SuiteSummary> {
    cfg.matrix_profile(0).validate()?;
    let outcomes: Vec<Vec<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, props, t))
        .collect();
    let mut summaries: Vec<PropertySummary> = props
        .iter()
        .map(|p| PropertySummary {
            name: p.name,
            domain: p.domain(),
            checked: 0,
            passed: 0,
            failed: 0,
            not_applicable: 0,
            first_failure: None,
        })
        .collect();
    for (trial, row) in outcomes.into_iter().enumerate() {
        let trial = trial as u64;
        for (s, outcome) in summaries.iter_mut().zip(row) {
            match outcome {
                Ok(Verdict::NotApplicable) => s.not_applicable += 1,
                Ok(Verdict::Pass) => {
                    s.checked += 1;
                    s.passed += 1;
                }
                Err(message) => {
                    s.checked += 1;
                    s.failed += 1;
                    if s.first_failure.is_none() {
                        s.first_failure = Some(Failure {
                            trial,
                            instance_seed: derive_seed(cfg.seed, trial),
                            message,
                            reproduce: cfg.reproduce_command(trial),
                        });
                    }
                }
            }
        }
    }
    let mut warnings = Vec::new();
    if cfg.trials == 0 {
        warnings.push("0 trials: every property passes vacuously".to_string());
    }
    Ok(SuiteSummary {
        seed: cfg.seed,
        trials: cfg.trials,
        max_dim: cfg.max_dim,
        all_passed: summaries.iter().all(|s| s.failed == 0),
        warnings,
        properties: summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: u64) -> SuiteConfig {
        SuiteConfig {
            seed: 42,
            trials,
            max_dim: 5,
        }
    }

    fn always_fails(_: &MatrixCase) -> Outcome {
        Err("fixture failure".into())
    }

    #[test]
    fn zero_trials_is_vacuous_with_warning() {
        let s = run_suite(&cfg(0), &registry()).unwrap();
        assert!(s.all_passed);
        assert_eq!(s.warnings.len(), 1);
        assert!(s.warnings[0].contains("0 trials"));
    }

    #[test]
    fn broken_property_reports_reproduction() {
        let mut props = registry();
        props.push(Property::matrix("fixture-broken", always_fails));
        let s = run_suite(&cfg(3), &props).unwrap();
        assert!(!s.all_passed);
        let p = s.property("fixture-broken").unwrap();
        assert_eq!((p.checked, p.failed), (3, 3));
        let f = p.first_failure.as_ref().unwrap();
        assert_eq!(f.trial, 0);
        assert_eq!(f.reproduce, "opkit props --seed 42 --trials 1 --max-dim 5");
    }

    #[test]
    fn summary_is_deterministic() {
        let a = serde_json::to_string(&run_suite(&cfg(12), &registry()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(&cfg(12), &registry()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn only_known_counterexamples_fail() {
        let s = run_suite(&cfg(40), &registry()).unwrap();
        for p in &s.properties {
            if !KNOWN_COUNTEREXAMPLES.contains(&p.name) {
                assert_eq!(p.failed, 0, "{}: {:?}", p.name, p.first_failure);
            }
            assert!(p.checked > 0, "{} never applied", p.name);
        }
    }
}
