//! The subequation catalog: weak (closed) and strict (interior) membership,
//! Dirichlet duality, and randomized audits of positivity and orbit hulls.
//!
//! Each catalog entry is cut out by a continuous, degenerate-elliptic defining
//! value `v(A)`; `F = {v ≥ 0}` and `Int F = {v > 0}`. The two test fixtures at
//! the end of [`Kind`] are deliberately not of that form.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::functions::{GFunction, IncreasingFn};
use crate::linalg::SymMatrix;
use crate::math;
use crate::numerics::bisect;
use crate::random::{self, SeededRng};

/// Catalog of subequations `F ⊂ Sym(ℝⁿ)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "kebab-case")
)]
pub enum Kind {
    /// `λ_min(A) ≥ 0`
    Pos,
    /// `λ_max(A) ≥ 0`
    Subaffine,
    /// `λ_min(A) + α λ_max(A) ≥ 0`
    MinMaxCone { alpha: f64 },
    /// `λ tr A⁺ + Λ tr A⁻ ≥ 0` with `0 < λ ≤ Λ`
    Pucci { lambda: f64, big_lambda: f64 },
    /// `λ_min(A + δ (tr A) I) ≥ 0`
    PDelta { delta: f64 },
    /// `σ_ℓ(ψ(λ₁), …, ψ(λₙ)) ≥ 0` for `ℓ = 1..k`, `ψ(t) = sign(t)|t|^exponent`
    SigmaPsiK { exponent: f64, k: usize },
    /// `λ_max ≥ 0` and `λ_min + f(λ_max) ≥ 0`
    MinMaxF { f: IncreasingFn },
    /// `λ₂ ≥ 0` and `λ_min + f(λ₂) ≥ 0`
    MinTwoF { f: IncreasingFn },
    /// `tr A ≥ 0` and `λ_min(A) ≥ g(tr A)`
    Mg { g: GFunction },
    /// Dirichlet dual `−(∼ Int F)`.
    Dual { inner: Box<SubequationSpec> },
    /// `tr A ≥ c`
    HalfSpace { c: f64 },
    /// Fixture: `A[index][index] ≥ 0`, not orthogonally invariant.
    DiagonalEntry { index: usize },
    /// Fixture: `|tr A| ≤ tol`. Violates positivity.
    TraceHyperplane { tol: f64 },
}

/// A catalog entry together with its dimension and membership slack.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubequationSpec {
    kind: Kind,
    dim: usize,
    slack: f64,
}

impl SubequationSpec {
    pub fn new(kind: Kind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid!("dimension must be at least 1"));
        }
        validate_kind(&kind, dim)?;
        Ok(Self { kind, dim, slack: 0.0 })
    }

    pub fn pos(n: usize) -> Self {
        Self::new(Kind::Pos, n).expect("valid")
    }

    pub fn subaffine(n: usize) -> Self {
        Self::new(Kind::Subaffine, n).expect("valid")
    }

    pub fn minmax_cone(alpha: f64, n: usize) -> Result<Self> {
        Self::new(Kind::MinMaxCone { alpha }, n)
    }

    pub fn pucci(lambda: f64, big_lambda: f64, n: usize) -> Result<Self> {
        Self::new(Kind::Pucci { lambda, big_lambda }, n)
    }

    pub fn p_delta(delta: f64, n: usize) -> Result<Self> {
        Self::new(Kind::PDelta { delta }, n)
    }

    pub fn sigma_psi_k(exponent: f64, k: usize, n: usize) -> Result<Self> {
        Self::new(Kind::SigmaPsiK { exponent, k }, n)
    }

    pub fn minmax_f(f: IncreasingFn, n: usize) -> Result<Self> {
        Self::new(Kind::MinMaxF { f }, n)
    }

    pub fn min_two_f(f: IncreasingFn, n: usize) -> Result<Self> {
        Self::new(Kind::MinTwoF { f }, n)
    }

    pub fn mg(g: GFunction, n: usize) -> Result<Self> {
        Self::new(Kind::Mg { g }, n)
    }

    pub fn half_space(c: f64, n: usize) -> Result<Self> {
        Self::new(Kind::HalfSpace { c }, n)
    }

    pub fn diagonal_entry(index: usize, n: usize) -> Result<Self> {
        Self::new(Kind::DiagonalEntry { index }, n)
    }

    pub fn trace_hyperplane(n: usize) -> Self {
        Self::new(Kind::TraceHyperplane { tol: 1e-9 }, n).expect("valid")
    }

    /// The Dirichlet dual, as a new catalog entry wrapping `self`.
    pub fn dual(&self) -> Self {
        Self { kind: Kind::Dual { inner: Box::new(self.clone()) }, dim: self.dim, slack: self.slack }
    }

    /// Membership slack `ε`: weak tests `v ≥ −ε`, strict tests `v > ε`.
    pub fn with_slack(mut self, eps: f64) -> Self {
        self.slack = eps.abs();
        if let Kind::Dual { inner } = &mut self.kind {
            inner.slack = eps.abs();
        }
        self
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn id(&self) -> String {
        let k = match &self.kind {
            Kind::Pos => "pos".into(),
            Kind::Subaffine => "subaffine".into(),
            Kind::MinMaxCone { alpha } => format!("minmax-cone(alpha={alpha})"),
            Kind::Pucci { lambda, big_lambda } => format!("pucci(lambda={lambda},big_lambda={big_lambda})"),
            Kind::PDelta { delta } => format!("p-delta(delta={delta})"),
            Kind::SigmaPsiK { exponent, k } => format!("sigma-psi-k(a={exponent},k={k})"),
            Kind::MinMaxF { f } => format!("minmax-f({})", f.label()),
            Kind::MinTwoF { f } => format!("min-two-f({})", f.label()),
            Kind::Mg { g } => format!("mg({})", g.label()),
            Kind::Dual { inner } => format!("dual[{}]", inner.id()),
            Kind::HalfSpace { c } => format!("halfspace(c={c})"),
            Kind::DiagonalEntry { index } => format!("diagonal-entry(index={index})"),
            Kind::TraceHyperplane { tol } => format!("trace-hyperplane(tol={tol})"),
        };
        format!("{k};n={}", self.dim)
    }

    /// Whether membership is invariant under `A ↦ gᵀAg`, `g ∈ O(n)`.
    pub fn is_orthogonally_invariant(&self) -> bool {
        match &self.kind {
            Kind::DiagonalEntry { .. } => self.dim == 1,
            Kind::Dual { inner } => inner.is_orthogonally_invariant(),
            _ => true,
        }
    }

    /// Whether the entry is a cone by construction (audited separately).
    pub fn is_cone(&self) -> bool {
        match &self.kind {
            Kind::Pos
            | Kind::Subaffine
            | Kind::MinMaxCone { .. }
            | Kind::Pucci { .. }
            | Kind::PDelta { .. }
            | Kind::SigmaPsiK { .. }
            | Kind::DiagonalEntry { .. } => true,
            Kind::MinMaxF { f } | Kind::MinTwoF { f } => {
                matches!(f, IncreasingFn::Zero | IncreasingFn::Linear { .. })
            }
            Kind::HalfSpace { c } => *c == 0.0,
            Kind::Dual { inner } => inner.is_cone(),
            Kind::Mg { .. } | Kind::TraceHyperplane { .. } => false,
        }
    }

    /// Characteristic function on `λ ≥ 0` when known in closed form
    /// (upper and lower agree for these invariant entries).
    pub fn closed_form_characteristic(&self) -> Option<IncreasingFn> {
        let n = self.dim as f64;
        match &self.kind {
            Kind::Pos => Some(IncreasingFn::Zero),
            Kind::MinMaxCone { alpha } => Some(IncreasingFn::Linear { slope: *alpha }),
            Kind::Pucci { lambda, big_lambda } => Some(IncreasingFn::Linear { slope: lambda * (n - 1.0) / big_lambda }),
            Kind::PDelta { delta } => Some(IncreasingFn::Linear { slope: delta * (n - 1.0) / (1.0 + delta) }),
            Kind::SigmaPsiK { exponent, k } => {
                // ψ⁻¹((n/k − 1) ψ(λ)) with ψ = sign·|t|^a
                let c = math::powf(n / *k as f64 - 1.0, 1.0 / exponent);
                Some(IncreasingFn::Linear { slope: c })
            }
            Kind::MinMaxF { f } | Kind::MinTwoF { f } => Some(f.clone()),
            Kind::Dual { inner } => match &inner.kind {
                Kind::Mg { g } => Some(IncreasingFn::MgDual { g: g.clone(), dim: self.dim }),
                Kind::MinMaxCone { alpha } => Some(IncreasingFn::Linear { slope: 1.0 / alpha }),
                _ => None,
            },
            _ => None,
        }
    }

    /// `v(A)`; `None` for the dual, which has no defining value of its own.
    fn defining_value(&self, a: &SymMatrix) -> Result<Option<f64>> {
        let v = match &self.kind {
            Kind::Dual { .. } => return Ok(None),
            Kind::HalfSpace { c } => a.trace() - c,
            Kind::DiagonalEntry { index } => a.get(*index, *index),
            Kind::TraceHyperplane { tol } => tol - a.trace().abs(),
            kind => {
                let ev = a.eigenvalues()?;
                let (lmin, lmax) = (ev[0], ev[ev.len() - 1]);
                match kind {
                    Kind::Pos => lmin,
                    Kind::Subaffine => lmax,
                    Kind::MinMaxCone { alpha } => lmin + alpha * lmax,
                    Kind::Pucci { lambda, big_lambda } => {
                        ev.iter().map(|&x| if x > 0.0 { lambda * x } else { big_lambda * x }).sum()
                    }
                    Kind::PDelta { delta } => lmin + delta * a.trace(),
                    Kind::SigmaPsiK { exponent, k } => {
                        let psi: Vec<f64> = ev.iter().map(|&x| math::odd_pow(x, *exponent)).collect();
                        elementary_symmetric(&psi, *k)[1..].iter().copied().fold(f64::INFINITY, f64::min)
                    }
                    Kind::MinMaxF { f } => {
                        if lmax < 0.0 {
                            lmax
                        } else {
                            lmax.min(lmin + f.eval(lmax))
                        }
                    }
                    Kind::MinTwoF { f } => {
                        if self.dim < 2 {
                            return Err(Error::Unsupported("min-two-f needs n >= 2".into()));
                        }
                        let l2 = ev[1];
                        if l2 < 0.0 {
                            l2
                        } else {
                            l2.min(lmin + f.eval(l2))
                        }
                    }
                    Kind::Mg { g } => {
                        let t = a.trace();
                        if t < 0.0 {
                            t
                        } else {
                            t.min(lmin - g.eval(t)?)
                        }
                    }
                    _ => unreachable!(),
                }
            }
        };
        Ok(Some(v))
    }

    /// Weak (`F`) or strict (`Int F`) membership.
    pub fn member(&self, a: &SymMatrix, strict: bool) -> Result<bool> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.dim() });
        }
        match self.defining_value(a)? {
            Some(v) => Ok(if strict { v > self.slack } else { v >= -self.slack }),
            None => match &self.kind {
                Kind::Dual { inner } => inner.dual_member(a, strict),
                _ => unreachable!(),
            },
        }
    }

    /// Membership in the Dirichlet dual `F̃ = −(∼ Int F)`:
    /// `A ∈ F̃ ⇔ −A ∉ Int F` and `A ∈ Int F̃ ⇔ −A ∉ F`.
    pub fn dual_member(&self, a: &SymMatrix, strict: bool) -> Result<bool> {
        Ok(!self.member(&-a, !strict)?)
    }

    /// Smallest shift `c` with `A + cI ∈ F`, returned as the shifted matrix
    /// (the member end of a bisection bracket). `None` if no shift in
    /// `[−1e8, 1e8]` changes membership.
    pub fn boundary_along_identity(&self, a: &SymMatrix) -> Result<Option<SymMatrix>> {
        const LIMIT: f64 = 1e8;
        let mut err = None;
        let mut m = |c: f64| match self.member(&a.shift(c), false) {
            Ok(b) => b,
            Err(e) => {
                err = Some(e);
                false
            }
        };
        let (non, mem) = if m(0.0) {
            let (mut mem, mut c) = (0.0, -1.0);
            while m(c) {
                mem = c;
                c *= 2.0;
                if c < -LIMIT {
                    return Ok(None);
                }
            }
            (c, mem)
        } else {
            let (mut non, mut c) = (0.0, 1.0);
            while !m(c) {
                non = c;
                c *= 2.0;
                if c > LIMIT {
                    return Ok(None);
                }
            }
            (non, c)
        };
        // membership along the identity is an upper ray: bracket [non, mem]
        let (_, hi) = bisect(|c| !m(c), non, mem, 1e-13 * (1.0 + mem.abs()));
        if let Some(e) = err {
            return Err(e);
        }
        let b = a.shift(hi);
        Ok(if self.member(&b, false)? { Some(b) } else { None })
    }

    /// Draws one member of `F` from a mixture of Gaussian matrices, their
    /// trace-free parts, their boundary points along `I`, and their
    /// `λ_min`-shifted positive semidefinite boundaries.
    pub fn sample_member(&self, rng: &mut SeededRng) -> Result<Option<SymMatrix>> {
        let n = self.dim;
        for attempt in 0..64u32 {
            let scale = math::powf(10.0, random::uniform(rng, -2.0, 1.0));
            let a = random::gaussian_sym(rng, n).scale(scale);
            let start = (attempt as usize + rng_index(rng)) % 4;
            for j in 0..4 {
                let cand = match (start + j) % 4 {
                    0 => Some(a.clone()),
                    1 => Some(a.shift(-a.trace() / n as f64)),
                    2 => self.boundary_along_identity(&a)?,
                    _ => Some(a.shift(-a.lambda_min()?)),
                };
                if let Some(c) = cand {
                    if self.member(&c, false)? {
                        return Ok(Some(c));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn rng_index(rng: &mut SeededRng) -> usize {
    use rand::Rng;
    rng.random_range(0..4)
}

fn validate_kind(kind: &Kind, n: usize) -> Result<()> {
    let pos = |x: f64| x > 0.0 && x.is_finite();
    match kind {
        Kind::Pos | Kind::Subaffine => Ok(()),
        Kind::MinMaxCone { alpha } if pos(*alpha) => Ok(()),
        Kind::Pucci { lambda, big_lambda } if pos(*lambda) && pos(*big_lambda) && lambda <= big_lambda => Ok(()),
        Kind::PDelta { delta } if pos(*delta) => Ok(()),
        Kind::SigmaPsiK { exponent, k } if pos(*exponent) && *k >= 1 && *k <= n => Ok(()),
        Kind::MinMaxF { f } => f.validate(),
        Kind::MinTwoF { f } => {
            if n < 2 {
                Err(Error::Unsupported("min-two-f needs n >= 2".into()))
            } else {
                f.validate()
            }
        }
        Kind::Mg { g } => g.audit(),
        Kind::Dual { inner } if inner.dim == n => Ok(()),
        Kind::HalfSpace { c } if c.is_finite() => Ok(()),
        Kind::DiagonalEntry { index } if *index < n => Ok(()),
        Kind::TraceHyperplane { tol } if *tol >= 0.0 => Ok(()),
        other => Err(invalid!("invalid parameters for {:?} in dimension {}", other, n)),
    }
}

/// `[σ₀, σ₁, …, σ_k]` of `xs`.
pub fn elementary_symmetric(xs: &[f64], k: usize) -> Vec<f64> {
    let mut e = alloc::vec![0.0; k + 1];
    e[0] = 1.0;
    for &x in xs {
        for j in (1..=k).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// Outcome of a randomized positivity audit.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PositivityAudit {
    pub trials: usize,
    pub passed: bool,
    /// `(A, P)` with `A ∈ F`, `P ⪰ 0` and `A + P ∉ F`.
    pub witness: Option<(SymMatrix, SymMatrix)>,
}

/// Samples `A ∈ F` and Gram matrices `P = GᵀG` (scaled by `10^U(−3,1)`) and
/// reports the first pair with `A + P ∉ F`.
pub fn positivity_check(spec: &SubequationSpec, trials: usize, seed: u64) -> Result<PositivityAudit> {
    if trials == 0 {
        return Err(invalid!("trials must be at least 1"));
    }
    let mut rng = random::rng(seed);
    let n = spec.dim();
    for t in 0..trials {
        let a = spec
            .sample_member(&mut rng)?
            .ok_or_else(|| Error::Precondition(format!("no member of {} found by sampling", spec.id())))?;
        let p = random::random_psd(&mut rng, n).scale(math::powf(10.0, random::uniform(&mut rng, -3.0, 1.0)));
        if !spec.member(&(&a + &p), false)? {
            return Ok(PositivityAudit { trials: t + 1, passed: false, witness: Some((a, p)) });
        }
    }
    Ok(PositivityAudit { trials, passed: true, witness: None })
}

/// One-sided test of membership in the orbit hull `F# = ⋃_{g ∈ O(n)} g(F)`:
/// true if `A` or some sampled `QᵀAQ` (Haar `Q`) lies in `F`.
pub fn orbit_member(spec: &SubequationSpec, a: &SymMatrix, rotations: usize, seed: u64) -> Result<bool> {
    if rotations == 0 {
        return Err(invalid!("rotations must be at least 1"));
    }
    if spec.member(a, false)? {
        return Ok(true);
    }
    let mut rng = random::rng(seed);
    for _ in 0..rotations {
        let q = random::haar_orthogonal(&mut rng, spec.dim());
        if spec.member(&a.conjugate(&q), false)? {
            return Ok(true);
        }
    }
    Ok(false)
}
