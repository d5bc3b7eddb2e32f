//! Control parameters of model RB and the integer sizes actually generated.

use crate::error::{RbError, Result};

/// Control parameters `(n, k, alpha, p, r, delta)`.
///
/// `d = n^alpha` is the domain size, `m = r n ln n` the constraint count and
/// `q = p d^k` the number of illegal tuples per constraint. `delta` is only
/// consumed by window and experiment operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbParams {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub p: f64,
    pub r: f64,
    pub delta: f64,
}

pub const DEFAULT_DELTA: f64 = 0.1;

impl RbParams {
    pub fn new(n: usize, k: usize, alpha: f64, p: f64, r: f64) -> Result<Self> {
        let params = RbParams { n, k, alpha, p, r, delta: DEFAULT_DELTA };
        params.validate()?;
        Ok(params)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(RbError::invalid("n", format!("n = {} must be at least 2", self.n)));
        }
        if self.k < 2 {
            return Err(RbError::invalid("k", format!("k = {} must be at least 2", self.k)));
        }
        if self.k > self.n {
            return Err(RbError::invalid("k", format!("k = {} exceeds n = {}", self.k, self.n)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(RbError::invalid("alpha", format!("alpha = {} must be positive", self.alpha)));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(RbError::invalid("p", format!("p = {} must lie in (0, 1)", self.p)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(RbError::invalid("r", format!("r = {} must be positive", self.r)));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(RbError::invalid("delta", format!("delta = {} must lie in (0, 1/2)", self.delta)));
        }
        Ok(())
    }

    /// `alpha > 1/k` and `k >= 1/(1-p)`: the threshold in `r` is exact.
    pub fn r_regime(&self) -> bool {
        crate::theory::in_r_regime(self.alpha, self.k, self.p)
    }

    /// `alpha > 1/k` and `k e^{-alpha/r} >= 1`: the threshold in `p` is exact.
    pub fn p_regime(&self) -> bool {
        crate::theory::in_p_regime(self.alpha, self.k, self.r)
    }

    /// `n ln n`, the scale of every exponent in the model.
    pub fn n_ln_n(&self) -> f64 {
        let n = self.n as f64;
        n * n.ln()
    }
}

/// Integer sizes of a concrete instance, with the effective real parameters
/// recomputed from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedSizes {
    pub n: usize,
    pub k: usize,
    pub d: u64,
    pub m: u64,
    pub q: u64,
    pub alpha_eff: f64,
    pub p_eff: f64,
    pub r_eff: f64,
}

/// Largest admissible `d^k` (exclusive).
pub const TUPLE_SPACE_LIMIT: u64 = 1 << 63;

impl DerivedSizes {
    /// Builds sizes from explicit integers, e.g. when decoding a file.
    ///
    /// `m = 0` is accepted here; only [`derive`] clamps `m` to at least one.
    pub fn from_integers(n: usize, k: usize, d: u64, m: u64, q: u64) -> Result<Self> {
        if n < 2 {
            return Err(RbError::invalid("n", format!("n = {n} must be at least 2")));
        }
        if k < 2 || k > n {
            return Err(RbError::invalid("k", format!("k = {k} must lie in [2, n = {n}]")));
        }
        if d == 0 {
            return Err(RbError::invalid("d", "domain size must be positive"));
        }
        let dk = tuple_space(d, k)?;
        if q >= dk {
            return Err(RbError::Degenerate {
                name: "p",
                reason: format!("q = {q} leaves no legal tuple out of d^k = {dk}"),
            });
        }
        let nf = n as f64;
        Ok(DerivedSizes {
            n,
            k,
            d,
            m,
            q,
            alpha_eff: (d as f64).ln() / nf.ln(),
            p_eff: q as f64 / dk as f64,
            r_eff: m as f64 / (nf * nf.ln()),
        })
    }

    /// `d^k`; always fits because construction checked it.
    pub fn tuple_space(&self) -> u64 {
        (self.d).pow(self.k as u32)
    }

    /// Number of legal tuples per constraint.
    pub fn legal(&self) -> u64 {
        self.tuple_space() - self.q
    }
}

// the f64 fields are functions of the integers and never NaN
impl Eq for DerivedSizes {}

pub(crate) fn tuple_space(d: u64, k: usize) -> Result<u64> {
    let k32 = u32::try_from(k).map_err(|_| RbError::Overflow { d, k: u32::MAX })?;
    match d.checked_pow(k32) {
        Some(v) if v < TUPLE_SPACE_LIMIT => Ok(v),
        _ => Err(RbError::Overflow { d, k: k32 }),
    }
}

/// Rounds the real-valued sizes of `params` to the integers used for generation.
///
/// Rounding is to nearest with ties to even; `d >= 2` and `m >= 1`.
pub fn derive(params: &RbParams) -> Result<DerivedSizes> {
    params.validate()?;
    let nf = params.n as f64;
    let d = nf.powf(params.alpha).round_ties_even().max(2.0);
    if d >= TUPLE_SPACE_LIMIT as f64 {
        return Err(RbError::Overflow { d: u64::MAX, k: params.k as u32 });
    }
    let d = d as u64;
    let m = (params.r * nf * nf.ln()).round_ties_even().max(1.0);
    if !m.is_finite() || m >= u64::MAX as f64 {
        return Err(RbError::invalid("r", "constraint count does not fit in 64 bits"));
    }
    let m = m as u64;
    let dk = tuple_space(d, params.k)?;
    // exact below 2^53; above that the rounding error is far below one tuple's share
    let q = (params.p * dk as f64).round_ties_even();
    let q = if q >= dk as f64 { dk } else { q as u64 };
    if q >= dk {
        return Err(RbError::Degenerate {
            name: "p",
            reason: format!("p = {} rounds q up to d^k = {dk}, leaving no legal tuple", params.p),
        });
    }
    DerivedSizes::from_integers(params.n, params.k, d, m, q)
}
