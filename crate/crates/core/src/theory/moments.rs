//! Exact first and second moments of the solution count.
//!
//! An ordered pair of assignments agreeing on `S` variables satisfies one
//! random constraint with probability `A rho + B (1 - rho)`, where
//! `rho = C(S,k)/C(n,k)` is the chance the scope lies inside the agreement set,
//! `A = (d^k - q)/d^k` and `B = (d^k - q)(d^k - q - 1)/(d^k (d^k - 1))`.
//! There are `d^n C(n,S) (d-1)^(n-S)` such pairs. Everything is kept in the
//! log domain.

use std::fmt;

use super::numeric::{choose_ratio, ln_choose, log_sum_exp};
use crate::error::{RbError, Result};
use crate::params::{derive, DerivedSizes, RbParams};

/// How real-valued sizes are turned into numbers for moment evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// `d = n^alpha`, `m = r n ln n`, `q = p d^k` kept real.
    Continuous,
    /// The rounded sizes produced by [`derive`].
    Integerized,
}

/// The handful of numbers every moment term depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentModel {
    pub n: usize,
    pub k: usize,
    d: f64,
    ln_d: f64,
    ln_d_minus_1: f64,
    m: f64,
    /// probability a single assignment satisfies one constraint
    a: f64,
    /// probability two assignments disjoint on the scope both satisfy it
    b: f64,
}

impl MomentModel {
    pub fn integerized(sizes: &DerivedSizes) -> Result<Self> {
        if sizes.d < 2 {
            return Err(RbError::Degenerate {
                name: "d",
                reason: "pair terms need a domain of at least two values".into(),
            });
        }
        let dk = sizes.tuple_space();
        let legal = dk - sizes.q;
        let a = legal as f64 / dk as f64;
        let b = a * ((legal - 1) as f64 / (dk - 1) as f64);
        Ok(MomentModel {
            n: sizes.n,
            k: sizes.k,
            d: sizes.d as f64,
            ln_d: (sizes.d as f64).ln(),
            ln_d_minus_1: ((sizes.d - 1) as f64).ln(),
            m: sizes.m as f64,
            a,
            b,
        })
    }

    pub fn continuous(params: &RbParams) -> Result<Self> {
        params.validate()?;
        let ln_n = (params.n as f64).ln();
        let ln_d = params.alpha * ln_n;
        let d = ln_d.exp();
        let dk = (params.k as f64 * ln_d).exp();
        let a = 1.0 - params.p;
        let legal = a * dk;
        if d <= 1.0 || legal < 1.0 || !dk.is_finite() {
            return Err(RbError::Degenerate {
                name: "p",
                reason: format!("continuous sizes d = {d}, (1-p) d^k = {legal} leave no legal pair"),
            });
        }
        Ok(MomentModel {
            n: params.n,
            k: params.k,
            d,
            ln_d,
            ln_d_minus_1: (d - 1.0).ln(),
            m: params.r * params.n_ln_n(),
            a,
            b: a * ((legal - 1.0) / (dk - 1.0)),
        })
    }

    pub fn for_params(params: &RbParams, mode: EvalMode) -> Result<Self> {
        match mode {
            EvalMode::Continuous => Self::continuous(params),
            EvalMode::Integerized => Self::integerized(&derive(params)?),
        }
    }

    /// `m ln x`, with `0 ln 0 = 0`.
    fn m_ln(&self, x: f64) -> f64 {
        if self.m == 0.0 {
            0.0
        } else {
            self.m * x.ln()
        }
    }

    /// `ln E(N) = n ln d + m ln A`.
    pub fn log_expected_solutions(&self) -> f64 {
        self.n as f64 * self.ln_d + self.m_ln(self.a)
    }

    /// Log of the total contribution of pairs with similarity number `s`.
    pub fn pair_term(&self, s: usize) -> Result<f64> {
        if s > self.n {
            return Err(RbError::Range(format!("similarity number {s} exceeds n = {}", self.n)));
        }
        let n = self.n as u64;
        let rho = choose_ratio(s as u64, n, self.k as u64);
        let mix = self.a * rho + self.b * (1.0 - rho);
        let disagree = (self.n - s) as f64;
        let spread = if disagree == 0.0 { 0.0 } else { disagree * self.ln_d_minus_1 };
        // same summation order as log_expected_solutions so S = n reproduces it bit for bit
        Ok(self.n as f64 * self.ln_d + ln_choose(n, s as u64) + spread + self.m_ln(mix))
    }

    /// `E(N)` and `E(N^2)` summed directly, when every term is a modest float.
    ///
    /// Avoids the last-ulp drift of `exp(ln x)`, so small cases come out exact.
    fn linear_moments(&self, log_en2: f64) -> Option<(f64, f64)> {
        if self.n > 1000 || !(log_en2.abs() < 600.0) || self.m.fract() != 0.0 || self.m > i32::MAX as f64 {
            return None;
        }
        let (n, m) = (self.n as i32, self.m as i32);
        let dn = self.d.powi(n);
        let en = dn * self.a.powi(m);
        let mut binom = 1.0;
        let mut en2 = 0.0;
        for s in 0..=self.n {
            let rho = choose_ratio(s as u64, self.n as u64, self.k as u64);
            let mix = self.a * rho + self.b * (1.0 - rho);
            en2 += dn * binom * (self.d - 1.0).powi(n - s as i32) * mix.powi(m);
            binom = binom * (self.n - s) as f64 / (s + 1) as f64;
        }
        (en.is_normal() && en2.is_normal()).then_some((en, en2))
    }

    pub fn second_moment(&self) -> MomentReport {
        let pair_terms: Vec<f64> = (0..=self.n)
            .map(|s| self.pair_term(s).expect("s within range"))
            .collect();
        let log_en = self.log_expected_solutions();
        let log_en2 = log_sum_exp(&pair_terms);
        let linear = self.linear_moments(log_en2);
        let (en, en2) = linear.unwrap_or((log_en.exp(), log_en2.exp()));
        let ratio = match linear {
            Some(_) => en * en / en2,
            None => (2.0 * log_en - log_en2).exp(),
        };
        MomentReport {
            log_en,
            log_en2,
            en,
            en2,
            ratio_lower_bound: ratio.min(1.0),
            markov_upper_bound: en.min(1.0),
            pair_terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    /// `ln E(N)`
    pub log_en: f64,
    /// `ln` of the contribution of each similarity number `S = 0..=n`
    pub pair_terms: Vec<f64>,
    /// `ln E(N^2)`
    pub log_en2: f64,
    /// `E(N)`, summed directly when small enough, else `exp(log_en)`
    pub en: f64,
    /// `E(N^2)`, likewise
    pub en2: f64,
    /// `E(N)^2 / E(N^2)`, a lower bound on `Pr(Sat)`
    pub ratio_lower_bound: f64,
    /// `min(1, E(N))`, an upper bound on `Pr(Sat)`
    pub markov_upper_bound: f64,
}

impl fmt::Display for MomentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::report::fmt_float as g;
        writeln!(f, "log_E_N={}", g(self.log_en))?;
        writeln!(f, "log_E_N2={}", g(self.log_en2))?;
        writeln!(f, "E_N={} E_N2={}", g(self.en), g(self.en2))?;
        writeln!(f, "cauchy_lower={}", g(self.ratio_lower_bound))?;
        writeln!(f, "markov_upper={}", g(self.markov_upper_bound))?;
        for (s, t) in self.pair_terms.iter().enumerate() {
            writeln!(f, "pair_term[{s}]={}", g(*t))?;
        }
        Ok(())
    }
}

/// `ln E(N)`; continuous mode evaluates `(alpha + r ln(1-p)) n ln n`.
pub fn log_expected_solutions(params: &RbParams, mode: EvalMode) -> Result<f64> {
    match mode {
        EvalMode::Continuous => {
            params.validate()?;
            // fused so the near-cancellation at the threshold costs one rounding
            Ok(params.r.mul_add((-params.p).ln_1p(), params.alpha) * params.n_ln_n())
        }
        EvalMode::Integerized => Ok(MomentModel::integerized(&derive(params)?)?.log_expected_solutions()),
    }
}

pub fn pair_term(params: &RbParams, s: usize, mode: EvalMode) -> Result<f64> {
    MomentModel::for_params(params, mode)?.pair_term(s)
}

pub fn log_second_moment(params: &RbParams, mode: EvalMode) -> Result<MomentReport> {
    Ok(MomentModel::for_params(params, mode)?.second_moment())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> DerivedSizes {
        DerivedSizes::from_integers(2, 2, 2, 1, 1).unwrap()
    }

    #[test]
    fn tiny_first_moment() {
        let m = MomentModel::integerized(&tiny()).unwrap();
        assert!((m.log_expected_solutions() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tiny_pair_terms() {
        let m = MomentModel::integerized(&tiny()).unwrap();
        let expect = [2f64.ln(), 4f64.ln(), 3f64.ln()];
        for (s, e) in expect.iter().enumerate() {
            assert!((m.pair_term(s).unwrap() - e).abs() < 1e-14, "S = {s}");
        }
        assert_eq!(m.pair_term(2).unwrap(), m.log_expected_solutions());
        assert!(m.pair_term(3).is_err());
        let rep = m.second_moment();
        assert!((rep.log_en2.exp() - 9.0).abs() / 9.0 < 1e-12);
        assert_eq!((rep.en, rep.en2), (3.0, 9.0));
        assert!(rep.to_string().contains("E_N=3 E_N2=9\n"));
        assert!((rep.ratio_lower_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn six_variable_first_moment() {
        let s = DerivedSizes::from_integers(6, 2, 6, 11, 9).unwrap();
        let v = MomentModel::integerized(&s).unwrap().log_expected_solutions();
        assert!((v - (6.0 * 6f64.ln() + 11.0 * 0.75f64.ln())).abs() < 1e-12);
        assert!((v - 7.586054).abs() < 1e-6);
    }

    #[test]
    fn continuous_at_threshold_is_zero() {
        let base = RbParams::new(50, 2, 1.0, 0.5, 1.0).unwrap();
        let at = base.with_r(super::super::critical_r(1.0, 0.5));
        let v = log_expected_solutions(&at, EvalMode::Continuous).unwrap();
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn domain_of_one_is_degenerate() {
        let s = DerivedSizes::from_integers(3, 2, 1, 1, 0).unwrap();
        assert!(matches!(MomentModel::integerized(&s), Err(RbError::Degenerate { .. })));
    }

    #[test]
    fn no_constraints_means_independent_pairs() {
        let s = DerivedSizes::from_integers(5, 2, 3, 0, 4).unwrap();
        let rep = MomentModel::integerized(&s).unwrap().second_moment();
        assert!((rep.log_en - 5.0 * 3f64.ln()).abs() < 1e-12);
        assert!((rep.log_en2 - 10.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn large_n_is_finite() {
        let p = RbParams::new(100_000, 2, 0.8, 0.25, 2.0).unwrap();
        let rep = log_second_moment(&p, EvalMode::Continuous).unwrap();
        assert!(rep.log_en.is_finite() && rep.log_en2.is_finite());
        assert!(rep.log_en2 >= rep.log_en);
    }
}
