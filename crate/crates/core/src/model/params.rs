use serde::{Deserialize, Serialize};

use crate::combinatorics::binom_f64;
use crate::error::{Error, Result};

/// Largest supported hyperedge arity.
pub const MAX_ARITY: usize = 6;

/// Constant prefactors standing in for the `n^{o(1)}` slack of each rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prefactors {
    pub c_s: f64,
    pub c_p: f64,
    pub c_q: f64,
}

impl Default for Prefactors {
    fn default() -> Self {
        Prefactors {
            c_s: 1.0,
            c_p: 1.0,
            c_q: 1.0,
        }
    }
}

/// Exponent-level description of a model instance together with the
/// resolved inclusion probabilities.
///
/// `s` is the hyperedge inclusion probability, `p` the retention probability
/// of projected edges and `q` the probability of a spurious edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c_s: f64,
    pub c_p: f64,
    pub c_q: f64,
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

/// Whether `q <= p` is enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseOrder {
    Enforced,
    /// Admits `q > p`. The sampler is still well defined, but the
    /// likelihood-ratio machinery and the thresholds assume `q <= p`.
    Unchecked,
}

fn check_arity(n: usize, d: usize) -> Result<()> {
    if !(2..=MAX_ARITY).contains(&d) {
        return Err(Error::InvalidParams(format!(
            "d = {d} must lie in [2, {MAX_ARITY}]"
        )));
    }
    if n < d {
        return Err(Error::InvalidParams(format!(
            "n = {n} is smaller than d = {d}"
        )));
    }
    Ok(())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParams(format!(
            "{name} = {v} is not a probability"
        )));
    }
    Ok(())
}

/// Resolves exponents and prefactors into rates; see [`ModelParams::resolve`].
#[allow(clippy::too_many_arguments)]
pub fn resolve_rates(
    n: usize,
    d: usize,
    delta: f64,
    alpha: f64,
    beta: f64,
    c_s: f64,
    c_p: f64,
    c_q: f64,
) -> Result<ModelParams> {
    ModelParams::resolve(n, d, delta, alpha, beta, Prefactors { c_s, c_p, c_q })
}

impl ModelParams {
    /// `s = min(1, c_s n^{-(d-1)+delta})`, `p = min(1, c_p n^{-1+alpha})`,
    /// `q = min(1, c_q n^{-1+beta})`.
    pub fn resolve(
        n: usize,
        d: usize,
        delta: f64,
        alpha: f64,
        beta: f64,
        c: Prefactors,
    ) -> Result<Self> {
        Self::resolve_with_order(n, d, delta, alpha, beta, c, NoiseOrder::Enforced)
    }

    pub fn resolve_with_order(
        n: usize,
        d: usize,
        delta: f64,
        alpha: f64,
        beta: f64,
        c: Prefactors,
        order: NoiseOrder,
    ) -> Result<Self> {
        check_arity(n, d)?;
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParams(format!(
                "delta = {delta} not in [0, 1)"
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!("{name} = {v} not in [0, 1]")));
            }
        }
        for (name, v) in [("c_s", c.c_s), ("c_p", c.c_p), ("c_q", c.c_q)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "prefactor {name} = {v} must be positive"
                )));
            }
        }
        let nf = n as f64;
        let s = (c.c_s * nf.powf(-(d as f64 - 1.0) + delta)).min(1.0);
        let p = (c.c_p * nf.powf(-1.0 + alpha)).min(1.0);
        let q = (c.c_q * nf.powf(-1.0 + beta)).min(1.0);
        let params = ModelParams {
            n,
            d,
            delta,
            alpha,
            beta,
            c_s: c.c_s,
            c_p: c.c_p,
            c_q: c.c_q,
            s,
            p,
            q,
        };
        params.check_rates(order)?;
        Ok(params)
    }

    /// Parameters from direct rates. Exponents are back-computed as `log_n`
    /// values for reporting and may fall outside their nominal ranges.
    pub fn from_rates(n: usize, d: usize, s: f64, p: f64, q: f64) -> Result<Self> {
        check_arity(n, d)?;
        let ln_n = (n as f64).ln();
        let params = ModelParams {
            n,
            d,
            delta: s.ln() / ln_n + (d as f64 - 1.0),
            alpha: p.ln() / ln_n + 1.0,
            beta: q.ln() / ln_n + 1.0,
            c_s: 1.0,
            c_p: 1.0,
            c_q: 1.0,
            s,
            p,
            q,
        };
        params.check_rates(NoiseOrder::Enforced)?;
        Ok(params)
    }

    /// Replaces the given rates, back-computing each matching exponent and
    /// resetting its prefactor to 1.
    pub fn override_rates(
        mut self,
        s: Option<f64>,
        p: Option<f64>,
        q: Option<f64>,
        order: NoiseOrder,
    ) -> Result<Self> {
        let ln_n = (self.n as f64).ln();
        if let Some(s) = s {
            self.s = s;
            self.delta = s.ln() / ln_n + (self.d as f64 - 1.0);
            self.c_s = 1.0;
        }
        if let Some(p) = p {
            self.p = p;
            self.alpha = p.ln() / ln_n + 1.0;
            self.c_p = 1.0;
        }
        if let Some(q) = q {
            self.q = q;
            self.beta = q.ln() / ln_n + 1.0;
            self.c_q = 1.0;
        }
        self.check_rates(order)?;
        Ok(self)
    }

    fn check_rates(&self, order: NoiseOrder) -> Result<()> {
        check_unit("s", self.s)?;
        check_unit("p", self.p)?;
        check_unit("q", self.q)?;
        if order == NoiseOrder::Enforced && self.q > self.p {
            return Err(Error::InvalidParams(format!(
                "q = {} exceeds p = {}",
                self.q, self.p
            )));
        }
        Ok(())
    }

    /// `C(n, d)`, the number of candidate hyperedges.
    pub fn num_subsets(&self) -> f64 {
        binom_f64(self.n as u64, self.d as u64)
    }

    /// `C(n, 2)`.
    pub fn num_pairs(&self) -> f64 {
        binom_f64(self.n as u64, 2)
    }

    /// `s * C(n, d)`, the expected number of hyperedges.
    pub fn expected_hyperedges(&self) -> f64 {
        self.s * self.num_subsets()
    }
}
