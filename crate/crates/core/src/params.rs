//! The parameter set and the probability chain linking the base graph, its
//! subsample, the layers and their unions.

use crate::error::{Error, Result};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// The six probabilities of the host construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probabilities {
    /// Block presence probability `n^{δ - 1/2}`.
    pub p: f64,
    /// Edge probability of the block subsample.
    pub p_tilde: f64,
    /// Skeleton edge probability `ln n / n`.
    pub p_prime: f64,
    /// Edge probability of the biclique subsample.
    pub p_tilde_prime: f64,
    /// `1 - (1 - p')^z`.
    pub p_union: f64,
    /// `1 - (1 - p̃')^z`.
    pub p_tilde_union: f64,
}

/// Solves `1 - (1 - x)^m = p` for `x`.
pub fn subsample_probability(p: f64, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    -libm::expm1(libm::log1p(-p) / m as f64)
}

/// `1 - (1 - x)^z`.
pub fn union_probability(x: f64, z: usize) -> f64 {
    -libm::expm1(z as f64 * libm::log1p(-x))
}

fn unit(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::ParameterInfeasible(format!("{name} = {x} is not a probability")))
    }
}

/// Completes the chain from given `p` and `p'`.
pub fn probabilities_from(p: f64, p_prime: f64, c: usize, z: usize) -> Result<Probabilities> {
    if c < 2 {
        return Err(Error::ParameterInfeasible(format!("block size {c} < 2")));
    }
    let p = unit("p", p)?;
    let p_prime = unit("p'", p_prime)?;
    let p_tilde = unit("p~", subsample_probability(p, c * (c - 1) / 2))?;
    let p_tilde_prime = unit("p~'", subsample_probability(p_prime, c * c))?;
    Ok(Probabilities {
        p,
        p_tilde,
        p_prime,
        p_tilde_prime,
        p_union: union_probability(p_prime, z),
        p_tilde_union: union_probability(p_tilde_prime, z),
    })
}

/// Derives the whole chain from `n`, `δ`, `C` and the layer count `z`.
pub fn derive_probabilities(n: usize, delta: f64, c: usize, z: usize) -> Result<Probabilities> {
    if n < 2 {
        return Err(Error::ParameterInfeasible(format!("n = {n} < 2")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::ParameterInfeasible(format!("delta = {delta} outside (0, 1/2)")));
    }
    let nf = n as f64;
    probabilities_from(libm::pow(nf, delta - 0.5), libm::log(nf) / nf, c, z)
}

/// All tunable constants. Probabilities are stored so they can be overridden
/// at desk scale; `z = None` keeps every surviving matching.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    pub n: usize,
    pub delta: f64,
    pub c: usize,
    pub c_prime: usize,
    pub ell: usize,
    pub eta: f64,
    pub c_small: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
    pub q: usize,
    pub s: usize,
    pub mu: f64,
    pub tau: f64,
    pub gamma: f64,
    pub rho: f64,
    pub alpha: f64,
    pub probabilities: Probabilities,
    pub z: Option<usize>,
}

impl ParameterSet {
    /// Desk-scale defaults with the derived probability chain.
    pub fn desk(n: usize, c: usize) -> Result<Self> {
        let delta = 0.15;
        let probabilities = derive_probabilities(n, delta, c, 0)?;
        Ok(ParameterSet {
            n,
            delta,
            c,
            c_prime: 3,
            ell: 5,
            eta: 0.05,
            c_small: 0.01,
            eps1: 0.1,
            eps2: 0.2,
            eps3: 0.3,
            t1: 4,
            t2: 8,
            t3: 16,
            q: 3,
            s: 1,
            mu: 0.02,
            tau: 0.25,
            gamma: 0.1,
            rho: 0.5,
            alpha: 0.1,
            probabilities,
            z: None,
        })
    }

    /// Recomputes every probability from `n`, `δ` and `C`.
    pub fn rederive(&mut self, z: usize) -> Result<()> {
        self.probabilities = derive_probabilities(self.n, self.delta, self.c, z)?;
        Ok(())
    }

    /// Keeps `p` and `p'` and recomputes the dependent probabilities.
    pub fn complete_chain(&mut self, z: usize) -> Result<()> {
        self.probabilities = probabilities_from(self.probabilities.p, self.probabilities.p_prime, self.c, z)?;
        Ok(())
    }

    pub const KEYS: [&'static str; 27] = [
        "n", "delta", "C", "C_prime", "ell", "eta", "c", "eps1", "eps2", "eps3", "T1", "T2", "T3", "q", "s", "mu",
        "tau", "gamma", "rho", "alpha", "p", "p_tilde", "p_prime", "p_tilde_prime", "p_union", "p_tilde_union", "z",
    ];

    /// Sets one field from its text form; unknown keys are rejected.
    pub fn assign(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: core::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim().parse().map_err(|_| Error::ParameterInfeasible(format!("cannot parse {key} = {v}")))
        }
        let pr = &mut self.probabilities;
        match key {
            "n" => self.n = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "C" => self.c = num(key, value)?,
            "C_prime" => self.c_prime = num(key, value)?,
            "ell" => self.ell = num(key, value)?,
            "eta" => self.eta = num(key, value)?,
            "c" => self.c_small = num(key, value)?,
            "eps1" => self.eps1 = num(key, value)?,
            "eps2" => self.eps2 = num(key, value)?,
            "eps3" => self.eps3 = num(key, value)?,
            "T1" => self.t1 = num(key, value)?,
            "T2" => self.t2 = num(key, value)?,
            "T3" => self.t3 = num(key, value)?,
            "q" => self.q = num(key, value)?,
            "s" => self.s = num(key, value)?,
            "mu" => self.mu = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "gamma" => self.gamma = num(key, value)?,
            "rho" => self.rho = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "p" => pr.p = num(key, value)?,
            "p_tilde" => pr.p_tilde = num(key, value)?,
            "p_prime" => pr.p_prime = num(key, value)?,
            "p_tilde_prime" => pr.p_tilde_prime = num(key, value)?,
            "p_union" => pr.p_union = num(key, value)?,
            "p_tilde_union" => pr.p_tilde_union = num(key, value)?,
            "z" => {
                self.z = match value.trim() {
                    "auto" => None,
                    v => Some(num(key, v)?),
                }
            }
            _ => return Err(Error::UnknownParameter(key.to_string())),
        }
        Ok(())
    }

    /// Every field as `(key, value)` in a fixed order; floats use shortest round-trip form.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let pr = &self.probabilities;
        let mut v: Vec<(&'static str, String)> = Vec::new();
        v.push(("n", self.n.to_string()));
        v.push(("delta", fmt(self.delta)));
        v.push(("C", self.c.to_string()));
        v.push(("C_prime", self.c_prime.to_string()));
        v.push(("ell", self.ell.to_string()));
        v.push(("eta", fmt(self.eta)));
        v.push(("c", fmt(self.c_small)));
        v.push(("eps1", fmt(self.eps1)));
        v.push(("eps2", fmt(self.eps2)));
        v.push(("eps3", fmt(self.eps3)));
        v.push(("T1", self.t1.to_string()));
        v.push(("T2", self.t2.to_string()));
        v.push(("T3", self.t3.to_string()));
        v.push(("q", self.q.to_string()));
        v.push(("s", self.s.to_string()));
        v.push(("mu", fmt(self.mu)));
        v.push(("tau", fmt(self.tau)));
        v.push(("gamma", fmt(self.gamma)));
        v.push(("rho", fmt(self.rho)));
        v.push(("alpha", fmt(self.alpha)));
        v.push(("p", fmt(pr.p)));
        v.push(("p_tilde", fmt(pr.p_tilde)));
        v.push(("p_prime", fmt(pr.p_prime)));
        v.push(("p_tilde_prime", fmt(pr.p_tilde_prime)));
        v.push(("p_union", fmt(pr.p_union)));
        v.push(("p_tilde_union", fmt(pr.p_tilde_union)));
        v.push(("z", self.z.map_or_else(|| "auto".to_string(), |z| z.to_string())));
        v
    }
}

fn fmt(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_examples() {
        let pr = probabilities_from(0.271, 0.5, 3, 4).unwrap();
        assert!((pr.p_tilde - 0.1).abs() < 1e-12);
        assert!((pr.p_union - 0.9375).abs() < 1e-12);
        let pr = probabilities_from(0.3, 0.5, 2, 0).unwrap();
        assert!((pr.p_tilde - 0.3).abs() < 1e-15);
        assert_eq!(pr.p_union, 0.0);
    }

    #[test]
    fn derived_roots_are_accurate() {
        let pr = derive_probabilities(2000, 0.15, 3, 40).unwrap();
        let back = 1.0 - (1.0 - pr.p_tilde).powi(3);
        assert!((back - pr.p).abs() / pr.p < 1e-12);
        let back = 1.0 - (1.0 - pr.p_tilde_prime).powi(9);
        assert!((back - pr.p_prime).abs() / pr.p_prime < 1e-12);
        assert!(derive_probabilities(100, 0.7, 3, 1).is_err());
        assert!(derive_probabilities(1, 0.1, 3, 1).is_err());
    }

    #[test]
    fn assign_and_entries_round_trip() {
        let mut a = ParameterSet::desk(99, 3).unwrap();
        a.z = Some(4);
        let mut b = ParameterSet::desk(7, 3).unwrap();
        for (k, v) in a.entries() {
            b.assign(k, &v).unwrap();
        }
        assert_eq!(a, b);
        assert!(matches!(b.assign("bogus", "1"), Err(Error::UnknownParameter(_))));
    }
}
