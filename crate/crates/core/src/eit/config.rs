use super::EitError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Boundary misfit functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Misfit {
    W2,
    L2,
}

impl FromStr for Misfit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "w2" => Ok(Misfit::W2),
            "l2" => Ok(Misfit::L2),
            other => Err(format!("unknown misfit '{other}' (expected w2 or l2)")),
        }
    }
}

impl fmt::Display for Misfit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Misfit::W2 => "w2",
            Misfit::L2 => "l2",
        })
    }
}

/// Parameters of the reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionConfig {
    pub misfit: Misfit,
    /// Shift in the normalisation `φ/a + 1`.
    pub a: f64,
    /// Weight of the smoothed total variation term.
    pub beta: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub s_stop: f64,
    /// Length of the nonmonotone memory.
    pub memory: usize,
    pub tau: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub i_max: usize,
    pub c0: f64,
    pub c1: f64,
    /// Leading L² iterations before switching to the W₂ misfit.
    pub warm_start_m: usize,
    /// Frequencies of the current patterns.
    pub n_cur: usize,
    /// Refinement of the inversion mesh; data use one level more.
    pub refinement: u32,
    pub sigma0: f64,
    pub eps: f64,
    pub seed: u64,
    /// Tolerance passed to the α solver.
    pub ot_eps: f64,
    /// Length of the circle on which W₂ is measured: 2π for arclength on the
    /// unit circle, 1 for the normalised parameter `θ/2π`.
    pub w2_length: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            misfit: Misfit::W2,
            a: 2.0,
            beta: 0.0,
            s_min: 1.0,
            s_max: 1000.0,
            s_stop: 1e-3,
            memory: 5,
            tau: 1e-5,
            rho1: 0.4,
            rho2: 0.6,
            i_max: 200,
            c0: 0.1,
            c1: 10.0,
            warm_start_m: 10,
            n_cur: 5,
            refinement: crate::fem_disk::DEFAULT_REFINEMENT,
            sigma0: 1.0,
            eps: 0.0,
            seed: 0,
            ot_eps: 1e-12,
            w2_length: 2.0 * std::f64::consts::PI,
        }
    }
}

impl InversionConfig {
    /// Backtracking factor: the midpoint of `[ρ₁, ρ₂]`.
    pub fn rho(&self) -> f64 {
        0.5 * (self.rho1 + self.rho2)
    }

    pub fn validate(&self) -> Result<(), EitError> {
        let bad = |m: &str| Err(EitError::InvalidConfig(m.to_string()));
        if !(0.0 < self.rho1 && self.rho1 < self.rho2 && self.rho2 < 1.0) {
            return bad("need 0 < rho1 < rho2 < 1");
        }
        if !(0.0 < self.s_min && self.s_min <= self.s_max) {
            return bad("need 0 < s_min <= s_max");
        }
        if !(self.s_stop > 0.0) {
            return bad("s_stop must be positive");
        }
        if !(0.0 < self.tau && self.tau < 1.0) {
            return bad("tau must lie in (0, 1)");
        }
        if !(0.0 < self.c0 && self.c0 < self.c1) {
            return bad("need 0 < c0 < c1");
        }
        if !(self.c0..=self.c1).contains(&self.sigma0) {
            return bad("sigma0 outside [c0, c1]");
        }
        if !(self.a > 0.0) {
            return bad("a must be positive");
        }
        if self.beta < 0.0 || self.eps < 0.0 {
            return bad("beta and eps must be nonnegative");
        }
        if self.memory == 0 || self.n_cur == 0 || self.refinement == 0 {
            return bad("memory, n_cur and refinement must be at least 1");
        }
        if !(self.ot_eps > 0.0) {
            return bad("ot_eps must be positive");
        }
        if !(self.w2_length > 0.0) {
            return bad("w2_length must be positive");
        }
        Ok(())
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("cannot parse '{v}'"))
        }
        match key {
            "misfit" => self.misfit = value.parse()?,
            "a" => self.a = num(value)?,
            "beta" => self.beta = num(value)?,
            "s_min" => self.s_min = num(value)?,
            "s_max" => self.s_max = num(value)?,
            "s_stop" => self.s_stop = num(value)?,
            "memory" | "M" => self.memory = num(value)?,
            "tau" => self.tau = num(value)?,
            "rho1" => self.rho1 = num(value)?,
            "rho2" => self.rho2 = num(value)?,
            "i_max" => self.i_max = num(value)?,
            "c0" => self.c0 = num(value)?,
            "c1" => self.c1 = num(value)?,
            "warm_start_m" => self.warm_start_m = num(value)?,
            "n_cur" => self.n_cur = num(value)?,
            "refinement" => self.refinement = num(value)?,
            "sigma0" => self.sigma0 = num(value)?,
            "eps" => self.eps = num(value)?,
            "seed" => self.seed = num(value)?,
            "ot_eps" => self.ot_eps = num(value)?,
            "w2_length" => self.w2_length = num(value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Parses flat `key = value` lines on top of the defaults. Blank lines
    /// and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, EitError> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| EitError::Config {
                line: n + 1,
                message: format!("expected key = value, got '{line}'"),
            })?;
            cfg.set(k.trim(), v.trim()).map_err(|message| EitError::Config {
                line: n + 1,
                message,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Inverse of [`InversionConfig::parse`].
    pub fn to_key_values(&self) -> String {
        format!(
            "misfit = {}\na = {:?}\nbeta = {:?}\ns_min = {:?}\ns_max = {:?}\ns_stop = {:?}\n\
             memory = {}\ntau = {:?}\nrho1 = {:?}\nrho2 = {:?}\ni_max = {}\nc0 = {:?}\nc1 = {:?}\n\
             warm_start_m = {}\nn_cur = {}\nrefinement = {}\nsigma0 = {:?}\neps = {:?}\nseed = {}\n\
             ot_eps = {:?}\nw2_length = {:?}\n",
            self.misfit,
            self.a,
            self.beta,
            self.s_min,
            self.s_max,
            self.s_stop,
            self.memory,
            self.tau,
            self.rho1,
            self.rho2,
            self.i_max,
            self.c0,
            self.c1,
            self.warm_start_m,
            self.n_cur,
            self.refinement,
            self.sigma0,
            self.eps,
            self.seed,
            self.ot_eps,
            self.w2_length
        )
    }
}
