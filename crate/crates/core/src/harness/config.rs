//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored. Unknown and duplicate keys are
//! rejected so that typos never fall back to defaults silently.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Result, SolverError};
use crate::fim::{FimConfig, FimVariant, SolveOptions, SolverKind, WriteBack};
use crate::nmg::{LevelSmoother, NmgConfig};
use crate::smoothers::SmootherKind;
use crate::spatial::Regularization;

use super::problems::{build_cavity, build_couette, build_shock, Problem, ProblemKind};

const KNOWN_KEYS: &[&str] = &[
    "problem.kind",
    "problem.kn",
    "problem.order",
    "problem.n1",
    "problem.n2",
    "problem.mach",
    "solver.kind",
    "solver.smoother",
    "solver.variant",
    "solver.gamma1",
    "solver.gamma2",
    "solver.inner_tol",
    "solver.outer_tol",
    "solver.max_iters",
    "solver.mass_correction",
    "solver.cfl",
    "solver.regularization",
    "solver.writeback",
    "nmg.levels",
    "nmg.s1",
    "nmg.s2",
    "nmg.s3",
    "nmg.smoother",
    "output.dir",
    "threads",
];

/// Raw key/value pairs of a configuration file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = ConfigMap::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| SolverError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KNOWN_KEYS.contains(&k) {
                return Err(SolverError::Config(format!("line {}: unknown key `{k}`", n + 1)));
            }
            if v.is_empty() {
                return Err(SolverError::Config(format!("line {}: empty value for `{k}`", n + 1)));
            }
            if map.entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(SolverError::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        Ok(map)
    }

    /// Overrides (or adds) one entry.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(SolverError::Config(format!("unknown key `{key}`")));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| SolverError::MissingKey(key.to_string()))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| SolverError::Config(format!("cannot parse `{v}` for `{key}`")))
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.require(key)?;
        Ok(self.parsed(key)?.expect("key present"))
    }

    fn kind<T: FromStr<Err = SolverError>>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| SolverError::Config(format!("`{key}`: {e}"))))
            .transpose()
    }
}

/// Problem parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub kn: f64,
    pub order: usize,
    pub n1: usize,
    pub n2: usize,
    pub mach: f64,
    pub regularization: Option<Regularization>,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem> {
        match self.kind {
            ProblemKind::Couette => build_couette(self.kn, self.order, self.n1, self.regularization),
            ProblemKind::Shock => build_shock(self.mach, self.order, self.n1, self.regularization),
            ProblemKind::Cavity => {
                build_cavity(self.kn, self.order, self.n1, self.n2, self.regularization)
            }
        }
    }
}

/// Solver selection before benchmark-dependent defaults are filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverSpec {
    Basic(SmootherKind),
    Fim(FimSpec),
    Nmg(NmgSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FimSpec {
    pub variant: FimVariant,
    pub gamma1: usize,
    pub gamma2: Option<usize>,
    pub inner_tol: f64,
    pub writeback: WriteBack,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NmgLevelSpec {
    Basic(SmootherKind),
    Fim(FimSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmgSpec {
    pub levels: Option<usize>,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub smoother: NmgLevelSpec,
}

/// Fully interpreted run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub solver: SolverSpec,
    pub outer_tol: Option<f64>,
    pub max_iters: usize,
    pub mass_correction: Option<bool>,
    pub cfl: f64,
    pub output_dir: PathBuf,
    pub threads: usize,
}

fn on_off(v: &str, key: &str) -> Result<bool> {
    match v {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        other => Err(SolverError::Config(format!("`{key}` must be on/off, got `{other}`"))),
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_map(&ConfigMap::parse(text)?)
    }

    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        let kind: ProblemKind = map.kind("problem.kind")?.ok_or_else(|| SolverError::MissingKey("problem.kind".into()))?;
        let order: usize = map.required("problem.order")?;
        let n1: usize = map.required("problem.n1")?;
        let (kn, mach, n2) = match kind {
            ProblemKind::Couette => (map.required("problem.kn")?, 0.0, 1),
            ProblemKind::Shock => (super::problems::SHOCK_KN, map.required("problem.mach")?, 1),
            ProblemKind::Cavity => (
                map.required("problem.kn")?,
                0.0,
                map.parsed("problem.n2")?.unwrap_or(n1),
            ),
        };
        let problem = ProblemSpec {
            kind,
            kn,
            order,
            n1,
            n2,
            mach,
            regularization: map.kind("solver.regularization")?,
        };

        let fim_spec = |variant: FimVariant| -> Result<FimSpec> {
            Ok(FimSpec {
                variant,
                gamma1: map.parsed("solver.gamma1")?.unwrap_or(1),
                gamma2: map.parsed("solver.gamma2")?,
                inner_tol: map.parsed("solver.inner_tol")?.unwrap_or(1e-8),
                writeback: map.kind("solver.writeback")?.unwrap_or(WriteBack::Keep),
            })
        };
        let solver = match map.require("solver.kind")? {
            "basic" => SolverSpec::Basic(
                map.kind("solver.smoother")?
                    .ok_or_else(|| SolverError::MissingKey("solver.smoother".into()))?,
            ),
            "fim" => SolverSpec::Fim(fim_spec(
                map.kind("solver.variant")?
                    .ok_or_else(|| SolverError::MissingKey("solver.variant".into()))?,
            )?),
            "nmg" => {
                let name = map.require("nmg.smoother")?;
                let smoother = match name.parse::<SmootherKind>() {
                    Ok(k) => NmgLevelSpec::Basic(k),
                    Err(_) => NmgLevelSpec::Fim(fim_spec(name.parse().map_err(|e| {
                        SolverError::Config(format!("`nmg.smoother`: {e}"))
                    })?)?),
                };
                SolverSpec::Nmg(NmgSpec {
                    levels: map.parsed("nmg.levels")?,
                    s1: map.parsed("nmg.s1")?.unwrap_or(2),
                    s2: map.parsed("nmg.s2")?.unwrap_or(2),
                    s3: map.parsed("nmg.s3")?.unwrap_or(4),
                    smoother,
                })
            }
            other => {
                return Err(SolverError::Config(format!(
                    "`solver.kind` must be basic, fim or nmg, got `{other}`"
                )))
            }
        };
        let threads = map.parsed("threads")?.unwrap_or(1);
        if threads == 0 {
            return Err(SolverError::Config("`threads` must be at least 1".into()));
        }
        Ok(RunConfig {
            problem,
            solver,
            outer_tol: map.parsed("solver.outer_tol")?,
            max_iters: map.parsed("solver.max_iters")?.unwrap_or(100_000),
            mass_correction: map
                .get("solver.mass_correction")
                .map(|v| on_off(v, "solver.mass_correction"))
                .transpose()?,
            cfl: map.parsed("solver.cfl")?.unwrap_or(0.8),
            output_dir: PathBuf::from(map.get("output.dir").unwrap_or("out")),
            threads,
        })
    }

    /// Builds the benchmark and resolves benchmark-dependent defaults.
    pub fn instantiate(&self) -> Result<(Problem, SolverKind, SolveOptions)> {
        let problem = self.problem.build()?;
        let fim = |s: &FimSpec| {
            let mut c = FimConfig::new(s.variant, s.gamma2.unwrap_or_else(|| problem.default_gamma2()));
            c.gamma1 = s.gamma1;
            c.inner_tol = s.inner_tol;
            c.writeback = s.writeback;
            c.cfl = self.cfl;
            c.validate().map(|_| c)
        };
        let solver = match &self.solver {
            SolverSpec::Basic(k) => SolverKind::Basic(*k),
            SolverSpec::Fim(s) => SolverKind::Fim(fim(s)?),
            SolverSpec::Nmg(s) => {
                let smoother = match &s.smoother {
                    NmgLevelSpec::Basic(k) => LevelSmoother::Basic(*k),
                    NmgLevelSpec::Fim(f) => LevelSmoother::Fim(fim(f)?),
                };
                let mut c = NmgConfig::new(smoother);
                c.levels = s.levels;
                c.s1 = s.s1;
                c.s2 = s.s2;
                c.s3 = s.s3;
                c.cfl = self.cfl;
                SolverKind::Nmg(c)
            }
        };
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::InvalidParameter(format!("CFL must lie in (0, 1), got {}", self.cfl)));
        }
        let opts = SolveOptions {
            tol: self.outer_tol.unwrap_or(problem.tol),
            max_iters: self.max_iters,
            cfl: self.cfl,
            mass_correction: self.mass_correction.unwrap_or(problem.mass_correction),
        };
        Ok((problem, solver, opts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const COUETTE: &str = "\
# Couette, Kn = 0.1
problem.kind = couette
problem.kn = 0.1
problem.order = 5
problem.n1 = 16
solver.kind = fim
solver.variant = fim-3
";

    #[test]
    fn parses_couette() {
        let c = RunConfig::from_text(COUETTE).unwrap();
        assert_eq!(c.problem.kind, ProblemKind::Couette);
        assert_eq!(c.problem.order, 5);
        assert_eq!(c.threads, 1);
        let (p, s, o) = c.instantiate().unwrap();
        assert_eq!(p.disc.grid.n(0), 16);
        assert!(o.mass_correction);
        assert_eq!(o.tol, 1e-8);
        match s {
            SolverKind::Fim(f) => {
                assert_eq!(f.variant, FimVariant::Fim3);
                assert_eq!(f.gamma2, 40);
            }
            other => panic!("unexpected solver {other:?}"),
        }
    }

    #[test]
    fn missing_key_is_named() {
        let text = COUETTE.replace("problem.kn = 0.1\n", "");
        match RunConfig::from_text(&text) {
            Err(SolverError::MissingKey(k)) => assert_eq!(k, "problem.kn"),
            other => panic!("expected missing key, got {other:?}"),
        }
        let text = COUETTE.replace("solver.kind = fim\n", "");
        assert!(matches!(RunConfig::from_text(&text), Err(SolverError::MissingKey(k)) if k == "solver.kind"));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigMap::parse("problem.kind couette").is_err());
        assert!(ConfigMap::parse("problem.colour = red").is_err());
        assert!(ConfigMap::parse("threads = 1\nthreads = 2").is_err());
        assert!(ConfigMap::parse("threads =").is_err());
        let text = COUETTE.replace("problem.n1 = 16", "problem.n1 = many");
        assert!(matches!(RunConfig::from_text(&text), Err(SolverError::Config(_))));
    }

    #[test]
    fn nmg_with_fim_smoother() {
        let text = "problem.kind = shock\nproblem.mach = 1.4\nproblem.order = 3\nproblem.n1 = 64\n\
                    solver.kind = nmg\nnmg.smoother = fim-2\nnmg.s3 = 6\nsolver.mass_correction = on\n";
        let (p, s, o) = RunConfig::from_text(text).unwrap().instantiate().unwrap();
        assert_eq!(o.tol, 5e-5);
        assert!(o.mass_correction);
        assert_eq!(p.default_gamma2(), 5);
        match s {
            SolverKind::Nmg(c) => {
                assert_eq!(c.s3, 6);
                assert!(matches!(c.smoother, LevelSmoother::Fim(f) if f.variant == FimVariant::Fim2 && f.gamma2 == 5));
            }
            other => panic!("unexpected solver {other:?}"),
        }
    }
}
