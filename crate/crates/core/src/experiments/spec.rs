//! Experiment descriptions as read from JSON.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::constructions::build_split_host;
use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::hypergraph::Hypergraph;
use crate::pattern::Pattern;
use crate::random::MAX_KSETS;

/// A rational given either as text (`"1/3"`, `"0.25"`) or as a JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalInput {
    Text(String),
    Number(f64),
}

impl RationalInput {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RationalInput::Text(s) => parse_rational(s),
            RationalInput::Number(x) if x.is_finite() => parse_rational(&x.to_string()),
            RationalInput::Number(x) => Err(Error::InvalidParameter(format!("not a finite number: {x}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HostSpec {
    SplitHost { eta: RationalInput },
    Complete,
    File { path: PathBuf },
    None,
}

/// Geometric bisection for the per-seed threshold in `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectionSpec {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
}

fn default_iterations() -> usize {
    12
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub k: usize,
    /// khg file with the pattern; a single edge when absent.
    #[serde(default)]
    pub pattern: Option<PathBuf>,
    pub host: HostSpec,
    pub n: Vec<usize>,
    #[serde(default)]
    pub c: Option<Vec<RationalInput>>,
    #[serde(default)]
    pub p: Option<Vec<f64>>,
    pub seeds_per_cell: u64,
    #[serde(default)]
    pub seed_offset: u64,
    #[serde(default)]
    pub node_budget: Option<u64>,
    /// Output path prefix; `.csv` and `.svg` are appended.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub bisection: Option<BisectionSpec>,
    /// Record wall-clock time per trial; off by default so output is reproducible.
    #[serde(default)]
    pub timing: bool,
}

/// Values along the scanned axis.
#[derive(Clone, Debug, PartialEq)]
pub enum Axis {
    C(Vec<BigRational>),
    P(Vec<f64>),
}

impl Axis {
    pub fn len(&self) -> usize {
        match self {
            Axis::C(v) => v.len(),
            Axis::P(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Relative pattern and host paths resolve against `base`.
    pub fn pattern(&self, base: &Path) -> Result<Pattern> {
        match &self.pattern {
            None => Pattern::single_edge(self.k),
            Some(p) => {
                let text = std::fs::read_to_string(base.join(p))?;
                let pattern = Pattern::new(Hypergraph::parse_khg(&text)?)?;
                if pattern.k() != self.k {
                    return Err(Error::ShapeMismatch(format!("pattern is a {}-graph, spec says k = {}", pattern.k(), self.k)));
                }
                Ok(pattern)
            }
        }
    }

    pub fn axis(&self) -> Result<Axis> {
        match (&self.c, &self.p) {
            (Some(c), None) => Ok(Axis::C(c.iter().map(RationalInput::to_rational).collect::<Result<_>>()?)),
            (None, Some(p)) => {
                if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                    return Err(Error::InvalidParameter("p values must lie in [0, 1]".into()));
                }
                Ok(Axis::P(p.clone()))
            }
            _ => Err(Error::InvalidParameter("give exactly one of c and p".into())),
        }
    }

    /// Checks the desk guards without running anything.
    pub fn validate(&self) -> Result<()> {
        if self.seeds_per_cell == 0 {
            return Err(Error::InvalidParameter("seeds_per_cell must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(Error::InvalidParameter("empty n list".into()));
        }
        let axis = self.axis()?;
        if axis.is_empty() {
            return Err(Error::InvalidParameter("empty c or p list".into()));
        }
        if let Axis::C(cs) = &axis {
            if cs.iter().any(|c| *c < BigRational::from_integer(0.into())) {
                return Err(Error::InvalidParameter("c must be non-negative".into()));
            }
        }
        for &n in &self.n {
            if n < self.k || binomial(n, self.k) > MAX_KSETS {
                return Err(Error::GuardExceeded(format!("n = {n} with k = {} is outside the sampler guard", self.k)));
            }
        }
        if let Some(b) = &self.bisection {
            if !(b.lo > 0.0 && b.hi > b.lo && b.hi.is_finite()) {
                return Err(Error::InvalidParameter("bisection needs 0 < lo < hi".into()));
            }
        }
        Ok(())
    }

    /// The host graph on `n` vertices.
    pub fn host(&self, n: usize, base: &Path) -> Result<Hypergraph> {
        match &self.host {
            HostSpec::SplitHost { eta } => Ok(build_split_host(n, self.k, &eta.to_rational()?)?.graph),
            HostSpec::Complete => Hypergraph::complete(n, self.k),
            HostSpec::None => Hypergraph::empty(self.k, n),
            HostSpec::File { path } => {
                let g = Hypergraph::parse_khg(&std::fs::read_to_string(base.join(path))?)?;
                if g.n() != n || g.k() != self.k {
                    return Err(Error::ShapeMismatch(format!(
                        "host file has n = {}, k = {}; cell needs n = {n}, k = {}",
                        g.n(),
                        g.k(),
                        self.k
                    )));
                }
                Ok(g)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let spec = ExperimentSpec::from_json(
            r#"{"k": 3, "host": {"kind": "split-host", "eta": "1/3"}, "n": [9, 12],
                "c": ["1/10", 10], "seeds_per_cell": 4}"#,
        )
        .unwrap();
        spec.validate().unwrap();
        assert_eq!(
            spec.axis().unwrap(),
            Axis::C(vec![BigRational::new(1.into(), 10.into()), BigRational::from_integer(10.into())])
        );
        assert_eq!(spec.host(9, Path::new(".")).unwrap().min_degree(1).unwrap(), 28 - 10);
        let mut bad = spec.clone();
        bad.seeds_per_cell = 0;
        assert!(bad.validate().is_err());
        bad = spec.clone();
        bad.p = Some(vec![0.5]);
        assert!(bad.validate().is_err());
        bad = spec;
        bad.n = vec![1000];
        assert!(matches!(bad.validate(), Err(Error::GuardExceeded(_))));
        assert!(ExperimentSpec::from_json("{").is_err());
    }
}
