//! Experiment configuration.
//!
//! A configuration is assembled from flat `key=value` settings (config file
//! first, command-line flags on top) and validated in one pass so every
//! problem is reported together.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::{self, BipartiteInstance, RoundSelection};
use crate::matroid::{self, WeightedMatroidInstance};
use crate::secretary::Policy;

pub const SEED_ENV: &str = "STOPPING_LAB_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Secretary,
    Matroid,
    Matching,
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Secretary => "secretary",
            Problem::Matroid => "matroid",
            Problem::Matching => "matching",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Instance generators, written `name:arg:arg...`.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// `uniform:N:RANK`
    Uniform { n: usize, rank: usize },
    /// `complete-graph:VERTICES`, the graphic matroid of K_v.
    CompleteGraph { vertices: usize },
    /// `graph:VERTICES:EDGES`
    Graph { vertices: usize, edges: usize },
    /// `transversal:LEFT:RIGHT[:DENSITY]`
    Transversal {
        left: usize,
        right: usize,
        density: f64,
    },
    /// `adversarial:M[:EPS]`
    Adversarial { m: usize, eps: Option<f64> },
    /// `complete-bipartite:LEFT:RIGHT`
    CompleteBipartite { left: usize, right: usize },
    /// `bipartite:LEFT:RIGHT:DENSITY`
    Bipartite {
        left: usize,
        right: usize,
        density: f64,
    },
}

impl GeneratorSpec {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let int = |i: usize| -> std::result::Result<usize, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("generator '{s}' is missing an argument"))?
                .parse()
                .map_err(|_| format!("bad integer in generator '{s}'"))
        };
        let real = |i: usize| -> std::result::Result<f64, String> {
            parts
                .get(i)
                .ok_or_else(|| format!("generator '{s}' is missing an argument"))?
                .parse()
                .map_err(|_| format!("bad number in generator '{s}'"))
        };
        let arity = |k: usize| {
            if parts.len() > k {
                Err(format!("too many arguments in generator '{s}'"))
            } else {
                Ok(())
            }
        };
        let spec = match parts[0] {
            "uniform" => GeneratorSpec::Uniform {
                n: int(1)?,
                rank: int(2)?,
            },
            "complete-graph" => GeneratorSpec::CompleteGraph { vertices: int(1)? },
            "graph" => GeneratorSpec::Graph {
                vertices: int(1)?,
                edges: int(2)?,
            },
            "transversal" => GeneratorSpec::Transversal {
                left: int(1)?,
                right: int(2)?,
                density: if parts.len() > 3 { real(3)? } else { 0.5 },
            },
            "adversarial" => GeneratorSpec::Adversarial {
                m: int(1)?,
                eps: if parts.len() > 2 {
                    Some(real(2)?)
                } else {
                    None
                },
            },
            "complete-bipartite" => GeneratorSpec::CompleteBipartite {
                left: int(1)?,
                right: int(2)?,
            },
            "bipartite" => GeneratorSpec::Bipartite {
                left: int(1)?,
                right: int(2)?,
                density: real(3)?,
            },
            other => return Err(format!("unknown generator '{other}'")),
        };
        let max_args = match spec {
            GeneratorSpec::CompleteGraph { .. } => 2,
            GeneratorSpec::Transversal { .. } | GeneratorSpec::Bipartite { .. } => 4,
            _ => 3,
        };
        arity(max_args)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Range checks on the generator arguments.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let density_ok = |d: f64| (0.0..=1.0).contains(&d);
        let ok = match *self {
            GeneratorSpec::Uniform { n, rank } => n >= 1 && (1..=n).contains(&rank),
            GeneratorSpec::CompleteGraph { vertices } => vertices >= 2,
            GeneratorSpec::Graph { vertices, edges } => {
                vertices >= 2 && (1..=vertices * (vertices - 1) / 2).contains(&edges)
            }
            GeneratorSpec::Transversal {
                left,
                right,
                density,
            } => left >= 1 && right >= 1 && density_ok(density),
            GeneratorSpec::Adversarial { m, eps } => {
                m >= 1 && eps.is_none_or(|e| e.is_finite() && e > 0.0 && 3.0 * e < 1.0)
            }
            GeneratorSpec::CompleteBipartite { left, right } => left >= 1 && right >= 1,
            GeneratorSpec::Bipartite {
                left,
                right,
                density,
            } => left >= 1 && right >= 1 && density_ok(density),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("generator arguments out of range: {self:?}"))
        }
    }

    pub fn problem(&self) -> Problem {
        match self {
            GeneratorSpec::CompleteBipartite { .. } | GeneratorSpec::Bipartite { .. } => {
                Problem::Matching
            }
            _ => Problem::Matroid,
        }
    }

    pub fn matroid<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<WeightedMatroidInstance> {
        Ok(match *self {
            GeneratorSpec::Uniform { n, rank } => matroid::random_uniform(n, rank, rng),
            GeneratorSpec::CompleteGraph { vertices } => {
                matroid::random_complete_graphic(vertices, rng)
            }
            GeneratorSpec::Graph { vertices, edges } => {
                matroid::random_graphic(vertices, edges, rng)
            }
            GeneratorSpec::Transversal {
                left,
                right,
                density,
            } => matroid::random_transversal(left, right, density, rng),
            GeneratorSpec::Adversarial { m, eps } => matroid::adversarial_instance(
                m,
                eps.unwrap_or_else(|| matroid::default_adversarial_eps(m)),
                rng.gen(),
            )?,
            _ => return Err(Error::InvalidArgument("not a matroid generator".into())),
        })
    }

    pub fn bipartite<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<BipartiteInstance> {
        Ok(match *self {
            GeneratorSpec::CompleteBipartite { left, right } => {
                matching::random_complete_bipartite(left, right, rng)
            }
            GeneratorSpec::Bipartite {
                left,
                right,
                density,
            } => matching::random_bipartite(left, right, density, rng),
            _ => return Err(Error::InvalidArgument("not a bipartite generator".into())),
        })
    }
}

impl std::fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorSpec::Uniform { n, rank } => write!(f, "uniform:{n}:{rank}"),
            GeneratorSpec::CompleteGraph { vertices } => write!(f, "complete-graph:{vertices}"),
            GeneratorSpec::Graph { vertices, edges } => write!(f, "graph:{vertices}:{edges}"),
            GeneratorSpec::Transversal {
                left,
                right,
                density,
            } => write!(f, "transversal:{left}:{right}:{density}"),
            GeneratorSpec::Adversarial { m, eps: None } => write!(f, "adversarial:{m}"),
            GeneratorSpec::Adversarial { m, eps: Some(e) } => write!(f, "adversarial:{m}:{e}"),
            GeneratorSpec::CompleteBipartite { left, right } => {
                write!(f, "complete-bipartite:{left}:{right}")
            }
            GeneratorSpec::Bipartite {
                left,
                right,
                density,
            } => write!(f, "bipartite:{left}:{right}:{density}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Generator(GeneratorSpec),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    /// Item count for secretary runs; taken from the instance otherwise.
    pub n: Option<usize>,
    pub k: usize,
    pub policy: Option<Policy>,
    pub instance: Option<InstanceSource>,
    /// Draw a fresh instance for every trial instead of one per run.
    pub resample: bool,
    pub rounds: RoundSelection,
    pub trials: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

pub const KNOWN_KEYS: [&str; 15] = [
    "problem",
    "n",
    "k",
    "policy",
    "f",
    "mu",
    "generator",
    "instance",
    "resample",
    "first_arrivals_only",
    "trials",
    "seed",
    "output",
    "format",
    "jobs",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_settings(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected key=value, got '{line}'"),
        })?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

impl ExperimentConfig {
    /// Builds and validates a configuration from flat settings.
    pub fn from_settings(settings: &BTreeMap<String, String>) -> Result<Self> {
        let mut errors: Vec<String> = Vec::new();
        for key in settings.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                errors.push(format!("unknown setting '{key}'"));
            }
        }
        let get = |k: &str| settings.get(k).map(String::as_str);
        fn num<T: std::str::FromStr>(
            v: Option<&str>,
            key: &str,
            errors: &mut Vec<String>,
        ) -> Option<T> {
            let v = v?;
            match v.parse() {
                Ok(x) => Some(x),
                Err(_) => {
                    errors.push(format!("{key}: cannot parse '{v}'"));
                    None
                }
            }
        }

        let problem = match get("problem").unwrap_or("secretary") {
            "secretary" => Problem::Secretary,
            "matroid" => Problem::Matroid,
            "matching" => Problem::Matching,
            other => {
                errors.push(format!(
                    "problem: unknown '{other}' (expected secretary, matroid or matching)"
                ));
                Problem::Secretary
            }
        };
        let n: Option<usize> = num(get("n"), "n", &mut errors);
        let k: usize = num(get("k"), "k", &mut errors).unwrap_or(2);
        let f: Option<usize> = num(get("f"), "f", &mut errors);
        let mu: Option<f64> = num(get("mu"), "mu", &mut errors);
        let trials: u64 = num(get("trials"), "trials", &mut errors).unwrap_or(10_000);
        let seed: u64 = match num(get("seed"), "seed", &mut errors) {
            Some(s) => s,
            None => match std::env::var(SEED_ENV) {
                Ok(v) => num(Some(v.as_str()), SEED_ENV, &mut errors).unwrap_or(0),
                Err(_) => 0,
            },
        };
        let jobs: Option<usize> = num(get("jobs"), "jobs", &mut errors);
        let mut flag = |key: &str| match get(key) {
            None => false,
            Some(v) => parse_bool(v).unwrap_or_else(|| {
                errors.push(format!("{key}: expected true or false, got '{v}'"));
                false
            }),
        };
        let resample = flag("resample");
        let first_only = flag("first_arrivals_only");
        let format = match get("format").unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                errors.push(format!("format: unknown '{other}' (expected csv or json)"));
                OutputFormat::Csv
            }
        };

        let policy = match get("policy") {
            None | Some("none") => None,
            Some("no-wait") => Some(Policy::NoWait),
            Some("threshold") => match f {
                Some(f_value) => Some(Policy::Threshold { f_value }),
                None => {
                    errors.push("policy threshold needs f".into());
                    None
                }
            },
            Some("time") => match mu {
                Some(mu) => Some(Policy::Time { mu }),
                None => {
                    errors.push("policy time needs mu".into());
                    None
                }
            },
            Some(other) => {
                errors.push(format!(
                    "policy: unknown '{other}' (expected no-wait, threshold, time or none)"
                ));
                None
            }
        };
        if f.is_some() && !matches!(policy, Some(Policy::Threshold { .. })) {
            errors.push("f is only meaningful with policy threshold".into());
        }
        if mu.is_some() && !matches!(policy, Some(Policy::Time { .. })) {
            errors.push("mu is only meaningful with policy time".into());
        }

        let instance = match (get("generator"), get("instance")) {
            (Some(_), Some(_)) => {
                errors.push("give either generator or instance, not both".into());
                None
            }
            (Some(g), None) => match GeneratorSpec::parse(g) {
                Ok(spec) => {
                    if spec.problem() != problem {
                        errors.push(format!(
                            "generator '{g}' does not produce {} instances",
                            problem.name()
                        ));
                    }
                    Some(InstanceSource::Generator(spec))
                }
                Err(e) => {
                    errors.push(e);
                    None
                }
            },
            (None, Some(path)) => Some(InstanceSource::File(PathBuf::from(path))),
            (None, None) => None,
        };

        if k == 0 {
            errors.push("k must be at least 1".into());
        }
        if trials == 0 {
            errors.push("trials must be at least 1".into());
        }
        if jobs == Some(0) {
            errors.push("jobs must be at least 1".into());
        }
        match problem {
            Problem::Secretary => {
                match n {
                    None => errors.push("secretary runs need n".into()),
                    Some(0) => errors.push("n must be at least 1".into()),
                    _ => {}
                }
                if instance.is_some() {
                    errors.push(
                        "instance and generator apply only to matroid and matching problems".into(),
                    );
                }
                if resample {
                    errors.push("resample applies only to matroid and matching problems".into());
                }
                if first_only {
                    errors.push("first_arrivals_only applies only to the matching problem".into());
                }
                match policy {
                    None => errors
                        .push("secretary runs need a policy (no-wait, threshold or time)".into()),
                    Some(Policy::Threshold { f_value }) => {
                        if k != 2 {
                            errors.push("threshold policy needs k = 2".into());
                        }
                        if n.is_some_and(|n| f_value > n) {
                            errors.push(format!("f = {f_value} exceeds n"));
                        }
                    }
                    Some(Policy::Time { mu }) => {
                        if k != 2 {
                            errors.push("time policy needs k = 2".into());
                        }
                        if !(0.0..1.0).contains(&mu) {
                            errors.push(format!("mu = {mu} outside [0, 1)"));
                        }
                    }
                    Some(Policy::NoWait) => {}
                }
            }
            Problem::Matroid | Problem::Matching => {
                if policy.is_some() {
                    errors.push(format!(
                        "policy applies only to the secretary problem, not {}",
                        problem.name()
                    ));
                }
                if k != 2 {
                    errors.push(format!("{} runs need k = 2", problem.name()));
                }
                if instance.is_none() {
                    errors.push(format!(
                        "{} runs need a generator or an instance file",
                        problem.name()
                    ));
                }
                if resample && matches!(instance, Some(InstanceSource::File(_))) {
                    errors.push("resample needs a generator".into());
                }
                if first_only && problem == Problem::Matroid {
                    errors.push("first_arrivals_only applies only to the matching problem".into());
                }
            }
        }

        if !errors.is_empty() {
            return Err(Error::InvalidConfig(errors));
        }
        Ok(Self {
            problem,
            n,
            k,
            policy,
            instance,
            resample,
            rounds: if first_only {
                RoundSelection::FirstArrivalsOnly
            } else {
                RoundSelection::AllArrivals
            },
            trials,
            seed,
            output: get("output").map(PathBuf::from),
            format,
            jobs,
        })
    }

    /// Convenience constructor for secretary experiments.
    pub fn secretary(n: usize, k: usize, policy: Policy, trials: u64, seed: u64) -> Self {
        Self {
            problem: Problem::Secretary,
            n: Some(n),
            k,
            policy: Some(policy),
            instance: None,
            resample: false,
            rounds: RoundSelection::AllArrivals,
            trials,
            seed,
            output: None,
            format: OutputFormat::Csv,
            jobs: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn parses_key_value_text() {
        let s =
            parse_settings("# comment\nproblem = secretary\nn=5\n\nfirst-arrivals-only = true\n")
                .unwrap();
        assert_eq!(s["n"], "5");
        assert_eq!(s["first_arrivals_only"], "true");
        assert!(parse_settings("no equals sign").is_err());
    }

    #[test]
    fn valid_secretary_config() {
        let c = ExperimentConfig::from_settings(&settings(&[
            ("n", "10"),
            ("policy", "time"),
            ("mu", "0.3"),
            ("seed", "4"),
        ]))
        .unwrap();
        assert_eq!(c.policy, Some(Policy::Time { mu: 0.3 }));
        assert_eq!(c.seed, 4);
        assert_eq!(c.k, 2);
    }

    #[test]
    fn all_problems_reported_together() {
        let err = ExperimentConfig::from_settings(&settings(&[
            ("policy", "threshold"),
            ("k", "3"),
            ("generator", "uniform:5:2"),
            ("format", "xml"),
            ("bogus", "1"),
        ]))
        .unwrap_err();
        let Error::InvalidConfig(list) = err else {
            panic!("expected aggregated error")
        };
        let joined = list.join("\n");
        for needle in [
            "unknown setting 'bogus'",
            "format",
            "needs f",
            "need n",
            "instance and generator",
        ] {
            assert!(joined.contains(needle), "missing '{needle}' in:\n{joined}");
        }
    }

    #[test]
    fn matroid_config_needs_instance_and_no_policy() {
        let err = ExperimentConfig::from_settings(&settings(&[
            ("problem", "matroid"),
            ("policy", "no-wait"),
        ]))
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("policy applies only"));
        assert!(msg.contains("generator or an instance"));
        let ok = ExperimentConfig::from_settings(&settings(&[
            ("problem", "matroid"),
            ("generator", "complete-graph:5"),
        ]))
        .unwrap();
        assert_eq!(
            ok.instance,
            Some(InstanceSource::Generator(GeneratorSpec::CompleteGraph {
                vertices: 5
            }))
        );
    }

    #[test]
    fn generator_specs() {
        assert_eq!(
            GeneratorSpec::parse("uniform:10:3").unwrap(),
            GeneratorSpec::Uniform { n: 10, rank: 3 }
        );
        assert_eq!(
            GeneratorSpec::parse("transversal:5:5").unwrap(),
            GeneratorSpec::Transversal {
                left: 5,
                right: 5,
                density: 0.5
            }
        );
        assert_eq!(
            GeneratorSpec::parse("adversarial:20:0.001").unwrap(),
            GeneratorSpec::Adversarial {
                m: 20,
                eps: Some(0.001)
            }
        );
        assert!(GeneratorSpec::parse("uniform:10").is_err());
        assert!(GeneratorSpec::parse("uniform:10:3:4").is_err());
        assert!(GeneratorSpec::parse("nope:1").is_err());
        assert!(GeneratorSpec::parse("uniform:3:4").is_err());
        assert!(GeneratorSpec::parse("bipartite:3:3:1.5").is_err());
        assert!(GeneratorSpec::parse("graph:4:7").is_err());
        assert_eq!(
            GeneratorSpec::parse("complete-bipartite:50:50")
                .unwrap()
                .problem(),
            Problem::Matching
        );
        for s in [
            "uniform:10:3",
            "transversal:5:5:0.5",
            "adversarial:20",
            "adversarial:20:0.001",
            "bipartite:4:6:0.25",
        ] {
            assert_eq!(GeneratorSpec::parse(s).unwrap().to_string(), s);
        }
    }
}
