//! Flat `key = value` configuration with `#` comments.

use anyhow::{anyhow, bail, Context, Result};
use m1plus::exact::Rational;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "M1PLUS_CACHE_DIR";

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub hcomm_r: u32,
    pub hcomm_range: i64,
    pub max_weight: u32,
    pub momenta: Vec<Rational>,
    pub mutual_r: u32,
    pub commutator_range: i64,
    pub commutator_max_weight: u32,
    pub samples: usize,
    pub seed: u64,
    pub zhu_cutoff: u32,
    pub idempotent_cutoff: u32,
    pub lambdas: Vec<Rational>,
    pub k: Vec<u32>,
    pub ext_c: Vec<Rational>,
    pub ext_degree: u32,
    pub gap_bound: u32,
}

impl Default for Config {
    fn default() -> Self {
        let q = |s: &str| parse_rational(s).expect("literal");
        Config {
            cache_dir: PathBuf::from(".m1plus-cache"),
            out_dir: PathBuf::from("reports"),
            workers: 0,
            hcomm_r: 4,
            hcomm_range: 4,
            max_weight: 8,
            momenta: vec![q("0"), q("3/2")],
            mutual_r: 3,
            commutator_range: 4,
            commutator_max_weight: 6,
            samples: 200,
            seed: 1729,
            zhu_cutoff: 14,
            idempotent_cutoff: 16,
            lambdas: vec![q("1"), q("3/2"), q("1/2")],
            k: vec![1, 2, 3],
            ext_c: vec![q("0"), q("1"), q("2"), q("1/2")],
            ext_degree: 4,
            gap_bound: 200,
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    m1plus::exact::parse_rational(s.trim()).map_err(|e| anyhow!("{s:?} is not a rational number: {e}"))
}

fn list<T>(value: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| anyhow!("{key}: {e}"))
}

impl Config {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "cache_dir" => self.cache_dir = PathBuf::from(value),
            "out_dir" => self.out_dir = PathBuf::from(value),
            "workers" => self.workers = num(key, value)?,
            "hcomm_r" => self.hcomm_r = num(key, value)?,
            "hcomm_range" => self.hcomm_range = num(key, value)?,
            "max_weight" => self.max_weight = num(key, value)?,
            "momenta" => self.momenta = list(value, parse_rational)?,
            "mutual_r" => self.mutual_r = num(key, value)?,
            "commutator_range" => self.commutator_range = num(key, value)?,
            "commutator_max_weight" => self.commutator_max_weight = num(key, value)?,
            "samples" => self.samples = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "zhu_cutoff" => self.zhu_cutoff = num(key, value)?,
            "idempotent_cutoff" => self.idempotent_cutoff = num(key, value)?,
            "lambdas" => self.lambdas = list(value, parse_rational)?,
            "k" => self.k = list(value, |s| num("k", s))?,
            "ext_c" => self.ext_c = list(value, parse_rational)?,
            "ext_degree" => self.ext_degree = num(key, value)?,
            "gap_bound" => self.gap_bound = num(key, value)?,
            _ => bail!("unknown configuration key {key:?}"),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            cfg.set(key.trim(), value.trim()).with_context(|| format!("line {}", i + 1))?;
        }
        Ok(cfg)
    }

    /// Defaults, then the file if given, then the cache directory from the
    /// environment.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Config::parse(&text)?
            }
            None => Config::default(),
        };
        if let Ok(dir) = std::env::var(CACHE_ENV) {
            if !dir.is_empty() {
                cfg.cache_dir = PathBuf::from(dir);
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_comments() {
        let cfg = Config::parse("# cutoffs\nzhu_cutoff = 12\nlambdas = 1, 2/3 # two\nk=2\n").unwrap();
        assert_eq!(cfg.zhu_cutoff, 12);
        assert_eq!(cfg.lambdas, vec![parse_rational("1").unwrap(), parse_rational("2/3").unwrap()]);
        assert_eq!(cfg.k, vec![2]);
        assert_eq!(cfg.seed, Config::default().seed);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("nonsense").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("seed = -1").is_err());
    }
}
