use std::collections::BTreeMap;

use ramspace::gf::EchelonMatrix;
use ramspace::spaces::{Ellentuck, MatrixSpace, PartitionApprox, PartitionSpace};
use ramspace::Space;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SpaceKind {
    Ellentuck,
    Matrix,
    Partition,
}

/// A space with its truncation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceSpec {
    Ellentuck { ground: u32 },
    Matrix { q: u8, max_cols: usize },
    Partition { domain: usize },
}

/// Runs generic code against whichever space a [`SpaceSpec`] names. `top`
/// is the largest stem of the truncation.
pub trait WithSpace {
    type Out;
    fn run<S: Space>(self, space: &S, top: S::Approx) -> Result<Self::Out, Failure>;
}

impl SpaceSpec {
    pub fn visit<V: WithSpace>(self, v: V) -> Result<V::Out, Failure> {
        match self {
            SpaceSpec::Ellentuck { ground } => {
                let sp = Ellentuck::new(ground)?;
                let top = sp.full();
                v.run(&sp, top)
            }
            SpaceSpec::Matrix { q, max_cols } => {
                let sp = MatrixSpace::new(q, max_cols)?;
                v.run(&sp, EchelonMatrix::identity(q, max_cols))
            }
            SpaceSpec::Partition { domain } => {
                let sp = PartitionSpace::new(domain)?;
                let finest: Vec<usize> = (0..domain).collect();
                v.run(&sp, PartitionApprox::from_labels(&finest))
            }
        }
    }

    /// Reads `space=…` plus that space's parameters from `key=value` pairs.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, Failure> {
        let get = |key: &str| -> Result<&str, Failure> {
            pairs.get(key).map(String::as_str).ok_or_else(|| Failure::usage(format!("missing {key}=")))
        };
        let num = |key: &str| -> Result<usize, Failure> {
            get(key)?.parse().map_err(|_| Failure::usage(format!("{key} must be a natural number")))
        };
        match get("space")? {
            "ellentuck" => Ok(SpaceSpec::Ellentuck { ground: narrow(num("ground")?, "ground")? }),
            "matrix" => Ok(SpaceSpec::Matrix { q: narrow(num("q")?, "q")?, max_cols: num("max_cols")? }),
            "partition" => Ok(SpaceSpec::Partition { domain: num("domain")? }),
            other => Err(Failure::usage(format!("unknown space {other:?}"))),
        }
    }
}

fn narrow<T: TryFrom<usize>>(v: usize, key: &str) -> Result<T, Failure> {
    T::try_from(v).map_err(|_| Failure::usage(format!("{key}={v} is too large")))
}

/// Splits `key=value` words.
pub fn pairs(words: &str) -> Result<BTreeMap<String, String>, Failure> {
    words
        .split_whitespace()
        .map(|w| {
            w.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Failure::usage(format!("expected key=value, got {w:?}")))
        })
        .collect()
}

/// A family file: a `# key=value …` header naming the space and the length
/// bound, then one approximation per line. Blank lines and further `#`
/// lines are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFile {
    pub space: SpaceSpec,
    pub length_bound: usize,
    pub members: Vec<String>,
}

impl FamilyFile {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .ok_or_else(|| Failure::usage("family file must start with a '# space=…' header"))?;
        let pairs = pairs(header)?;
        let space = SpaceSpec::from_pairs(&pairs)?;
        let length_bound = pairs
            .get("length_bound")
            .ok_or_else(|| Failure::usage("family header is missing length_bound="))?
            .parse()
            .map_err(|_| Failure::usage("length_bound must be a natural number"))?;
        let members = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect();
        Ok(FamilyFile { space, length_bound, members })
    }
}
