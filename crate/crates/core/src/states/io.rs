//! State files and compact family-spec strings.
//!
//! Spec strings:
//!
//! ```text
//! werner:0.75
//! bell:0.7,0.1,0.1,0.1
//! schmidt:0.25
//! ginibre:k=4,seed=7[,stream=3][,dims=2x2]
//! haar:seed=7[,stream=3][,dims=2x2]
//! separable:K=16,seed=7[,stream=3]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    bell_diagonal, ginibre_mixed, haar_pure, pure_with_schmidt, random_separable, werner, DensityMatrix,
    PureState, State, DEFAULT_SEPARABLE_TERMS,
};
use crate::error::{Error, Result};
use crate::linalg::Dims;
use crate::rng::SeedSpec;
use crate::{CMatrix, C64};

/// On-disk JSON form of a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Mixed {
        dims: [usize; 2],
        matrix: CMatrix,
    },
    Pure {
        dims: [usize; 2],
        amp_re: Vec<f64>,
        amp_im: Vec<f64>,
    },
}

impl StateFile {
    pub fn into_state(self) -> Result<State> {
        match self {
            StateFile::Mixed { dims, matrix } => {
                Ok(State::Mixed(DensityMatrix::validate(matrix, (dims[0], dims[1]))?))
            }
            StateFile::Pure { dims, amp_re, amp_im } => {
                if amp_re.len() != amp_im.len() {
                    return Err(Error::LengthMismatch { left: amp_re.len(), right: amp_im.len() });
                }
                let amp = amp_re.iter().zip(&amp_im).map(|(&r, &i)| C64::new(r, i)).collect();
                Ok(State::Pure(PureState::new((dims[0], dims[1]), amp)?))
            }
        }
    }

    pub fn from_state(state: &State) -> Self {
        match state {
            State::Mixed(m) => StateFile::Mixed { dims: [m.dims().0, m.dims().1], matrix: m.matrix().clone() },
            State::Pure(p) => StateFile::Pure {
                dims: [p.dims().0, p.dims().1],
                amp_re: p.amplitudes().iter().map(|z| z.re).collect(),
                amp_im: p.amplitudes().iter().map(|z| z.im).collect(),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))
    }
}

/// A named state family or sampler with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Werner(f64),
    BellDiagonal([f64; 4]),
    Schmidt(f64),
    Ginibre { dims: Dims, k: Option<usize>, seed: Option<u64>, stream: u64 },
    Haar { dims: Dims, seed: Option<u64>, stream: u64 },
    Separable { terms: usize, seed: Option<u64>, stream: u64 },
}

impl FamilySpec {
    pub fn is_random(&self) -> bool {
        matches!(self, Self::Ginibre { .. } | Self::Haar { .. } | Self::Separable { .. })
    }

    /// Fills in the seed (if unset) and sets the stream index of a sampler
    /// spec; deterministic families are returned unchanged.
    pub fn seeded(&self, default_seed: u64, stream_index: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Ginibre { seed, stream, .. } | Self::Haar { seed, stream, .. } | Self::Separable { seed, stream, .. } => {
                seed.get_or_insert(default_seed);
                *stream = stream_index;
            }
            _ => {}
        }
        out
    }

    /// Replaces the single real parameter of a one-parameter family.
    pub fn with_parameter(&self, x: f64) -> Result<Self> {
        match self {
            Self::Werner(_) => Ok(Self::Werner(x)),
            Self::Schmidt(_) => Ok(Self::Schmidt(x)),
            other => Err(Error::Domain(format!("family '{}' has no scan parameter", other.name()))),
        }
    }

    /// Parses a bare family name (`werner`, `schmidt`) for parameter scans.
    pub fn scan_family(name: &str) -> Result<Self> {
        match name.trim() {
            "werner" => Ok(Self::Werner(0.0)),
            "schmidt" => Ok(Self::Schmidt(0.0)),
            other => Err(Error::Parse(format!("unknown scan family '{other}' (expected werner or schmidt)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Werner(_) => "werner",
            Self::BellDiagonal(_) => "bell",
            Self::Schmidt(_) => "schmidt",
            Self::Ginibre { .. } => "ginibre",
            Self::Haar { .. } => "haar",
            Self::Separable { .. } => "separable",
        }
    }

    /// Name of the scan parameter column.
    pub fn parameter_name(&self) -> &'static str {
        match self {
            Self::Werner(_) => "F",
            Self::Schmidt(_) => "p",
            _ => "x",
        }
    }

    pub fn build(&self) -> Result<State> {
        let seed = |s: &Option<u64>, stream: u64| SeedSpec::new(s.unwrap_or(0), stream);
        Ok(match self {
            Self::Werner(f) => werner(*f)?.into(),
            Self::BellDiagonal(w) => bell_diagonal(*w)?.into(),
            Self::Schmidt(p) => pure_with_schmidt(*p)?.into(),
            Self::Ginibre { dims, k, seed: s, stream } => {
                ginibre_mixed(*dims, k.unwrap_or(dims.0 * dims.1), seed(s, *stream))?.into()
            }
            Self::Haar { dims, seed: s, stream } => haar_pure(*dims, seed(s, *stream))?.into(),
            Self::Separable { terms, seed: s, stream } => random_separable(*terms, seed(s, *stream))?.into(),
        })
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: '{s}' is not a number")))
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("{what}: '{s}' is not a nonnegative integer")))
}

fn parse_dims(s: &str) -> Result<Dims> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Parse(format!("dims '{s}' should look like 2x2")))?;
    Ok((parse_u64(a, "dims")? as usize, parse_u64(b, "dims")? as usize))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let name = name.trim();
        match name {
            "werner" => Ok(Self::Werner(parse_f64(args, "werner fidelity")?)),
            "schmidt" => Ok(Self::Schmidt(parse_f64(args, "Schmidt weight")?)),
            "bell" => {
                let vals: Vec<f64> = args.split(',').map(|x| parse_f64(x, "bell weight")).collect::<Result<_>>()?;
                let arr: [f64; 4] = vals
                    .try_into()
                    .map_err(|v: Vec<f64>| Error::Parse(format!("bell needs 4 weights, got {}", v.len())))?;
                Ok(Self::BellDiagonal(arr))
            }
            "ginibre" | "haar" | "separable" => {
                let mut dims = (2, 2);
                let mut k = None;
                let mut terms = DEFAULT_SEPARABLE_TERMS;
                let mut seed = None;
                let mut stream = 0;
                for kv in args.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                    let (key, val) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
                    match (name, key.trim()) {
                        ("ginibre", "k") => k = Some(parse_u64(val, "k")? as usize),
                        ("separable", "K") | ("separable", "k") => terms = parse_u64(val, "K")? as usize,
                        ("ginibre" | "haar", "dims") => dims = parse_dims(val)?,
                        (_, "seed") => seed = Some(parse_u64(val, "seed")?),
                        (_, "stream") => stream = parse_u64(val, "stream")?,
                        (_, other) => return Err(Error::Parse(format!("unknown {name} parameter '{other}'"))),
                    }
                }
                Ok(match name {
                    "ginibre" => Self::Ginibre { dims, k, seed, stream },
                    "haar" => Self::Haar { dims, seed, stream },
                    _ => Self::Separable { terms, seed, stream },
                })
            }
            other => Err(Error::Parse(format!(
                "unknown state family '{other}' (expected werner, bell, schmidt, ginibre, haar, separable)"
            ))),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = |f: &mut fmt::Formatter<'_>, seed: &Option<u64>, stream: u64| -> fmt::Result {
            if let Some(s) = seed {
                write!(f, ",seed={s}")?;
            }
            if stream != 0 {
                write!(f, ",stream={stream}")?;
            }
            Ok(())
        };
        match self {
            Self::Werner(x) => write!(f, "werner:{x:?}"),
            Self::Schmidt(x) => write!(f, "schmidt:{x:?}"),
            Self::BellDiagonal(w) => write!(f, "bell:{:?},{:?},{:?},{:?}", w[0], w[1], w[2], w[3]),
            Self::Ginibre { dims, k, seed, stream } => {
                write!(f, "ginibre:k={}", k.unwrap_or(dims.0 * dims.1))?;
                if *dims != (2, 2) {
                    write!(f, ",dims={}x{}", dims.0, dims.1)?;
                }
                tail(f, seed, *stream)
            }
            Self::Haar { dims, seed, stream } => {
                write!(f, "haar:dims={}x{}", dims.0, dims.1)?;
                tail(f, seed, *stream)
            }
            Self::Separable { terms, seed, stream } => {
                write!(f, "separable:K={terms}")?;
                tail(f, seed, *stream)
            }
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_forms() {
        assert_eq!("werner:0.75".parse::<FamilySpec>().unwrap(), FamilySpec::Werner(0.75));
        assert_eq!(
            "bell:0.7,0.1,0.1,0.1".parse::<FamilySpec>().unwrap(),
            FamilySpec::BellDiagonal([0.7, 0.1, 0.1, 0.1])
        );
        assert_eq!(
            "ginibre:k=4,seed=7".parse::<FamilySpec>().unwrap(),
            FamilySpec::Ginibre { dims: (2, 2), k: Some(4), seed: Some(7), stream: 0 }
        );
        assert!("ginibre:q=4".parse::<FamilySpec>().is_err());
        assert!("bell:0.5,0.5".parse::<FamilySpec>().is_err());
        assert!("nonsense:1".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["werner:0.75", "schmidt:0.046571491762095", "ginibre:k=4,seed=7,stream=12", "separable:K=16,seed=3", "haar:dims=2x3,seed=1"] {
            let spec: FamilySpec = s.parse().unwrap();
            let again: FamilySpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, again);
        }
    }

    #[test]
    fn seeded_specs_reproduce_states() {
        let base: FamilySpec = "ginibre:k=4".parse().unwrap();
        let a = base.seeded(7, 5).build().unwrap();
        let b = base.seeded(7, 5).to_string().parse::<FamilySpec>().unwrap().build().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn state_file_json() {
        let pure = r#"{"dims":[2,2],"amp_re":[0.7071067811865476,0,0,0.7071067811865476],"amp_im":[0,0,0,0]}"#;
        let st = StateFile::from_json(pure).unwrap().into_state().unwrap();
        assert!(st.is_pure());

        let rho = werner(0.75).unwrap();
        let file = StateFile::from_state(&State::Mixed(rho.clone()));
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.starts_with(r#"{"dims":[2,2],"matrix":{"rows":4"#));
        let back = StateFile::from_json(&text).unwrap().into_state().unwrap();
        assert_eq!(back, State::Mixed(rho));
    }

    #[test]
    fn malformed_state_file_is_parse_error() {
        assert!(matches!(StateFile::from_json("{\"dims\":[2,2]"), Err(Error::Parse(_))));
        assert!(matches!(StateFile::from_json(r#"{"dims":[2,2],"bogus":1}"#), Err(Error::Parse(_))));
    }
}
