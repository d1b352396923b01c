use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HjtsError, Result};
use crate::linalg::{CMatrix, C64, ZERO};

/// A classical Hermitian positive Jordan triple system, or a finite product
/// of them with componentwise triple product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum JtsKind {
    /// Rectangular `p×q` complex matrices.
    TypeI {
        p: usize,
        q: usize,
    },
    /// Antisymmetric `n×n` complex matrices.
    TypeII {
        n: usize,
    },
    /// Symmetric `n×n` complex matrices.
    TypeIII {
        n: usize,
    },
    /// Spin factor on `ℂⁿ`, `n ≥ 3`.
    TypeIV {
        n: usize,
    },
    Product(Vec<JtsKind>),
}

impl JtsKind {
    pub fn type_i(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(HjtsError::contract("type I needs p, q >= 1"));
        }
        Ok(Self::TypeI { p, q })
    }

    pub fn type_ii(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(HjtsError::contract("type II needs n >= 2"));
        }
        Ok(Self::TypeII { n })
    }

    pub fn type_iii(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HjtsError::contract("type III needs n >= 1"));
        }
        Ok(Self::TypeIII { n })
    }

    pub fn type_iv(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(HjtsError::contract("type IV needs n >= 3"));
        }
        Ok(Self::TypeIV { n })
    }

    /// Product of simple kinds; nested products are flattened.
    pub fn product(factors: Vec<JtsKind>) -> Result<Self> {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                Self::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.is_empty() {
            return Err(HjtsError::contract("empty product kind"));
        }
        Ok(Self::Product(flat))
    }

    pub fn is_simple(&self) -> bool {
        !matches!(self, Self::Product(_))
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            Self::TypeI { p, q } => p * q,
            Self::TypeII { n } => n * (n - 1) / 2,
            Self::TypeIII { n } => n * (n + 1) / 2,
            Self::TypeIV { n } => n,
            Self::Product(ref fs) => fs.iter().map(Self::ambient_dim).sum(),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Self::TypeI { p, q } => p.min(q),
            Self::TypeII { n } => n / 2,
            Self::TypeIII { n } => n,
            Self::TypeIV { .. } => 2,
            Self::Product(ref fs) => fs.iter().map(Self::rank).sum(),
        }
    }

    /// Simple factors with their coordinate ranges. A simple kind is its own
    /// single factor.
    pub fn factors(&self) -> Vec<(&JtsKind, Range<usize>)> {
        match self {
            Self::Product(fs) => {
                let mut off = 0;
                fs.iter()
                    .map(|f| {
                        let d = f.ambient_dim();
                        let r = off..off + d;
                        off += d;
                        (f, r)
                    })
                    .collect()
            }
            simple => vec![(simple, 0..simple.ambient_dim())],
        }
    }

    /// Matrix shape for the matrix families.
    pub(crate) fn matrix_shape(&self) -> Option<(usize, usize)> {
        match *self {
            Self::TypeI { p, q } => Some((p, q)),
            Self::TypeII { n } | Self::TypeIII { n } => Some((n, n)),
            _ => None,
        }
    }

    /// Matrix of a simple matrix-family element from its coordinates in the
    /// m₁-orthonormal basis.
    pub(crate) fn coords_to_matrix(&self, coords: &[C64]) -> CMatrix {
        match *self {
            Self::TypeI { p, q } => CMatrix::from_fn(p, q, |i, j| coords[i * q + j]),
            Self::TypeII { n } => {
                let mut m = CMatrix::zeros(n, n);
                for (k, (i, j)) in strict_pairs(n).enumerate() {
                    m[(i, j)] = coords[k];
                    m[(j, i)] = -coords[k];
                }
                m
            }
            Self::TypeIII { n } => {
                let mut m = CMatrix::zeros(n, n);
                for (k, (i, j)) in upper_pairs(n).enumerate() {
                    if i == j {
                        m[(i, i)] = coords[k];
                    } else {
                        let v = coords[k] * std::f64::consts::FRAC_1_SQRT_2;
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
                m
            }
            _ => panic!("coords_to_matrix on non-matrix kind {self}"),
        }
    }

    /// Inverse of [`coords_to_matrix`](Self::coords_to_matrix); for types
    /// II/III it projects onto the (anti)symmetric part.
    pub(crate) fn matrix_to_coords(&self, m: &CMatrix) -> Vec<C64> {
        match *self {
            Self::TypeI { .. } => m.as_slice().to_vec(),
            Self::TypeII { n } => strict_pairs(n).map(|(i, j)| (m[(i, j)] - m[(j, i)]) * 0.5).collect(),
            Self::TypeIII { n } => upper_pairs(n)
                .map(
                    |(i, j)| {
                        if i == j {
                            m[(i, i)]
                        } else {
                            (m[(i, j)] + m[(j, i)]) * std::f64::consts::FRAC_1_SQRT_2
                        }
                    },
                )
                .collect(),
            _ => panic!("matrix_to_coords on non-matrix kind {self}"),
        }
    }

    /// Coordinates of the standard frame of a simple kind: `rank` mutually
    /// orthogonal primitive tripotents.
    pub(crate) fn standard_frame(&self) -> Vec<Vec<C64>> {
        let d = self.ambient_dim();
        let unit = |k: usize| {
            let mut v = vec![ZERO; d];
            v[k] = C64::new(1.0, 0.0);
            v
        };
        match *self {
            Self::TypeI { q, .. } => (0..self.rank()).map(|j| unit(j * q + j)).collect(),
            Self::TypeII { n } => {
                (0..n / 2).map(|j| unit(strict_pairs(n).position(|pr| pr == (2 * j, 2 * j + 1)).unwrap())).collect()
            }
            Self::TypeIII { n } => (0..n).map(|j| unit(upper_pairs(n).position(|pr| pr == (j, j)).unwrap())).collect(),
            Self::TypeIV { .. } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let mut plus = vec![ZERO; d];
                plus[0] = C64::new(s, 0.0);
                plus[1] = C64::new(0.0, s);
                let minus = plus.iter().map(|z| z.conj()).collect();
                vec![plus, minus]
            }
            Self::Product(_) => panic!("standard_frame on a product kind"),
        }
    }
}

fn strict_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

impl fmt::Display for JtsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TypeI { p, q } => write!(f, "I:{p},{q}"),
            Self::TypeII { n } => write!(f, "II:{n}"),
            Self::TypeIII { n } => write!(f, "III:{n}"),
            Self::TypeIV { n } => write!(f, "IV:{n}"),
            Self::Product(fs) => {
                write!(f, "prod(")?;
                for (i, k) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Grammar: `I:p,q | II:n | III:n | IV:n | prod(K;K;...)`, case-sensitive,
/// no whitespace.
impl FromStr for JtsKind {
    type Err = HjtsError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HjtsError::Parse(format!("invalid kind '{s}'"));
        let count = |t: &str| -> Result<usize> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        if let Some(body) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(body).ok_or_else(bad)?;
            let factors = parts.into_iter().map(str::parse).collect::<Result<Vec<_>>>()?;
            return Self::product(factors).map_err(|e| HjtsError::Parse(e.to_string()));
        }
        let (tag, args) = s.split_once(':').ok_or_else(bad)?;
        let kind = match tag {
            "I" => {
                let (p, q) = args.split_once(',').ok_or_else(bad)?;
                Self::type_i(count(p)?, count(q)?)
            }
            "II" => Self::type_ii(count(args)?),
            "III" => Self::type_iii(count(args)?),
            "IV" => Self::type_iv(count(args)?),
            _ => return Err(bad()),
        };
        kind.map_err(|e| HjtsError::Parse(format!("'{s}': {e}")))
    }
}

/// Splits on `;` outside parentheses; `None` on unbalanced input or empty parts.
fn split_top_level(body: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ';' if depth == 0 => {
                parts.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    parts.push(&body[start..]);
    if parts.iter().any(|p| p.is_empty()) {
        return None;
    }
    Some(parts)
}

impl TryFrom<String> for JtsKind {
    type Error = HjtsError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<JtsKind> for String {
    fn from(k: JtsKind) -> String {
        k.to_string()
    }
}
