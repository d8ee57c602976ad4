//! Plain-text newform files: `label`, `weight`, `level`, `base-field` header lines
//! followed by `n a_n` rows.
//!
//! Over `Q(√d)` a row reads `n x y` for `a_n = x + y√d`.

use std::fmt;
use std::path::Path;

use acyc_core::exactnum::arith::is_prime;
use num_integer::gcd;

#[derive(Debug, thiserror::Error)]
pub enum NewformError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing header line `{0}`")]
    MissingHeader(&'static str),
    #[error("a_1 must be 1")]
    FirstCoefficient,
    #[error("line {line}: expected n = {expected}")]
    NotSequential { line: usize, expected: usize },
    #[error("a_{m}·a_{n} ≠ a_(mn) for m = {m}, n = {n}")]
    Multiplicativity { m: usize, n: usize },
    #[error("a_{0} violates the Weil bound")]
    WeilBound(usize),
    #[error("a_{p}² − p^(k−1) ≠ a_{{p²}} at p = {p}")]
    HeckeRecursion { p: usize },
    #[error("coefficients are not rational")]
    NotRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseField {
    Rational,
    /// `Q(√d)` for squarefree `d ≠ 1`.
    Quadratic(i64),
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => write!(f, "Q"),
            BaseField::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// `x + y√d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Coefficient {
    pub x: i64,
    pub y: i64,
}

impl Coefficient {
    fn mul(self, o: Coefficient, d: i64) -> Coefficient {
        Coefficient { x: self.x * o.x + d * self.y * o.y, y: self.x * o.y + self.y * o.x }
    }

    /// Both real embeddings (or the complex pair's absolute values).
    fn embeddings(self, d: i64) -> [f64; 2] {
        if d > 0 {
            let r = (d as f64).sqrt();
            [self.x as f64 + self.y as f64 * r, self.x as f64 - self.y as f64 * r]
        } else {
            let m = ((self.x * self.x) as f64 - (d * self.y * self.y) as f64).sqrt();
            [m, m]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformFile {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub base_field: BaseField,
    /// `coeffs[n − 1] = a_n`.
    pub coeffs: Vec<Coefficient>,
}

fn parse_field(s: &str, line: usize) -> Result<BaseField, NewformError> {
    if s == "Q" {
        return Ok(BaseField::Rational);
    }
    let inner = s
        .strip_prefix("Q(sqrt(")
        .and_then(|r| r.strip_suffix("))"))
        .ok_or_else(|| NewformError::Parse { line, msg: format!("unknown base field `{s}`") })?;
    let d: i64 = inner.parse().map_err(|_| NewformError::Parse { line, msg: format!("bad discriminant `{inner}`") })?;
    Ok(BaseField::Quadratic(d))
}

impl NewformFile {
    pub fn load(path: &Path) -> Result<Self, NewformError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| NewformError::Io { path: path.display().to_string(), source })?;
        text.parse()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `[0, a_1, a_2, …]` for forms with rational coefficients.
    pub fn rational(&self) -> Result<Vec<i64>, NewformError> {
        if self.base_field != BaseField::Rational {
            return Err(NewformError::NotRational);
        }
        Ok(std::iter::once(0).chain(self.coeffs.iter().map(|c| c.x)).collect())
    }

    fn d(&self) -> i64 {
        match self.base_field {
            BaseField::Rational => 0,
            BaseField::Quadratic(d) => d,
        }
    }

    fn a(&self, n: usize) -> Coefficient {
        self.coeffs[n - 1]
    }

    /// `a_1 = 1`, multiplicativity on coprime pairs, Hecke recursion at good primes and
    /// the Weil bound, all up to `limit`.
    pub fn validate(&self, limit: usize) -> Result<(), NewformError> {
        if self.coeffs.first() != Some(&Coefficient { x: 1, y: 0 }) {
            return Err(NewformError::FirstCoefficient);
        }
        let b = self.len().min(limit);
        let d = self.d();
        for m in 2..=b {
            for n in m + 1..=b / m {
                if gcd(m, n) == 1 && self.a(m).mul(self.a(n), d) != self.a(m * n) {
                    return Err(NewformError::Multiplicativity { m, n });
                }
            }
        }
        let k = self.weight as i32;
        for p in 2..=b {
            if !is_prime(p as u64) || self.level.is_multiple_of(p as u64) {
                continue;
            }
            let bound = 2.0 * (p as f64).powf((k - 1) as f64 / 2.0) * (1.0 + 1e-12);
            if self.a(p).embeddings(d).iter().any(|e| e.abs() > bound) {
                return Err(NewformError::WeilBound(p));
            }
            if p * p <= b {
                let sq = self.a(p).mul(self.a(p), d);
                let expect = Coefficient { x: sq.x - (p as i64).pow(k as u32 - 1), y: sq.y };
                if expect != self.a(p * p) {
                    return Err(NewformError::HeckeRecursion { p });
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for NewformFile {
    type Err = NewformError;

    fn from_str(text: &str) -> Result<Self, NewformError> {
        let (mut label, mut weight, mut level, mut field) = (None, None, None, None);
        let mut coeffs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let parts: Vec<&str> = body.split_whitespace().collect();
            let bad = |msg: &str| NewformError::Parse { line, msg: msg.to_string() };
            let num = |s: &str| s.parse::<i64>().map_err(|_| bad(&format!("not an integer: `{s}`")));
            match parts[0] {
                "label" => label = Some(parts[1..].join(" ")),
                "weight" => weight = Some(num(parts.get(1).ok_or_else(|| bad("missing weight"))?)? as u32),
                "level" => level = Some(num(parts.get(1).ok_or_else(|| bad("missing level"))?)? as u64),
                "base-field" => field = Some(parse_field(parts.get(1).ok_or_else(|| bad("missing field"))?, line)?),
                _ => {
                    let n = num(parts[0])?;
                    if n as usize != coeffs.len() + 1 {
                        return Err(NewformError::NotSequential { line, expected: coeffs.len() + 1 });
                    }
                    let x = num(parts.get(1).ok_or_else(|| bad("missing a_n"))?)?;
                    let y = match parts.get(2) {
                        Some(s) if field.is_some_and(|f| f != BaseField::Rational) => num(s)?,
                        Some(_) => return Err(bad("irrational part over Q")),
                        None => 0,
                    };
                    coeffs.push(Coefficient { x, y });
                }
            }
        }
        Ok(NewformFile {
            label: label.ok_or(NewformError::MissingHeader("label"))?,
            weight: weight.ok_or(NewformError::MissingHeader("weight"))?,
            level: level.ok_or(NewformError::MissingHeader("level"))?,
            base_field: field.ok_or(NewformError::MissingHeader("base-field"))?,
            coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "label 11a\nweight 2\nlevel 11\nbase-field Q\n1 1\n2 -2\n3 -1\n4 2\n5 1\n6 2\n";

    #[test]
    fn parses_header_and_rows() {
        let f: NewformFile = SMALL.parse().unwrap();
        assert_eq!(f.label, "11a");
        assert_eq!(f.level, 11);
        assert_eq!(f.rational().unwrap(), vec![0, 1, -2, -1, 2, 1, 2]);
        f.validate(6).unwrap();
    }

    #[test]
    fn rejects_broken_files() {
        let no_level = SMALL.replace("level 11\n", "");
        assert!(matches!(no_level.parse::<NewformFile>(), Err(NewformError::MissingHeader("level"))));
        let gap = SMALL.replace("3 -1\n", "");
        assert!(matches!(gap.parse::<NewformFile>(), Err(NewformError::NotSequential { expected: 3, .. })));
        let f: NewformFile = SMALL.replace("6 2\n", "6 3\n").parse().unwrap();
        assert!(matches!(f.validate(6), Err(NewformError::Multiplicativity { m: 2, n: 3 })));
        let f: NewformFile = SMALL.replace("2 -2\n", "2 -3\n").replace("6 2\n", "6 3\n").parse().unwrap();
        assert!(matches!(f.validate(6), Err(NewformError::WeilBound(2))));
        let f: NewformFile = SMALL.replace("4 2\n", "4 3\n").parse().unwrap();
        assert!(matches!(f.validate(6), Err(NewformError::HeckeRecursion { p: 2 })));
    }

    #[test]
    fn quadratic_coefficients() {
        // a_2 = √2 over Q(√2): a_4 = a_2² − 2 = 0
        let text = "label x\nweight 2\nlevel 7\nbase-field Q(sqrt(2))\n1 1 0\n2 0 1\n3 0 0\n4 0 0\n";
        let f: NewformFile = text.parse().unwrap();
        assert_eq!(f.base_field, BaseField::Quadratic(2));
        f.validate(4).unwrap();
        assert!(matches!(f.rational(), Err(NewformError::NotRational)));
    }
}
