use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{cyclotomic, cyclotomic_neg, neg_index, qint_indices};
use crate::polyring::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One factor `Phi_index(sign * q)^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModFactor {
    pub index: u64,
    pub sign: Sign,
    pub exponent: u32,
}

impl ModFactor {
    pub fn new(index: u64, sign: Sign, exponent: u32) -> Self {
        ModFactor {
            index,
            sign,
            exponent,
        }
    }

    /// Index `j` of the cyclotomic polynomial `Phi_j(q)` this factor is
    /// a power of, up to sign.
    pub fn irreducible(&self) -> u64 {
        match self.sign {
            Sign::Plus => self.index,
            Sign::Minus => neg_index(self.index),
        }
    }

    /// The factor with exponent omitted, e.g. `phi(5,-)`.
    pub fn base_label(&self) -> String {
        format!("phi({},{})", self.index, self.sign.symbol())
    }
}

impl fmt::Display for ModFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base_label())?;
        if self.exponent != 1 {
            write!(f, "^{}", self.exponent)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModulusError {
    #[error("cyclotomic index must be positive")]
    ZeroIndex,
    #[error("factor exponent must be positive")]
    ZeroExponent,
    #[error("modulus is constant")]
    Constant,
}

/// A congruence modulus `prod Phi_n(+-q)^e`, optionally times `[m]_q`,
/// kept both factored and expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    factors: Vec<ModFactor>,
    include_qint: Option<u64>,
    expanded: IntPoly,
    profile: BTreeMap<u64, u32>,
}

impl Modulus {
    pub fn new(factors: Vec<ModFactor>, include_qint: Option<u64>) -> Result<Self, ModulusError> {
        let mut expanded = IntPoly::one();
        let mut profile = BTreeMap::new();
        for f in &factors {
            if f.index == 0 {
                return Err(ModulusError::ZeroIndex);
            }
            if f.exponent == 0 {
                return Err(ModulusError::ZeroExponent);
            }
            let base = match f.sign {
                Sign::Plus => (*cyclotomic(f.index)).clone(),
                Sign::Minus => cyclotomic_neg(f.index),
            };
            expanded = &expanded * &base.pow(f.exponent);
            *profile.entry(f.irreducible()).or_insert(0) += f.exponent;
        }
        if let Some(m) = include_qint {
            if m == 0 {
                return Err(ModulusError::ZeroIndex);
            }
            for j in qint_indices(m) {
                expanded = &expanded * &*cyclotomic(j);
                *profile.entry(j).or_insert(0) += 1;
            }
        }
        Ok(Modulus {
            factors,
            include_qint,
            expanded,
            profile,
        })
    }

    pub fn factors(&self) -> &[ModFactor] {
        &self.factors
    }

    pub fn include_qint(&self) -> Option<u64> {
        self.include_qint
    }

    /// The monic expanded product.
    pub fn expanded(&self) -> &IntPoly {
        &self.expanded
    }

    pub fn degree(&self) -> usize {
        self.expanded.degree().unwrap_or(0)
    }

    /// Exponent of each irreducible `Phi_j(q)` in the modulus.
    pub fn profile(&self) -> &BTreeMap<u64, u32> {
        &self.profile
    }

    /// Human label for the irreducible `Phi_j(q)`, named after the first
    /// declared factor that produces it.
    pub fn label_for(&self, j: u64) -> String {
        self.factors
            .iter()
            .find(|f| f.irreducible() == j)
            .map(ModFactor::base_label)
            .unwrap_or_else(|| format!("phi({j},+)"))
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(m) = self.include_qint {
            parts.push(format!("[{m}]"));
        }
        parts.extend(self.factors.iter().map(ToString::to_string));
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join(" * "))
    }
}
