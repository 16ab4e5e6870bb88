//! The JSON problem file and its conversion into library values.

use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use padic_cauchy::exp_type::{default_window, DEFAULT_DEPTH};
use padic_cauchy::padic_arith::parse_rational;
use padic_cauchy::{
    AnalyticFunction, AnalyticSpace, DifferentialOperator, MatrixOperator, MultiIndex,
    PadicNumber, Prime, Vector,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_PRECISION: u32 = 32;
pub const DEFAULT_TRUNCATION: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ode,
    Pde,
    Analyze,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ode => "ode",
            Mode::Pde => "pde",
            Mode::Analyze => "analyze",
        })
    }
}

/// A rational written as a JSON integer or as an `"a/b"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    fn text(&self) -> String {
        match self {
            Num::Int(n) => n.to_string(),
            Num::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeTerm {
    pub beta: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_exponent: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<PdeTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
}

/// Scalar settings given on the command line; they override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prime: Option<u64>,
    pub precision: Option<u32>,
    pub depth: Option<usize>,
    pub epsilon: Option<String>,
    pub window: Option<usize>,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
    }

    /// Applies the overrides, fills defaults and checks the fields `mode` needs.
    pub fn resolve(mut self, mode: Mode, ov: &Overrides) -> Result<Self, CliError> {
        if let Some(m) = self.mode {
            if m != mode {
                return Err(input(format!("file is for mode {m}, not {mode}")));
            }
        }
        self.mode = Some(mode);
        self.prime = ov.prime.or(self.prime);
        self.precision = Some(ov.precision.or(self.precision).unwrap_or(DEFAULT_PRECISION));
        self.depth = Some(ov.depth.or(self.depth).unwrap_or(DEFAULT_DEPTH));
        let depth = self.depth.unwrap_or(DEFAULT_DEPTH);
        self.window = Some(ov.window.or(self.window).unwrap_or_else(|| default_window(depth)));
        if let Some(e) = &ov.epsilon {
            self.epsilon = Some(Num::Text(e.clone()));
        }
        if self.prime.is_none() {
            return Err(input("missing field `prime` (or --p)"));
        }
        match mode {
            Mode::Ode | Mode::Analyze => {
                if self.matrix.is_none() {
                    return Err(input("missing field `matrix`"));
                }
                if self.initial.is_none() {
                    return Err(input("missing field `initial`"));
                }
                if mode == Mode::Ode && self.epsilon.is_none() {
                    self.epsilon = Some(Num::Text("1/2".into()));
                }
            }
            Mode::Pde => {
                if self.variables.is_none() {
                    return Err(input("missing field `variables`"));
                }
                if self.phi.is_none() {
                    return Err(input("missing field `phi`"));
                }
                self.rho_exponent.get_or_insert(Num::Int(0));
                self.truncation_degree.get_or_insert(DEFAULT_TRUNCATION);
            }
        }
        let window = self.window.unwrap_or(1);
        if window == 0 || window > depth {
            return Err(input(format!("window {window} must lie in 1..={depth}")));
        }
        Ok(self)
    }

    pub fn prime(&self) -> Result<Prime, CliError> {
        Prime::new(self.prime.unwrap_or(0)).map_err(|e| input(e.to_string()))
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn depth(&self) -> usize {
        self.depth.unwrap_or(DEFAULT_DEPTH)
    }

    pub fn window(&self) -> usize {
        self.window.unwrap_or_else(|| default_window(self.depth()))
    }

    pub fn epsilon(&self) -> Result<BigRational, CliError> {
        let e = rational(self.epsilon.as_ref().unwrap_or(&Num::Text("1/2".into())))?;
        let zero = BigRational::from_integer(0.into());
        let one = BigRational::from_integer(1.into());
        if e <= zero || e >= one {
            return Err(input(format!("epsilon {e} is not in (0, 1)")));
        }
        Ok(e)
    }

    pub fn matrix(&self, prec: u32) -> Result<MatrixOperator, CliError> {
        let p = self.prime()?;
        let rows = self.matrix.as_ref().ok_or_else(|| input("missing field `matrix`"))?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|q| padic(q, p, prec)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        MatrixOperator::new(p, rows).map_err(|e| input(format!("matrix: {e}")))
    }

    pub fn initial(&self, prec: u32) -> Result<Vector, CliError> {
        let xs = self.initial.as_ref().ok_or_else(|| input("missing field `initial`"))?;
        self.vector(xs, prec)
    }

    pub fn vector(&self, xs: &[Num], prec: u32) -> Result<Vector, CliError> {
        let p = self.prime()?;
        let entries = xs.iter().map(|q| padic(q, p, prec)).collect::<Result<Vec<_>, _>>()?;
        Vector::new(p, entries).map_err(|e| input(format!("vector: {e}")))
    }

    pub fn points(&self, prec: u32) -> Result<Vec<PadicNumber>, CliError> {
        let p = self.prime()?;
        self.points.iter().map(|q| padic(q, p, prec)).collect()
    }

    pub fn space(&self) -> Result<AnalyticSpace, CliError> {
        let rho = rational(self.rho_exponent.as_ref().unwrap_or(&Num::Int(0)))?;
        AnalyticSpace::new(
            self.prime()?,
            self.variables.unwrap_or(0),
            rho,
            self.truncation_degree.unwrap_or(DEFAULT_TRUNCATION),
        )
        .map_err(|e| input(format!("space: {e}")))
    }

    pub fn differential_operator(
        &self,
        space: &AnalyticSpace,
        prec: u32,
    ) -> Result<DifferentialOperator, CliError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let a = AnalyticFunction::parse(&t.coefficient, space, prec)
                    .map_err(|e| input(format!("coefficient `{}`: {e}", t.coefficient)))?;
                Ok((MultiIndex::new(t.beta.clone()), a))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        DifferentialOperator::new(space, terms, self.max_order)
            .map_err(|e| input(format!("operator: {e}")))
    }

    pub fn phi(&self, space: &AnalyticSpace, prec: u32) -> Result<AnalyticFunction, CliError> {
        let s = self.phi.as_deref().ok_or_else(|| input("missing field `phi`"))?;
        AnalyticFunction::parse(s, space, prec).map_err(|e| input(format!("phi `{s}`: {e}")))
    }
}

fn rational(q: &Num) -> Result<BigRational, CliError> {
    let s = q.text();
    parse_rational(&s).map_err(|e| input(format!("`{s}`: {e}")))
}

fn padic(q: &Num, p: Prime, prec: u32) -> Result<PadicNumber, CliError> {
    PadicNumber::from_big_rational(&rational(q)?, p, prec)
        .map_err(|e| input(format!("`{}`: {e}", q.text())))
}
