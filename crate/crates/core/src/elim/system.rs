//! Polynomial systems with an elimination trail.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ElimError;
use crate::exactpoly::{parse_int_poly, parse_ratfunc, MPoly, RatFunc, Vars};
use crate::ring::Integers;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    LinearSubst,
    Resultant,
}

/// One recorded elimination. Polynomials stored here live over `vars`, the
/// variable list of the system just before the step.
#[derive(Clone, Debug, PartialEq)]
pub struct EliminationStep {
    pub kind: StepKind,
    pub var: String,
    pub vars: Vars,
    /// `var = expr` for linear substitutions.
    pub expr: Option<RatFunc>,
    /// The pivot of a resultant step.
    pub pivot: Option<MPoly<Integers>>,
    /// Equations the pivot was paired with; the eliminated variable is a
    /// common root of the pivot and these.
    pub partners: Vec<MPoly<Integers>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElimWarning {
    /// A resultant vanished identically: the pivot shares a factor with an
    /// equation, so the solution set has a positive-dimensional branch there.
    PositiveDimensional { var: String, equation: usize, common_factor: String },
}

impl fmt::Display for ElimWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElimWarning::PositiveDimensional { var, equation, common_factor } => write!(
                f,
                "resultant in {var} with equation {equation} vanished identically (common factor {common_factor})"
            ),
        }
    }
}

/// Equations over the integers, each content-stripped and nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    vars: Vars,
    eqs: Vec<MPoly<Integers>>,
    pub trail: Vec<EliminationStep>,
    pub warnings: Vec<ElimWarning>,
}

/// Primitive part with positive leading coefficient, or `None` for zero.
pub(crate) fn normalize_eq(p: MPoly<Integers>) -> Option<MPoly<Integers>> {
    if p.is_zero() {
        None
    } else {
        Some(p.content_primitive().1)
    }
}

impl PolySystem {
    pub fn new(vars: Vars, eqs: Vec<MPoly<Integers>>) -> Result<Self, ElimError> {
        let mut out = Vec::with_capacity(eqs.len());
        for e in eqs {
            let e = e.embed(&vars)?;
            out.extend(normalize_eq(e));
        }
        Ok(PolySystem { vars, eqs: out, trail: Vec::new(), warnings: Vec::new() })
    }

    pub(crate) fn from_parts(
        vars: Vars,
        eqs: Vec<MPoly<Integers>>,
        trail: Vec<EliminationStep>,
        warnings: Vec<ElimWarning>,
    ) -> Self {
        PolySystem { vars, eqs, trail, warnings }
    }

    pub fn parse(var_names: &[&str], eqs: &[&str]) -> Result<Self, ElimError> {
        let vars = Vars::new(var_names);
        let polys = eqs.iter().map(|s| parse_int_poly(s, &vars)).collect::<Result<Vec<_>, _>>()?;
        Self::new(vars, polys)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn eqs(&self) -> &[MPoly<Integers>] {
        &self.eqs
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn total_terms(&self) -> usize {
        self.eqs.iter().map(|e| e.len()).sum()
    }

    /// Same equations and trail over a new variable list; variables that
    /// still occur must be present in it.
    pub fn with_vars(&self, vars: Vars) -> Result<Self, ElimError> {
        let eqs = self.eqs.iter().map(|e| e.embed(&vars)).collect::<Result<Vec<_>, _>>()?;
        Ok(PolySystem { vars, eqs, trail: self.trail.clone(), warnings: self.warnings.clone() })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SystemJson::from(self)).expect("plain data serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&SystemJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, ElimError> {
        let j: SystemJson = serde_json::from_str(s).map_err(|e| ElimError::Format(e.to_string()))?;
        j.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    kind: StepKind,
    var: String,
    vars: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pivot: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    partners: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    vars: Vec<String>,
    eqs: Vec<String>,
    #[serde(default)]
    trail: Vec<StepJson>,
    #[serde(default)]
    warnings: Vec<ElimWarning>,
}

impl From<&PolySystem> for SystemJson {
    fn from(s: &PolySystem) -> Self {
        SystemJson {
            vars: s.vars.names().to_vec(),
            eqs: s.eqs.iter().map(|e| e.to_string()).collect(),
            trail: s
                .trail
                .iter()
                .map(|st| StepJson {
                    kind: st.kind,
                    var: st.var.clone(),
                    vars: st.vars.names().to_vec(),
                    expr: st.expr.as_ref().map(|e| e.to_string()),
                    pivot: st.pivot.as_ref().map(|p| p.to_string()),
                    partners: st.partners.iter().map(|p| p.to_string()).collect(),
                })
                .collect(),
            warnings: s.warnings.clone(),
        }
    }
}

impl TryFrom<SystemJson> for PolySystem {
    type Error = ElimError;

    fn try_from(j: SystemJson) -> Result<Self, ElimError> {
        let vars = Vars::new(&j.vars);
        let eqs = j.eqs.iter().map(|s| parse_int_poly(s, &vars)).collect::<Result<Vec<_>, _>>()?;
        let mut trail = Vec::with_capacity(j.trail.len());
        for st in j.trail {
            let sv = Vars::new(&st.vars);
            trail.push(EliminationStep {
                kind: st.kind,
                var: st.var,
                expr: st.expr.map(|e| parse_ratfunc(&e, &sv)).transpose()?,
                pivot: st.pivot.map(|p| parse_int_poly(&p, &sv)).transpose()?,
                partners: st.partners.iter().map(|p| parse_int_poly(p, &sv)).collect::<Result<_, _>>()?,
                vars: sv,
            });
        }
        Ok(PolySystem { vars, eqs, trail, warnings: j.warnings })
    }
}
