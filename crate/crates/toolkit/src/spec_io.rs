//! JSON documents for subequations, `f` and `g`.
//!
//! ```json
//! {"kind": "mg", "dim": 2, "params": {"g": {"kind": "neg-power", "coeff": 1, "exponent": 0.5}}}
//! {"kind": "minmax-f", "dim": 3, "params": {"f": {"kind": "sqrt"}}}
//! {"kind": "dual", "dim": 3, "params": {"inner": {"kind": "pos", "dim": 3}}}
//! ```
//!
//! Tabulated `g` is written `{"x": [...], "g": [...]}`; tabulated `f` is
//! `{"kind": "table", "xs": [...], "ys": [...]}`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use smp_core::functions::{GBase, GFunction, IncreasingFn};
use smp_core::subequation::{Kind, SubequationSpec};

use crate::ToolError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub kind: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
}

fn input(msg: impl Into<String>) -> ToolError {
    ToolError::Input(msg.into())
}

fn num(params: &Map<String, Value>, key: &str) -> Result<f64, ToolError> {
    params.get(key).and_then(Value::as_f64).ok_or_else(|| input(format!("missing numeric parameter '{key}'")))
}

fn count(params: &Map<String, Value>, key: &str) -> Result<usize, ToolError> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| input(format!("missing integer parameter '{key}'")))
}

fn field<'a>(params: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ToolError> {
    params.get(key).ok_or_else(|| input(format!("missing parameter '{key}'")))
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self, ToolError> {
        serde_json::from_str(text).map_err(|e| input(format!("spec document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents serialize")
    }

    pub fn to_spec(&self) -> Result<SubequationSpec, ToolError> {
        let p = &self.params;
        let kind = match self.kind.as_str() {
            "pos" => Kind::Pos,
            "subaffine" => Kind::Subaffine,
            "minmax-cone" => Kind::MinMaxCone { alpha: num(p, "alpha")? },
            "pucci" => Kind::Pucci { lambda: num(p, "lambda")?, big_lambda: num(p, "big_lambda")? },
            "p-delta" => Kind::PDelta { delta: num(p, "delta")? },
            "sigma-psi-k" => Kind::SigmaPsiK { exponent: num(p, "a")?, k: count(p, "k")? },
            "minmax-f" => Kind::MinMaxF { f: f_from_value(field(p, "f")?)? },
            "min-two-f" => Kind::MinTwoF { f: f_from_value(field(p, "f")?)? },
            "mg" => Kind::Mg { g: g_from_value(field(p, "g")?)? },
            "dual" => {
                let inner: SpecDocument = serde_json::from_value(field(p, "inner")?.clone())
                    .map_err(|e| input(format!("dual inner spec: {e}")))?;
                if inner.dim != self.dim {
                    return Err(input("dual inner spec must have the same dim"));
                }
                return Ok(inner.to_spec()?.dual());
            }
            "halfspace" => Kind::HalfSpace { c: num(p, "c")? },
            "diagonal-entry" => Kind::DiagonalEntry { index: count(p, "index")? },
            "trace-hyperplane" => Kind::TraceHyperplane { tol: p.get("tol").and_then(Value::as_f64).unwrap_or(1e-9) },
            other => return Err(input(format!("unknown subequation kind '{other}'"))),
        };
        let spec = SubequationSpec::new(kind, self.dim)?;
        Ok(match p.get("slack").and_then(Value::as_f64) {
            Some(eps) => spec.with_slack(eps),
            None => spec,
        })
    }

    pub fn from_spec(spec: &SubequationSpec) -> Self {
        let mut params = Map::new();
        let mut put = |k: &str, v: Value| {
            params.insert(k.into(), v);
        };
        let kind = match spec.kind() {
            Kind::Pos => "pos",
            Kind::Subaffine => "subaffine",
            Kind::MinMaxCone { alpha } => {
                put("alpha", json!(alpha));
                "minmax-cone"
            }
            Kind::Pucci { lambda, big_lambda } => {
                put("lambda", json!(lambda));
                put("big_lambda", json!(big_lambda));
                "pucci"
            }
            Kind::PDelta { delta } => {
                put("delta", json!(delta));
                "p-delta"
            }
            Kind::SigmaPsiK { exponent, k } => {
                put("a", json!(exponent));
                put("k", json!(k));
                "sigma-psi-k"
            }
            Kind::MinMaxF { f } => {
                put("f", f_to_value(f));
                "minmax-f"
            }
            Kind::MinTwoF { f } => {
                put("f", f_to_value(f));
                "min-two-f"
            }
            Kind::Mg { g } => {
                put("g", g_to_value(g));
                "mg"
            }
            Kind::Dual { inner } => {
                put("inner", serde_json::to_value(SpecDocument::from_spec(inner)).expect("serializable"));
                "dual"
            }
            Kind::HalfSpace { c } => {
                put("c", json!(c));
                "halfspace"
            }
            Kind::DiagonalEntry { index } => {
                put("index", json!(index));
                "diagonal-entry"
            }
            Kind::TraceHyperplane { tol } => {
                put("tol", json!(tol));
                "trace-hyperplane"
            }
        };
        if spec.slack() != 0.0 {
            params.insert("slack".into(), json!(spec.slack()));
        }
        SpecDocument { kind: kind.into(), dim: spec.dim(), params }
    }
}

/// Accepts the shorthands `sqrt`, `identity` and `hopf` (with `beta`) besides
/// the serialized forms `zero`, `linear`, `power`, `log-linear`, `table`.
pub fn f_from_value(v: &Value) -> Result<IncreasingFn, ToolError> {
    let obj = v.as_object().ok_or_else(|| input("f must be a JSON object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| input("f needs a 'kind'"))?;
    let f = match kind {
        "sqrt" => IncreasingFn::sqrt(),
        "identity" => IncreasingFn::identity(),
        "hopf" => IncreasingFn::hopf(num(obj, "beta")?),
        _ => serde_json::from_value(v.clone()).map_err(|e| input(format!("f: {e}")))?,
    };
    f.validate()?;
    Ok(f)
}

pub fn f_to_value(f: &IncreasingFn) -> Value {
    serde_json::to_value(f).expect("increasing functions serialize")
}

/// Closed forms `neg-sqrt`, `neg-power` (`coeff`, `exponent`), `neg-rational`,
/// `log-family` (`alpha`, `lambda_end`), or a table `{"x": [...], "g": [...]}`.
/// Optional `a` restricts the base interval; `extended` selects the
/// subadditive shift continuation.
pub fn g_from_value(v: &Value) -> Result<GFunction, ToolError> {
    let obj = v.as_object().ok_or_else(|| input("g must be a JSON object"))?;
    let extended = obj.get("extended").and_then(Value::as_bool);
    let g = if let (Some(x), Some(gs)) = (obj.get("x"), obj.get("g")) {
        let xs: Vec<f64> = serde_json::from_value(x.clone()).map_err(|e| input(format!("g.x: {e}")))?;
        let gs: Vec<f64> = serde_json::from_value(gs.clone()).map_err(|e| input(format!("g.g: {e}")))?;
        GFunction::table(xs, gs, extended.unwrap_or(false))?
    } else {
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| input("g needs a 'kind' or x/g columns"))?;
        match kind {
            "neg-sqrt" => GFunction::neg_sqrt(),
            "neg-power" => GFunction::neg_power(num(obj, "coeff")?, num(obj, "exponent")?),
            "neg-rational" => GFunction::neg_rational(),
            "log-family" => GFunction::log_family(num(obj, "alpha")?, num(obj, "lambda_end")?)?,
            other => return Err(input(format!("unknown g kind '{other}'"))),
        }
    };
    let g = match obj.get("a").and_then(Value::as_f64) {
        Some(a) => g.clone().with_domain(a, extended.unwrap_or(g.extended))?,
        None => match extended {
            Some(e) if g.domain_end.is_finite() => g.clone().with_domain(g.domain_end, e)?,
            _ => g,
        },
    };
    g.audit()?;
    Ok(g)
}

pub fn g_to_value(g: &GFunction) -> Value {
    let mut v = match &g.base {
        GBase::NegPower { coeff, exponent } => json!({"kind": "neg-power", "coeff": coeff, "exponent": exponent}),
        GBase::NegRational => json!({"kind": "neg-rational"}),
        GBase::LogFamily { alpha, lambda_end } => {
            json!({"kind": "log-family", "alpha": alpha, "lambda_end": lambda_end})
        }
        GBase::Table(t) => json!({"x": t.xs, "g": t.ys}),
    };
    let obj = v.as_object_mut().expect("object");
    if g.domain_end.is_finite() {
        obj.insert("a".into(), json!(g.domain_end));
    }
    obj.insert("extended".into(), json!(g.extended));
    v
}
