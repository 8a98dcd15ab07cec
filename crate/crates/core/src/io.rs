//! JSON documents for spaces, models, frames, presentations, derivations and
//! relations between models.
//! Loaders validate fully and report errors with their location in the
//! document, such as `gamma.x` or `relations[2].lhs`.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bisim::Relation;
use crate::bits::Bits;
use crate::coalgfun::{Coalgebra, GeomModel, TopFunctor};
use crate::error::{Error, Result};
use crate::finspace::{opn_frame, FinFrame, FinSpace};
use crate::framealg::Presentation;
use crate::logic::Formula;
use crate::proofsys::{ConsequencePair, DerivationStep};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.as_object()
        .ok_or_else(|| Error::Invalid(format!("expected an object, got {}", kind_of(obj))))?
        .get(key)
        .ok_or_else(|| Error::Invalid(format!("missing field `{key}`")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Invalid(format!("expected an object, got {}", kind_of(v))))
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Invalid(format!("expected an array, got {}", kind_of(v))))
}

fn string(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| Error::Invalid(format!("expected a string, got {}", kind_of(v))))
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn names(v: &Value) -> Result<Vec<String>> {
    array(v)?.iter().enumerate().map(|(i, p)| string(p).map(str::to_string).map_err(|e| e.at(format!("[{i}]")))).collect()
}

fn point_set(x: &FinSpace, v: &Value) -> Result<Bits> {
    let mut s = Bits::EMPTY;
    for (i, p) in array(v)?.iter().enumerate() {
        let name = string(p).map_err(|e| e.at(format!("[{i}]")))?;
        s.insert(x.index_of(name).map_err(|e| e.at(format!("[{i}]")))?);
    }
    Ok(s)
}

/// `{"points": [...], "opens": [[...], ...]}`; `"subbase"` may replace `"opens"`.
pub fn parse_space(v: &Value) -> Result<FinSpace> {
    let points = names(field(v, "points")?).map_err(|e| e.at("points"))?;
    let probe = FinSpace::discrete(points.clone()).map_err(|e| e.at("points"))?;
    let obj = object(v)?;
    let (key, sets) = match (obj.get("opens"), obj.get("subbase")) {
        (Some(o), None) => ("opens", o),
        (None, Some(s)) => ("subbase", s),
        (Some(_), Some(_)) => return Err(Error::Invalid("give either `opens` or `subbase`, not both".into())),
        (None, None) => return Err(Error::Invalid("missing field `opens`".into())),
    };
    let sets = array(sets)
        .map_err(|e| e.at(key))?
        .iter()
        .enumerate()
        .map(|(i, s)| point_set(&probe, s).map_err(|e| e.at(format!("{key}[{i}]"))))
        .collect::<Result<Vec<_>>>()?;
    if key == "opens" {
        FinSpace::from_opens(points, &sets).map_err(|e| e.at(key))
    } else {
        FinSpace::new(points, &sets).map_err(|e| e.at(key))
    }
}

pub fn space_to_json(x: &FinSpace) -> Value {
    json!({
        "points": x.names(),
        "opens": x.opens().into_iter().map(|o| x.names_of(o)).collect::<Vec<_>>(),
    })
}

/// `{"space": ..., "functor": ..., "gamma": {"x": element}, "valuation": {"p": [...]}}`.
pub fn parse_model(v: &Value) -> Result<GeomModel> {
    let x = parse_space(field(v, "space")?).map_err(|e| e.at("space"))?;
    let functor = TopFunctor::parse(string(field(v, "functor")?).map_err(|e| e.at("functor"))?)
        .map_err(|e| e.at("functor"))?;
    let gamma_doc = object(field(v, "gamma")?).map_err(|e| e.at("gamma"))?;
    for key in gamma_doc.keys() {
        x.index_of(key).map_err(|e| e.at(format!("gamma.{key}")))?;
    }
    let mut gamma = Vec::with_capacity(x.len());
    for name in x.names() {
        let elem = gamma_doc.get(name).ok_or_else(|| Error::Invalid("no transition given".into()).at(format!("gamma.{name}")))?;
        gamma.push(functor.decode(&x, elem).map_err(|e| e.at(format!("gamma.{name}")))?);
    }
    let coalgebra = Coalgebra::new(x.clone(), functor, gamma).map_err(|e| e.at("gamma"))?;
    let mut valuation = BTreeMap::new();
    if let Some(val) = object(v)?.get("valuation") {
        for (p, s) in object(val).map_err(|e| e.at("valuation"))? {
            let set = point_set(&x, s).map_err(|e| e.at(format!("valuation.{p}")))?;
            if !x.is_open(set) {
                return Err(Error::NotOpen(format!("{} (valuation of `{p}`)", x.render(set))).at(format!("valuation.{p}")));
            }
            valuation.insert(p.clone(), set);
        }
    }
    GeomModel::new(coalgebra, valuation)
}

pub fn model_to_json(m: &GeomModel) -> Value {
    let x = m.space();
    let carrier = m.functor().carrier(x).expect("a model's carrier was built when it was created");
    let gamma: Map<String, Value> = x
        .names()
        .iter()
        .zip(m.coalgebra.gamma())
        .map(|(n, &g)| (n.clone(), m.functor().encode(x, carrier.elems[g])))
        .collect();
    let valuation: Map<String, Value> =
        m.valuation().iter().map(|(p, &s)| (p.clone(), Value::from(x.names_of(s)))).collect();
    json!({
        "space": space_to_json(x),
        "functor": m.functor().to_string(),
        "gamma": gamma,
        "valuation": valuation,
    })
}

/// `{"elements": [...], "order": [["a", "b"], ...]}` with `a ≤ b` for each
/// listed pair, closed under reflexivity and transitivity; or
/// `{"space": ...}` for the frame of opens of a space.
pub fn parse_frame(v: &Value) -> Result<FinFrame> {
    let obj = object(v)?;
    if let Some(s) = obj.get("space") {
        let x = parse_space(s).map_err(|e| e.at("space"))?;
        return Ok(opn_frame(&x).map_err(|e| e.at("space"))?.frame);
    }
    let elements = names(field(v, "elements")?).map_err(|e| e.at("elements"))?;
    let n = elements.len();
    let index = |name: &str| -> Result<usize> {
        elements.iter().position(|e| e == name).ok_or_else(|| Error::Invalid(format!("unknown element `{name}`")))
    };
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    if let Some(order) = obj.get("order") {
        for (k, pair) in array(order).map_err(|e| e.at("order"))?.iter().enumerate() {
            let at = |e: Error| e.at(format!("order[{k}]"));
            let pair = array(pair).map_err(at)?;
            if pair.len() != 2 {
                return Err(at(Error::Invalid("expected a pair of element names".into())));
            }
            let a = index(string(&pair[0]).map_err(at)?).map_err(at)?;
            let b = index(string(&pair[1]).map_err(at)?).map_err(at)?;
            leq[a][b] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    if let Some((a, b)) = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| a != b && leq[a][b] && leq[b][a]) {
        return Err(Error::NotAFrame(format!("`{}` and `{}` are below each other", elements[a], elements[b])).at("order"));
    }
    FinFrame::from_order(elements, |a, b| leq[a][b])
}

pub fn frame_to_json(f: &FinFrame) -> Value {
    let mut order = Vec::new();
    for a in 0..f.len() {
        for b in 0..f.len() {
            if a != b && f.leq(a, b) {
                order.push(json!([f.name(a), f.name(b)]));
            }
        }
    }
    json!({ "elements": f.names(), "order": order })
}

/// `{"generators": [...], "relations": [{"lhs": term, "rel": "leq"|"eq", "rhs": term}]}`.
pub fn parse_presentation(v: &Value) -> Result<Presentation> {
    let generators = names(field(v, "generators")?).map_err(|e| e.at("generators"))?;
    let relations = match object(v)?.get("relations") {
        None => Vec::new(),
        Some(r) => array(r)
            .map_err(|e| e.at("relations"))?
            .iter()
            .enumerate()
            .map(|(i, r)| {
                serde_json::from_value(r.clone())
                    .map_err(|e| Error::Invalid(e.to_string()).at(format!("relations[{i}]")))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Presentation::new(generators, relations)
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    json!({ "generators": p.generators(), "relations": p.relations() })
}

fn formula(v: &Value) -> Result<Formula> {
    Formula::parse_unchecked(string(v)?)
}

/// An array of `{"id", "rule", "premises", "conclusion": {"lhs", "rhs"}, "subst"}`
/// with formulas written in the concrete syntax.
pub fn parse_derivation(v: &Value) -> Result<Vec<DerivationStep>> {
    array(v)?
        .iter()
        .enumerate()
        .map(|(i, step)| parse_step(step).map_err(|e| e.at(format!("[{i}]"))))
        .collect()
}

fn parse_step(v: &Value) -> Result<DerivationStep> {
    let id = field(v, "id")?.as_u64().ok_or_else(|| Error::Invalid("expected a non-negative integer".into()).at("id"))?;
    let rule = string(field(v, "rule")?).map_err(|e| e.at("rule"))?.to_string();
    let premises = match object(v)?.get("premises") {
        None => Vec::new(),
        Some(p) => array(p)
            .map_err(|e| e.at("premises"))?
            .iter()
            .enumerate()
            .map(|(k, p)| p.as_u64().ok_or_else(|| Error::Invalid("expected a step id".into()).at(format!("premises[{k}]"))))
            .collect::<Result<Vec<_>>>()?,
    };
    let c = field(v, "conclusion")?;
    let lhs = formula(field(c, "lhs").map_err(|e| e.at("conclusion"))?).map_err(|e| e.at("conclusion.lhs"))?;
    let rhs = formula(field(c, "rhs").map_err(|e| e.at("conclusion"))?).map_err(|e| e.at("conclusion.rhs"))?;
    let mut subst = BTreeMap::new();
    if let Some(s) = object(v)?.get("subst") {
        for (k, f) in object(s).map_err(|e| e.at("subst"))? {
            subst.insert(k.clone(), formula(f).map_err(|e| e.at(format!("subst.{k}")))?);
        }
    }
    Ok(DerivationStep { id, rule, premises, conclusion: ConsequencePair::new(lhs, rhs), subst })
}

pub fn derivation_to_json(steps: &[DerivationStep]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| {
                let subst: Map<String, Value> = s.subst.iter().map(|(k, f)| (k.clone(), Value::from(f.to_string()))).collect();
                json!({
                    "id": s.id,
                    "rule": s.rule,
                    "premises": s.premises,
                    "conclusion": { "lhs": s.conclusion.lhs.to_string(), "rhs": s.conclusion.rhs.to_string() },
                    "subst": subst,
                })
            })
            .collect(),
    )
}

/// `{"pairs": [["x", "u"], ...]}` between the points of `left` and `right`.
pub fn parse_relation(v: &Value, left: &FinSpace, right: &FinSpace) -> Result<Relation> {
    let mut r = Relation::empty(left.len(), right.len());
    for (i, pair) in array(field(v, "pairs")?).map_err(|e| e.at("pairs"))?.iter().enumerate() {
        let at = |e: Error| e.at(format!("pairs[{i}]"));
        let pair = array(pair).map_err(at)?;
        if pair.len() != 2 {
            return Err(at(Error::Invalid(format!("expected two point names, got {}", pair.len()))));
        }
        let x = left.index_of(string(&pair[0]).map_err(at)?).map_err(at)?;
        let y = right.index_of(string(&pair[1]).map_err(at)?).map_err(at)?;
        r.insert(x, y);
    }
    Ok(r)
}

pub fn relation_to_json(r: &Relation, left: &FinSpace, right: &FinSpace) -> Value {
    json!({ "pairs": r.pairs().into_iter().map(|(x, y)| [left.name(x), right.name(y)]).collect::<Vec<_>>() })
}

pub fn load_space(path: &Path) -> Result<FinSpace> {
    parse_space(&read_json(path)?)
}

pub fn load_model(path: &Path) -> Result<GeomModel> {
    parse_model(&read_json(path)?)
}

pub fn load_frame(path: &Path) -> Result<FinFrame> {
    parse_frame(&read_json(path)?)
}

pub fn load_presentation(path: &Path) -> Result<Presentation> {
    parse_presentation(&read_json(path)?)
}

pub fn load_derivation(path: &Path) -> Result<Vec<DerivationStep>> {
    parse_derivation(&read_json(path)?)
}

pub fn load_relation(path: &Path, left: &FinSpace, right: &FinSpace) -> Result<Relation> {
    parse_relation(&read_json(path)?, left, right)
}
