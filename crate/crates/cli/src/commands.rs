use std::io::Read;
use std::path::Path;

use geomodal::acceptance::{parse_suite, run_suite, AcceptOptions};
use geomodal::bisim::{
    behavioural_equiv, compare_equivalences, greatest_lambda_bisim, is_lambda_bisim, relation_space,
    search_am_transition, AmBounds, AmOutcome, BehaviouralVerdict, Relation,
};
use geomodal::coalgfun::{GeomModel, TopFunctor};
use geomodal::finspace::{frame_points, sobrify, FinSpace};
use geomodal::framealg::{present_m, present_mprime, presentation_points, PresentOptions, SolveBounds};
use geomodal::io;
use geomodal::kkplift::{check_lift_theorems, kkp_iso, KkpSignature};
use geomodal::logic::{modal_equiv_across, theory_quotient, truth_set, Formula, QuotientFailure, Signature};
use geomodal::proofsys::{axiom_system, check_derivation, soundness_sweep, SweepBounds};
use geomodal::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;

/// What a command prints, and the verdict that decides the exit code.
pub struct Report {
    pub body: Value,
    /// `Some(false)` exits with 1.
    pub verdict: Option<bool>,
    /// A search stopped at a bound; exits with 3.
    pub bound: bool,
}

impl Report {
    fn done(body: Value) -> Report {
        Report { body, verdict: None, bound: false }
    }

    fn verdict(body: Value, v: bool) -> Report {
        Report { body, verdict: Some(v), bound: false }
    }
}

/// Resource limits shared by every command.
pub struct Limits {
    /// From `GEOMODAL_MAX_POINTS`: largest input space, and the default
    /// for `--max-points`.
    pub max_points: Option<usize>,
}

impl Limits {
    pub fn from_env() -> Result<Limits> {
        let max_points = match std::env::var("GEOMODAL_MAX_POINTS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| {
                Error::Invalid(format!("GEOMODAL_MAX_POINTS must be a number, got `{v}`"))
            })?),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(Error::Invalid(format!("GEOMODAL_MAX_POINTS: {e}"))),
        };
        Ok(Limits { max_points })
    }

    fn admit(&self, x: &FinSpace) -> Result<()> {
        match self.max_points {
            Some(n) if x.len() > n => Err(Error::resource("points in an input space", n)),
            _ => Ok(()),
        }
    }

    fn model(&self, path: &Path) -> Result<GeomModel> {
        let m = io::load_model(path).map_err(|e| e.at(path.display().to_string()))?;
        self.admit(m.space())?;
        Ok(m)
    }

    fn space(&self, path: &Path) -> Result<FinSpace> {
        let x = io::load_space(path).map_err(|e| e.at(path.display().to_string()))?;
        self.admit(&x)?;
        Ok(x)
    }
}

fn signature(functor: &TopFunctor, sig: &SigArgs) -> Result<Signature> {
    match &sig.liftings {
        None => Ok(Signature::builtin(functor.clone())),
        Some(ids) => {
            let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
            Signature::select(functor.clone(), &ids)
        }
    }
}

fn same_functor(m: &GeomModel, m2: &GeomModel) -> Result<()> {
    if m.functor() != m2.functor() {
        return Err(Error::FunctorMismatch(m.functor().to_string(), m2.functor().to_string()));
    }
    Ok(())
}

fn pair(limits: &Limits, left: &Path, right: Option<&Path>) -> Result<(GeomModel, GeomModel)> {
    let m = limits.model(left)?;
    let m2 = match right {
        Some(r) => limits.model(r)?,
        None => m.clone(),
    };
    same_functor(&m, &m2)?;
    Ok((m, m2))
}

fn relation_json(r: &Relation, m: &GeomModel, m2: &GeomModel) -> Value {
    io::relation_to_json(r, m.space(), m2.space())["pairs"].clone()
}

pub fn run(cmd: Command, limits: &Limits) -> Result<Report> {
    match cmd {
        Command::Check(a) => check(a, limits),
        Command::Equiv(a) => equiv(a, limits),
        Command::Bisim(a) => bisim(a, limits),
        Command::Lift(a) => lift(a, limits),
        Command::Present(a) => present(a),
        Command::Points(a) => points(a),
        Command::Dualize(a) => dualize(a, limits),
        Command::Proofcheck(a) => proofcheck(a),
        Command::Soundness(a) => soundness(a, limits),
        Command::Quotient(a) => quotient(a, limits),
        Command::Accept(a) => accept(a, limits),
    }
}

fn check(a: CheckArgs, limits: &Limits) -> Result<Report> {
    let m = limits.model(&a.model)?;
    let sig = signature(m.functor(), &a.sig)?;
    let text = match (a.formula.formula, a.formula.formula_file) {
        (Some(f), None) => f,
        (None, Some(p)) => std::fs::read_to_string(&p)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", p.display())))?,
        _ => return Err(Error::Invalid("give exactly one of --formula and --formula-file".into())),
    };
    let phi = Formula::parse(text.trim(), &sig)?;
    let set = truth_set(&m, &phi, &sig)?;
    let mut body = json!({
        "command": "check",
        "formula": phi.to_string(),
        "truth_set": m.space().names_of(set),
    });
    match a.point {
        None => Ok(Report::done(body)),
        Some(p) => {
            let holds = set.contains(m.space().index_of(&p)?);
            body["point"] = json!(p);
            body["holds"] = json!(holds);
            Ok(Report::verdict(body, holds))
        }
    }
}

fn equiv(a: EquivArgs, limits: &Limits) -> Result<Report> {
    let (m, m2) = pair(limits, &a.left, a.right.as_deref())?;
    let sig = signature(m.functor(), &a.sig)?;
    let (x, y) = (m.space().index_of(&a.x)?, m2.space().index_of(&a.y)?);
    let modal = modal_equiv_across(&m, x, &m2, y, &sig)?;
    let behavioural = match behavioural_equiv(&m, x, &m2, y, &sig) {
        Ok(BehaviouralVerdict::Equivalent) => json!("equivalent"),
        Ok(BehaviouralVerdict::Inequivalent) => json!("inequivalent"),
        Ok(BehaviouralVerdict::Indeterminate(f)) => json!({ "indeterminate": failure_json(&f, &[&m, &m2]) }),
        Err(e) if e.is_resource() => json!({ "bound": e.to_string() }),
        Err(e) => return Err(e),
    };
    let body = json!({
        "command": "equiv",
        "x": a.x,
        "y": a.y,
        "modal": modal,
        "behavioural": behavioural,
    });
    Ok(Report::verdict(body, modal))
}

fn am_json(out: &AmOutcome, b: &Relation, m: &GeomModel, m2: &GeomModel) -> Result<Value> {
    Ok(match out {
        AmOutcome::Found(beta) => {
            let rs = relation_space(b, m.space(), m2.space())?;
            let carrier = m.functor().carrier(&rs.space)?;
            let transition: Vec<Value> = rs
                .pairs
                .iter()
                .zip(beta)
                .map(|(&(x, y), &w)| {
                    json!({
                        "pair": [m.space().name(x), m2.space().name(y)],
                        "element": m.functor().render_code(&rs.space, carrier.elems[w]),
                    })
                })
                .collect();
            json!({ "found": transition })
        }
        AmOutcome::Absent => json!("absent"),
        AmOutcome::BoundHit(why) => json!({ "bound": why }),
    })
}

fn bisim(a: BisimArgs, limits: &Limits) -> Result<Report> {
    let (m, m2) = pair(limits, &a.left, a.right.as_deref())?;
    let sig = signature(m.functor(), &a.sig)?;
    let given = match &a.relation {
        Some(p) => Some(io::load_relation(p, m.space(), m2.space()).map_err(|e| e.at(p.display().to_string()))?),
        None => None,
    };
    match a.kind {
        BisimKind::Lambda => match given {
            None => {
                let g = greatest_lambda_bisim(&m, &m2, &sig)?;
                Ok(Report::done(json!({ "command": "bisim", "kind": "lambda", "greatest": relation_json(&g, &m, &m2) })))
            }
            Some(r) => {
                let c = is_lambda_bisim(&r, &m, &m2, &sig)?;
                let ok = c.is_none();
                let body = json!({
                    "command": "bisim",
                    "kind": "lambda",
                    "relation": relation_json(&r, &m, &m2),
                    "bisimulation": ok,
                    "counterexample": c.map(|c| c.describe(&m, &m2)),
                });
                Ok(Report::verdict(body, ok))
            }
        },
        BisimKind::Am => {
            let r = match given {
                Some(r) => r,
                None => greatest_lambda_bisim(&m, &m2, &sig)?,
            };
            let out = search_am_transition(&r, &m, &m2, AmBounds::default())?;
            let body = json!({
                "command": "bisim",
                "kind": "am",
                "relation": relation_json(&r, &m, &m2),
                "transition": am_json(&out, &r, &m, &m2)?,
            });
            Ok(match out {
                AmOutcome::Found(_) => Report::verdict(body, true),
                AmOutcome::Absent => Report::verdict(body, false),
                AmOutcome::BoundHit(_) => Report { body, verdict: None, bound: true },
            })
        }
        BisimKind::Compare => {
            let seed = a.seed.ok_or_else(|| Error::Invalid("--kind compare samples relations and needs --seed".into()))?;
            if given.is_some() {
                return Err(Error::Invalid("--relation is not used by --kind compare".into()));
            }
            let r = compare_equivalences(&m, &m2, &sig, a.samples, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let am = r
                .am
                .iter()
                .map(|(b, o)| Ok(json!({ "relation": relation_json(b, &m, &m2), "transition": am_json(o, b, &m, &m2)? })))
                .collect::<Result<Vec<_>>>()?;
            let body = json!({
                "command": "bisim",
                "kind": "compare",
                "seed": seed,
                "flags": {
                    "monotone": r.flags.monotone,
                    "scott": r.flags.scott,
                    "strong": r.flags.strong,
                    "characteristic": r.flags.characteristic,
                    "sober": r.flags.sober,
                },
                "lambda": relation_json(&r.lambda, &m, &m2),
                "modal": relation_json(&r.modal, &m, &m2),
                "behavioural": r.behavioural.as_ref().map(|b| relation_json(b, &m, &m2)),
                "quotient_failure": r.quotient_failure.as_ref().map(|f| failure_json(f, &[&m, &m2])),
                "quotient_bound": r.quotient_bound,
                "am": am,
                "lambda_in_modal": r.lambda_in_modal,
                "am_in_lambda": r.am_in_lambda,
                "coincidence_expected": r.coincidence_expected(),
                "coincides": r.coincides,
            });
            Ok(Report::verdict(body, r.ok()))
        }
    }
}

fn point_name(models: &[&GeomModel], (k, x): (usize, usize)) -> String {
    if models.len() == 1 {
        models[0].space().name(x).to_string()
    } else {
        format!("{k}:{}", models[k].space().name(x))
    }
}

fn failure_json(f: &QuotientFailure, models: &[&GeomModel]) -> Value {
    match f {
        QuotientFailure::Disagree { left, right, left_image, right_image } => json!({
            "disagree": [point_name(models, *left), point_name(models, *right)],
            "images": [left_image, right_image],
        }),
        QuotientFailure::Outside { point } => json!({ "outside_carrier": point_name(models, *point) }),
        QuotientFailure::Discontinuous => json!("discontinuous"),
    }
}

fn lift(a: LiftArgs, limits: &Limits) -> Result<Report> {
    let sig = KkpSignature::parse(&format!("kkp:{}:{}", a.base, a.liftings.join(",")))?;
    let x = limits.space(&a.space)?;
    let functor = sig.functor();
    let carrier = functor.carrier(&x)?;
    let r = check_lift_theorems(&sig, &x)?;
    let mut body = json!({
        "command": "lift",
        "functor": functor.to_string(),
        "carrier": io::space_to_json(&carrier.space),
        "characteristic": r.characteristic,
        "scott": r.scott,
        "t0": r.t0,
        "congruence_instances": r.congruence.instances,
        "frame_points_agree": r.frame_points_agree,
    });
    let Some(target) = a.compare else {
        return Ok(Report::done(body));
    };
    let target = TopFunctor::parse(&target)?;
    let iso = kkp_iso(&sig, &target, &x)?;
    body["compare"] = json!({
        "target": target.to_string(),
        "homeomorphic": iso.is_some(),
        "map": iso.as_ref().map(|i| {
            let m = &i.map;
            (0..m.source().len()).map(|p| [m.source().name(p), m.target().name(m.apply(p))]).collect::<Vec<_>>()
        }),
    });
    // the builtin functors are only comparison targets on discrete spaces
    if x.is_discrete() {
        Ok(Report::verdict(body, iso.is_some()))
    } else {
        Ok(Report::done(body))
    }
}

fn present(a: PresentArgs) -> Result<Report> {
    let f = io::load_frame(&a.frame).map_err(|e| e.at(a.frame.display().to_string()))?;
    let opts = PresentOptions { directed: a.directed };
    let p = match a.system {
        System::M => present_m(&f, opts),
        System::Mprime => present_mprime(&f, opts)?,
    };
    // bare presentation, so that the output can be piped into `points`
    Ok(Report::done(io::presentation_to_json(&p)))
}

fn points(a: PointsArgs) -> Result<Report> {
    let doc = match &a.presentation {
        Some(p) => io::read_json(p).map_err(|e| e.at(p.display().to_string()))?,
        None => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Io(format!("cannot read stdin: {e}")))?;
            io::parse_json(&text)?
        }
    };
    let p = io::parse_presentation(&doc)?;
    let mut bounds = SolveBounds::default();
    if let Some(g) = a.max_generators {
        bounds.max_generators = g;
    }
    let pts = presentation_points(&p, bounds)?;
    let assignments: Vec<Value> = pts
        .assignments
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let on: Vec<&str> = s.iter().map(|g| pts.generators[g].as_str()).collect();
            json!({ "point": pts.space.name(i), "true_generators": on })
        })
        .collect();
    Ok(Report::done(json!({
        "command": "points",
        "count": pts.space.len(),
        "space": io::space_to_json(&pts.space),
        "assignments": assignments,
    })))
}

fn dualize(a: DualizeArgs, limits: &Limits) -> Result<Report> {
    if let Some(p) = a.space {
        let x = limits.space(&p)?;
        let s = sobrify(&x)?;
        let unit: Vec<[&str; 2]> =
            (0..x.len()).map(|i| [x.name(i), s.points.space.name(s.unit.apply(i))]).collect();
        return Ok(Report::done(json!({
            "command": "dualize",
            "frame": io::frame_to_json(&s.opens.frame),
            "points": io::space_to_json(&s.points.space),
            "unit": unit,
            "sober": s.is_sober,
        })));
    }
    let p = a.frame.expect("clap requires --space or --frame");
    let f = io::load_frame(&p).map_err(|e| e.at(p.display().to_string()))?;
    let pts = frame_points(&f)?;
    Ok(Report::done(json!({ "command": "dualize", "points": io::space_to_json(&pts.space) })))
}

fn proofcheck(a: ProofcheckArgs) -> Result<Report> {
    let steps = io::load_derivation(&a.derivation).map_err(|e| e.at(a.derivation.display().to_string()))?;
    let r = check_derivation(&steps);
    let body = json!({
        "command": "proofcheck",
        "steps": r.steps,
        "valid": r.valid(),
        "failure": r.failure.as_ref().map(|f| f.to_string()),
    });
    Ok(Report::verdict(body, r.valid()))
}

fn soundness(a: SoundnessArgs, limits: &Limits) -> Result<Report> {
    let system = axiom_system(&a.system)?;
    let sig = Signature::builtin(TopFunctor::parse(&a.functor)?);
    let mut bounds = SweepBounds::default();
    if let Some(n) = a.max_points.or(limits.max_points) {
        bounds.max_points = n;
    }
    if let Some(n) = a.max_family {
        bounds.max_family = n;
    }
    let r = soundness_sweep(&system, &sig, bounds)?;
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "schema": v.schema,
                "space": v.space,
                "gamma": v.gamma,
                "substitution": v.substitution,
                "lhs": v.lhs,
                "rhs": v.rhs,
            })
        })
        .collect();
    let body = json!({
        "command": "soundness",
        "system": r.system,
        "functor": r.functor,
        "max_points": bounds.max_points,
        "spaces": r.spaces,
        "coalgebras": r.coalgebras,
        "instances": r.instances,
        "sound": r.sound(),
        "violations": violations,
    });
    Ok(Report::verdict(body, r.sound()))
}

fn quotient(a: QuotientArgs, limits: &Limits) -> Result<Report> {
    let models = a.model.iter().map(|p| limits.model(p)).collect::<Result<Vec<_>>>()?;
    for m in &models[1..] {
        same_functor(&models[0], m)?;
    }
    let sig = signature(models[0].functor(), &a.sig)?;
    let refs: Vec<&GeomModel> = models.iter().collect();
    let q = theory_quotient(&refs, &sig)?;
    let classes: Vec<Vec<String>> =
        q.classes.iter().map(|c| c.iter().map(|&p| point_name(&refs, p)).collect()).collect();
    let body = json!({
        "command": "quotient",
        "classes": classes,
        "space": io::space_to_json(&q.space),
        "model": q.model.as_ref().map(io::model_to_json),
        "failure": q.failure.as_ref().map(|f| failure_json(f, &refs)),
    });
    Ok(Report::verdict(body, q.model.is_some()))
}

fn accept(a: AcceptArgs, limits: &Limits) -> Result<Report> {
    let ids = parse_suite(&a.suite)?;
    let opts = AcceptOptions { seed: a.seed, max_points: a.max_points.or(limits.max_points) };
    let outcomes = run_suite(&ids, opts);
    let passed = outcomes.iter().all(|o| o.passed);
    let body = json!({
        "command": "accept",
        "seed": a.seed,
        "max_points": opts.max_points,
        "passed": passed,
        "criteria": outcomes,
    });
    Ok(Report::verdict(body, passed))
}
