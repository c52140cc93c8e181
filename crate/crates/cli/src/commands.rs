use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use toric_mori::contract::{self, classify, ContractionKind, ContractionResult, FlipType, MmpOutcome};
use toric_mori::fan::{
    check_morphism, enumerate_walls, is_complete, is_smooth, primitive_collections, properness,
    validate_fan, Cone, Fan, FanMorphism, Properness, Wall,
};
use toric_mori::io::{self, FanFile};
use toric_mori::mori::{recognize_wps, CurveClass, ExtremalPrimitiveRelation, MoriAnalysis, Normalization};
use toric_mori::positivity::{
    ample_certificate, mustata_one_divisor, mustata_two_divisor, relative_positivity,
    twist_free_bound, Ampleness, Freeness, Positivity, TorusDivisor,
};
use toric_mori::{BigInt, BigRational};

use crate::report::{Failure, Report};
use crate::Check;

pub struct Options {
    pub out: Option<PathBuf>,
    pub assume_proper: bool,
}

pub enum Query {
    Check(Check),
    TwistFree(usize, usize),
    TwistAmple(usize),
    TwistBound(u64),
}

type Outcome = Result<(), Failure>;

fn cone_json(c: &Cone) -> Value {
    json!(c.rays())
}

fn fan_json(fan: &Fan) -> Result<Value, Failure> {
    Ok(serde_json::to_value(FanFile::from_fan(fan)?).expect("fan serializes"))
}

fn rationals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn integers(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn class_text(c: &CurveClass) -> String {
    format!("({})", rationals(&c.coefficients).join(","))
}

fn walls_text(walls: &[Wall]) -> String {
    walls.iter().map(|w| w.face.to_string()).collect::<Vec<_>>().join(" ")
}

fn relation_json(e: &ExtremalPrimitiveRelation) -> Value {
    json!({
        "relation": e.to_string(),
        "xs": e.xs,
        "a": integers(&e.a),
        "ys": e.ys,
        "b": integers(&e.b),
        "l": e.l(),
        "m": e.m(),
        "degree_difference": e.degree_difference().to_string(),
    })
}

fn kind_label(e: &ExtremalPrimitiveRelation) -> String {
    match classify(e) {
        ContractionKind::Small => format!("small, {}", FlipType::of(e)),
        k => k.to_string(),
    }
}

fn write_out(report: &mut Report, path: &Path, text: String) -> Outcome {
    fs::write(path, text + "\n")
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    report.line(format!("wrote {}", path.display()));
    Ok(())
}

fn write_fan(report: &mut Report, path: &Path, fan: &Fan) -> Outcome {
    write_out(report, path, io::fan_to_json(fan)?)
}

fn load_valid_fan(report: &mut Report, path: &Path) -> Result<Fan, Failure> {
    report.digest(path);
    let fan = io::read_fan(path)?;
    let v = validate_fan(&fan);
    if !v.is_valid() {
        for x in &v.violations {
            report.note(x.to_string());
        }
        return Err(Failure::math("invalid fan"));
    }
    Ok(fan)
}

fn load_morphism(report: &mut Report, opts: &Options, path: &Path) -> Result<FanMorphism, Failure> {
    report.digest(path);
    let m = io::read_morphism(path)?;
    for (side, fan) in [("source", m.source()), ("target", m.target())] {
        let v = validate_fan(fan);
        if let Some(x) = v.violations.first() {
            return Err(Failure::math(format!("{side} fan is invalid: {x}")));
        }
    }
    if !m.source().is_simplicial() {
        return Err(Failure::math("source fan is not simplicial"));
    }
    let compat = check_morphism(&m);
    if !compat.is_valid() {
        let cones: Vec<String> = compat
            .offenders
            .iter()
            .filter_map(|&i| m.source().cones().nth(i).map(ToString::to_string))
            .collect();
        return Err(Failure::math(format!(
            "morphism incompatible: cones {} map into no target cone",
            cones.join(" ")
        )));
    }
    match properness(&m) {
        Properness::Verified(why) => report.note(format!("properness verified: {why}")),
        Properness::Refuted(why) => return Err(Failure::math(format!("morphism is not proper: {why}"))),
        Properness::Undecided(why) if opts.assume_proper => {
            report.note(format!("properness assumed: {why}"))
        }
        Properness::Undecided(why) => {
            return Err(Failure::input(format!(
                "properness cannot be decided ({why}); pass --assume-proper"
            )))
        }
    }
    Ok(m)
}

pub fn validate(report: &mut Report, path: &Path) -> Outcome {
    report.digest(path);
    let fan = io::read_fan(path)?;
    let v = validate_fan(&fan);
    let violations: Vec<String> = v.violations.iter().map(ToString::to_string).collect();
    report.result = json!({ "valid": v.is_valid(), "violations": violations });
    if v.is_valid() {
        report.line("valid");
        Ok(())
    } else {
        report.line("invalid");
        for x in violations {
            report.note(x);
        }
        Err(Failure::math("fan is invalid"))
    }
}

pub fn info(report: &mut Report, path: &Path) -> Outcome {
    let fan = load_valid_fan(report, path)?;
    let simplicial = fan.is_simplicial();
    let smooth = is_smooth(&fan);
    let complete = simplicial && is_complete(&fan);
    report.line(format!("rank {}, {} rays, {} maximal cones", fan.rank(), fan.rays().len(), fan.cone_count()));
    report.line(format!("simplicial: {simplicial}, smooth: {smooth}, complete: {complete}"));
    let mut result = json!({
        "fan": fan_json(&fan)?,
        "simplicial": simplicial,
        "smooth": smooth,
        "complete": complete,
    });
    if fan.is_pure() {
        let walls = enumerate_walls(&fan)?;
        let interior = walls.iter().filter(|w| w.is_interior()).count();
        report.line(format!("walls: {interior} interior, {} boundary", walls.len() - interior));
        result["walls"] = json!({ "interior": interior, "boundary": walls.len() - interior });
    }
    if simplicial {
        let pcs = primitive_collections(&fan);
        report.line(format!(
            "primitive collections: {}",
            pcs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        ));
        result["primitive_collections"] = json!(pcs.iter().map(cone_json).collect::<Vec<_>>());
        if let Some(w) = recognize_wps(&fan) {
            report.line(format!("weighted projective space P({})", integers(&w).join(",")));
            result["wps_weights"] = json!(integers(&w));
        }
    }
    report.result = result;
    Ok(())
}

pub fn mori(report: &mut Report, opts: &Options, path: &Path) -> Outcome {
    let m = load_morphism(report, opts, path)?;
    let an = MoriAnalysis::new(&m)?;
    report.line(format!("contracted walls: {}", an.curves.len()));
    let mut walls = Vec::new();
    for c in &an.curves {
        report.line(format!("  wall {}: class {}", c.wall.face, class_text(&c.class)));
        walls.push(json!({
            "face": cone_json(&c.wall.face),
            "class": rationals(&c.class.coefficients),
            "normalization": match c.class.normalization {
                Normalization::Intersection => "intersection",
                Normalization::PrimitiveRelation => "primitive_relation",
            },
        }));
    }
    let picard = an.picard_number();
    report.line(format!("relative Picard number: {picard}"));
    report.line(format!("extremal rays: {}", an.extremal.rays.len()));
    let mut rays = Vec::new();
    for (i, (r, e)) in an.extremal.rays.iter().zip(&an.relations).enumerate() {
        report.line(format!("  ray {i}: {e}  [{}]  walls {}", kind_label(e), walls_text(&r.walls)));
        let mut v = relation_json(e);
        v["index"] = json!(i);
        v["class"] = json!(rationals(&r.class.coefficients));
        v["walls"] = json!(r.walls.iter().map(|w| cone_json(&w.face)).collect::<Vec<_>>());
        v["kind"] = json!(classify(e).to_string());
        if classify(e) == ContractionKind::Small {
            v["trichotomy"] = json!(FlipType::of(e).to_string());
        }
        rays.push(v);
    }
    let mut rejected = Vec::new();
    for r in &an.extremal.rejected {
        report.line(format!(
            "  not extremal: class {} = {} over the extremal rays",
            class_text(&r.class),
            rationals(&r.witness).join(", ")
        ));
        rejected.push(json!({
            "class": rationals(&r.class.coefficients),
            "walls": r.walls.iter().map(|w| cone_json(&w.face)).collect::<Vec<_>>(),
            "witness": rationals(&r.witness),
        }));
    }
    let certificate = ample_certificate(&m)?;
    match &certificate {
        Some(d) => report.line(format!("relatively ample divisor: ({})", rationals(d.coeffs()).join(","))),
        None => report.note("no relatively ample torus-invariant divisor: not projective over the target"),
    }
    report.result = json!({
        "contracted_walls": walls,
        "relative_picard_number": picard,
        "extremal_rays": rays,
        "rejected": rejected,
        "ample_certificate": certificate.map(|d| rationals(d.coeffs())),
    });
    Ok(())
}

fn contraction_json(report: &mut Report, r: &ContractionResult) -> Result<Value, Failure> {
    report.line(format!("kind: {}", r.kind));
    let mut v = json!({ "kind": r.kind.to_string(), "target_fan": fan_json(&r.target_fan)? });
    if let Some(e) = &r.exceptional {
        report.line(format!("exceptional locus V({}); codim A={}, dim B={}", e.locus, e.codim, e.dim_image));
        let image: Vec<Vec<String>> = e.image.generators().iter().map(|g| integers(g)).collect();
        v["exceptional"] = json!({
            "locus": cone_json(&e.locus),
            "image_generators": image,
            "codim_a": e.codim,
            "dim_b": e.dim_image,
        });
    }
    if let Some(f) = &r.fiber {
        match &f.wps_weights {
            Some(w) => report.line(format!("fiber P({})", integers(w).join(","))),
            None => report.line(format!(
                "fiber of dimension {} with weights ({}), not a weighted projective space",
                f.rank,
                integers(&f.weights).join(",")
            )),
        }
        v["fiber"] = json!({
            "weights": integers(&f.weights),
            "rank": f.rank,
            "wps_weights": f.wps_weights.as_ref().map(|w| integers(w)),
        });
    }
    if let Some(q) = &r.quotient {
        let rows: Vec<Vec<String>> = (0..q.matrix.rows()).map(|i| integers(q.matrix.row(i))).collect();
        report.line(format!("base lattice rank {}", q.rank));
        report.line("A = X, B = W");
        v["quotient"] = json!({ "matrix": rows, "rank": q.rank });
    }
    Ok(v)
}

pub fn contract(report: &mut Report, opts: &Options, path: &Path, ray: usize) -> Outcome {
    let m = load_morphism(report, opts, path)?;
    let an = MoriAnalysis::new(&m)?;
    let (_, e) = an.ray(ray)?;
    report.line(format!("ray {ray}: {e}"));
    let r = contract::contract(&m, e)?;
    report.result = contraction_json(report, &r)?;
    if let Some(out) = &opts.out {
        write_fan(report, out, &r.target_fan)?;
        if let Some(q) = &r.quotient {
            let to_base = FanMorphism::new(q.matrix.clone(), m.source().clone(), r.target_fan.clone())?;
            write_out(report, &out.with_extension("quotient.json"), io::morphism_to_json(&to_base)?)?;
        }
    }
    Ok(())
}

pub fn flip(report: &mut Report, opts: &Options, path: &Path, ray: usize) -> Outcome {
    let m = load_morphism(report, opts, path)?;
    let an = MoriAnalysis::new(&m)?;
    let (_, e) = an.ray(ray)?;
    report.line(format!("ray {ray}: {e}"));
    let r = contract::flip(&m, e)?;
    let trichotomy = r.trichotomy.expect("flip sets the trichotomy");
    let reversed = r.reversed.as_ref().expect("flip recomputes the relation");
    let plus = r.flip_fan.as_ref().expect("flip builds the fan");
    report.line(format!("{trichotomy} (degree difference {})", e.degree_difference()));
    report.line(format!("reversed relation: {reversed}"));
    report.result = json!({
        "trichotomy": trichotomy.to_string(),
        "relation": relation_json(e),
        "reversed": relation_json(reversed),
        "flip_fan": fan_json(plus)?,
        "contraction_fan": fan_json(&r.target_fan)?,
    });
    if let Some(out) = &opts.out {
        write_fan(report, out, plus)?;
    }
    Ok(())
}

fn verdict_text(p: Positivity) -> &'static str {
    match p {
        Positivity::Ample => "f-ample",
        Positivity::NefNotAmple => "f-nef, not f-ample",
        Positivity::NotNef => "not f-nef",
    }
}

fn agreement(report: &mut Report, agree: bool) -> Outcome {
    if agree {
        report.line("direct check agrees");
        Ok(())
    } else {
        Err(Failure::math("criterion and direct check disagree"))
    }
}

fn ray_text(an: &MoriAnalysis<'_>, witness: Option<usize>) -> String {
    match witness {
        Some(i) => format!("ray {i} ({})", an.relations[i]),
        None => "none".into(),
    }
}

pub fn positivity(report: &mut Report, opts: &Options, path: &Path, divisor: &Path, query: Query) -> Outcome {
    let m = load_morphism(report, opts, path)?;
    report.digest(divisor);
    let d: TorusDivisor = io::read_divisor(divisor, m.source().rays().len())?;
    match query {
        Query::Check(check) => {
            let r = relative_positivity(&m, &d)?;
            let witness = r.witness.as_ref().map(|w| w.face.to_string());
            let line = match check {
                Check::Nef | Check::Ample => verdict_text(r.verdict).to_string(),
                Check::Free => match r.free {
                    Some(true) => "f-free".into(),
                    Some(false) => "not f-free".into(),
                    None => "freeness undecided: divisor is not integral and Cartier".into(),
                },
            };
            report.line(match &witness {
                Some(w) => format!("{line}; witness wall {w}"),
                None => line,
            });
            let values: Vec<Value> = r
                .values
                .iter()
                .map(|(w, x)| json!({ "wall": cone_json(&w.face), "value": x.to_string() }))
                .collect();
            report.result = json!({
                "check": format!("{check:?}").to_lowercase(),
                "nef": r.verdict.is_nef(),
                "ample": r.verdict.is_ample(),
                "free": r.free,
                "witness_wall": r.witness.as_ref().map(|w| cone_json(&w.face)),
                "values": values,
            });
            Ok(())
        }
        Query::TwistFree(v1, v2) => {
            let an = MoriAnalysis::new(&m)?;
            let r = mustata_two_divisor(&an, &d, v1, v2)?;
            let verdict = |f: Freeness| f == Freeness::Free;
            report.line(format!(
                "L(-D_{v1}-D_{v2}) is {}; witness: {}",
                if verdict(r.criterion) { "f-free" } else { "not f-free" },
                ray_text(&an, r.witness)
            ));
            report.result = json!({
                "free": verdict(r.criterion),
                "witness_ray": r.witness,
                "direct_free": verdict(r.direct),
                "agree": r.agree,
            });
            agreement(report, r.agree)
        }
        Query::TwistAmple(v) => {
            let an = MoriAnalysis::new(&m)?;
            let r = mustata_one_divisor(&an, &d, v)?;
            let verdict = |a: Ampleness| a == Ampleness::Ample;
            report.line(format!(
                "L(-D_{v}) is {}; witness: {}",
                if verdict(r.criterion) { "f-ample" } else { "not f-ample" },
                ray_text(&an, r.witness)
            ));
            report.result = json!({
                "ample": verdict(r.criterion),
                "witness_ray": r.witness,
                "direct_ample": verdict(r.direct),
                "agree": r.agree,
            });
            agreement(report, r.agree)
        }
        Query::TwistBound(t) => {
            let an = MoriAnalysis::new(&m)?;
            let r = twist_free_bound(&an, &d, t)?;
            match r.violating_ray {
                None => report.line(format!("L.C_R >= {t} for every extremal ray")),
                Some(i) => report.line(format!("hypothesis fails on {}", ray_text(&an, Some(i)))),
            }
            let mut twists = Vec::new();
            for e in &r.twists {
                let min = e.min_pairing.as_ref().map(ToString::to_string);
                report.line(format!(
                    "  L(-D_{}): min L(-D).C_R = {}{}",
                    e.divisor,
                    min.as_deref().unwrap_or("-"),
                    match e.free {
                        Some(true) => ", f-free",
                        Some(false) => ", not f-free",
                        None => "",
                    }
                ));
                twists.push(json!({
                    "divisor": e.divisor,
                    "min_pairing": min,
                    "certified": e.certified,
                    "free": e.free,
                }));
            }
            report.result = json!({
                "bound": t,
                "hypothesis_holds": r.hypothesis_holds,
                "violating_ray": r.violating_ray,
                "min_pairing": r.min_pairing.map(|x| x.to_string()),
                "measured_min": r.measured_min.map(|x| x.to_string()),
                "twists": twists,
            });
            if r.hypothesis_holds && r.twists.iter().any(|e| !e.certified) {
                return Err(Failure::math("twist bound fails although its hypothesis holds"));
            }
            Ok(())
        }
    }
}

pub fn mmp(report: &mut Report, opts: &Options, path: &Path, choices: &[usize]) -> Outcome {
    let mut current = load_morphism(report, opts, path)?;
    if let Some(dir) = &opts.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut steps = Vec::new();
    let mut end = "choices exhausted".to_string();
    for (i, &ray) in choices.iter().enumerate() {
        let an = MoriAnalysis::new(&current)?;
        let (_, e) = an.ray(ray)?;
        let relation = e.to_string();
        let kind = kind_label(e);
        let outcome = contract::mmp_step(&current, ray)?;
        let (fan, stop) = match outcome {
            MmpOutcome::MoriFiberSpace(r) => {
                end = if r.target_fan.rank() == 0 {
                    "Mori fiber space over point".to_string()
                } else {
                    format!("Mori fiber space over a rank-{} base", r.target_fan.rank())
                };
                (r.target_fan, true)
            }
            MmpOutcome::Continue { morphism, .. } => {
                let fan = morphism.source().clone();
                current = morphism;
                (fan, false)
            }
            MmpOutcome::Halt(r) => {
                let t = r.trichotomy.map_or("small".to_string(), |t| t.to_string());
                end = format!("halt: non-flip small ray ({t})");
                (r.target_fan, true)
            }
        };
        report.line(format!("step {i}: ray {ray} ({kind}): {relation}"));
        let mut step = json!({ "ray": ray, "kind": kind, "relation": relation, "fan": fan_json(&fan)? });
        if let Some(dir) = &opts.out {
            let file = dir.join(format!("step-{i}.json"));
            write_fan(report, &file, &fan)?;
            step["file"] = json!(file.display().to_string());
        }
        steps.push(step);
        if stop {
            break;
        }
    }
    report.line(end.clone());
    report.result = json!({ "steps": steps, "end": end });
    Ok(())
}
