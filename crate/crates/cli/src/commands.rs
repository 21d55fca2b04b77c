use polyvar::geneq::{
    kkt_regularity, mr_criteria, nondegeneracy_test, regularity_status, sigma_jacobian, solve_localization,
};
use nalgebra::DMatrix;
use polyvar::geometry::{faces, PolyCone, RVec, Scalar};
use polyvar::prox::{envelope_gradient, prox, prox_derivatives, smoothness_classify};
use polyvar::second_order::{
    critical_cone, face_pair_witness, is_ri_subgradient, polarity_check, reduction_certify, regularity_report,
};
use polyvar::{Error, GEProblem, KKTProblem, PolyhedralFunc, Result, SampleSpec, Smoothness};
use serde_json::{json, Value};

use crate::{Command, PairArgs, ProxArgs, SampleArgs, VerifyCheck};

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn load_function(path: &str) -> Result<PolyhedralFunc> {
    PolyhedralFunc::from_json(&read(path)?)
}

fn point(text: &str) -> Result<RVec> {
    Ok(RVec::parse(text)?)
}

fn scalar(text: &str) -> Result<Scalar> {
    let v = point(text)?;
    match v.len() {
        1 => Ok(v[0].clone()),
        _ => Err(Error::Parse(format!("expected one number, got {text:?}"))),
    }
}

fn floats(text: &str) -> Result<Vec<f64>> {
    let text = text.trim().trim_start_matches('[').trim_end_matches(']');
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .or_else(|_| RVec::parse(s).map(|v| v.to_f64s()[0]))
                .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
        })
        .collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn q(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

fn cone(k: &PolyCone) -> Value {
    let h = k.h_rep();
    json!({
        "halfspaces": to_value(&h.halfspaces),
        "equations": to_value(&h.equations),
        "rays": to_value(&k.rays()),
        "lineality": to_value(&k.lineality_basis()),
        "is_subspace": k.is_subspace(),
    })
}

fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String("divergent".into())
    }
}

fn floats_value(x: &[f64]) -> Value {
    Value::Array(x.iter().map(|&v| float(v)).collect())
}

fn pair(args: &PairArgs) -> Result<(PolyhedralFunc, RVec, RVec)> {
    let g = load_function(&args.function)?;
    let z = point(&args.z)?;
    let lambda = point(&args.lambda)?;
    g.subgradient_pair(&z, &lambda)?;
    Ok((g, z, lambda))
}

fn prox_args(args: &ProxArgs) -> Result<(PolyhedralFunc, Scalar, RVec)> {
    let g = load_function(&args.function)?;
    let r = scalar(&args.r)?;
    if !(r > Scalar::from_integer(0.into())) {
        return Err(Error::Parse(format!("r must be positive, got {r}")));
    }
    Ok((g, r, point(&args.x)?))
}

pub fn run(command: &Command) -> Result<Value> {
    match command {
        Command::Eval { function, z } => {
            let g = load_function(function)?;
            let z = point(z)?;
            Ok(json!({ "z": to_value(&z), "value": to_value(&g.eval(&z)?) }))
        }
        Command::Subdiff { function, z } => {
            let g = load_function(function)?;
            let z = point(z)?;
            if !g.in_domain(&z) {
                return Err(Error::NotInDomain);
            }
            Ok(json!({
                "z": to_value(&z),
                "active": to_value(&g.active_sets(&z)?),
                "subdifferential": to_value(&g.subdifferential(&z)?),
            }))
        }
        Command::Critcone(args) => {
            let (g, z, lambda) = pair(args)?;
            let k = critical_cone(&g, &z, &lambda)?.cone;
            Ok(json!({
                "z": to_value(&z),
                "lambda": to_value(&lambda),
                "ri": is_ri_subgradient(&g, &z, &lambda)?,
                "critical_cone": cone(&k),
            }))
        }
        Command::Classify { pair: args, sampling } => {
            let (g, z, lambda) = pair(args)?;
            let report = regularity_report(&g, &z, &lambda)?;
            if !report.consistent() {
                return Err(Error::Verification(format!("regularity flags disagree: {:?}", report.flags())));
            }
            let cert = reduction_certify(&g, &z, &lambda, sampling.samples, sampling.seed)?;
            let mut out = to_value(&report);
            out["certified_radius"] = q(&cert.radius);
            Ok(out)
        }
        Command::Prox(args) => {
            let (g, r, x) = prox_args(args)?;
            let p = prox(&g, &r, &x)?;
            let class = smoothness_classify(&g, &r, &x)?;
            let mut out = json!({
                "x": to_value(&p.x),
                "r": q(&r),
                "y": to_value(&p.y),
                "v": to_value(&p.v),
                "envelope": q(&p.envelope),
                "class": class.as_str(),
            });
            if class == Smoothness::C1Near {
                out["jacobian"] = to_value(&prox_derivatives(&g, &r, &x)?.jacobian);
            }
            Ok(out)
        }
        Command::Envelope(args) => {
            let (g, r, x) = prox_args(args)?;
            let p = prox(&g, &r, &x)?;
            let class = smoothness_classify(&g, &r, &x)?;
            let mut out = json!({
                "x": to_value(&p.x),
                "r": q(&r),
                "envelope": q(&p.envelope),
                "gradient": to_value(&envelope_gradient(&g, &r, &x)?),
                "class": class.as_str(),
            });
            if class == Smoothness::C1Near {
                out["hessian"] = to_value(&prox_derivatives(&g, &r, &x)?.hessian);
            }
            Ok(out)
        }
        Command::GeneqAnalyze { problem, x, tol, sampling, radius } => {
            let p = GEProblem::from_json(&read(problem)?)?;
            let x = floats(x)?;
            let (z, lambda) = p.snap_solution(&x, *tol)?;
            let nondegenerate = nondegeneracy_test(&p, &x, *tol)?;
            let status = regularity_status(&p, &x)?;
            let jac = sigma_jacobian(&p, &x, &z, &lambda)?;
            let spec = SampleSpec::new(sampling.samples, scalar(radius)?, sampling.seed);
            let kappa = polyvar::oracle::mr_probe(&p, &x, &spec)?;
            let mut out = json!({
                "status": status.as_str(),
                "x": floats_value(&x),
                "z": to_value(&z),
                "lambda": to_value(&lambda),
                "nondegenerate": nondegenerate,
                "jacobian_sigma": jac.map(|a| matrix(&a)),
                "kappa_estimate": float(kappa),
                "iterations": 0,
            });
            if nondegenerate {
                out["criteria"] = to_value(&mr_criteria(&p, &x)?);
            }
            Ok(out)
        }
        Command::GeneqSolve { problem, x0, y, sampling, radius } => {
            let p = GEProblem::from_json(&read(problem)?)?;
            let x0 = floats(x0)?;
            let y = floats(y)?;
            let status = regularity_status(&p, &x0)?;
            let sol = solve_localization(&p, &y, &x0)?;
            let spec = SampleSpec::new(sampling.samples, scalar(radius)?, sampling.seed);
            let kappa = polyvar::oracle::mr_probe(&p, &x0, &spec)?;
            Ok(json!({
                "status": status.as_str(),
                "y": floats_value(&sol.y),
                "x": floats_value(&sol.x),
                "jacobian_sigma": sol.jacobian_sigma.as_ref().map(|rows| {
                    Value::Array(rows.iter().map(|r| floats_value(r)).collect())
                }),
                "kappa_estimate": float(kappa),
                "iterations": sol.newton_iterations,
                "residual": float(sol.residual),
            }))
        }
        Command::KktAnalyze { problem, x, lambda, tol } => {
            let k = KKTProblem::from_json(&read(problem)?)?;
            let x = floats(x)?;
            let lambda = floats(lambda)?;
            let regular = kkt_regularity(&k, &x, &lambda, *tol)?;
            Ok(json!({
                "x": floats_value(&x),
                "lambda": floats_value(&lambda),
                "strongly_metrically_regular": regular,
            }))
        }
        Command::Verify { check, pair: args, sampling } => verify(*check, args, sampling),
    }
}

fn matrix(a: &DMatrix<f64>) -> Value {
    Value::Array((0..a.nrows()).map(|i| floats_value(&a.row(i).iter().cloned().collect::<Vec<_>>())).collect())
}

fn verify(check: VerifyCheck, args: &PairArgs, sampling: &SampleArgs) -> Result<Value> {
    let (g, z, lambda) = pair(args)?;
    match check {
        VerifyCheck::Reduction => {
            let cert = reduction_certify(&g, &z, &lambda, sampling.samples, sampling.seed)?;
            Ok(json!({
                "certified_radius": q(&cert.radius),
                "samples": cert.transcript.len(),
                "agreements": cert.agreements(),
                "attempts": to_value(&cert.attempts),
            }))
        }
        VerifyCheck::Polarity => {
            let report = polarity_check(&g, &z, &lambda)?;
            if !report.holds() {
                return Err(Error::Verification(format!("polarity fails: {report:?}")));
            }
            Ok(to_value(&report))
        }
        VerifyCheck::FacePairs => {
            let k = critical_cone(&g, &z, &lambda)?.cone;
            let radius = reduction_certify(&g, &z, &lambda, sampling.samples, sampling.seed)?.radius;
            let list = faces(&k)?;
            let mut witnesses = Vec::new();
            for f1 in &list {
                for f2 in list.iter().filter(|f2| f2.is_subset_of(f1)) {
                    let (z2, l2) = face_pair_witness(&g, &z, &lambda, f1, f2, &radius)?;
                    let k2 = critical_cone(&g, &z2, &l2)?.cone;
                    if !k2.set_eq(&f1.difference(f2)?) {
                        return Err(Error::Verification(format!(
                            "critical cone at ({z2}, {l2}) is not the face difference"
                        )));
                    }
                    witnesses.push(json!({"z": to_value(&z2), "lambda": to_value(&l2)}));
                }
            }
            Ok(json!({
                "faces": list.len(),
                "face_pairs": witnesses.len(),
                "radius": q(&radius),
                "witnesses": witnesses,
            }))
        }
        VerifyCheck::Flags => {
            let report = regularity_report(&g, &z, &lambda)?;
            if !report.consistent() {
                return Err(Error::Verification(format!("regularity flags disagree: {:?}", report.flags())));
            }
            Ok(json!({ "flags": report.flags().to_vec(), "consistent": true }))
        }
    }
}
