use clap::ValueEnum;
use mproj_core::c0::{project_c0 as c0_projection, sample_projection_members};
use mproj_core::chebyshev::{mu_pf, remez as remez_plain, remez_with, verify_equioscillation, RemezOptions, DEFAULT_REMEZ_TOL};
use mproj_core::coderivative::{
    exclusion_certificate, membership_consistency, witnesses_c, witnesses_c01, witnesses_l1, Dual, GraphPoint, L1Target,
    Space, WitnessPath,
};
use mproj_core::duality::{
    find_common_dual, j_c01_membership, j_c_membership, j_l1_membership, j_value_on_strict_simplex, kstar,
};
use mproj_core::l1ball::{
    brute_force_oracle, canonical_selection, descriptor_lattice_members, is_singleton, projection_set, sample_members,
};
use mproj_core::{AtomicMeasure, CStarFunctional, EvConstSeq, Error, GeoTailSeq};
use serde_json::{json, Value};

use crate::input::{self, Target};
use crate::{Case, CliError, Mode};

const CHECK_TOL: f64 = 1e-8;

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize to JSON")
}

fn precondition(msg: impl Into<String>) -> CliError {
    CliError::Domain(Error::Precondition(msg.into()))
}

pub fn project_l1(x: &Value, r: f64, sample: usize, seed: u64, tol: f64) -> Result<Value, CliError> {
    let x = input::l1_element(x, "--x")?;
    if !(r > 0.0) {
        return Err(precondition(format!("radius r = {r} must be positive")));
    }
    let a = x.l1_norm();
    if a <= r {
        let mut out = json!({ "norm": a, "r": r, "inside": true, "distance": 0.0, "canonical": x, "singleton": x });
        if sample > 0 {
            out["members"] = json!([x]);
        }
        return Ok(out);
    }
    let mut out = json!({
        "norm": a,
        "r": r,
        "inside": false,
        "distance": a - r,
        "canonical": canonical_selection(&x, r)?,
    });
    if !x.is_nonnegative() {
        if sample > 0 {
            return Err(precondition("member sampling needs x in the positive cone"));
        }
        return Ok(out);
    }
    let set = projection_set(&x, r)?;
    out["descriptor"] = to_json(&set);
    out["singleton"] = to_json(&is_singleton(&x, r)?);
    if sample > 0 {
        let drawn = sample_members(&set, sample, seed);
        out["members_verified"] = json!(drawn.members.iter().all(|y| set.contains(y, tol)));
        out["members"] = to_json(&drawn.members);
    }
    Ok(out)
}

pub fn project_c0(x: &Value, sample: usize, seed: u64) -> Result<Value, CliError> {
    let x = input::c_element(x, "--x")?;
    let p = c0_projection(&x);
    let mut out = json!({ "limit": x.tail(), "distance": p.distance, "canonical": p.canonical, "singleton": p.distance == 0.0 });
    if sample > 0 {
        out["members"] = if p.distance == 0.0 { json!([x]) } else { to_json(&sample_projection_members(&x, sample, seed)?) };
    }
    Ok(out)
}

pub fn remez(function: &[String], degree: usize, opts: &RemezOptions) -> Result<Value, CliError> {
    let Target { name, func } = input::function(function)?;
    let cert = remez_with(&*func, degree, opts)?;
    let check = verify_equioscillation(&*func, &cert, degree, CHECK_TOL * cert.a.max(1.0));
    let mut out = json!({ "function": name, "degree": degree, "certificate": cert, "check": check });
    if cert.applicable && cert.a > 0.0 {
        out["residual_measure"] = to_json(&mu_pf(&*func, &cert)?);
    }
    Ok(out)
}

pub struct DualityArgs {
    pub space: &'static str,
    pub x: Option<Value>,
    pub phi: Option<Value>,
    pub function: Vec<String>,
    pub degree: Option<usize>,
    pub mu: Option<Value>,
    pub tol: f64,
    pub grid: usize,
}

fn required<'a>(v: &'a Option<Value>, flag: &str) -> Result<&'a Value, CliError> {
    v.as_ref().ok_or_else(|| CliError::Usage(format!("{flag} is required here")))
}

pub fn duality(a: &DualityArgs) -> Result<Value, CliError> {
    match a.space {
        "l1" => {
            let x = input::l1_element(required(&a.x, "--x")?, "--x")?;
            let norm = x.l1_norm();
            let mut out = json!({ "space": "l1", "norm": norm, "sign_dual": find_common_dual(&[&x], a.tol) });
            if let Some(phi) = &a.phi {
                let phi = input::linf_element(phi, "--phi")?;
                out["member"] = json!(j_l1_membership(&x, &phi, a.tol));
                out["kstar"] = to_json(&kstar(&phi));
            }
            if x.is_nonnegative() && norm > a.tol {
                out["simplex"] = to_json(&j_value_on_strict_simplex(&x, a.tol)?);
            }
            Ok(out)
        }
        "c" => {
            let x = input::c_element(required(&a.x, "--x")?, "--x")?;
            let phi = input::cstar(required(&a.phi, "--phi")?, "--phi")?;
            Ok(json!({ "space": "c", "norm": x.sup_norm(), "dual_norm": phi.dual_norm(), "member": j_c_membership(&x, &phi, a.tol) }))
        }
        _ => {
            if a.function.is_empty() {
                return Err(CliError::Usage("--function is required here".into()));
            }
            let Target { name, func } = input::function(&a.function)?;
            if let Some(mu) = &a.mu {
                let mu = input::measure(mu, "--mu")?;
                let member = j_c01_membership(&mu, &*func, a.tol, a.grid)?;
                return Ok(json!({ "space": "c01", "function": name, "mu": mu, "member": member }));
            }
            let degree = a.degree.ok_or_else(|| CliError::Usage("either --mu or --degree is required".into()))?;
            let cert = remez_plain(&*func, degree, DEFAULT_REMEZ_TOL, a.grid)?;
            let mu = mu_pf(&*func, &cert)?;
            let p = cert.p.clone();
            let f = func.clone();
            let member = j_c01_membership(&mu, &move |t| f(t) - p.eval(t), a.tol, a.grid)?;
            Ok(json!({ "space": "c01", "function": name, "certificate": cert, "mu": mu, "member": member }))
        }
    }
}

pub struct CoderivArgs {
    pub space: Space,
    pub case: Case,
    pub mode: Mode,
    pub x: Option<Value>,
    pub r: f64,
    pub psi: Option<Value>,
    pub d: f64,
    pub q0: f64,
    pub phi: Option<Value>,
    pub function: Vec<String>,
    pub degree: usize,
    pub gamma: Option<Value>,
    pub mu: Option<Value>,
    pub battery: usize,
    pub seed: u64,
    pub tol: f64,
    pub grid: usize,
}

fn name_of<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_owned()).unwrap_or_default()
}

struct Setup {
    point: GraphPoint,
    xstar: Dual,
    ystar: Dual,
    paths: Vec<WitnessPath>,
    /// The candidate is in the coderivative, so only a battery makes sense.
    admitted: bool,
}

fn l1_setup(a: &CoderivArgs) -> Result<Setup, CliError> {
    let x = match &a.x {
        Some(v) => input::l1_element(v, "--x")?,
        None if a.case == Case::Interior => GeoTailSeq::new(vec![0.3, -0.2], 0.0)?,
        None => GeoTailSeq::new(Vec::new(), 3.0)?,
    };
    let psi = match &a.psi {
        Some(v) => input::linf_element(v, "--psi")?,
        None if a.case == Case::Interior => EvConstSeq::constant(1.0),
        None => EvConstSeq::zero(),
    };
    let point = GraphPoint::l1_ball(x.clone(), a.r)?;
    let norm = x.l1_norm();
    if a.case == Case::Interior {
        if norm >= a.r {
            return Err(precondition(format!("interior case needs ‖x‖₁ = {norm} < r = {}", a.r)));
        }
        let d = Dual::L1(psi);
        return Ok(Setup { point, xstar: d.clone(), ystar: d, paths: Vec::new(), admitted: true });
    }
    if !x.is_strictly_positive() || norm <= a.r {
        return Err(precondition(format!("x must have positive entries and ‖x‖₁ = {norm} > r = {}", a.r)));
    }
    let target = match a.case {
        Case::ThetaTarget => L1Target::ThetaStar,
        Case::BetaTarget => L1Target::BetaD(a.d),
        _ => L1Target::BetaD(norm),
    };
    let admitted = target == L1Target::ThetaStar && psi.is_zero();
    let paths = if admitted { Vec::new() } else { witnesses_l1(&x, a.r, &psi, target)? };
    Ok(Setup { point, xstar: Dual::L1(psi), ystar: Dual::L1(target.dual()), paths, admitted })
}

fn c_setup(a: &CoderivArgs) -> Result<Setup, CliError> {
    let x = match &a.x {
        Some(v) => input::c_element(v, "--x")?,
        None => EvConstSeq::new(vec![1.0, -2.0], 0.5)?,
    };
    let psi = match &a.psi {
        Some(v) => input::cstar(v, "--psi")?,
        None => CStarFunctional::zero(),
    };
    let phi = if a.case == Case::LimitFunctional {
        CStarFunctional::limit_only(a.q0)
    } else {
        let phi = match &a.phi {
            Some(v) => input::cstar(v, "--phi")?,
            None => CStarFunctional::from_dense(0.0, &[0.0, 0.0, 2.0])?,
        };
        if phi.is_limit_only() {
            return Err(precondition("general-functional needs a target with an entry beyond the limit term"));
        }
        phi
    };
    let admitted = a.case == Case::LimitFunctional && psi.is_zero();
    let paths = witnesses_c(&x, &phi, &psi)?;
    Ok(Setup { point: GraphPoint::c_to_c0(x), xstar: Dual::C(psi), ystar: Dual::C(phi), paths, admitted })
}

fn c01_setup(a: &CoderivArgs) -> Result<Setup, CliError> {
    let default = ["poly", "0", "-1", "0", "1"].map(String::from);
    let tokens = if a.function.is_empty() { &default[..] } else { &a.function[..] };
    let Target { func, .. } = input::function(tokens)?;
    let cert = remez_plain(&*func, a.degree, DEFAULT_REMEZ_TOL, a.grid)?;
    let measure = |v: &Option<Value>, flag: &str| match v {
        Some(v) => input::measure(v, flag),
        None => Ok(AtomicMeasure::zero()),
    };
    let mu = measure(&a.mu, "--mu")?;
    let gamma = match a.case {
        Case::ZeroTarget => AtomicMeasure::zero(),
        Case::NegativePairing if a.gamma.is_none() => {
            let m = mu_pf(&*func, &cert)?;
            m.scale(-1.0 / m.total_variation())
        }
        _ => measure(&a.gamma, "--gamma")?,
    };
    if a.case == Case::NegativePairing {
        let p = cert.p.clone();
        let pairing = gamma.pair(&|t| func(t) - p.eval(t));
        if !(pairing < 0.0) {
            return Err(precondition(format!("⟨γ, f - p⟩ = {pairing:e} must be negative")));
        }
    }
    let paths = witnesses_c01(&func, &cert, &gamma, &mu)?;
    let point = GraphPoint::c01(func, cert, a.degree)?;
    Ok(Setup { point, xstar: Dual::C01(gamma), ystar: Dual::C01(mu), paths, admitted: false })
}

pub fn coderiv(a: &CoderivArgs) -> Result<Value, CliError> {
    let owner = match a.case {
        Case::Interior | Case::ThetaTarget | Case::BetaTarget | Case::DualTarget => Space::L1Ball,
        Case::LimitFunctional | Case::GeneralFunctional => Space::CToC0,
        Case::MassGap | Case::ZeroTarget | Case::NegativePairing => Space::C01ToPn,
    };
    if owner != a.space {
        return Err(CliError::Usage(format!(
            "case {} belongs to space {}",
            name_of(&a.case),
            to_json(&owner).as_str().unwrap_or_default()
        )));
    }
    let s = match a.space {
        Space::L1Ball => l1_setup(a)?,
        Space::CToC0 => c_setup(a)?,
        Space::C01ToPn => c01_setup(a)?,
    };
    let mode = match a.mode {
        Mode::Auto if s.admitted => Mode::Consistency,
        Mode::Auto => Mode::Exclusion,
        m => m,
    };
    let mut out = match mode {
        Mode::Consistency => to_json(&membership_consistency(&s.point, &s.xstar, &s.ystar, a.battery, a.seed, a.tol)?),
        _ => to_json(&exclusion_certificate(&s.point, &s.xstar, &s.ystar, &s.paths, a.tol)?),
    };
    out["case"] = json!(name_of(&a.case));
    out["mode"] = json!(name_of(&mode));
    Ok(out)
}

pub fn oracle(x: &Value, r: f64, resolution: f64, dim: Option<usize>) -> Result<Value, CliError> {
    let x = input::finite(x, "--x")?;
    let dim = dim.unwrap_or(x.max_index().max(2));
    let res = brute_force_oracle(&x, r, dim, resolution)?;
    let a = x.l1_norm();
    let mut out = json!({ "expected_distance": (a - r).max(0.0), "argmin_count": res.argmin.len() });
    if x.is_nonnegative() && a > r {
        let set = projection_set(&GeoTailSeq::from(&x), r)?;
        let slack = res.lattice_min - (a - r) + resolution / 2.0;
        out["descriptor_agrees"] = json!(descriptor_lattice_members(&set, dim, resolution, slack) == res.argmin);
    }
    out["oracle"] = to_json(&res);
    Ok(out)
}
