use std::path::Path;

use idemsum_core::equivalence::{hom_space, unitarize};
use idemsum_core::families::{
    cuntz_five_family, diag_phi_psi_family, load_family, orbit_rep_a40, rep_p3_32, rep_q1_two_dim,
    rep_q2perp, save_family, save_family_with, sl2_diffop_family, su2_family, su2_family_at,
    FamilyError, IdempotentFamily, OrbitCase, PQRSQuad, Which,
};
use idemsum_core::numerics::{hermitian_deviation, CMat};
use idemsum_core::orbits::{
    format_rational, fundamental_point, lambda4bd_member, lambda_set, orbit_enumerate,
    Lambda4Member, LambdaKind, Rational,
};
use idemsum_core::verify::{
    pqrs_report, relation_report, s4_identity_trials, trace_lambda_check, FamilyDescriptor,
    VerifyReport,
};
use idemsum_core::wildness::{
    fullness_check, fullness_trial_pair, parse_builder, Builder, Fullness, Substitution,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{
    BuildArgs, BuilderArg, CaseArg, EquivCmd, FamilyCmd, FamilyKind, IdentityCmd, LambdaCmd,
    OrbitCmd, ScanCmd, SignArg, WhichArg, WildCmd,
};
use crate::parse;

/// Largest `k` for which `scan lambda4` builds the `2k`-dimensional family.
pub const SCAN_MAX_K: u64 = 128;
pub const SCAN_MAX_POINTS: usize = 10_000;

pub struct Outcome {
    pub command: &'static str,
    pub body: Map<String, Value>,
    pub pass: bool,
    /// Short human-readable form for `--format text`.
    pub text: String,
}

impl Outcome {
    fn new(command: &'static str) -> Self {
        Outcome {
            command,
            body: Map::new(),
            pass: true,
            text: String::new(),
        }
    }

    fn put(&mut self, key: &str, value: Value) {
        self.body.insert(key.to_string(), value);
    }

    fn report(&mut self, key: &str, report: &VerifyReport) {
        self.pass &= report.pass;
        self.put(key, report.to_json());
    }
}

pub struct Ctx {
    pub seed: u64,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn fam_err(e: FamilyError) -> String {
    e.to_string()
}

fn check_tol(tol: f64) -> Result<(), String> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(format!("tolerance must be positive, got {tol}"))
    }
}

fn load(path: &Path) -> Result<IdempotentFamily, String> {
    load_family(path).map(|(f, _)| f).map_err(fam_err)
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn family(cmd: FamilyCmd) -> Result<Outcome, String> {
    match cmd {
        FamilyCmd::Build(args) => family_build(args),
        FamilyCmd::Verify { manifest, tol } => family_verify(&manifest, tol),
    }
}

/// Flags each kind accepts besides the common ones.
fn allowed_flags(kind: FamilyKind) -> &'static [&'static str] {
    match kind {
        FamilyKind::Q1 => &["y"],
        FamilyKind::P332 => &[],
        FamilyKind::Q2perp => &["alpha", "which"],
        FamilyKind::Su2 => &["k", "sign", "lambda"],
        FamilyKind::Diagphipsi => &["lambda", "blocks"],
        FamilyKind::Cuntz5 => &["lambda", "N"],
        FamilyKind::OrbitA40 => &["case", "mu", "a", "depth"],
        FamilyKind::Sl2diff => &["lambda", "branch", "degree"],
    }
}

fn given_flags(a: &BuildArgs) -> Vec<&'static str> {
    [
        ("y", a.y.is_some()),
        ("alpha", a.alpha.is_some()),
        ("which", a.which.is_some()),
        ("k", a.k.is_some()),
        ("sign", a.sign.is_some()),
        ("lambda", a.lambda.is_some()),
        ("blocks", a.blocks.is_some()),
        ("N", a.big_n.is_some()),
        ("case", a.case.is_some()),
        ("mu", a.mu.is_some()),
        ("a", a.a.is_some()),
        ("depth", a.depth.is_some()),
        ("branch", a.branch.is_some()),
        ("degree", a.degree.is_some()),
    ]
    .into_iter()
    .filter_map(|(name, set)| set.then_some(name))
    .collect()
}

fn complex_lambda(a: &BuildArgs, default: &str) -> Result<idemsum_core::numerics::C64, String> {
    parse::complex(a.lambda.as_deref().unwrap_or(default))
}

fn family_build(a: BuildArgs) -> Result<Outcome, String> {
    check_tol(a.tol)?;
    let allowed = allowed_flags(a.kind);
    if let Some(bad) = given_flags(&a).into_iter().find(|f| !allowed.contains(f)) {
        return Err(format!("--{bad} does not apply to this kind"));
    }
    let mut out = Outcome::new("family build");
    let mut extra: Vec<(&str, VerifyReport)> = Vec::new();
    let mut sl2_checks: Option<Value> = None;
    let fam = match a.kind {
        FamilyKind::Q1 => rep_q1_two_dim(a.y.unwrap_or(1.0)),
        FamilyKind::P332 => rep_p3_32(),
        FamilyKind::Q2perp => {
            let which = match a.which.unwrap_or(WhichArg::First) {
                WhichArg::First => Which::First,
                WhichArg::Second => Which::Second,
            };
            rep_q2perp(a.alpha.unwrap_or(1.0), which)
        }
        FamilyKind::Su2 => match (&a.lambda, a.k) {
            (Some(_), Some(_)) => return Err("give either --lambda or --k, not both".into()),
            (Some(l), None) => {
                if a.sign.is_some() {
                    return Err("--sign is implied by --lambda".into());
                }
                su2_family_at(&parse::rational(l)?)
            }
            (None, Some(k)) => {
                let sign = match a.sign.unwrap_or(SignArg::Plus) {
                    SignArg::Plus => 1,
                    SignArg::Minus => -1,
                };
                su2_family(k, sign)
            }
            (None, None) => return Err("su2 needs --k or --lambda".into()),
        },
        FamilyKind::Diagphipsi => {
            diag_phi_psi_family(complex_lambda(&a, "0")?, a.blocks.unwrap_or(30))
        }
        FamilyKind::Cuntz5 => cuntz_five_family(complex_lambda(&a, "0")?, a.big_n.unwrap_or(256)),
        FamilyKind::OrbitA40 => {
            let case = match a.case.ok_or("orbitA40 needs --case")? {
                CaseArg::I => OrbitCase::I(parse::rational(a.mu.as_deref().unwrap_or("1/4"))?),
                CaseArg::Ii => OrbitCase::II(a.a.unwrap_or(0.5)),
                CaseArg::Iii => OrbitCase::III(a.a.unwrap_or(0.5)),
                CaseArg::Iv => OrbitCase::IV,
                CaseArg::V => OrbitCase::V,
            };
            if a.mu.is_some() && !matches!(case, OrbitCase::I(_)) {
                return Err("--mu applies to case I only".into());
            }
            if a.a.is_some() && !matches!(case, OrbitCase::II(_) | OrbitCase::III(_)) {
                return Err("--a applies to cases II and III only".into());
            }
            orbit_rep_a40(case, a.depth.unwrap_or(12)).map(|rep| {
                extra.push(("pqrs", pqrs_report(&rep.quad, a.tol)));
                rep.family
            })
        }
        FamilyKind::Sl2diff => {
            let lambda = parse::complex(a.lambda.as_deref().ok_or("sl2diff needs --lambda")?)?;
            let op = sl2_diffop_family(lambda, a.branch.unwrap_or(1), a.degree.unwrap_or(8))
                .map_err(fam_err)?;
            let comm = op.commutator_residuals();
            let cas = op.casimir_residual();
            let ok = comm.iter().chain([&cas]).all(|r| *r <= a.tol);
            sl2_checks = Some(json!({
                "commutators": comm,
                "casimir": cas,
                "tolerance": a.tol,
                "pass": ok,
            }));
            op.family()
        }
    }
    .map_err(fam_err)?;

    out.put("family", json!(FamilyDescriptor::of(&fam)));
    out.put("params", fam.params.clone());
    if let Some(ix) = &fam.interior {
        out.put("interior_size", json!(ix.len()));
    }
    if let Some(path) = &a.out {
        save_family(&fam, path).map_err(fam_err)?;
        out.put("manifest", json!(path.display().to_string()));
    }
    if a.verify {
        out.report("relations", &relation_report(&fam, a.tol));
        for (key, report) in &extra {
            out.report(key, report);
        }
        if let Some(v) = sl2_checks {
            out.pass &= v["pass"] == json!(true);
            out.put("sl2", v);
        }
    }
    out.text = format!(
        "{} n={} dim={} {}",
        fam.kind,
        fam.n(),
        fam.dim(),
        if a.verify {
            pass_word(out.pass)
        } else {
            "built"
        }
    );
    Ok(out)
}

fn family_verify(path: &Path, tol: f64) -> Result<Outcome, String> {
    check_tol(tol)?;
    let fam = load(path)?;
    let mut out = Outcome::new("family verify");
    out.put("manifest", json!(path.display().to_string()));
    out.report("relations", &relation_report(&fam, tol));
    if fam.kind == "orbitA40" {
        let quad = PQRSQuad::from_family(&fam).map_err(fam_err)?;
        out.report("pqrs", &pqrs_report(&quad, tol));
    }
    if !fam.is_truncated() {
        let tr = trace_lambda_check(&fam).map_err(|e| e.to_string())?;
        out.pass &= tr.pass;
        out.put("trace", json!(tr));
    }
    out.text = format!("{} dim={} {}", fam.kind, fam.dim(), pass_word(out.pass));
    Ok(out)
}

pub fn lambda(cmd: LambdaCmd) -> Result<Outcome, String> {
    match cmd {
        LambdaCmd::Set { n, kind, count } => {
            let kind: LambdaKind = kind
                .parse()
                .map_err(|e: idemsum_core::orbits::OrbitError| e.to_string())?;
            let seq = lambda_set(n, kind, count).map_err(|e| e.to_string())?;
            let terms = seq.to_strings();
            let mut out = Outcome::new("lambda set");
            out.put("n", json!(n));
            out.put("kind", json!(kind.to_string()));
            out.text = terms.join(", ");
            out.put("terms", json!(terms));
            Ok(out)
        }
        LambdaCmd::Member { value } => {
            let q = parse::rational(&value)?;
            let member = lambda4bd_member(&q).map_err(|e| e.to_string())?;
            let mut out = Outcome::new("lambda member");
            out.put("value", json!(format_rational(&q)));
            out.put("member", json!(member.is_some()));
            match &member {
                Some(Lambda4Member::Center) => {
                    out.put("form", json!("2"));
                    out.text = format!("{} = 2", format_rational(&q));
                }
                Some(Lambda4Member::Point { k, sign }) => {
                    out.put("form", json!("2 + sign*2/k"));
                    out.put("k", json!(k));
                    out.put("sign", json!(sign));
                    let s = if *sign > 0 { '+' } else { '-' };
                    out.text = format!("{} = 2 {s} 2/{k}", format_rational(&q));
                }
                None => out.text = format!("{} is not in Lambda4bd", format_rational(&q)),
            }
            Ok(out)
        }
    }
}

pub fn orbit(cmd: OrbitCmd, seed: Option<&str>) -> Result<Outcome, String> {
    let seed = parse::rational(seed.ok_or("orbit needs --seed RAT")?)?;
    match cmd {
        OrbitCmd::Enum(a) => {
            let orbit = orbit_enumerate(&seed, a.depth).map_err(|e| e.to_string())?;
            let points: Vec<Value> = orbit
                .points
                .iter()
                .map(|p| {
                    let word: Vec<String> = p.word.iter().map(ToString::to_string).collect();
                    json!({ "value": format_rational(&p.value), "word": word })
                })
                .collect();
            let mut out = Outcome::new("orbit enum");
            out.put("seed", json!(format_rational(&seed)));
            out.put("depth", json!(a.depth));
            out.text = orbit
                .points
                .iter()
                .map(|p| format_rational(&p.value))
                .collect::<Vec<_>>()
                .join(", ");
            out.put("points", Value::Array(points));
            Ok(out)
        }
        OrbitCmd::Fundamental(a) => {
            let x = fundamental_point(&seed, a.depth).map_err(|e| e.to_string())?;
            let mut out = Outcome::new("orbit fundamental");
            out.put("seed", json!(format_rational(&seed)));
            out.put("depth", json!(a.depth));
            out.put("point", json!(format_rational(&x)));
            out.text = format_rational(&x);
            Ok(out)
        }
    }
}

pub fn equiv(cmd: EquivCmd) -> Result<Outcome, String> {
    match cmd {
        EquivCmd::Hom { a, b, star } => {
            let (fa, fb) = (load(&a)?, load(&b)?);
            let hom = hom_space(&fa, &fb, star).map_err(|e| e.to_string())?;
            let mut out = Outcome::new("equiv hom");
            out.put("a", json!(FamilyDescriptor::of(&fa)));
            out.put("b", json!(FamilyDescriptor::of(&fb)));
            out.put("star", json!(star));
            out.put("dim", json!(hom.dim));
            out.text = format!("dim Hom = {}", hom.dim);
            Ok(out)
        }
        EquivCmd::Unitarize { a, tol, out: dest } => {
            check_tol(tol)?;
            let fam = load(&a)?;
            let u = unitarize(&fam).map_err(|e| e.to_string())?;
            let mut out = Outcome::new("equiv unitarize");
            out.put("family", json!(FamilyDescriptor::of(&fam)));
            out.put("conditioning", json!(u.conditioning));
            out.put("hermitian_deviation", json!(u.raw_deviation));
            let g_dev = hermitian_deviation(&u.g);
            out.put("metric_hermitian_deviation", json!(g_dev));
            out.pass = u.raw_deviation <= tol && g_dev <= tol && u.conditioning > 0.0;
            out.report("relations", &relation_report(&u.star_fam, tol));
            if let Some(path) = dest {
                save_family(&u.star_fam, &path).map_err(fam_err)?;
                out.put("manifest", json!(path.display().to_string()));
            }
            out.text = format!(
                "conditioning {:.3e}, deviation {:.3e} {}",
                u.conditioning,
                u.raw_deviation,
                pass_word(out.pass)
            );
            Ok(out)
        }
    }
}

fn builder(arg: BuilderArg, lambda: Option<&str>) -> Result<Builder, String> {
    let lambda: Option<Rational> = lambda.map(parse::rational).transpose()?;
    let name = match arg {
        BuilderArg::Wild1a => "wild1a",
        BuilderArg::Wild1b => "wild1b",
        BuilderArg::Wild2 => "wild2",
    };
    if lambda.is_some() && arg != BuilderArg::Wild2 {
        return Err(format!("--lambda does not apply to {name}"));
    }
    parse_builder(name, lambda).map_err(|e| e.to_string())
}

pub fn wild(cmd: WildCmd, ctx: &Ctx) -> Result<Outcome, String> {
    match cmd {
        WildCmd::Build {
            builder: b,
            lambda,
            subdim,
            tol,
            out: dest,
        } => {
            check_tol(tol)?;
            if subdim == 0 {
                return Err("--subdim must be at least 1".into());
            }
            let b = builder(b, lambda.as_deref())?;
            let mut rng = ctx.rng();
            let sub = Substitution::random(b.substitution_kind(), subdim, &mut rng);
            let img = b.build(&sub).map_err(|e| e.to_string())?;
            let mut out = Outcome::new("wild build");
            out.put("builder", json!(b.to_string()));
            out.put("m", json!(img.m));
            out.put("block_dim", json!(img.block_dim));
            out.put("family", json!(FamilyDescriptor::of(&img.fam)));
            out.report("relations", &relation_report(&img.fam, tol));
            if let Some(quad) = &img.quad {
                out.report("pqrs", &pqrs_report(quad, tol));
            }
            if let Some(j3) = &img.j3 {
                let r = j3.adjoint().matmul(j3).max_diff(&CMat::identity(j3.cols()));
                let ok = r <= tol;
                out.pass &= ok;
                out.put(
                    "j3_isometry",
                    json!({ "residual": r, "tolerance": tol, "pass": ok }),
                );
            }
            if let Some(n) = img.big_n {
                out.put("N", json!(n));
            }
            if let Some(path) = dest {
                save_family_with(&img.fam, &path, img.manifest()).map_err(fam_err)?;
                out.put("manifest", json!(path.display().to_string()));
            }
            out.text = format!(
                "{b} m={} dim={} {}",
                img.m,
                img.fam.dim(),
                pass_word(out.pass)
            );
            Ok(out)
        }
        WildCmd::Fullness {
            builder: b,
            lambda,
            trials,
            subdim,
        } => {
            if trials == 0 || subdim == 0 {
                return Err("--trials and --subdim must be at least 1".into());
            }
            let b = builder(b, lambda.as_deref())?;
            // Draw every pair up front so the result does not depend on scheduling.
            let mut rng = ctx.rng();
            let pairs = (0..trials)
                .map(|t| fullness_trial_pair(b.substitution_kind(), t, subdim, &mut rng))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let results: Vec<Fullness> = pairs
                .par_iter()
                .map(|(p1, p2)| fullness_check(&b, p1, p2))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let equal = results.iter().filter(|r| r.equal).count();
            let rows: Vec<Value> = pairs
                .iter()
                .zip(&results)
                .map(|((p1, p2), r)| {
                    json!({
                        "m": [p1.m(), p2.m()],
                        "dim_source": r.dim_source,
                        "dim_target": r.dim_target,
                        "equal": r.equal,
                    })
                })
                .collect();
            let mut out = Outcome::new("wild fullness");
            out.put("builder", json!(b.to_string()));
            out.put("trials", json!(trials));
            out.put("max_m", json!(subdim));
            out.put("equal", json!(equal));
            out.put("results", Value::Array(rows));
            out.pass = equal == trials;
            out.text = format!("{b}: {equal}/{trials} equal {}", pass_word(out.pass));
            Ok(out)
        }
    }
}

pub fn identity(cmd: IdentityCmd, ctx: &Ctx) -> Result<Outcome, String> {
    let IdentityCmd::S4 {
        manifest,
        trials,
        wordlen,
        tol,
    } = cmd;
    check_tol(tol)?;
    let fam = load(&manifest)?;
    let mut rng = ctx.rng();
    let res = s4_identity_trials(&fam, trials, wordlen, &mut rng).map_err(|e| e.to_string())?;
    let max = res.iter().copied().fold(0.0, f64::max);
    let mut out = Outcome::new("identity s4");
    out.put("family", json!(FamilyDescriptor::of(&fam)));
    out.put("trials", json!(trials));
    out.put("wordlen", json!(wordlen));
    out.put("max_residual", json!(max));
    out.put("tolerance", json!(tol));
    out.put("residuals", json!(res));
    out.pass = max <= tol;
    out.text = format!("max residual {max:.3e} {}", pass_word(out.pass));
    Ok(out)
}

/// Outcome of building the su2 family at one grid point.
enum Su2Status {
    Built,
    Refused,
    Skipped,
    Broken(String),
}

pub fn scan(cmd: ScanCmd) -> Result<Outcome, String> {
    let ScanCmd::Lambda4 { grid, tol } = cmd;
    check_tol(tol)?;
    let points = parse::grid(&grid, SCAN_MAX_POINTS)?;
    let rows: Vec<(Option<Lambda4Member>, Su2Status)> = points
        .par_iter()
        .map(|x| {
            let member = lambda4bd_member(x).map_err(|e| e.to_string())?;
            let status = match &member {
                Some(Lambda4Member::Point { k, .. }) if *k > SCAN_MAX_K => Su2Status::Skipped,
                _ => match su2_family_at(x) {
                    Ok(f) if relation_report(&f, tol).pass => Su2Status::Built,
                    Ok(_) => Su2Status::Broken("relations fail".into()),
                    Err(FamilyError::NotInLambda4bd { .. }) => Su2Status::Refused,
                    // λ = 2 is realized, but not by the su2 construction.
                    Err(FamilyError::BadParameter(_))
                        if matches!(member, Some(Lambda4Member::Center)) =>
                    {
                        Su2Status::Refused
                    }
                    Err(e) => Su2Status::Broken(e.to_string()),
                },
            };
            Ok((member, status))
        })
        .collect::<Result<_, String>>()?;

    let mut out = Outcome::new("scan lambda4");
    out.put("grid", json!(grid));
    let mut table = Vec::with_capacity(points.len());
    let mut agree_all = true;
    let mut admitted = Vec::new();
    for (x, (member, status)) in points.iter().zip(&rows) {
        let point = matches!(member, Some(Lambda4Member::Point { .. }));
        let (su2, agree, note) = match status {
            Su2Status::Built => (json!(true), point, None),
            Su2Status::Refused => (json!(false), !point, None),
            Su2Status::Skipped => (
                Value::Null,
                true,
                Some(format!("k > {SCAN_MAX_K}, not built")),
            ),
            Su2Status::Broken(e) => (json!(false), false, Some(e.clone())),
        };
        if matches!(status, Su2Status::Built) {
            admitted.push(format_rational(x));
        }
        agree_all &= agree;
        let mut row = json!({
            "lambda": format_rational(x),
            "member": member.is_some(),
            "su2": su2,
            "agree": agree,
        });
        if let Some(n) = note {
            row["note"] = json!(n);
        }
        table.push(row);
    }
    out.put("points", Value::Array(table));
    out.pass = agree_all;
    out.text = format!("admits su2: {}", admitted.join(", "));
    out.put("admitted", json!(admitted));
    Ok(out)
}
