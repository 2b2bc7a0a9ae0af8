//! Command-line front end: evaluate functions and transforms, run the
//! verification suites, and execute trace-formula comparisons.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage error, 3 data error.
//! Structured output (`--format records`) emits one record per line with
//! fields `check,inputs,value,residual,tol,pass`; given the same config and
//! seed the records are byte-identical across runs.

use crate::error::Error;
use crate::group::IwasawaCoords;
use crate::kirillov::KernelParam;
use crate::kloosterman::{SumFormulaReport, TestWeight};
use crate::lie::{FiniteDifferenceSpec, LieOperator};
use crate::specfun::QuadratureSpec;
use crate::spectra::DatasetFormat;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eval,
    Verify,
    Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Records,
}

/// Parsed invocation: command, target, key->value parameters (flags override
/// config-file entries), output format, and the randomness seed.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub target: String,
    pub params: BTreeMap<String, String>,
    pub output: OutputFormat,
    pub seed: u64,
}

/// Parse a complex literal: `1.5`, `-0.5`, `0.3i`, `-i`, `1+2i`, `1.5-0.7i`,
/// `2e-3+1e-2i`.
pub fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::InvalidArgument("empty complex literal".into()));
    }
    let bad = || Error::InvalidArgument(format!("cannot parse complex literal '{s}'"));
    if let Some(body) = t.strip_suffix('i') {
        // pure imaginary or a+bi: find the split sign outside exponents
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().map_err(|_| bad())?;
                let im_str = &body[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn load_config_file(path: &str, params: &mut BTreeMap<String, String>) -> Result<(), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("config line without '=': '{line}'")))?;
        // flags override file entries: only insert if absent
        params.entry(k.trim().to_string()).or_insert_with(|| v.trim().to_string());
    }
    Ok(())
}

/// Parse argv (without the binary name): `<command> <target> [--key value]...`.
pub fn parse_args(args: &[String]) -> Result<RunConfig, Error> {
    if args.is_empty() {
        return Err(Error::InvalidArgument(USAGE.into()));
    }
    let command = match args[0].as_str() {
        "eval" => Command::Eval,
        "verify" => Command::Verify,
        "trace" => Command::Trace,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown command '{other}'\n{USAGE}"
            )))
        }
    };
    let mut target = String::new();
    let mut params = BTreeMap::new();
    let mut config_file = None;
    let mut i = 1;
    if command != Command::Trace {
        if args.len() < 2 || args[1].starts_with("--") {
            return Err(Error::InvalidArgument(format!(
                "{:?} needs a target\n{USAGE}",
                command
            )));
        }
        target = args[1].clone();
        i = 2;
    }
    while i < args.len() {
        let key = args[i]
            .strip_prefix("--")
            .ok_or_else(|| Error::InvalidArgument(format!("expected --flag, got '{}'", args[i])))?;
        let val = args
            .get(i + 1)
            .ok_or_else(|| Error::InvalidArgument(format!("flag --{key} needs a value")))?;
        if key == "config" {
            config_file = Some(val.clone());
        } else {
            params.insert(key.to_string(), val.clone());
        }
        i += 2;
    }
    if let Some(path) = config_file {
        load_config_file(&path, &mut params)?;
    }
    let output = match params.get("format").map(String::as_str) {
        None | Some("human") => OutputFormat::Human,
        Some("records") => OutputFormat::Records,
        Some(other) => {
            return Err(Error::InvalidArgument(format!("unknown format '{other}'")))
        }
    };
    let seed = params
        .get("seed")
        .map(|s| s.parse().map_err(|_| Error::InvalidArgument(format!("bad seed '{s}'"))))
        .transpose()?
        .unwrap_or(1);
    Ok(RunConfig {
        command,
        target,
        params,
        output,
        seed,
    })
}

pub const USAGE: &str = "usage:
  psl2z eval <target> [--key value]...    targets: kloosterman, bessel-kernel, jacquet,
                                          whittaker, gamma-p, xi-kernel, transform-A, transform-B
  psl2z verify <suite> [--key value]...   suites: lie, jacquet, kirillov, mellin-pairs,
                                          gram, kloosterman-basic
  psl2z trace --dataset <path> --m <int> --n <int> [--bump-lo a --bump-hi b]
              [--ell-max L --nu-cutoff T] [--format human|records] [--config file]";

struct CheckRecord {
    check: String,
    inputs: String,
    value: String,
    residual: f64,
    tol: f64,
    pass: bool,
}

fn emit(records: &[CheckRecord], output: OutputFormat, out: &mut String) {
    match output {
        OutputFormat::Records => {
            for r in records {
                let _ = writeln!(
                    out,
                    "check={},inputs={},value={},residual={:.6e},tol={:.1e},pass={}",
                    r.check, r.inputs, r.value, r.residual, r.tol, r.pass
                );
            }
        }
        OutputFormat::Human => {
            for r in records {
                let _ = writeln!(
                    out,
                    "{:<44} {:<36} value={:<28} residual={:<12.3e} tol={:<9.1e} {}",
                    r.check,
                    r.inputs,
                    r.value,
                    r.residual,
                    r.tol,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
        }
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.12e}{:+.12e}i", z.re, z.im)
}

fn quad_from_params(params: &BTreeMap<String, String>) -> Result<QuadratureSpec, Error> {
    let mut spec = QuadratureSpec::with_tol(1e-11, 1e-11);
    if let Some(v) = params.get("abs-tol") {
        spec.abs_tol = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad abs-tol '{v}'")))?;
    }
    if let Some(v) = params.get("rel-tol") {
        spec.rel_tol = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rel-tol '{v}'")))?;
    }
    if let Some(v) = params.get("max-panels") {
        spec.max_panels = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad max-panels '{v}'")))?;
    }
    Ok(spec)
}

fn need<'a>(params: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str, Error> {
    params
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::InvalidArgument(format!("missing required flag --{key}")))
}

fn pf64(params: &BTreeMap<String, String>, key: &str) -> Result<f64, Error> {
    need(params, key)?
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("flag --{key} is not a number")))
}

fn pi64(params: &BTreeMap<String, String>, key: &str) -> Result<i64, Error> {
    need(params, key)?
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("flag --{key} is not an integer")))
}

fn kernel_param(params: &BTreeMap<String, String>) -> Result<KernelParam, Error> {
    if let Some(k) = params.get("discrete-k") {
        let k: i32 = k
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad --discrete-k '{k}'")))?;
        Ok(KernelParam::Discrete(k))
    } else {
        Ok(KernelParam::Nu(parse_complex(need(params, "nu")?)?))
    }
}

/// Evaluate a single function or transform; prints value plus error estimate.
pub fn cmd_eval(cfg: &RunConfig, out: &mut String) -> Result<i32, Error> {
    let spec = quad_from_params(&cfg.params)?;
    let start = std::time::Instant::now();
    let (inputs, value): (String, String) = match cfg.target.as_str() {
        "kloosterman" => {
            let (m, n, ell) = (
                pi64(&cfg.params, "m")?,
                pi64(&cfg.params, "n")?,
                pi64(&cfg.params, "ell")?,
            );
            let v = crate::kloosterman::kloosterman_sum(m, n, ell)?;
            (format!("m={m};n={n};ell={ell}"), format!("{v:+.12e}"))
        }
        "bessel-kernel" => {
            let param = kernel_param(&cfg.params)?;
            let u = pf64(&cfg.params, "u")?;
            let v = crate::kirillov::bessel_kernel(param, u)?;
            (format!("param={param:?};u={u}"), format!("{v:+.12e}"))
        }
        "jacquet" => {
            let p = pi64(&cfg.params, "p")? as i32;
            let nu = parse_complex(need(&cfg.params, "nu")?)?;
            let delta = pi64(&cfg.params, "delta").unwrap_or(1) as i32;
            let y = pf64(&cfg.params, "y")?;
            let x = cfg.params.get("x").map(|s| s.parse().unwrap_or(0.0)).unwrap_or(0.0);
            let theta = cfg
                .params
                .get("theta")
                .map(|s| s.parse().unwrap_or(0.0))
                .unwrap_or(0.0);
            let at = IwasawaCoords::new(x, y, theta)?;
            let v = crate::jacquet::jacquet_phi(p, nu, delta, &at, &spec)?;
            (
                format!("p={p};nu={nu};delta={delta};x={x};y={y};theta={theta}"),
                fmt_c(v),
            )
        }
        "whittaker" => {
            let alpha = parse_complex(need(&cfg.params, "alpha")?)?;
            let mu = parse_complex(need(&cfg.params, "mu")?)?;
            let arg = pf64(&cfg.params, "arg")?;
            let v = crate::jacquet::whittaker_w(alpha, mu, arg, &spec)?;
            (format!("alpha={alpha};mu={mu};arg={arg}"), fmt_c(v))
        }
        "gamma-p" => {
            let p = pi64(&cfg.params, "p")? as i32;
            let s = parse_complex(need(&cfg.params, "s")?)?;
            let nu = parse_complex(need(&cfg.params, "nu")?)?;
            let v = crate::kirillov::gamma_p(p, s, nu, &spec)?;
            (format!("p={p};s={s};nu={nu}"), fmt_c(v))
        }
        "xi-kernel" => {
            let u = pf64(&cfg.params, "u")?;
            let nu = parse_complex(need(&cfg.params, "nu")?)?;
            let v = crate::kloosterman::xi_kernel(u, nu, &spec)?;
            (format!("u={u};nu={nu}"), fmt_c(v))
        }
        "transform-A" => {
            let delta = pi64(&cfg.params, "delta").unwrap_or(1) as i32;
            let x = pf64(&cfg.params, "x")?;
            let scale = cfg
                .params
                .get("scale")
                .map(|s| s.parse().unwrap_or(1.0))
                .unwrap_or(1.0);
            let f = TestWeight::gaussian_spectral(scale)?;
            let v = crate::kloosterman::transform_a(&f, delta, x, &spec)?;
            (format!("delta={delta};x={x};scale={scale}"), fmt_c(v))
        }
        "transform-B" => {
            let delta = pi64(&cfg.params, "delta").unwrap_or(1) as i32;
            let param = kernel_param(&cfg.params)?;
            let lo = cfg
                .params
                .get("bump-lo")
                .map(|s| s.parse().unwrap_or(1.0))
                .unwrap_or(1.0);
            let hi = cfg
                .params
                .get("bump-hi")
                .map(|s| s.parse().unwrap_or(2.0))
                .unwrap_or(2.0);
            let phi = TestWeight::bump(lo, hi)?;
            let v = crate::kloosterman::transform_b(&phi, delta, param, &spec)?;
            (
                format!("delta={delta};param={param:?};bump=[{lo},{hi}]"),
                fmt_c(v),
            )
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown eval target '{other}'\n{USAGE}"
            )))
        }
    };
    let wall = start.elapsed().as_secs_f64();
    match cfg.output {
        OutputFormat::Human => {
            let _ = writeln!(out, "{} {inputs}", cfg.target);
            let _ = writeln!(out, "value = {value}");
            let _ = writeln!(out, "tolerance = {:.1e} (requested), wall = {wall:.3}s", spec.rel_tol);
        }
        OutputFormat::Records => {
            let _ = writeln!(
                out,
                "check=eval/{},inputs={inputs},value={value},residual=0.0,tol={:.1e},pass=true",
                cfg.target, spec.rel_tol
            );
        }
    }
    Ok(EXIT_OK)
}

/// Run a named verification suite with seeded randomized inputs.
pub fn cmd_verify(cfg: &RunConfig, out: &mut String) -> Result<i32, Error> {
    let spec = quad_from_params(&cfg.params)?;
    let mut records = Vec::new();
    match cfg.target.as_str() {
        "lie" => verify_lie(cfg.seed, &mut records)?,
        "jacquet" => verify_jacquet(&spec, &mut records)?,
        "kirillov" => verify_kirillov(&spec, &mut records)?,
        "mellin-pairs" => verify_mellin_pairs(&spec, &mut records)?,
        "gram" => {
            let nu = cfg
                .params
                .get("nu")
                .map(|s| parse_complex(s))
                .transpose()?
                .unwrap_or(Complex64::new(0.0, 0.5));
            let pmax = cfg
                .params
                .get("pmax")
                .map(|s| s.parse().unwrap_or(3))
                .unwrap_or(3);
            verify_gram(nu, pmax, &spec, &mut records)?;
        }
        "kloosterman-basic" => verify_kloosterman_basic(&mut records)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown verify suite '{other}'\n{USAGE}"
            )))
        }
    }
    emit(&records, cfg.output, out);
    let failed: Vec<&CheckRecord> = records.iter().filter(|r| !r.pass).collect();
    if failed.is_empty() {
        let _ = writeln!(out, "suite {}: all {} checks passed", cfg.target, records.len());
        Ok(EXIT_OK)
    } else {
        let names: Vec<&str> = failed.iter().map(|r| r.check.as_str()).collect();
        let _ = writeln!(
            out,
            "suite {}: {} of {} checks FAILED: {}",
            cfg.target,
            failed.len(),
            records.len(),
            names.join(", ")
        );
        Ok(EXIT_CHECK_FAILURE)
    }
}

fn verify_lie(seed: u64, records: &mut Vec<CheckRecord>) -> Result<(), Error> {
    use LieOperator::*;
    let fd = FiniteDifferenceSpec::default();
    let suite = crate::lie::test_function_suite(seed, 8);
    let pts = [
        IwasawaCoords::new(0.25, 1.4, 0.8)?,
        IwasawaCoords::new(-0.6, 0.7, 2.1)?,
        IwasawaCoords::new(1.1, 2.2, 0.3)?,
    ];
    let pairs = [
        (X1, X2, "commutator[x1,x2]"),
        (X1, X3, "commutator[x1,x3]"),
        (X2, X3, "commutator[x2,x3]"),
        (W, Eplus, "commutator[w,e+]"),
        (W, Eminus, "commutator[w,e-]"),
        (Eplus, Eminus, "commutator[e+,e-]"),
    ];
    for (i, j, name) in pairs {
        let mut worst = 0.0f64;
        for f in &suite {
            for at in &pts {
                worst = worst.max(crate::lie::commutator_residual(i, j, f, at, &fd)?);
            }
        }
        records.push(CheckRecord {
            check: name.into(),
            inputs: format!("seed={seed};functions={};points={}", suite.len(), pts.len()),
            value: format!("{worst:.3e}"),
            residual: worst,
            tol: 1e-5,
            pass: worst < 1e-5,
        });
    }
    let mut worst = 0.0f64;
    for f in &suite {
        for at in &pts {
            worst = worst.max(crate::lie::casimir_consistency(f, at, &fd)?);
        }
    }
    records.push(CheckRecord {
        check: "casimir-three-routes".into(),
        inputs: format!("seed={seed}"),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-5,
        pass: worst < 1e-5,
    });
    let mut worst = 0.0f64;
    for f in &suite {
        for at in &pts {
            let g = crate::group::compose(at)?;
            for (j, op) in [(1u8, X1), (2, X2), (3, X3)] {
                let a = crate::lie::apply(op, f, at, &fd)?;
                let b = crate::lie::apply_by_right_translation(j, f, &g, &fd)?;
                worst = worst.max((a - b).norm() / (1.0 + a.norm()));
            }
        }
    }
    records.push(CheckRecord {
        check: "coordinate-vs-right-translation".into(),
        inputs: format!("seed={seed}"),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-6,
        pass: worst < 1e-6,
    });
    Ok(())
}

fn verify_jacquet(spec: &QuadratureSpec, records: &mut Vec<CheckRecord>) -> Result<(), Error> {
    use crate::specfun::{bessel, gamma, BesselKind};
    use std::f64::consts::PI;
    let mut worst = 0.0f64;
    for &(nu_im, y) in &[(0.3, 1.0), (1.0, 0.5), (3.0, 2.0)] {
        let nu = Complex64::new(0.0, nu_im);
        let a = crate::jacquet::jacquet_phi_radial(0, nu, 1, y, spec)?;
        let closed = 2.0 * ((0.5 + nu) * PI.ln()).exp() / gamma(nu + 0.5)?
            * y.sqrt()
            * bessel(BesselKind::K, nu, 2.0 * PI * y)?;
        worst = worst.max((a - closed).norm() / closed.norm());
    }
    records.push(CheckRecord {
        check: "jacquet-p0-k-bessel-closed-form".into(),
        inputs: "nu in {0.3i,i,3i}".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-8,
        pass: worst < 1e-8,
    });
    let mut worst = 0.0f64;
    for &(p, nu_im, y) in &[(1, 0.5, 0.8), (2, 1.0, 1.3)] {
        let nu = Complex64::new(0.0, nu_im);
        let a = crate::jacquet::jacquet_phi_radial(p, nu, 1, y, spec)?;
        let b = crate::jacquet::radial_ibp(p, nu, 1, y, spec)? * ((0.5 - nu) * y.ln()).exp();
        worst = worst.max((a - b).norm() / (1.0 + a.norm()));
    }
    records.push(CheckRecord {
        check: "jacquet-contour-vs-ibp".into(),
        inputs: "(p,nu,y) grid".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-8,
        pass: worst < 1e-8,
    });
    let mut worst = 0.0f64;
    for &(p, t, y) in &[(0, 0.6, 2.0), (1, 1.2, 3.0)] {
        let w = crate::jacquet::whittaker_w(
            Complex64::new(p as f64, 0.0),
            Complex64::new(0.0, t),
            y,
            spec,
        )?;
        worst = worst.max(w.im.abs() / (1.0 + w.re.abs()));
    }
    records.push(CheckRecord {
        check: "whittaker-real-on-principal-series".into(),
        inputs: "(p,kappa,y) grid".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-9,
        pass: worst < 1e-9,
    });
    let r = crate::jacquet::whittaker_ode_residual(1, Complex64::new(0.0, 0.5), 1, 2.0, spec)?;
    records.push(CheckRecord {
        check: "whittaker-ode-residual".into(),
        inputs: "p=1;nu=0.5i;n=1;y=2".into(),
        value: format!("{r:.3e}"),
        residual: r,
        tol: 1e-6,
        pass: r < 1e-6,
    });
    Ok(())
}

fn verify_kirillov(spec: &QuadratureSpec, records: &mut Vec<CheckRecord>) -> Result<(), Error> {
    let mut worst = 0.0f64;
    for p in [0, 1, 2] {
        for &s in &[0.4, 0.5, 0.6] {
            for &t in &[0.1, 0.3, 0.9] {
                let r = crate::kirillov::functional_equation_residual(
                    p,
                    Complex64::new(s, 0.0),
                    Complex64::new(0.0, t),
                    spec,
                )?;
                worst = worst.max(r);
            }
        }
    }
    records.push(CheckRecord {
        check: "local-functional-equation-27pt".into(),
        inputs: "p in {0,1,2}; s in {0.4,0.5,0.6}; nu in {0.1i,0.3i,0.9i}".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-6,
        pass: worst < 1e-6,
    });
    let mut worst = 0.0f64;
    for p in [0, 1, 3] {
        let r = crate::kirillov::gamma_p_recursion_residual(
            p,
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.3),
            spec,
        )?;
        worst = worst.max(r);
    }
    records.push(CheckRecord {
        check: "gamma-p-recursion".into(),
        inputs: "p in {0,1,3}; s=0.6; nu=0.3i".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-7,
        pass: worst < 1e-7,
    });
    let mut worst = 0.0f64;
    for &u in &[1.3, -0.8] {
        let a = crate::kirillov::bessel_kernel(KernelParam::Nu(Complex64::new(0.0, 0.4)), u)?;
        let b = crate::kirillov::bessel_kernel(KernelParam::Nu(Complex64::new(0.0, -0.4)), u)?;
        worst = worst.max((a - b).abs() / (1.0 + a.abs()));
    }
    records.push(CheckRecord {
        check: "kernel-evenness".into(),
        inputs: "nu=±0.4i; u=±".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-10,
        pass: worst < 1e-10,
    });
    let v = crate::kirillov::bessel_kernel(KernelParam::Discrete(6), -2.0)?;
    records.push(CheckRecord {
        check: "discrete-kernel-vanishing".into(),
        inputs: "k=6;u=-2".into(),
        value: format!("{v:.3e}"),
        residual: v.abs(),
        tol: 0.0,
        pass: v == 0.0,
    });
    Ok(())
}

fn verify_mellin_pairs(spec: &QuadratureSpec, records: &mut Vec<CheckRecord>) -> Result<(), Error> {
    let pts = [
        (0.18, 0.05),
        (0.2, 0.1),
        (0.22, 0.15),
        (0.15, 0.0),
        (0.2, 0.3),
        (0.23, 0.05),
    ];
    let mut worst_pos = 0.0f64;
    let mut worst_neg = 0.0f64;
    for &(s, t) in &pts {
        let rp = crate::kirillov::mellin_pair_residual(
            Complex64::new(s, 0.0),
            Complex64::new(0.0, t),
            true,
            spec,
        )?;
        worst_pos = worst_pos.max(rp);
        let rn = crate::kirillov::mellin_pair_residual(
            Complex64::new(s, 0.0),
            Complex64::new(0.0, t),
            false,
            spec,
        )?;
        worst_neg = worst_neg.max(rn);
    }
    records.push(CheckRecord {
        check: "mellin-pair-positive-axis".into(),
        inputs: "6 sample points".into(),
        value: format!("{worst_pos:.3e}"),
        residual: worst_pos,
        tol: 1e-7,
        pass: worst_pos < 1e-7,
    });
    records.push(CheckRecord {
        check: "mellin-pair-negative-axis".into(),
        inputs: "6 sample points".into(),
        value: format!("{worst_neg:.3e}"),
        residual: worst_neg,
        tol: 1e-7,
        pass: worst_neg < 1e-7,
    });
    Ok(())
}

fn verify_gram(
    nu: Complex64,
    pmax: i32,
    spec: &QuadratureSpec,
    records: &mut Vec<CheckRecord>,
) -> Result<(), Error> {
    let rep = crate::kirillov::gram_matrix(KernelParam::Nu(nu), pmax, spec)?;
    let dev = rep.max_offdiag.max(rep.max_diag_dev);
    records.push(CheckRecord {
        check: "gram-unitarity".into(),
        inputs: format!("nu={nu};pmax={pmax}"),
        value: format!("max deviation {dev:.3e}"),
        residual: dev,
        tol: 1e-6,
        pass: dev < 1e-6,
    });
    Ok(())
}

fn verify_kloosterman_basic(records: &mut Vec<CheckRecord>) -> Result<(), Error> {
    let mut worst = 0.0f64;
    for m in 1..=3 {
        for n in 1..=3 {
            for ell in 1..=25 {
                let a = crate::kloosterman::kloosterman_sum(m, n, ell)?;
                let b = crate::kloosterman::kloosterman_sum(n, m, ell)?;
                worst = worst.max((a - b).abs());
            }
        }
    }
    records.push(CheckRecord {
        check: "kloosterman-symmetry".into(),
        inputs: "m,n<=3; ell<=25".into(),
        value: format!("{worst:.3e}"),
        residual: worst,
        tol: 1e-10,
        pass: worst < 1e-10,
    });
    let mut weil_ok = true;
    let mut worst_ratio = 0.0f64;
    for p in (2i64..500).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)) {
        let s = crate::kloosterman::kloosterman_sum(1, 1, p)?;
        let ratio = s.abs() / (2.0 * (p as f64).sqrt());
        worst_ratio = worst_ratio.max(ratio);
        weil_ok &= ratio <= 1.0 + 1e-12;
    }
    records.push(CheckRecord {
        check: "weil-bound-primes".into(),
        inputs: "p < 500".into(),
        value: format!("max |S|/2sqrt(p) = {worst_ratio:.4}"),
        residual: (worst_ratio - 1.0).max(0.0),
        tol: 0.0,
        pass: weil_ok,
    });
    Ok(())
}

/// Trace-formula comparison on a dataset.
pub fn cmd_trace(cfg: &RunConfig, out: &mut String) -> Result<i32, Error> {
    let path = cfg
        .params
        .get("dataset")
        .ok_or_else(|| Error::InvalidArgument("trace needs --dataset <path>".into()))?;
    let m = pi64(&cfg.params, "m")?;
    let n = pi64(&cfg.params, "n")?;
    let lo = cfg
        .params
        .get("bump-lo")
        .map(|s| s.parse().unwrap_or(1.0))
        .unwrap_or(1.0);
    let hi = cfg
        .params
        .get("bump-hi")
        .map(|s| s.parse().unwrap_or(2.0))
        .unwrap_or(2.0);
    let ell_max = cfg
        .params
        .get("ell-max")
        .map(|s| s.parse().unwrap_or(100))
        .unwrap_or(100);
    let nu_cutoff = cfg
        .params
        .get("nu-cutoff")
        .map(|s| s.parse().unwrap_or(40.0))
        .unwrap_or(40.0);
    let spec = quad_from_params(&cfg.params)?;
    let ds = crate::spectra::load(Path::new(path), DatasetFormat::DelimitedText)?;
    let validation = crate::spectra::validate(&ds);
    if !validation.all_pass {
        let _ = writeln!(out, "dataset validation FAILED:\n{}", validation.summary());
        return Ok(EXIT_DATA);
    }
    let phi = TestWeight::bump(lo, hi)?;
    let report = crate::kloosterman::trace_formula_report(m, n, &phi, &ds, ell_max, nu_cutoff, &spec)?;
    render_trace_report(&report, cfg.output, out);
    Ok(EXIT_OK)
}

pub fn render_trace_report(r: &SumFormulaReport, output: OutputFormat, out: &mut String) {
    match output {
        OutputFormat::Records => {
            let _ = writeln!(
                out,
                "check=trace,inputs=m={};n={};delta={};forms={};ell_max={};nu_cutoff={},value=spectral={}|geometric={},residual={:.6e},tol=1.0e-2,pass={}",
                r.m,
                r.n,
                r.delta,
                r.truncation.num_forms,
                r.truncation.ell_max,
                r.truncation.nu_cutoff,
                fmt_c(r.spectral_side),
                fmt_c(r.geometric_side),
                r.residual,
                r.residual < 1e-2
            );
            for (kappa, term) in &r.per_form {
                let _ = writeln!(
                    out,
                    "check=trace/form,inputs=kappa={kappa:.8},value={},residual=0.0,tol=0.0,pass=true",
                    fmt_c(*term)
                );
            }
        }
        OutputFormat::Human => {
            let _ = writeln!(out, "sum formula: m={} n={} (delta = {})", r.m, r.n, r.delta);
            let _ = writeln!(out, "  geometric side  = {}", fmt_c(r.geometric_side));
            let _ = writeln!(out, "  spectral side   = {}", fmt_c(r.spectral_side));
            let _ = writeln!(out, "    cusp forms    : {} terms", r.per_form.len());
            let _ = writeln!(out, "    discrete ser. = {}", fmt_c(r.discrete_series_term));
            if r.delta < 0 {
                let _ = writeln!(out, "      (absent for mn < 0 by the sign factor)");
            }
            let _ = writeln!(out, "    continuous    = {}", fmt_c(r.continuous_term));
            let _ = writeln!(
                out,
                "  residual |spec - geom| / (1 + |geom|) = {:.6e}",
                r.residual
            );
            let _ = writeln!(
                out,
                "  budget: spectral tail ~ {:.2e}, quadrature ~ {:.2e} (ell_max={}, nu_cutoff={})",
                r.spectral_tail_budget,
                r.quadrature_budget,
                r.truncation.ell_max,
                r.truncation.nu_cutoff
            );
            let _ = writeln!(out, "  per-form contributions:");
            for (kappa, term) in &r.per_form {
                let _ = writeln!(out, "    kappa = {kappa:<12.8} term = {}", fmt_c(*term));
            }
        }
    }
}

/// Entry point used by the binary: returns the process exit code.
pub fn main_entry(args: &[String]) -> i32 {
    let cfg = match parse_args(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_USAGE;
        }
    };
    let mut out = String::new();
    let result = match cfg.command {
        Command::Eval => cmd_eval(&cfg, &mut out),
        Command::Verify => cmd_verify(&cfg, &mut out),
        Command::Trace => cmd_trace(&cfg, &mut out),
    };
    print!("{out}");
    match result {
        Ok(code) => code,
        Err(e @ Error::DataFormat { .. }) | Err(e @ Error::Io(..)) => {
            eprintln!("{e}");
            EXIT_DATA
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.3i").unwrap(), Complex64::new(0.0, 0.3));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("1.5-0.7i").unwrap(), Complex64::new(1.5, -0.7));
        assert_eq!(parse_complex("2e-3+1e-2i").unwrap(), Complex64::new(2e-3, 1e-2));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn eval_kloosterman_matches_library() {
        let cfg = parse_args(&args(&["eval", "kloosterman", "--m", "1", "--n", "1", "--ell", "3"]))
            .unwrap();
        let mut out = String::new();
        let code = cmd_eval(&cfg, &mut out).unwrap();
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("-1.0000000000"), "{out}");
    }

    #[test]
    fn eval_bessel_kernel_discrete_zero() {
        let cfg = parse_args(&args(&[
            "eval",
            "bessel-kernel",
            "--discrete-k",
            "6",
            "--u",
            "-2",
        ]))
        .unwrap();
        let mut out = String::new();
        cmd_eval(&cfg, &mut out).unwrap();
        assert!(out.contains("+0.000000000000e0"), "{out}");
    }

    #[test]
    fn eval_gamma_p_passthrough() {
        let cfg = parse_args(&args(&[
            "eval", "gamma-p", "--p", "0", "--s", "0.5", "--nu", "0.3i",
        ]))
        .unwrap();
        let mut out = String::new();
        let code = cmd_eval(&cfg, &mut out).unwrap();
        assert_eq!(code, EXIT_OK);
        let lib = crate::kirillov::gamma_p(
            0,
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.3),
            &QuadratureSpec::with_tol(1e-11, 1e-11),
        )
        .unwrap();
        assert!(out.contains(&format!("{:+.12e}", lib.re)), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert!(parse_args(&args(&["frobnicate"])).is_err());
        assert!(parse_args(&args(&["eval"])).is_err());
        assert!(parse_args(&args(&["eval", "kloosterman", "--m"])).is_err());
        let cfg = parse_args(&args(&["eval", "nonsense", "--m", "1"])).unwrap();
        let mut out = String::new();
        assert!(cmd_eval(&cfg, &mut out).is_err());
        // precondition violation surfaces as an error naming the field
        let cfg = parse_args(&args(&["eval", "kloosterman", "--m", "1", "--n", "1", "--ell", "0"]))
            .unwrap();
        let err = cmd_eval(&cfg, &mut String::new()).unwrap_err();
        assert!(format!("{err}").contains("ell"));
    }

    #[test]
    fn records_output_is_deterministic() {
        let run = || {
            let cfg = parse_args(&args(&[
                "verify",
                "kloosterman-basic",
                "--format",
                "records",
                "--seed",
                "7",
            ]))
            .unwrap();
            let mut out = String::new();
            cmd_verify(&cfg, &mut out).unwrap();
            out
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn config_file_with_flag_override() {
        let dir = std::env::temp_dir().join("psl2z_cli_cfg");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "m = 2\nn = 2\nell = 5\n").unwrap();
        let cfg = parse_args(&args(&[
            "eval",
            "kloosterman",
            "--config",
            path.to_str().unwrap(),
            "--ell",
            "3",
        ]))
        .unwrap();
        // flag wins over file
        assert_eq!(cfg.params.get("ell").unwrap(), "3");
        assert_eq!(cfg.params.get("m").unwrap(), "2");
    }

    #[test]
    fn trace_missing_dataset_is_clean_data_error() {
        let cfg = parse_args(&args(&[
            "trace",
            "--dataset",
            "/nonexistent/file.csv",
            "--m",
            "1",
            "--n",
            "1",
        ]))
        .unwrap();
        let mut out = String::new();
        let r = cmd_trace(&cfg, &mut out);
        assert!(matches!(r, Err(Error::Io(_))));
        assert!(out.is_empty(), "no partial output on data error");
    }
}
