//! Ingestion, normalization, and validation of Maass-form spectral datasets:
//! eigenvalues kappa, parities, Hecke eigenvalues, and first-coefficient
//! norms, in the conventions used by the sum-formula harness.
//!
//! Input schema (delimited text): header `kappa,epsilon,norm_sq_rho1,t2,...,tN`
//! with decimal floating-point fields. A manifest side-file `<path>.manifest`
//! carries `source`, `N`, `kappa_max`, `precision`, and `normalization`
//! key=value lines. An optional `<path>.holo` file lists holomorphic forms
//! with header `k,norm_sq_rho1,t2,...,tN`.

use crate::error::{Error, Result};
use crate::specfun::KAPPA_MIN_PSL2Z;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

/// Convention tag identifying what the dataset's `norm_sq_rho1` column means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationTag {
    /// |rho(1)|^2 of the L2-normalized form in the sqrt(y) K_{i kappa} e(nx)
    /// Fourier convention (the chapter's rho).
    RhoOneSq,
    /// alpha = |rho(1)|^2 / cosh(pi kappa), a common tabulation.
    AlphaCosh,
}

impl NormalizationTag {
    fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "rho1_sq" => Ok(NormalizationTag::RhoOneSq),
            "alpha_cosh" => Ok(NormalizationTag::AlphaCosh),
            other => Err(Error::DataFormat {
                line: 0,
                msg: format!("unknown normalization tag '{other}'"),
            }),
        }
    }
    fn name(&self) -> &'static str {
        match self {
            NormalizationTag::RhoOneSq => "rho1_sq",
            NormalizationTag::AlphaCosh => "alpha_cosh",
        }
    }
}

/// One Maass cusp form: spectral parameter, parity, Hecke eigenvalues t(n)
/// for 2 <= n <= N (t(1) = 1), and the squared first coefficient in the
/// tagged normalization.
#[derive(Debug, Clone)]
pub struct MaassFormRecord {
    pub kappa: f64,
    pub epsilon: i8,
    pub hecke: Vec<f64>,
    pub norm_sq_rho1: f64,
    pub normalization_tag: NormalizationTag,
}

impl MaassFormRecord {
    /// t(n) for n >= 1 within the stored range.
    pub fn t(&self, n: usize) -> Result<f64> {
        match n {
            0 => Err(Error::InvalidArgument("t(n) needs n >= 1".into())),
            1 => Ok(1.0),
            _ => self.hecke.get(n - 2).copied().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "record stores Hecke eigenvalues to n = {}, asked for {n}",
                    self.hecke.len() + 1
                ))
            }),
        }
    }

    pub fn n_max(&self) -> usize {
        self.hecke.len() + 1
    }

    /// |varrho_V(1)|^2 in the chapter normalization, via
    /// |Gamma(1/2 + i kappa)|^2 = pi / cosh(pi kappa).
    pub fn varrho1_sq(&self) -> f64 {
        match self.normalization_tag {
            NormalizationTag::RhoOneSq => self.norm_sq_rho1 / (4.0 * (PI * self.kappa).cosh()),
            NormalizationTag::AlphaCosh => self.norm_sq_rho1 / 4.0,
        }
    }
}

/// Normalized coefficient varrho_V(n) = epsilon^{(1-sgn n)/2} varrho_V(1) t(|n|),
/// with varrho_V(1) taken real nonnegative (the free phase is unobservable in
/// the sum formulas, which see only varrho-bar times varrho).
pub fn normalize(rec: &MaassFormRecord, n: i64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("varrho(n) needs n != 0".into()));
    }
    let base = rec.varrho1_sq().sqrt();
    let t = rec.t(n.unsigned_abs() as usize)?;
    let parity = if n < 0 { rec.epsilon as f64 } else { 1.0 };
    Ok(Complex64::new(parity * base * t, 0.0))
}

/// One holomorphic cusp form of weight 2k: Hecke eigenvalues in the
/// t(n) = (classical eigenvalue) / n^{k-1/2} normalization and |rho(1)|^2 of
/// the Petersson-normalized form.
#[derive(Debug, Clone)]
pub struct HoloFormRecord {
    pub k: i32,
    pub hecke: Vec<f64>,
    pub norm_sq_rho1: f64,
}

impl HoloFormRecord {
    pub fn t(&self, n: usize) -> Result<f64> {
        match n {
            0 => Err(Error::InvalidArgument("t(n) needs n >= 1".into())),
            1 => Ok(1.0),
            _ => self.hecke.get(n - 2).copied().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "holomorphic record stores eigenvalues to n = {}, asked for {n}",
                    self.hecke.len() + 1
                ))
            }),
        }
    }

    /// |varrho_V(1)|^2 = Gamma(2k) / (2^{4k} pi^{2k+1}) |rho(1)|^2.
    pub fn varrho1_sq(&self) -> f64 {
        let mut g = 1.0f64; // Gamma(2k) = (2k-1)!
        for j in 1..(2 * self.k) {
            g *= j as f64;
        }
        g / (2.0f64.powi(4 * self.k) * PI.powi(2 * self.k + 1)) * self.norm_sq_rho1
    }
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub source: String,
    pub n_max: usize,
    pub kappa_max: f64,
    pub precision: f64,
    pub normalization: NormalizationTag,
}

#[derive(Debug, Clone)]
pub struct SpectralDataset {
    pub forms: Vec<MaassFormRecord>,
    pub holo: Vec<HoloFormRecord>,
    pub manifest: Manifest,
}

/// Input format of the spectral dataset file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    /// comma-delimited with a header row
    DelimitedText,
    /// one record per line of key=value tokens
    StructuredRecords,
}

fn parse_field(tok: &str, line: usize, what: &str) -> Result<f64> {
    tok.trim().parse::<f64>().map_err(|_| Error::DataFormat {
        line,
        msg: format!("non-numeric {what}: '{tok}'"),
    })
}

fn parse_header(header: &str) -> Result<usize> {
    let cols: Vec<&str> = header.trim().split(',').map(|c| c.trim()).collect();
    if cols.len() < 3 || cols[0] != "kappa" || cols[1] != "epsilon" || cols[2] != "norm_sq_rho1" {
        return Err(Error::DataFormat {
            line: 1,
            msg: format!(
                "expected header kappa,epsilon,norm_sq_rho1,t2,... got '{}'",
                header.trim()
            ),
        });
    }
    for (i, c) in cols.iter().enumerate().skip(3) {
        let expect = format!("t{}", i - 1);
        if *c != expect {
            return Err(Error::DataFormat {
                line: 1,
                msg: format!("header column {} should be {expect}, got '{c}'", i + 1),
            });
        }
    }
    Ok(cols.len() - 3 + 1) // N
}

fn read_manifest(path: &Path) -> Result<Manifest> {
    let mpath = path.with_extension(format!(
        "{}manifest",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let text = std::fs::read_to_string(&mpath)
        .map_err(|e| Error::Io(format!("manifest {}: {e}", mpath.display())))?;
    let mut source = String::new();
    let mut n_max = 0usize;
    let mut kappa_max = 0.0f64;
    let mut precision = 0.0f64;
    let mut normalization = NormalizationTag::RhoOneSq;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::DataFormat {
            line: 0,
            msg: format!("manifest line without '=': '{line}'"),
        })?;
        match k.trim() {
            "source" => source = v.trim().to_string(),
            "N" => {
                n_max = v.trim().parse().map_err(|_| Error::DataFormat {
                    line: 0,
                    msg: format!("bad manifest N: {v}"),
                })?
            }
            "kappa_max" => kappa_max = parse_field(v, 0, "kappa_max")?,
            "precision" => precision = parse_field(v, 0, "precision")?,
            "normalization" => normalization = NormalizationTag::parse(v)?,
            _ => {} // unknown manifest keys are ignored
        }
    }
    Ok(Manifest {
        source,
        n_max,
        kappa_max,
        precision,
        normalization,
    })
}

/// Load a spectral dataset with its manifest side-file and optional
/// holomorphic companion file.
pub fn load(path: &Path, format: DatasetFormat) -> Result<SpectralDataset> {
    let manifest = read_manifest(path)?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut forms = Vec::new();
    match format {
        DatasetFormat::DelimitedText => {
            let mut lines = text.lines().enumerate();
            let (_, header) = lines.next().ok_or(Error::DataFormat {
                line: 1,
                msg: "empty dataset file".into(),
            })?;
            let n = parse_header(header)?;
            for (idx, line) in lines {
                let lno = idx + 1;
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let toks: Vec<&str> = line.split(',').collect();
                if toks.len() != n + 2 {
                    return Err(Error::DataFormat {
                        line: lno,
                        msg: format!("expected {} fields, got {}", n + 2, toks.len()),
                    });
                }
                let kappa = parse_field(toks[0], lno, "kappa")?;
                let eps = parse_field(toks[1], lno, "epsilon")?;
                if eps != 1.0 && eps != -1.0 {
                    return Err(Error::DataFormat {
                        line: lno,
                        msg: format!("epsilon must be ±1, got {eps}"),
                    });
                }
                let norm = parse_field(toks[2], lno, "norm_sq_rho1")?;
                if !(norm > 0.0) {
                    return Err(Error::DataFormat {
                        line: lno,
                        msg: format!("norm_sq_rho1 must be positive, got {norm}"),
                    });
                }
                let mut hecke = Vec::with_capacity(n - 1);
                for (j, tok) in toks[3..].iter().enumerate() {
                    hecke.push(parse_field(tok, lno, &format!("t{}", j + 2))?);
                }
                forms.push(MaassFormRecord {
                    kappa,
                    epsilon: eps as i8,
                    hecke,
                    norm_sq_rho1: norm,
                    normalization_tag: manifest.normalization,
                });
            }
        }
        DatasetFormat::StructuredRecords => {
            for (idx, line) in text.lines().enumerate() {
                let lno = idx + 1;
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut kappa = None;
                let mut eps = None;
                let mut norm = None;
                let mut hecke: Vec<(usize, f64)> = Vec::new();
                for tok in line.split_whitespace() {
                    let (k, v) = tok.split_once('=').ok_or_else(|| Error::DataFormat {
                        line: lno,
                        msg: format!("token without '=': '{tok}'"),
                    })?;
                    match k {
                        "kappa" => kappa = Some(parse_field(v, lno, "kappa")?),
                        "epsilon" => eps = Some(parse_field(v, lno, "epsilon")?),
                        "norm_sq_rho1" => norm = Some(parse_field(v, lno, "norm_sq_rho1")?),
                        t if t.starts_with('t') => {
                            let idx: usize = t[1..].parse().map_err(|_| Error::DataFormat {
                                line: lno,
                                msg: format!("bad Hecke key '{t}'"),
                            })?;
                            hecke.push((idx, parse_field(v, lno, t)?));
                        }
                        other => {
                            return Err(Error::DataFormat {
                                line: lno,
                                msg: format!("unknown key '{other}'"),
                            })
                        }
                    }
                }
                let (kappa, eps, norm) = match (kappa, eps, norm) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => {
                        return Err(Error::DataFormat {
                            line: lno,
                            msg: "record missing kappa/epsilon/norm_sq_rho1".into(),
                        })
                    }
                };
                hecke.sort_by_key(|&(i, _)| i);
                let mut tvals = Vec::new();
                for (want, &(i, v)) in (2..).zip(hecke.iter()) {
                    if i != want {
                        return Err(Error::DataFormat {
                            line: lno,
                            msg: format!("Hecke keys must be contiguous t2..tN, missing t{want}"),
                        });
                    }
                    tvals.push(v);
                }
                forms.push(MaassFormRecord {
                    kappa,
                    epsilon: eps as i8,
                    hecke: tvals,
                    norm_sq_rho1: norm,
                    normalization_tag: manifest.normalization,
                });
            }
        }
    }
    forms.sort_by(|a, b| a.kappa.partial_cmp(&b.kappa).unwrap());
    for w in forms.windows(2) {
        if (w[1].kappa - w[0].kappa).abs() <= manifest.precision.max(1e-12) {
            return Err(Error::DataFormat {
                line: 0,
                msg: format!("duplicate kappa within precision: {}", w[0].kappa),
            });
        }
    }
    // optional holomorphic companion
    let holo_path = path.with_extension(format!(
        "{}holo",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let mut holo = Vec::new();
    if holo_path.exists() {
        let text = std::fs::read_to_string(&holo_path)
            .map_err(|e| Error::Io(format!("{}: {e}", holo_path.display())))?;
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::DataFormat {
            line: 1,
            msg: "empty holomorphic file".into(),
        })?;
        let cols: Vec<&str> = header.trim().split(',').map(|c| c.trim()).collect();
        if cols.len() < 2 || cols[0] != "k" || cols[1] != "norm_sq_rho1" {
            return Err(Error::DataFormat {
                line: 1,
                msg: "holomorphic header must start k,norm_sq_rho1,t2,...".into(),
            });
        }
        for (idx, line) in lines {
            let lno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split(',').collect();
            let k = parse_field(toks[0], lno, "k")? as i32;
            if k < 6 {
                return Err(Error::DataFormat {
                    line: lno,
                    msg: format!("holomorphic k = {k} below 6 (no cusp forms of weight < 12)"),
                });
            }
            let norm = parse_field(toks[1], lno, "norm_sq_rho1")?;
            let mut hecke = Vec::new();
            for (j, tok) in toks[2..].iter().enumerate() {
                hecke.push(parse_field(tok, lno, &format!("t{}", j + 2))?);
            }
            holo.push(HoloFormRecord {
                k,
                hecke,
                norm_sq_rho1: norm,
            });
        }
    }
    Ok(SpectralDataset {
        forms,
        holo,
        manifest,
    })
}

/// Serialize back to delimited text (numeric fields at full precision, so a
/// load/save/load roundtrip is bit-exact).
pub fn save(ds: &SpectralDataset, path: &Path) -> Result<()> {
    let n = ds.manifest.n_max;
    let mut out = String::from("kappa,epsilon,norm_sq_rho1");
    for i in 2..=n {
        let _ = write!(out, ",t{i}");
    }
    out.push('\n');
    for f in &ds.forms {
        let _ = write!(out, "{:.17e},{},{:.17e}", f.kappa, f.epsilon, f.norm_sq_rho1);
        for t in &f.hecke {
            let _ = write!(out, ",{t:.17e}");
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mpath = path.with_extension(format!(
        "{}manifest",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let m = &ds.manifest;
    let mtext = format!(
        "source = {}\nN = {}\nkappa_max = {:.6}\nprecision = {:.3e}\nnormalization = {}\n",
        m.source,
        m.n_max,
        m.kappa_max,
        m.precision,
        m.normalization.name()
    );
    std::fs::write(&mpath, mtext).map_err(|e| Error::Io(format!("{}: {e}", mpath.display())))?;
    Ok(())
}

/// Per-record validation outcome.
#[derive(Debug, Clone)]
pub struct RecordCheck {
    pub kappa: f64,
    pub kappa_bound_ok: bool,
    pub max_mult_residual: f64,
    pub mult_ok: bool,
    pub bound_fit_c: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub records: Vec<RecordCheck>,
    pub all_pass: bool,
    pub mult_tolerance: f64,
}

impl ValidationReport {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let _ = writeln!(
                s,
                "kappa={:<12.6} kappa_bound={} mult_residual={:.3e} (ok={}) bound_fit_C={:.3}",
                r.kappa, r.kappa_bound_ok, r.max_mult_residual, r.mult_ok, r.bound_fit_c
            );
        }
        let _ = writeln!(s, "all_pass={}", self.all_pass);
        s
    }
}

/// Check the kappa bound, Hecke multiplicativity
/// t(m) t(n) = sum_{d | (m,n)} t(mn/d^2), and the eigenvalue-bound fit
/// |t(n)| <= C n^{1/4 + 0.01} per record.
pub fn validate(ds: &SpectralDataset) -> ValidationReport {
    let tol = (ds.manifest.precision * 50.0).max(1e-9);
    let mut records = Vec::new();
    let mut all = true;
    for f in &ds.forms {
        let kappa_ok = f.kappa > KAPPA_MIN_PSL2Z;
        let nmax = f.n_max();
        let mut worst = 0.0f64;
        for m in 2..=nmax {
            for n in m..=nmax {
                if m * n > nmax {
                    continue;
                }
                // t(m) t(n) = sum over d | gcd(m,n) of t(mn/d^2)
                let g = num_gcd(m, n);
                let mut expect = 0.0;
                for d in 1..=g {
                    if g % d == 0 {
                        expect += f.t(m * n / (d * d)).unwrap();
                    }
                }
                let got = f.t(m).unwrap() * f.t(n).unwrap();
                worst = worst.max((got - expect).abs());
            }
        }
        let mut cfit = 0.0f64;
        for n in 2..=nmax {
            cfit = cfit.max(f.t(n).unwrap().abs() / (n as f64).powf(0.26));
        }
        let mult_ok = worst <= tol;
        all &= kappa_ok && mult_ok;
        records.push(RecordCheck {
            kappa: f.kappa,
            kappa_bound_ok: kappa_ok,
            max_mult_residual: worst,
            mult_ok,
            bound_fit_c: cfit,
        });
    }
    ValidationReport {
        records,
        all_pass: all,
        mult_tolerance: tol,
    }
}

fn num_gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
