//! The subcommands, as library functions that take resolved options and
//! return what they wrote.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use zmc_core::catalog::{ExampleSpec, SCHERK_RADIUS};
use zmc_core::krust::{
    classify_regions, region_restricted, sup_abs_g, sweep_against, Certificate, RegionClassification, RegionLabel,
    RegionSettings, RhoInterval,
};
use zmc_core::univalence::{boundary_image, classify_image, univalence_oracle};
use zmc_core::{DeformParams, DomainShape, DomainSpec, ImageClass, TheoremId, Verdict, WeierstrassData, C64};

use crate::error::CliError;
use crate::mesh::{build_mesh, lattice, MeshFile};
use crate::parse::parse_data_file;

/// Which Weierstrass data to load.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceOpts {
    /// `enneper`, `exponential`, `scherk` or a data-file path.
    pub name: String,
    pub n: Option<u32>,
    /// Exponential family: use `[-W, -0.001] × [-W, W]`.
    pub truncation: Option<f64>,
    /// Exponential family on the unit disk instead of the half-plane.
    pub exp_disk: bool,
    /// Disk radius (restricts disk data to `|w| < R`).
    pub radius: Option<f64>,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct Source {
    pub id: String,
    pub data: WeierstrassData,
    /// Unrestricted data when `--radius` shrank a disk.
    pub unrestricted: Option<WeierstrassData>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn restrict(spec: ExampleSpec, radius: Option<f64>) -> Result<(WeierstrassData, Option<WeierstrassData>), CliError> {
    match radius {
        None => Ok((spec.data, None)),
        Some(r) => Ok((spec.data.restrict_to_disk(r)?, Some(spec.data))),
    }
}

pub fn load_source(opts: &SourceOpts) -> Result<Source, CliError> {
    let (id, data, unrestricted) = match opts.name.as_str() {
        "enneper" => {
            let n = opts.n.unwrap_or(3);
            let (d, u) = restrict(ExampleSpec::enneper(n)?, opts.radius)?;
            let id = match opts.radius {
                Some(r) => format!("enneper(n={n}, R={r})"),
                None => format!("enneper(n={n})"),
            };
            (id, d, u)
        }
        "exponential" => {
            let n = opts.n.unwrap_or(2);
            if opts.exp_disk {
                if opts.truncation.is_some() {
                    return Err(usage("--truncation applies to the half-plane domain only"));
                }
                let r = opts.radius.unwrap_or(1.0);
                let d = ExampleSpec::exponential_on(n, DomainSpec::disk(r).map_err(|e| usage(e.to_string()))?)?.data;
                (format!("exponential(n={n}, disk R={r})"), d, None)
            } else {
                if opts.radius.is_some() {
                    return Err(usage("--radius needs a disk domain; add --disk"));
                }
                let w = opts.truncation.unwrap_or(zmc_core::holofn::HALF_PLANE_WIDTH);
                let d = ExampleSpec::exponential_truncated(n, w)?.data;
                (format!("exponential(n={n}, truncation={w})"), d, None)
            }
        }
        "scherk" => {
            if opts.n.is_some() {
                return Err(usage("--n does not apply to scherk"));
            }
            let r = opts.radius.unwrap_or(SCHERK_RADIUS);
            (format!("scherk(R={r})"), ExampleSpec::scherk_on(r)?.data, None)
        }
        path => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let file = parse_data_file(&text).map_err(|source| CliError::Input {
                path: PathBuf::from(path),
                source,
            })?;
            let full = file.build()?;
            match opts.radius {
                Some(r) => (format!("file:{path} (R={r})"), full.restrict_to_disk(r)?, Some(full)),
                None => (format!("file:{path}"), full, None),
            }
        }
    };
    Ok(Source {
        id,
        data: data.with_tolerance(opts.tol),
        unrestricted,
    })
}

/// `θ, λ, c` with `ρ` optionally overriding `|c|` (the sign of `c` is kept,
/// `+` when `c = 0`).
pub fn deform_params(theta: f64, lambda: f64, c: f64, rho: Option<f64>) -> Result<DeformParams, CliError> {
    let c = match rho {
        None => c,
        Some(r) if r >= 0.0 => {
            let sign = if c < 0.0 { -1.0 } else { 1.0 };
            sign * r / (lambda * lambda)
        }
        Some(_) => return Err(usage("--rho must be non-negative")),
    };
    DeformParams::new(theta, lambda, c).map_err(|e| usage(e.to_string()))
}

fn domain_label(d: &DomainSpec) -> String {
    let b = d.base();
    let shape = match d.shape() {
        DomainShape::Disk { radius } => format!("disk {radius}"),
        DomainShape::HalfPlane { width, height, delta } => format!("halfplane {width} {height} {delta}"),
        DomainShape::Polygon { vertices } => {
            let v: Vec<String> = vertices.iter().map(|p| format!("{},{}", p.re, p.im)).collect();
            format!("polygon {}", v.join(" "))
        }
    };
    format!("{shape}; base {},{}", b.re, b.im)
}

fn pt(w: C64) -> [f64; 2] {
    [w.re, w.im]
}

/// One resolved option and where it came from.
#[derive(Clone, Debug, Serialize)]
pub struct Setting {
    pub key: String,
    pub value: String,
    pub origin: String,
}

// ---------------------------------------------------------------- surface

#[derive(Clone, Debug)]
pub struct MeshOpts {
    pub rings: usize,
    pub spokes: usize,
}

fn mesh_for(src: &Source, p: &DeformParams, m: &MeshOpts, settings: &[Setting]) -> Result<MeshFile, CliError> {
    let lat = lattice(src.data.domain(), m.rings, m.spokes);
    let mut mesh = build_mesh(&src.data, p, &lat, m.rings.min(128))?;
    mesh.push_meta("data", &src.id);
    mesh.push_meta("domain", domain_label(src.data.domain()));
    mesh.push_meta("theta", p.theta());
    mesh.push_meta("lambda", p.lambda());
    mesh.push_meta("c", p.c());
    mesh.push_meta("rho", p.rho());
    mesh.push_meta("potentials", if src.data.potentials().is_symbolic() { "closed-form" } else { "quadrature" });
    mesh.push_meta("tolerance", src.data.potentials().tolerance());
    match src.data.domain().shape() {
        DomainShape::Disk { .. } => mesh.push_meta("grid", format!("polar {} rings x {} spokes", m.rings, m.spokes)),
        _ => mesh.push_meta("grid", format!("lattice {0} x {0} cells", m.rings)),
    }
    for s in settings {
        mesh.push_meta(&format!("setting {}", s.key), format!("{} ({})", s.value, s.origin));
    }
    Ok(mesh)
}

fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| CliError::io(path, e))?;
    fs::write(path, buf).map_err(|e| CliError::io(path, e))
}

/// Sidecar path: `mesh.obj` gets `mesh.obj.singular`.
pub fn singular_path(mesh: &Path) -> PathBuf {
    let mut s = mesh.as_os_str().to_owned();
    s.push(".singular");
    PathBuf::from(s)
}

/// Write the mesh to `out` (plus the sidecar), or to `stdout` without a
/// sidecar when `out` is `None`.
pub fn cmd_surface(
    src: &Source,
    p: &DeformParams,
    m: &MeshOpts,
    settings: &[Setting],
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<MeshFile, CliError> {
    let mesh = mesh_for(src, p, m, settings)?;
    match out {
        Some(path) => {
            write_file(path, |b| mesh.write(b))?;
            write_file(&singular_path(path), |b| mesh.write_singular(b))?;
        }
        None => mesh.write(stdout).map_err(|e| CliError::io("<stdout>", e))?,
    }
    Ok(mesh)
}

// ---------------------------------------------------------------- verify

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Census {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witnesses {
    /// Two parameter points with the same image.
    pub collision: Option<[[f64; 2]; 2]>,
    pub jacobian_zero: Option<[f64; 2]>,
    /// Image point where the boundary curve crosses itself.
    pub boundary_crossing: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub theta: f64,
    pub lambda: f64,
    pub c: f64,
    pub rho: f64,
}

impl From<&DeformParams> for Params {
    fn from(p: &DeformParams) -> Self {
        Params {
            theta: p.theta(),
            lambda: p.lambda(),
            c: p.c(),
            rho: p.rho(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub data: String,
    pub domain: String,
    pub truncated: bool,
    pub params: Params,
    pub resolution: usize,
    pub boundary_samples: usize,
    pub tolerance: f64,
    pub verdict: String,
    pub jacobian_sign: String,
    pub jacobian_census: Census,
    pub boundary_simple: bool,
    pub image_class: String,
    pub starlike_center: Option<[f64; 2]>,
    pub sup_abs_g: f64,
    /// `ρ·sup|G|²`, the sup-norm of the analytic dilatation.
    pub sup_abs_dilatation: f64,
    pub witnesses: Witnesses,
    pub candidates_checked: usize,
    pub ambiguous: usize,
    pub settings: Vec<Setting>,
}

pub fn verify_report(
    src: &Source,
    p: &DeformParams,
    resolution: usize,
    settings: &[Setting],
) -> Result<VerifyReport, CliError> {
    let data = &src.data;
    let map = data.planar(*p);
    let report = univalence_oracle(&map, data.domain(), resolution)?;
    let samples = (4 * resolution).max(256);
    let (class, center) = if report.boundary_simple {
        let img = boundary_image(&map, data.domain(), samples)?;
        match classify_image(&img.points) {
            Ok(shape) => (shape.class, shape.starlike_center),
            Err(_) => (ImageClass::Unknown, None),
        }
    } else {
        (ImageClass::Unknown, None)
    };
    let sup = sup_abs_g(data).value;
    Ok(VerifyReport {
        data: src.id.clone(),
        domain: domain_label(data.domain()),
        truncated: data.domain().is_truncated(),
        params: p.into(),
        resolution,
        boundary_samples: samples,
        tolerance: data.potentials().tolerance(),
        verdict: report.verdict.as_str().into(),
        jacobian_sign: report.jacobian_sign.as_str().into(),
        jacobian_census: Census {
            positive: report.census.positive,
            negative: report.census.negative,
            zero: report.census.zero,
        },
        boundary_simple: report.boundary_simple,
        image_class: class.as_str().into(),
        starlike_center: center.map(pt),
        sup_abs_g: sup,
        sup_abs_dilatation: p.rho() * sup * sup,
        witnesses: Witnesses {
            collision: report.collision_witness.map(|(a, b)| [pt(a), pt(b)]),
            jacobian_zero: report.jacobian_zero_witness.map(pt),
            boundary_crossing: report.boundary_crossing.map(pt),
        },
        candidates_checked: report.candidates_checked,
        ambiguous: report.ambiguous,
        settings: settings.to_vec(),
    })
}

/// Print the JSON report; inconclusive verdicts fail under `strict`.
pub fn cmd_verify(
    src: &Source,
    p: &DeformParams,
    resolution: usize,
    strict: bool,
    settings: &[Setting],
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<VerifyReport, CliError> {
    let report = verify_report(src, p, resolution, settings)?;
    let json = to_json(&report);
    match out {
        Some(path) => write_file(path, |b| b.write_all(json.as_bytes()))?,
        None => stdout.write_all(json.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?,
    }
    if strict && report.verdict == Verdict::Inconclusive.as_str() {
        return Err(CliError::Inconclusive);
    }
    Ok(report)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialise");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- region

#[derive(Clone, Debug)]
pub struct RegionOpts {
    pub theta_samples: usize,
    pub rho_max: f64,
    pub rho_samples: usize,
    pub resolution: usize,
    pub oracle: bool,
    pub seed: Option<DeformParams>,
    pub linear_conn: Option<f64>,
    /// Test hook: add a graph certificate on `[0, ∞)`.
    pub inject_false_certificate: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntervalJson {
    pub lo: f64,
    /// `null` for `+∞`.
    pub hi: Option<f64>,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub text: String,
}

impl From<&RhoInterval> for IntervalJson {
    fn from(i: &RhoInterval) -> Self {
        IntervalJson {
            lo: i.lo,
            hi: i.hi.is_finite().then_some(i.hi),
            lo_closed: i.lo_closed,
            hi_closed: i.hi_closed,
            text: i.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub theorem: String,
    pub interval: IntervalJson,
    pub hypotheses: Vec<String>,
    pub notes: Vec<String>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        CertificateJson {
            theorem: c.theorem.as_str().into(),
            interval: (&c.interval).into(),
            hypotheses: c.hypotheses.clone(),
            notes: c.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RejectionJson {
    pub theorem: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormsJson {
    pub sup_abs_g: f64,
    pub sup_at: [f64; 2],
    pub inf_abs_g: f64,
    pub inf_at: [f64; 2],
    pub has_interior_zero: bool,
    pub truncated: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepJson {
    pub cells: usize,
    pub oracle: bool,
    pub contradictions: usize,
    /// Certified cells where the oracle was inconclusive.
    pub unconfirmed: usize,
    /// `max |f_{0,2,ρ/4} − f_{0,1,ρ}|`, a check that only `cλ²` matters.
    pub spot_check: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionJson {
    pub data: String,
    pub domain: String,
    pub norms: NormsJson,
    pub certificates: Vec<CertificateJson>,
    pub nongraph: Option<CertificateJson>,
    pub rejected: Vec<RejectionJson>,
    /// Restricted-disk bounds relative to the unrestricted data.
    pub restricted: Vec<CertificateJson>,
    pub consistent: bool,
    pub sweep: SweepJson,
    pub settings: Vec<Setting>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionRow {
    pub theta: f64,
    pub rho: f64,
    pub c_sign: i8,
    pub certificate: RegionLabel,
    /// `None` when the oracle was skipped.
    pub oracle: Option<Verdict>,
    pub contradiction: bool,
}

#[derive(Clone, Debug)]
pub struct RegionOutput {
    pub csv: String,
    pub json: RegionJson,
    pub rows: Vec<RegionRow>,
}

fn sample_thetas(n: usize) -> Vec<f64> {
    (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect()
}

fn sample_rhos(max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![max],
        _ => (0..n).map(|k| max * k as f64 / (n - 1) as f64).collect(),
    }
}

pub const CSV_HEADER: &str = "theta,rho,c_sign,certificate,oracle";

pub fn region_output(src: &Source, o: &RegionOpts, settings: &[Setting]) -> Result<RegionOutput, CliError> {
    if o.theta_samples == 0 || o.rho_samples == 0 {
        return Err(usage("sample counts must be positive"));
    }
    if !(o.rho_max >= 0.0 && o.rho_max.is_finite()) {
        return Err(usage("--rho-max must be a finite non-negative number"));
    }
    let data = &src.data;
    let mut rs = RegionSettings::default();
    if let Some(seed) = o.seed {
        rs.seeds = vec![seed];
    }
    rs.linear_conn = o.linear_conn;
    let mut regions: RegionClassification = classify_regions(data, &rs)?;
    if o.inject_false_certificate {
        regions.certified_graph.insert(
            0,
            Certificate {
                theorem: TheoremId::IsotropicConvex,
                interval: RhoInterval::closed(0.0, f64::INFINITY),
                hypotheses: vec!["none: injected by the test hook".into()],
                notes: vec!["deliberately false".into()],
            },
        );
    }
    let thetas = sample_thetas(o.theta_samples);
    let rhos = sample_rhos(o.rho_max, o.rho_samples);
    let (rows, sweep) = if o.oracle {
        let rep = sweep_against(data, &regions, &thetas, &rhos, o.resolution)?;
        let rows = rep
            .rows
            .iter()
            .map(|r| RegionRow {
                theta: r.theta,
                rho: r.rho,
                c_sign: r.c_sign,
                certificate: r.certificate,
                oracle: Some(r.verdict),
                contradiction: r.contradiction,
            })
            .collect::<Vec<_>>();
        let sweep = SweepJson {
            cells: rows.len(),
            oracle: true,
            contradictions: rep.contradictions,
            unconfirmed: rep.unconfirmed,
            spot_check: Some(rep.spot_check),
        };
        (rows, sweep)
    } else {
        let mut rows = Vec::new();
        for &theta in &thetas {
            for &rho in &rhos {
                for c_sign in [1i8, -1] {
                    rows.push(RegionRow {
                        theta,
                        rho,
                        c_sign,
                        certificate: regions.label(rho),
                        oracle: None,
                        contradiction: false,
                    });
                }
            }
        }
        let sweep = SweepJson {
            cells: rows.len(),
            oracle: false,
            contradictions: 0,
            unconfirmed: 0,
            spot_check: None,
        };
        (rows, sweep)
    };
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{},{},{}\n",
            r.theta,
            r.rho,
            r.c_sign,
            r.certificate.as_str(),
            r.oracle.map_or("skipped", |v| v.as_str())
        ));
    }
    let restricted = match (&src.unrestricted, data.domain().disk_radius()) {
        (Some(full), Some(r)) => region_restricted(full, r)
            .map(|v| v.iter().map(CertificateJson::from).collect())
            .unwrap_or_default(),
        _ => Vec::new(),
    };
    let n = &regions.norms;
    let json = RegionJson {
        data: src.id.clone(),
        domain: domain_label(data.domain()),
        norms: NormsJson {
            sup_abs_g: n.sup.value,
            sup_at: pt(n.sup.at),
            inf_abs_g: n.inf.value,
            inf_at: pt(n.inf.at),
            has_interior_zero: n.inf.has_interior_zero,
            truncated: n.truncated,
        },
        certificates: regions.certified_graph.iter().map(CertificateJson::from).collect(),
        nongraph: regions.certified_nongraph.as_ref().map(CertificateJson::from),
        rejected: regions
            .rejected
            .iter()
            .map(|r| RejectionJson {
                theorem: r.theorem.as_str().into(),
                reason: r.reason.clone(),
            })
            .collect(),
        restricted,
        consistent: regions.is_consistent(),
        sweep,
        settings: settings.to_vec(),
    };
    Ok(RegionOutput { csv, json, rows })
}

/// Write `<prefix>.csv` and `<prefix>.json`; contradictions fail after the
/// files are written so they can be inspected.
pub fn cmd_region(src: &Source, o: &RegionOpts, settings: &[Setting], prefix: &Path) -> Result<RegionOutput, CliError> {
    let out = region_output(src, o, settings)?;
    let csv_path = prefix.with_extension("csv");
    let json_path = prefix.with_extension("json");
    write_file(&csv_path, |b| b.write_all(out.csv.as_bytes()))?;
    write_file(&json_path, |b| b.write_all(to_json(&out.json).as_bytes()))?;
    if let Some(first) = out.rows.iter().find(|r| r.contradiction) {
        return Err(CliError::Contradiction {
            count: out.json.sweep.contradictions,
            theta: first.theta,
            rho: first.rho,
            c_sign: first.c_sign,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------- family

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    /// Associated family.
    Theta,
    /// López–Ros deformation.
    Lambda,
    /// Ambient c-deformation.
    C,
}

impl SweepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepKind::Theta => "theta",
            SweepKind::Lambda => "lambda",
            SweepKind::C => "c",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyOpts {
    pub kind: SweepKind,
    pub values: Vec<f64>,
    pub base: DeformParams,
    pub mesh: MeshOpts,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameJson {
    pub file: String,
    pub singular_file: String,
    pub params: Params,
    pub vertices: usize,
    pub faces: usize,
    pub singular_vertices: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantJson {
    pub name: String,
    pub description: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub data: String,
    pub domain: String,
    pub sweep: String,
    pub values: Vec<f64>,
    pub frames: Vec<FrameJson>,
    pub invariant: InvariantJson,
    pub settings: Vec<Setting>,
}

fn with_value(kind: SweepKind, base: &DeformParams, v: f64) -> Result<DeformParams, CliError> {
    let r = match kind {
        SweepKind::Theta => DeformParams::new(v, base.lambda(), base.c()),
        SweepKind::Lambda => DeformParams::new(base.theta(), v, base.c()),
        SweepKind::C => DeformParams::new(base.theta(), base.lambda(), v),
    };
    r.map_err(|e| usage(e.to_string()))
}

/// The quantity each sweep leaves unchanged: the metric along the
/// associated family, the height along López–Ros, and for the
/// c-deformation the affine dependence `X(c) = X(0) + c·(X(1) − X(0))`
/// (checked against the first and last frame).
fn invariant(data: &WeierstrassData, kind: SweepKind, params: &[DeformParams]) -> Result<InvariantJson, CliError> {
    let samples: Vec<C64> = data.domain().grid(16).interior_points().map(|(_, w)| w).collect();
    let mut dev: f64 = 0.0;
    match kind {
        SweepKind::Theta => {
            for &w in &samples {
                let m0 = data.metric_coeff(&params[0], w)?;
                for p in &params[1..] {
                    let m = data.metric_coeff(p, w)?;
                    dev = dev.max((m - m0).abs() / m0.abs().max(f64::MIN_POSITIVE));
                }
            }
        }
        SweepKind::Lambda => {
            for &w in &samples {
                let t0 = data.surface_point(&params[0], w)?.height;
                for p in &params[1..] {
                    let t = data.surface_point(p, w)?.height;
                    dev = dev.max((t - t0).abs() / t0.abs().max(1.0));
                }
            }
        }
        SweepKind::C => {
            let (a, b) = (params[0], params[params.len() - 1]);
            if a.c() != b.c() {
                for &w in &samples {
                    let xa = data.surface_point(&a, w)?.horizontal;
                    let xb = data.surface_point(&b, w)?.horizontal;
                    for p in params {
                        let s = (p.c() - a.c()) / (b.c() - a.c());
                        let x = data.surface_point(p, w)?.horizontal;
                        let lin = xa + (xb - xa) * s;
                        dev = dev.max((x - lin).norm() / lin.norm().max(1.0));
                    }
                }
            }
        }
    }
    let (name, description, tolerance) = match kind {
        SweepKind::Theta => (
            "metricInvariance",
            "relative spread of the metric coefficient across the associated family",
            1e-15,
        ),
        SweepKind::Lambda => ("heightInvariance", "spread of the height function across the López–Ros family", 1e-12),
        SweepKind::C => ("linearityInC", "deviation of the horizontal part from affine dependence on c", 1e-12),
    };
    Ok(InvariantJson {
        name: name.into(),
        description: description.into(),
        samples: samples.len(),
        max_deviation: dev,
        tolerance,
        holds: dev <= tolerance,
    })
}

/// Evenly spaced inclusive values.
pub fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..steps).map(|k| from + (to - from) * k as f64 / (steps - 1) as f64).collect(),
    }
}

pub fn cmd_family(src: &Source, o: &FamilyOpts, settings: &[Setting], out_dir: &Path) -> Result<Manifest, CliError> {
    if o.values.is_empty() {
        return Err(usage("--steps must be positive"));
    }
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let params: Vec<DeformParams> = o
        .values
        .iter()
        .map(|&v| with_value(o.kind, &o.base, v))
        .collect::<Result<_, _>>()?;
    let mut frames = Vec::with_capacity(params.len());
    for (k, p) in params.iter().enumerate() {
        let mut mesh = mesh_for(src, p, &o.mesh, settings)?;
        mesh.push_meta("frame", format!("{k} of {} ({} sweep)", params.len(), o.kind.as_str()));
        let file = format!("frame_{k:03}.obj");
        let path = out_dir.join(&file);
        write_file(&path, |b| mesh.write(b))?;
        let sing = singular_path(&path);
        write_file(&sing, |b| mesh.write_singular(b))?;
        frames.push(FrameJson {
            singular_file: format!("{file}.singular"),
            file,
            params: p.into(),
            vertices: mesh.vertices.len(),
            faces: mesh.faces.len(),
            singular_vertices: mesh.singular.len(),
        });
    }
    let manifest = Manifest {
        data: src.id.clone(),
        domain: domain_label(src.data.domain()),
        sweep: o.kind.as_str().into(),
        values: o.values.clone(),
        frames,
        invariant: invariant(&src.data, o.kind, &params)?,
        settings: settings.to_vec(),
    };
    let path = out_dir.join("manifest.json");
    write_file(&path, |b| b.write_all(to_json(&manifest).as_bytes()))?;
    Ok(manifest)
}

// ---------------------------------------------------------------- examples

#[derive(Clone, Debug, Serialize)]
pub struct ExampleJson {
    pub name: String,
    pub command: String,
    pub f: String,
    pub g: String,
    pub domain: String,
    pub description: String,
}

pub fn catalog() -> Result<Vec<ExampleJson>, CliError> {
    let commands = ["enneper --n 3", "exponential --n 2", "scherk"];
    Ok(ExampleSpec::defaults()?
        .iter()
        .zip(commands)
        .map(|(e, cmd)| ExampleJson {
            name: e.id.name(),
            command: cmd.into(),
            f: e.data.f().to_string(),
            g: e.data.g().to_string(),
            domain: domain_label(e.data.domain()),
            description: e.description.into(),
        })
        .collect())
}

pub fn cmd_examples(json: bool, stdout: &mut dyn Write) -> Result<(), CliError> {
    let list = catalog()?;
    let text = if json {
        to_json(&list)
    } else {
        let mut s = String::new();
        for e in &list {
            s.push_str(&format!(
                "{}\n  usage:  zmc <surface|verify|region|family> {}\n  F = {}\n  G = {}\n  domain: {}\n  {}\n",
                e.name, e.command, e.f, e.g, e.domain, e.description
            ));
        }
        s
    };
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}
