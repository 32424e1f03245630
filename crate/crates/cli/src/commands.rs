//! Subcommand bodies. Each builds an [`OutputRecord`].

use anyhow::{anyhow, bail, Result};
use clap::ValueEnum;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use zmeasure::combinatorics::{PointSet, YoungDiagram};
use zmeasure::dpp::{corr_det, projection_residual, projection_residual_within, sample_dpp, WindowMatrix};
use zmeasure::kernels::{symmetric_window, KernelFamily, KernelId, Signs};
use zmeasure::limits::{
    cross_decay, default_scans, density_profile, plancherel_scan, run_scan, Coupling, ErrorTable, ScanSpec, Source,
};
use zmeasure::measures::{
    plancherel_weight, z_weight, zab_weight, zw_weight, Embedding, Enumeration, Family, MeasureError, SignatureFamily,
    WeightValue,
};
use zmeasure::opkernels::{zab_kernel, zw_kernel, AskeyLesky, Degree, RacahIdentification, ZabKernel};

use crate::exit::BudgetError;
use crate::output::{Cell, OutputRecord};
use crate::params::{
    format_complex, parse_complex, parse_list, parse_partition, parse_probes, parse_signature, ParamArgs,
};
use crate::suites::{self, Suite, SuiteConfig};

fn echo_pair(rec: &mut OutputRecord, names: (&str, &str), pair: (C64, C64)) {
    rec.input(names.0, format_complex(pair.0));
    rec.input(names.1, format_complex(pair.1));
}

fn list_text(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn int_text<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightFamily {
    Zxi,
    Zw,
    Zab,
    Plancherel,
}

pub fn weight(family: WeightFamily, p: &ParamArgs, lambdas: &[String]) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("weight", &["lambda", "ln_abs", "value"]);
    rec.input("family", format!("{family:?}").to_lowercase());
    let push = |rec: &mut OutputRecord, label: String, w: WeightValue| {
        rec.row(vec![label.into(), w.log_magnitude.into(), w.value().into()]);
    };
    match family {
        WeightFamily::Zxi => {
            let q = p.zxi()?;
            echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
            rec.input("xi", q.xi);
            for l in lambdas {
                let d = parse_partition(l)?;
                push(&mut rec, int_text(d.parts()), z_weight(&q, &d)?);
            }
        }
        WeightFamily::Zw => {
            let q = p.zw()?;
            echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
            echo_pair(&mut rec, ("w", "wp"), (q.w, q.wp));
            rec.input("n", q.n);
            for l in lambdas {
                let s = parse_signature(l)?;
                push(&mut rec, int_text(s.entries()), zw_weight(&s, &q)?);
            }
        }
        WeightFamily::Zab => {
            let q = p.zab()?;
            echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
            rec.input("a", q.a);
            rec.input("b", q.b);
            rec.input("n", q.n);
            for l in lambdas {
                let s = parse_signature(l)?;
                push(&mut rec, int_text(s.entries()), zab_weight(&s, &q)?);
            }
        }
        WeightFamily::Plancherel => {
            let theta = p.theta.ok_or_else(|| anyhow!("--theta is required"))?;
            if !(theta > 0.0) {
                bail!("--theta must be positive");
            }
            rec.input("theta", theta);
            for l in lambdas {
                let d = parse_partition(l)?;
                let v = plancherel_weight(theta, &d);
                push(&mut rec, int_text(d.parts()), WeightValue { log_magnitude: v.ln(), phase: C64::new(1.0, 0.0) });
            }
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrFamily {
    Zxi,
    Zw,
    Zab,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmbeddingArg {
    Underline,
    Frobenius,
}

pub struct CorrelationConfig {
    pub family: CorrFamily,
    pub points: Vec<String>,
    pub embedding: EmbeddingArg,
    pub size: Option<u32>,
    pub tail_tol: f64,
    pub rtol: f64,
}

fn det_of(points: &[f64], k: impl Fn(f64, f64) -> Result<f64>) -> Result<f64> {
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = k(points[i], points[j])?;
        }
    }
    Ok(if n == 0 { 1.0 } else { m.determinant() })
}

pub fn correlation(cfg: &CorrelationConfig, p: &ParamArgs) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("correlation", &["points", "oracle", "tail_bound", "determinant", "abs_diff"]);
    let embedding = match cfg.embedding {
        EmbeddingArg::Underline => Embedding::Underline,
        EmbeddingArg::Frobenius => Embedding::Frobenius,
    };
    rec.input("family", format!("{:?}", cfg.family).to_lowercase());
    rec.input("embedding", format!("{:?}", cfg.embedding).to_lowercase());
    let (family, size, kernel): (Family, u32, Box<dyn Fn(f64, f64) -> Result<f64>>) = match cfg.family {
        CorrFamily::Zxi => {
            let q = p.zxi()?;
            echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
            rec.input("xi", q.xi);
            let kf = match embedding {
                Embedding::Underline => KernelFamily::HypergeomFirst,
                Embedding::Frobenius => KernelFamily::HypergeomSecond,
            };
            let id = KernelId::new(kf, q.z, q.zp, Some(q.xi))?;
            (Family::ZXi(q), cfg.size.unwrap_or(28), Box::new(move |x, y| Ok(id.eval(x, y)?)))
        }
        CorrFamily::Zw | CorrFamily::Zab => {
            if embedding != Embedding::Underline {
                bail!("signature measures are determinantal in the underline embedding only");
            }
            let (fam, k): (SignatureFamily, Box<dyn Fn(f64, f64) -> Result<f64>>) = if cfg.family == CorrFamily::Zw {
                let q = p.zw()?;
                echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
                echo_pair(&mut rec, ("w", "wp"), (q.w, q.wp));
                rec.input("n", q.n);
                (SignatureFamily::ZW(q), Box::new(move |x, y| Ok(zw_kernel(x, y, &q)?)))
            } else {
                let q = p.zab()?;
                echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
                rec.input("a", q.a);
                rec.input("b", q.b);
                rec.input("n", q.n);
                (SignatureFamily::ZAB(q), Box::new(move |x, y| Ok(zab_kernel(x, y, &q)?)))
            };
            (Family::Signatures(fam), cfg.size.unwrap_or(30), k)
        }
    };
    rec.input("size", size as i64);
    rec.input("tail_tol", cfg.tail_tol);
    rec.input("rtol", cfg.rtol);
    let en = match &family {
        Family::ZXi(q) => Enumeration::z_measure(q, size, embedding)?,
        Family::Signatures(f) => Enumeration::signatures(f, size as i64, embedding)?,
    };
    if en.tail_bound() > cfg.tail_tol {
        return Err(MeasureError::TailTooLarge { tail: en.tail_bound(), tol: cfg.tail_tol }.into());
    }
    for s in &cfg.points {
        let set = PointSet::from_values(&parse_list(s)?)?;
        let xs = set.values();
        let o = en.rho(&set);
        let d = det_of(&xs, &kernel)?;
        let diff = (d - o.value).abs();
        rec.row(vec![list_text(&xs).into(), o.value.into(), o.tail_bound.into(), d.into(), diff.into()]);
        rec.check(format!("rho({})", list_text(&xs)), diff <= cfg.rtol * o.value.abs() + o.tail_bound);
    }
    Ok(rec)
}

/// Lattice kernel, the zw kernel, or the kernel on nonnegative signatures.
enum AnyKernel {
    Id(KernelId),
    Zw(zmeasure::measures::ZWParams),
    Zab(zmeasure::measures::ZABParams),
}

impl AnyKernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(match self {
            AnyKernel::Id(k) => k.eval(x, y)?,
            AnyKernel::Zw(p) => zw_kernel(x, y, p)?,
            AnyKernel::Zab(p) => zab_kernel(x, y, p)?,
        })
    }
}

fn any_kernel(family: &str, p: &ParamArgs, signs: Signs, rec: &mut OutputRecord) -> Result<AnyKernel> {
    match family {
        "zw" => {
            rec.input("family", family);
            let q = p.zw()?;
            echo_pair(rec, ("z", "zp"), (q.z, q.zp));
            echo_pair(rec, ("w", "wp"), (q.w, q.wp));
            rec.input("n", q.n);
            Ok(AnyKernel::Zw(q))
        }
        "zab" => {
            rec.input("family", family);
            let q = p.zab()?;
            echo_pair(rec, ("z", "zp"), (q.z, q.zp));
            rec.input("a", q.a);
            rec.input("b", q.b);
            rec.input("n", q.n);
            Ok(AnyKernel::Zab(q))
        }
        _ => Ok(AnyKernel::Id(kernel_id(family, p, signs, rec)?)),
    }
}

fn kernel_id(family: &str, p: &ParamArgs, signs: Signs, rec: &mut OutputRecord) -> Result<KernelId> {
    let f: KernelFamily = family.parse()?;
    rec.input("family", f.name());
    let (z, zp) = p.require_z()?;
    echo_pair(rec, ("z", "zp"), (z, zp));
    if f.needs_xi() {
        rec.input("xi", p.require_xi()?);
    }
    if f.is_tail() {
        rec.input("signs", signs.to_string());
    }
    Ok(KernelId::new(f, z, zp, p.xi)?.with_signs(signs))
}

pub fn kernel(family: &str, p: &ParamArgs, xs: &str, ys: &str, signs: &str) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("kernel", &["x", "y", "value"]);
    let k = any_kernel(family, p, signs.parse()?, &mut rec)?;
    let (xs, ys) = (parse_list(xs)?, parse_list(ys)?);
    for &x in &xs {
        for &y in &ys {
            rec.row(vec![x.into(), y.into(), k.eval(x, y)?.into()]);
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// Error tables of limit transitions.
    Limits,
    /// x K(x, x) against the density constant.
    Density,
    /// Largest kernel entry between the two ends of the zw lattice.
    Cross,
    /// z-measures against the Plancherel measure.
    Plancherel,
    /// Norm of K^2 - K on growing windows.
    Projection,
}

pub struct ScanConfig {
    pub kind: ScanKind,
    pub source: Option<String>,
    pub target: Option<String>,
    pub target_z: Option<String>,
    pub target_zp: Option<String>,
    pub coupling: Option<String>,
    pub ladder: Option<String>,
    pub probes: Option<String>,
    pub offsets: Option<String>,
    pub family: Option<String>,
    pub signs: String,
    pub lambdas: Vec<String>,
    pub radius: Option<f64>,
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| anyhow!("--{flag} is required"))
}

fn push_table(rec: &mut OutputRecord, t: &ErrorTable) {
    for r in &t.rows {
        rec.row(vec![
            t.label.clone().into(),
            r.ladder.into(),
            r.x.into(),
            r.y.into(),
            r.source.into(),
            r.target.into(),
            r.error.into(),
        ]);
    }
    rec.verdict(t.label.clone(), t.verdict.name(), t.verdict.passes());
}

fn custom_scan(cfg: &ScanConfig, p: &ParamArgs, rec: &mut OutputRecord) -> Result<ScanSpec> {
    let source_name = required(&cfg.source, "source")?;
    let (z, zp) = p.require_z()?;
    let source = match source_name {
        "zw" => {
            let (w, wp) = p.wpair()?.ok_or_else(|| anyhow!("--w is required"))?;
            echo_pair(rec, ("w", "wp"), (w, wp));
            Source::Zw { z, zp, w, wp }
        }
        "zab" => {
            let a = p.a.ok_or_else(|| anyhow!("--a is required"))?;
            let b = p.b.ok_or_else(|| anyhow!("--b is required"))?;
            rec.input("a", a);
            rec.input("b", b);
            Source::Zab { z, zp, a, b }
        }
        f => Source::Kernel(KernelId::new(f.parse()?, z, zp, p.xi)?),
    };
    rec.input("source", source_name);
    echo_pair(rec, ("z", "zp"), (z, zp));
    if let Some(xi) = p.xi {
        rec.input("xi", xi);
    }
    let target_pair = match (&cfg.target_z, &cfg.target_zp) {
        (Some(a), Some(b)) => (parse_complex(a)?, parse_complex(b)?),
        (Some(a), None) => {
            let a = parse_complex(a)?;
            if a.im == 0.0 {
                bail!("--target-zp is required when --target-z is real");
            }
            (a, a.conj())
        }
        (None, Some(_)) => bail!("--target-zp given without --target-z"),
        (None, None) if matches!(source, Source::Kernel(_)) => (z, zp),
        (None, None) => (-z, -zp),
    };
    let target_name = required(&cfg.target, "target")?;
    let signs: Signs = cfg.signs.parse()?;
    let target = KernelId::new(target_name.parse()?, target_pair.0, target_pair.1, p.xi)?.with_signs(signs);
    let coupling: Coupling = required(&cfg.coupling, "coupling")?.parse()?;
    rec.input("target", target_name);
    echo_pair(rec, ("target_z", "target_zp"), target_pair);
    rec.input("signs", signs.to_string());
    rec.input("coupling", coupling.to_string());
    if let Coupling::CoupledXiS0 { eps } = coupling {
        rec.input("eps", eps);
    }
    let ladder = parse_list(required(&cfg.ladder, "ladder")?)?;
    let probes = parse_probes(required(&cfg.probes, "probes")?)?;
    rec.input("ladder", list_text(&ladder));
    rec.input("probes", cfg.probes.clone().unwrap_or_default());
    let spec = ScanSpec { source, target, coupling, probes, ladder };
    spec.validate()?;
    Ok(spec)
}

pub fn scan(cfg: &ScanConfig, p: &ParamArgs) -> Result<OutputRecord> {
    match cfg.kind {
        ScanKind::Limits => {
            let mut rec = OutputRecord::new("scan", &["scan", "ladder", "x", "y", "source", "target", "error"]);
            rec.input("kind", "limits");
            let specs = if cfg.source.is_some() {
                vec![custom_scan(cfg, p, &mut rec)?]
            } else {
                let (z, zp) = p.z_or((0.3, 0.6))?;
                if z.im != 0.0 || zp.im != 0.0 {
                    bail!("the default scans take real z and z'");
                }
                echo_pair(&mut rec, ("z", "zp"), (z, zp));
                rec.input("preset", "default");
                default_scans(z.re, zp.re)?
            };
            for s in &specs {
                push_table(&mut rec, &run_scan(s)?);
            }
            Ok(rec)
        }
        ScanKind::Density => {
            let mut rec = OutputRecord::new("scan", &["x", "scaled", "error"]);
            rec.input("kind", "density");
            let id = kernel_id(required(&cfg.family, "family")?, p, Signs::PP, &mut rec)?;
            let xs = parse_list(required(&cfg.ladder, "ladder")?)?;
            rec.input("ladder", list_text(&xs));
            let t = density_profile(&id, &xs)?;
            rec.input("constant", t.constant);
            for r in &t.rows {
                rec.row(vec![r.x.into(), r.scaled.into(), r.error.into()]);
            }
            rec.verdict("density", t.verdict.name(), t.verdict.passes());
            Ok(rec)
        }
        ScanKind::Cross => {
            let mut rec = OutputRecord::new("scan", &["n", "max_entry"]);
            rec.input("kind", "cross");
            let (z, zp) = p.require_z()?;
            let (w, wp) = p.wpair()?.ok_or_else(|| anyhow!("--w is required"))?;
            echo_pair(&mut rec, ("z", "zp"), (z, zp));
            echo_pair(&mut rec, ("w", "wp"), (w, wp));
            let ns: Vec<usize> = parse_list(required(&cfg.ladder, "ladder")?)?
                .into_iter()
                .map(|v| {
                    if v >= 1.0 && v.fract() == 0.0 {
                        Ok(v as usize)
                    } else {
                        Err(anyhow!("N = {v} is not a positive integer"))
                    }
                })
                .collect::<Result<_>>()?;
            let offsets = parse_list(cfg.offsets.as_deref().unwrap_or("-1.5,-0.5,0.5,1.5"))?;
            rec.input("ladder", int_text(&ns));
            rec.input("offsets", list_text(&offsets));
            let t = cross_decay(z, zp, w, wp, &ns, &offsets)?;
            for r in &t.rows {
                rec.row(vec![r.n.into(), r.max_entry.into()]);
            }
            rec.verdict("cross", t.verdict.name(), t.verdict.passes());
            Ok(rec)
        }
        ScanKind::Plancherel => {
            let mut rec = OutputRecord::new("scan", &["t", "lambda", "z_measure", "plancherel", "error"]);
            rec.input("kind", "plancherel");
            let theta = p.theta.ok_or_else(|| anyhow!("--theta is required"))?;
            let ts = parse_list(required(&cfg.ladder, "ladder")?)?;
            let ds: Vec<YoungDiagram> = if cfg.lambdas.is_empty() {
                vec![YoungDiagram::empty(), YoungDiagram::new(vec![1])?, YoungDiagram::new(vec![2, 1])?]
            } else {
                cfg.lambdas.iter().map(|l| parse_partition(l)).collect::<Result<_>>()?
            };
            rec.input("theta", theta);
            rec.input("ladder", list_text(&ts));
            let t = plancherel_scan(theta, &ts, &ds)?;
            for r in &t.rows {
                rec.row(vec![
                    r.t.into(),
                    int_text(r.diagram.parts()).into(),
                    r.z_measure.into(),
                    r.plancherel.into(),
                    r.error.into(),
                ]);
            }
            rec.verdict("plancherel", t.verdict.name(), t.verdict.passes());
            Ok(rec)
        }
        ScanKind::Projection => projection_scan(cfg, p),
    }
}

fn projection_scan(cfg: &ScanConfig, p: &ParamArgs) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("scan", &["window", "residual"]);
    rec.input("kind", "projection");
    let id = kernel_id(required(&cfg.family, "family")?, p, Signs::PP, &mut rec)?;
    let claimed = match id.family {
        KernelFamily::HypergeomFirst => true,
        KernelFamily::GammaFirst | KernelFamily::Psi => id.projection_hypothesis(),
        f => bail!("{f} is not a projection kernel candidate"),
    };
    let sizes: Vec<usize> = parse_list(cfg.ladder.as_deref().unwrap_or("40,80,160"))?
        .into_iter()
        .map(|v| {
            if v >= 2.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(anyhow!("window {v} is not an integer >= 2"))
            }
        })
        .collect::<Result<_>>()?;
    rec.input("ladder", int_text(&sizes));
    match cfg.radius {
        Some(r) => rec.input("radius", r),
        None => rec.input("region", "interior half"),
    }
    let mut res = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let k = WindowMatrix::from_kernel(&id, &symmetric_window(n))?;
        let r = match cfg.radius {
            Some(radius) => projection_residual_within(&k, radius),
            None => projection_residual(&k),
        };
        rec.row(vec![n.into(), r.into()]);
        res.push(r);
    }
    if claimed {
        let pass = res.windows(2).all(|w| w[1] < w[0]);
        rec.verdict("projection", if pass { "decreasing" } else { "not_decreasing" }, pass);
    } else {
        rec.verdict("projection", "exploratory", true);
    }
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrthoFamily {
    Zw,
    Zab,
}

fn check_row(rec: &mut OutputRecord, name: &str, value: f64, tol: f64) {
    let pass = value < tol;
    rec.row(vec![name.into(), value.into(), tol.into(), pass.into()]);
    rec.check(name, pass);
}

fn divided_difference(xs: &[C64], mut d: Vec<C64>) -> C64 {
    let m = xs.len() - 1;
    for level in 1..=m {
        for k in 0..=(m - level) {
            d[k] = (d[k + 1] - d[k]) / (xs[k + level] - xs[k]);
        }
    }
    d[0]
}

pub fn ortho(family: OrthoFamily, p: &ParamArgs, tol: f64, cap: i64) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("ortho", &["check", "value", "tolerance", "pass"]);
    rec.input("family", format!("{family:?}").to_lowercase());
    rec.input("tol", tol);
    rec.input("cap", cap);
    match family {
        OrthoFamily::Zw => {
            let q = p.zw()?;
            echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
            echo_pair(&mut rec, ("w", "wp"), (q.w, q.wp));
            rec.input("n", q.n);
            let al = AskeyLesky::new(q)?;
            let xs: Vec<C64> = (0..=q.n).map(|k| C64::new(k as f64, 0.0)).collect();
            let vals = (0..=q.n)
                .map(|k| al.eval(Degree::N, k as f64).map(|v| C64::new(v, 0.0)))
                .collect::<Result<Vec<_>, _>>()?;
            check_row(&mut rec, "monic", (divided_difference(&xs, vals) - 1.0).norm(), 1e-8);
            let r = al.report(tol, cap)?;
            if r.extent >= cap {
                return Err(BudgetError(format!("lattice sums reached the cap {cap} before settling")).into());
            }
            check_row(&mut rec, "orthogonality", r.orthogonality, 1e-6);
            check_row(
                &mut rec,
                "norm vs closed form (rel)",
                (r.norm_sum - r.norm_closed).abs() / r.norm_closed.abs(),
                1e-6,
            );
            check_row(&mut rec, "|trace - N|", (r.trace - q.n as f64).abs(), 1e-3);
        }
        OrthoFamily::Zab => {
            let q = p.zab()?;
            echo_pair(&mut rec, ("z", "zp"), (q.z, q.zp));
            rec.input("a", q.a);
            rec.input("b", q.b);
            rec.input("n", q.n);
            let id = RacahIdentification::new(q);
            let b = id.basis;
            let mut norm: f64 = 0.0;
            for n in 0..q.n as u32 {
                let (s, _) = b.norm_sum(n, tol, cap)?;
                let h = b.norm(n);
                norm = norm.max((s - h).norm() / h.norm());
            }
            check_row(&mut rec, "norms vs closed form (rel)", norm, 1e-6);
            let mut lead: f64 = 0.0;
            for n in 1..=q.n as u32 {
                let nodes: Vec<f64> = (0..=n).map(|j| 0.7 * j as f64).collect();
                let xs: Vec<C64> = nodes.iter().map(|&t| (b.alpha + t) * (b.alpha + t)).collect();
                let vals = nodes.iter().map(|&t| b.eval(n, t)).collect::<Result<Vec<_>, _>>()?;
                lead = lead.max((divided_difference(&xs, vals) - b.leading(n)).norm() / b.leading(n).norm());
            }
            check_row(&mut rec, "leading coefficients (rel)", lead, 1e-10);
            let x0 = 0.5 - q.n as f64;
            let c0 = id.proportionality(x0)?;
            let mut prop: f64 = 0.0;
            for x in [x0 + 1.0, 0.5, 7.5, 30.5] {
                prop = prop.max((id.proportionality(x)? - c0).norm() / c0.norm());
            }
            check_row(&mut rec, "weight proportionality (rel)", prop, 1e-10);
            let t = ZabKernel::new(q)?.trace(tol, cap)?;
            if t.last_shell >= tol {
                return Err(BudgetError(format!("trace sum reached the cap {cap} before settling")).into());
            }
            check_row(&mut rec, "|trace - N|", (t.value - q.n as f64).abs(), 1e-3);
        }
    }
    Ok(rec)
}

pub struct SampleConfig {
    pub family: String,
    pub window: usize,
    pub count: usize,
    pub seed: u64,
    pub summary: bool,
    pub signs: String,
}

pub fn sample(cfg: &SampleConfig, p: &ParamArgs) -> Result<OutputRecord> {
    let columns: &[&str] =
        if cfg.summary { &["x", "rho1", "empirical", "deviation_sigma"] } else { &["draw", "size", "points"] };
    let mut rec = OutputRecord::new("sample", columns);
    let id = kernel_id(&cfg.family, p, cfg.signs.parse()?, &mut rec)?;
    if id.family.is_tail() {
        bail!("sampling needs a lattice kernel");
    }
    let w = symmetric_window(cfg.window);
    if w.is_empty() {
        bail!("--window must be at least 2");
    }
    rec.input("window", w.len());
    rec.input("count", cfg.count);
    rec.input("seed", cfg.seed as i64);
    let k = WindowMatrix::from_kernel(&id, &w)?;
    let batch = sample_dpp(&k, cfg.seed, cfg.count)?;
    rec.input("clip", batch.clip);
    if cfg.summary {
        let n = cfg.count as f64;
        let mut worst: f64 = 0.0;
        for (i, &x) in w.iter().enumerate() {
            let p1 = corr_det(&k, &PointSet::from_values(&[x])?)?;
            let emp = batch.frequency(&[x]);
            let se = (p1 * (1.0 - p1) / n).sqrt();
            let dev = if se > 0.0 {
                (emp - p1).abs() / se
            } else if emp == p1 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(dev);
            debug_assert_eq!(k.entries()[(i, i)], p1);
            rec.row(vec![x.into(), p1.into(), emp.into(), dev.into()]);
        }
        rec.check("within 4 sigma", worst < 4.0);
    } else {
        for (i, d) in batch.draws.iter().enumerate() {
            rec.row(vec![Cell::from(i), Cell::from(d.len()), list_text(&d.values()).into()]);
        }
    }
    Ok(rec)
}

pub fn identity(suite: Suite, p: &ParamArgs, window: usize, tol: Option<f64>) -> Result<OutputRecord> {
    let mut rec = OutputRecord::new("identity", &suites::COLUMNS);
    let (z, zp) = p.z_or(suite.default_pair())?;
    let xi = p.xi.unwrap_or(0.5);
    rec.input("suite", suite.name());
    echo_pair(&mut rec, ("z", "zp"), (z, zp));
    if matches!(suite, Suite::Thm42 | Suite::Prop45 | Suite::Prop51) {
        rec.input("xi", xi);
    }
    rec.input("window", window);
    if let Some(t) = tol {
        rec.input("tol", t);
    }
    suites::run(&SuiteConfig { suite, z, zp, xi, window, tol }, &mut rec)?;
    Ok(rec)
}
