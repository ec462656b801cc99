use rayon::prelude::*;
use serde::Serialize;
use sfb_core::acceptance::{criteria, CriterionReport};
use sfb_core::ballbasis::BallBasis;
use sfb_core::concentration::{
    bimodal_counts, plateau_prediction, shannon_from_spectrum, spectrum, BimodalCounts, Eigenvalue, RadialDomain,
    SpectrumSummary,
};
use sfb_core::kernel::{kernel_diag_normalized, near_diag_ratio, Bandlimit};
use sfb_core::profiles::{profile_u, profile_u_d, profile_w_d};

use crate::args::{grid, bandlimits, CommonArgs, Format, NearDiagArgs, VerifyArgs};
use crate::table::Table;
use crate::CliError;

/// Rendered command output.
pub struct Output {
    pub text: String,
    /// Set when the acceptance suite had failures.
    pub failed: Vec<u8>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failed: Vec::new() }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn render(table: &Table, format: Option<Format>) -> Result<Output, CliError> {
    Ok(Output::ok(match format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => json(table)?,
    }))
}

/// Evaluate `f` on each radius in parallel, keeping grid order.
fn rows<F>(radii: &[f64], f: F) -> Result<Vec<Vec<f64>>, CliError>
where
    F: Fn(f64) -> sfb_core::Result<Vec<f64>> + Sync,
{
    radii.par_iter().map(|&r| f(r).map_err(CliError::from)).collect()
}

pub fn profile(args: &CommonArgs) -> Result<Output, CliError> {
    if args.l_max.is_some() || !args.k.is_empty() {
        return Err(CliError::Config("profile takes --kappa only".into()));
    }
    let kappa = args.kappa.unwrap_or(1.0);
    let d = args.d;
    let radii = args.grid(0.0, 3.0)?;
    let mut table = Table::new(&["r", "U", "U_d", "W_d"]);
    for row in rows(&radii, |r| Ok(vec![r, profile_u(r)?, profile_u_d(d, r)?, profile_w_d(d, r, kappa)?]))? {
        table.push(row);
    }
    render(&table, args.output.format)
}

const DIAG_COLUMNS: [&str; 5] = ["K", "r", "normalized", "target", "abs_error"];

pub fn kernel_diag(args: &CommonArgs) -> Result<Output, CliError> {
    let radii = args.grid(0.0, 3.0)?;
    let mut table = Table::new(&DIAG_COLUMNS);
    for bl in args.bandlimits()? {
        let (d, k, kappa) = (bl.d(), bl.k(), bl.kappa());
        for row in rows(&radii, |r| {
            let value = kernel_diag_normalized(&bl, r)?;
            let target = profile_w_d(d, r, kappa)?;
            Ok(vec![k, r, value, target, (value - target).abs()])
        })? {
            table.push(row);
        }
    }
    render(&table, args.output.format)
}

pub fn ball_diag(args: &CommonArgs) -> Result<Output, CliError> {
    let radii = args.grid(0.0, 1.0)?;
    let mut table = Table::new(&DIAG_COLUMNS);
    for bl in args.bandlimits()? {
        let (d, k, kappa) = (bl.d(), bl.k(), bl.kappa());
        let basis = BallBasis::new(d, bl.l_max(), k, args.bc.into())?;
        let scale = k.powi(d as i32);
        for row in rows(&radii, |r| {
            let value = basis.diag(r)? / scale;
            let target = profile_w_d(d, r, kappa)?;
            Ok(vec![k, r, value, target, (value - target).abs()])
        })? {
            table.push(row);
        }
    }
    render(&table, args.output.format)
}

#[derive(Debug, Serialize)]
struct BandlimitInfo {
    d: u32,
    l_max: usize,
    k: f64,
    kappa: f64,
}

impl From<&Bandlimit> for BandlimitInfo {
    fn from(bl: &Bandlimit) -> Self {
        BandlimitInfo { d: bl.d(), l_max: bl.l_max(), k: bl.k(), kappa: bl.kappa() }
    }
}

#[derive(Debug, Serialize)]
struct ShannonInfo {
    measured: f64,
    predicted: f64,
    ratio: f64,
}

#[derive(Debug, Serialize)]
struct SpectrumReport {
    bandlimit: BandlimitInfo,
    domain: RadialDomain,
    nodes: usize,
    total_count: u64,
    eigenvalues: Vec<Eigenvalue>,
    summary: SpectrumSummary,
    bimodal: Vec<BimodalCounts>,
    /// Integral of the limit profile over the domain, before the `K^d` scaling.
    plateau_prediction: f64,
    shannon: ShannonInfo,
}

const EPSILONS: [f64; 3] = [0.01, 0.05, 0.1];

fn spectrum_report(bl: &Bandlimit, domain: &RadialDomain, nodes: Option<usize>) -> Result<SpectrumReport, CliError> {
    let s = spectrum(bl, domain, nodes)?;
    let bimodal = EPSILONS.iter().map(|&e| bimodal_counts(&s, e)).collect::<sfb_core::Result<Vec<_>>>()?;
    let shannon = shannon_from_spectrum(&s)?;
    Ok(SpectrumReport {
        bandlimit: bl.into(),
        domain: *domain,
        nodes: s.nodes,
        total_count: s.total_count(),
        eigenvalues: s.merged.clone(),
        summary: s.summary,
        bimodal,
        plateau_prediction: plateau_prediction(bl.d(), bl.kappa(), domain)?,
        shannon: ShannonInfo { measured: shannon.measured, predicted: shannon.predicted, ratio: shannon.ratio() },
    })
}

pub fn spectrum_cmd(args: &CommonArgs) -> Result<Output, CliError> {
    let domain = args.domain()?;
    let reports =
        args.bandlimits()?.iter().map(|bl| spectrum_report(bl, &domain, args.nodes)).collect::<Result<Vec<_>, _>>()?;
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => Ok(Output::ok(json(&reports)?)),
        Format::Csv => {
            let mut table = Table::new(&["K", "rank", "value", "raw", "multiplicity", "degree"]);
            for rep in &reports {
                for (i, e) in rep.eigenvalues.iter().enumerate() {
                    table.push(vec![rep.bandlimit.k, i as f64, e.value, e.raw, e.multiplicity as f64, e.degree as f64]);
                }
            }
            Ok(Output::ok(table.to_csv()))
        }
    }
}

pub fn shannon(args: &CommonArgs) -> Result<Output, CliError> {
    let domain = args.domain()?;
    let mut table = Table::new(&["K", "L", "measured", "predicted", "ratio"]);
    for bl in args.bandlimits()? {
        let s = shannon_from_spectrum(&spectrum(&bl, &domain, args.nodes)?)?;
        table.push(vec![bl.k(), bl.l_max() as f64, s.measured, s.predicted, s.ratio()]);
    }
    render(&table, args.output.format)
}

pub fn near_diag(args: &NearDiagArgs) -> Result<Output, CliError> {
    let offsets = grid(0.0, args.y_max, args.samples)?;
    if args.theta.is_empty() {
        return Err(CliError::Config("at least one --theta is required".into()));
    }
    let mut table = Table::new(&["K", "theta", "y", "ratio", "radial_form", "product_form"]);
    for bl in bandlimits(args.d, args.kappa, args.l_max, &args.k)? {
        for &theta in &args.theta {
            for row in rows(&offsets, |y| {
                let s = near_diag_ratio(&bl, args.radius, y, theta)?;
                Ok(vec![bl.k(), theta, y, s.ratio, s.radial_form, s.product_form])
            })? {
                table.push(row);
            }
        }
    }
    render(&table, args.output.format)
}

#[derive(Debug, Serialize)]
struct ReportRecord {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed_secs: f64,
    limit_secs: f64,
}

impl From<&CriterionReport> for ReportRecord {
    fn from(r: &CriterionReport) -> Self {
        ReportRecord {
            id: r.id,
            name: r.name,
            passed: r.passed,
            detail: r.detail.clone(),
            elapsed_secs: r.elapsed.as_secs_f64(),
            limit_secs: r.limit.as_secs_f64(),
        }
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Output, CliError> {
    let selected: Vec<_> = criteria().into_iter().filter(|c| args.criterion.is_none_or(|id| c.id == id)).collect();
    if selected.is_empty() {
        return Err(CliError::Config(format!("no criterion with id {}", args.criterion.unwrap_or_default())));
    }
    let reports: Vec<CriterionReport> = selected.iter().map(|c| c.run()).collect();
    let failed = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json(&reports.iter().map(ReportRecord::from).collect::<Vec<_>>())?,
        Format::Csv => reports.iter().map(|r| format!("{r}\n")).collect(),
    };
    Ok(Output { text, failed })
}
