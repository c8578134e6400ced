use std::path::Path;

use ahext_core::ads::{profile_solve, AdSSchwParams};
use ahext_core::extensions::{
    bartnik_mass_upper_bound, build_collar, build_extension_with, ExtensionOptions,
};
use ahext_core::geometry::{collar_curvature_sweep, hawking_mass_level, mean_curvature_level, BartnikData};
use ahext_core::path::flow::curvature_range;
use ahext_core::path::{compute_alpha_beta, ricci_flow_path, MetricPath};
use ahext_core::report::{profile_certificates, summarize_profile, ExtensionReport};
use serde::Serialize;

use crate::error::CliError;
use crate::table::{profile_row, read_profile, sink, write_profile, Table};
use crate::{BoundArgs, CollarArgs, CollarOptions, DataArgs, ExtendArgs, FlowArgs, PathArgs, ProfileArgs, VerifyArgs};

/// Agreement required between recomputed and recorded values.
const ROUND_TRIP_TOLERANCE: f64 = 1e-12;

impl DataArgs {
    fn load(&self) -> Result<BartnikData<f64>, CliError> {
        crate::input::InputFile::read(&self.input)?.bartnik_data(self.nodes)
    }
}

impl PathArgs {
    fn build(&self, data: &BartnikData<f64>) -> Result<MetricPath<f64>, CliError> {
        Ok(ricci_flow_path(data.metric(), self.theta, self.path_samples)?)
    }
}

fn options(path: &PathArgs, collar: &CollarOptions) -> ExtensionOptions<f64> {
    ExtensionOptions {
        theta_param: path.theta,
        path_samples: path.path_samples,
        epsilon: collar.epsilon,
        cmc_mass: collar.cmc_mass,
        coupling: collar.coupling,
        ..Default::default()
    }
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= ROUND_TRIP_TOLERANCE * b.abs().max(1.0)
}

/// `x` at 14 significant digits, hiding quadrature rounding in printed bounds.
fn display_rounded(x: f64) -> f64 {
    format!("{x:.13e}").parse().unwrap_or(x)
}

pub fn profile(a: &ProfileArgs) -> Result<(), CliError> {
    let p = profile_solve(AdSSchwParams::new(a.m, a.b)?, a.r0, a.smax, a.samples)?;
    write_profile(sink(a.output.as_deref())?, &p)
}

#[derive(Debug, Serialize)]
struct FlowSummary {
    r0: f64,
    theta_param: f64,
    path_samples: usize,
    final_flow_time: f64,
    alpha: f64,
    beta: f64,
    min_gauss_curvature: f64,
    /// Over the samples with centred stencils.
    max_trace_residual: f64,
}

pub fn flow(a: &FlowArgs) -> Result<(), CliError> {
    let data = a.data.load()?;
    let path = a.path.build(&data)?;
    let mut table = Table::new(
        sink(a.output.as_deref())?,
        &["t", "flow_time", "area_radius", "min_gauss_curvature", "max_gauss_curvature", "trace_residual"],
    )?;
    let n = path.len();
    let (mut min_k, mut max_trace) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let g = path.metric(i);
        let (lo, hi) = curvature_range(g);
        let trace = path.trace_residual(i)?;
        min_k = min_k.min(lo);
        if (2..n.saturating_sub(2)).contains(&i) {
            max_trace = max_trace.max(trace);
        }
        table.row(&[path.t_grid()[i], path.flow_times()[i], g.area_radius(), lo, hi, trace])?;
    }
    table.finish()?;
    if let Some(report) = &a.report {
        let (alpha, beta) = compute_alpha_beta(&path)?;
        let summary = FlowSummary {
            r0: path.r0(),
            theta_param: path.theta_param(),
            path_samples: n,
            final_flow_time: path.flow_times()[n - 1],
            alpha,
            beta,
            min_gauss_curvature: min_k,
            max_trace_residual: max_trace,
        };
        write_json(report, &summary)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct CollarSummary {
    variant: String,
    min_r_plus_6: f64,
    boundary_mass: f64,
    end_mass: f64,
    end_mass_bound: f64,
    boundary_mean_curvature_residual: f64,
    min_interior_mean_curvature: f64,
}

pub fn collar(a: &CollarArgs) -> Result<(), CliError> {
    let data = a.data.load()?;
    let path = a.path.build(&data)?;
    let (collar, variant) = build_collar(&data, path, a.collar.variant, &options(&a.path, &a.collar))?;
    let metric = collar.metric();
    let sweep = collar_curvature_sweep(metric)?;
    let mut table = Table::new(
        sink(a.output.as_deref())?,
        &["t", "hawking_mass", "min_mean_curvature", "max_mean_curvature", "min_r_plus_6"],
    )?;
    for i in 0..metric.len() {
        let h = mean_curvature_level(metric, i)?;
        let (h_lo, h_hi) = h.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(*x), hi.max(*x)));
        let r_lo = sweep.values[i].iter().copied().fold(f64::INFINITY, f64::min) + 6.0;
        table.row(&[metric.t_grid()[i], hawking_mass_level(metric, i)?, h_lo, h_hi, r_lo])?;
    }
    table.finish()?;
    if let Some(report) = &a.report {
        let d = collar.diagnostics();
        let summary = CollarSummary {
            variant: variant.name().into(),
            min_r_plus_6: d.min_r_plus_6,
            boundary_mass: d.boundary_mass,
            end_mass: d.end_mass,
            end_mass_bound: collar.end_mass_bound(),
            boundary_mean_curvature_residual: d.boundary_mean_curvature_residual,
            min_interior_mean_curvature: d.min_interior_mean_curvature,
        };
        write_json(report, &summary)?;
    }
    Ok(())
}

fn not_certified(report: &ExtensionReport) -> CliError {
    match report.worst_failure() {
        Some(c) => CliError::NotCertified(format!("{} = {:e} (threshold {:e})", c.name, c.value, c.threshold)),
        None => CliError::NotCertified("report marked FAIL".into()),
    }
}

pub fn extend(a: &ExtendArgs) -> Result<(), CliError> {
    let data = a.data.load()?;
    let opts = ExtensionOptions {
        profile_samples: a.profile_samples,
        ..options(&a.path, &a.collar)
    };
    let ext = build_extension_with(&data, a.mass, a.collar.variant, &opts)?;
    write_profile(sink(Some(&a.output))?, &ext.profile)?;
    write_json(&a.report, &ext.report)?;
    let r = &ext.report;
    if !r.passed() {
        return Err(not_certified(r));
    }
    println!(
        "PASS {}: exterior mass {}, collar-end mass {:e}, min(R + 6) {:e}",
        r.parameters.variant, r.exterior_mass, r.end_collar_mass, r.min_r_plus_6
    );
    Ok(())
}

pub fn bound(a: &BoundArgs) -> Result<(), CliError> {
    let data = a.data.load()?;
    let path = a.path.build(&data)?;
    let value = bartnik_mass_upper_bound(&data, &path, a.variant)?;
    println!("{:?}", display_rounded(value));
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let table = read_profile(&a.profile)?;
    let text = std::fs::read_to_string(&a.report).map_err(|e| CliError::io(&a.report, e))?;
    let report: ExtensionReport = serde_json::from_str(&text)?;
    let p = &table.profile;
    let mut problems = Vec::new();

    for (i, recorded) in table.derived.iter().enumerate() {
        let (f, fp, fpp) = p.sample(i)?;
        let row = profile_row(f, fp, fpp)?;
        for (k, name) in ["R", "H", "hawking_mass"].iter().enumerate() {
            if !close(row[3 + k], recorded[k]) {
                problems.push(format!("row {i}: {name} column {:e} but recomputed {:e}", recorded[k], row[3 + k]));
            }
        }
    }

    let g = &report.gluing;
    if g.tail_start >= p.len() || g.glue_end >= g.tail_start {
        return Err(CliError::Schema(format!(
            "report indices glue_end {} / tail_start {} do not fit a profile of {} samples",
            g.glue_end,
            g.tail_start,
            p.len()
        )));
    }
    let summary = summarize_profile(p, g.glue_end, g.tail_start, report.exterior_mass)?;
    let mut out = std::io::stdout().lock();
    for c in profile_certificates(&summary, report.exterior_mass) {
        use std::io::Write;
        let status = if c.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {} = {:e} (threshold {:e})", c.name, c.value, c.threshold)
            .map_err(|e| CliError::io(Path::new("stdout"), e))?;
        match report.certificate(&c.name) {
            None => problems.push(format!("{} missing from the report", c.name)),
            Some(r) if !close(c.value, r.value) || c.pass != r.pass => {
                problems.push(format!("{}: report {:e}, recomputed {:e}", c.name, r.value, c.value))
            }
            Some(_) => {}
        }
        if !c.pass {
            problems.push(format!("{} fails", c.name));
        }
    }
    for c in report.certificates.iter().filter(|c| !c.pass) {
        problems.push(format!("report certificate {} fails", c.name));
    }
    let all_pass = report.certificates.iter().all(|c| c.pass);
    if report.passed() != all_pass {
        problems.push("report status disagrees with its certificates".into());
    }
    if problems.is_empty() {
        println!("PASS");
        Ok(())
    } else {
        Err(CliError::NotCertified(problems.join("; ")))
    }
}
