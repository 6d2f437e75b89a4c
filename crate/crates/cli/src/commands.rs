use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use telehazard::datasets::{self, NamedDataset};
use telehazard::estimation::{
    confidence_band, defensibility_test, hazard_estimate, kde_cdf, kde_density, BandConfig, ConfidenceBand,
    DefensibilityReport, KernelSpec, Sample,
};
use telehazard::hazard::{parse_segments, HazardSpec};
use telehazard::telegraph::{self, derive_seed, sample_paths, TelegraphParams};
use telehazard::{presets, Error, PerturbedModel};

use crate::table::{emit, Format, Table};
use crate::{
    exit, BandArgs, Cli, Command, DataArgs, Density, Estimate, ModelArgs, Moments, Process, SimulateW, SimulateX,
    Target,
};

const KERNEL: KernelSpec = KernelSpec::EPANECHNIKOV;

/// Exit status for an error: 2 for bad input, 1 for everything else.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Io { .. } | Error::Quadrature { .. }) => exit::INTERNAL,
        Some(_) => exit::VALIDATION,
        None => exit::INTERNAL,
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::SimulateW(a) => emit(&simulate_w(a, cli.seed)?, cli.format, out).map(|_| exit::OK),
        Command::SimulateX(a) => emit(&simulate_x(a, cli.seed)?, cli.format, out).map(|_| exit::OK),
        Command::Density(a) => emit(&density(a)?, cli.format, out).map(|_| exit::OK),
        Command::Moments(a) => emit(&moments(a)?, cli.format, out).map(|_| exit::OK),
        Command::Band(a) => {
            let data = load_data(&a.band.data)?;
            let (band, _) = band(&data.sample, &a.band)?;
            emit(&band_table(&data, &a.band, &band), cli.format, out).map(|_| exit::OK)
        }
        Command::Estimate(a) => emit(&estimate(a)?, cli.format, out).map(|_| exit::OK),
        Command::Defensibility(a) => {
            let data = load_data(&a.band.data)?;
            let baseline = parse_hazard(&a.hazard)?;
            let report = defensibility(&data.sample, &a.band, &baseline, a.c)?;
            let table = defensibility_table(&data, &a.band, &a.hazard, &report);
            emit(&table, cli.format, out)?;
            Ok(if report.holds { exit::OK } else { exit::NOT_DEFENSIBLE })
        }
        Command::Reproduce(a) => reproduce(a.target, cli),
    }
}

/// Preset id, `constant:RATE`, `polynomial:ALPHA:BETA:C_REF` or
/// `piecewise:START:SLOPE:INTERCEPT;...`.
pub fn parse_hazard(spec: &str) -> Result<HazardSpec> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let nums = |n: usize| -> Result<Vec<f64>> {
        let v: Vec<f64> = rest
            .split(':')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("hazard `{spec}`: `{s}` is not a number")))
            })
            .collect::<std::result::Result<_, _>>()?;
        if v.len() != n {
            return Err(Error::Config(format!("hazard `{spec}`: expected {n} numbers after `{kind}:`")).into());
        }
        Ok(v)
    };
    Ok(match kind {
        "constant" => HazardSpec::constant(nums(1)?[0])?,
        "polynomial" => {
            let v = nums(3)?;
            HazardSpec::polynomial(v[0], v[1], v[2])?
        }
        "piecewise" => HazardSpec::piecewise_linear(parse_segments(rest)?)?,
        id if rest.is_empty() => presets::hazard(id)?,
        _ => return Err(Error::Config(format!("cannot parse hazard `{spec}`")).into()),
    })
}

fn noise_for(args: &ModelArgs) -> Result<TelegraphParams> {
    let preset = presets::noise(&args.hazard).ok();
    let c = args.c.or(preset.map(|p| p.c()));
    let lambda = args.lambda.or(preset.map(|p| p.lambda()));
    match (c, lambda) {
        (Some(c), Some(l)) => Ok(TelegraphParams::new(c, l)?),
        _ => Err(Error::Validation(format!(
            "hazard `{}` has no preset noise: give both --c and --lambda",
            args.hazard
        ))
        .into()),
    }
}

fn model(args: &ModelArgs, horizon: f64) -> Result<PerturbedModel> {
    Ok(PerturbedModel::new(
        parse_hazard(&args.hazard)?,
        noise_for(args)?,
        horizon,
    )?)
}

fn uniform(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Validation(format!("need at least 2 grid points, got {points}")).into());
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Validation(format!("grid range [{lo}, {hi}] is empty")).into());
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|k| if k + 1 == points { hi } else { lo + step * k as f64 })
        .collect())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Validation(format!("--{name} must be finite and > 0, got {v}")).into());
    }
    Ok(())
}

fn simulate_w(a: &SimulateW, seed: u64) -> Result<Table> {
    let p = TelegraphParams::new(a.c, a.lambda)?;
    positive("horizon", a.horizon)?;
    let grid = uniform(0.0, a.horizon, a.points)?;
    let mut t = Table::new("integrated telegraph process W(t)", &["path_id", "t", "w"]);
    t.meta("c", a.c)
        .meta("lambda", a.lambda)
        .meta("paths", a.paths)
        .meta("seed", seed);
    for (i, path) in sample_paths(&p, a.horizon, a.paths, seed)?.iter().enumerate() {
        for pt in path.integrate_on_grid(&p, &grid)? {
            t.push(vec![i as f64, pt.t, pt.value]);
        }
    }
    Ok(t)
}

fn simulate_x(a: &SimulateX, seed: u64) -> Result<Table> {
    positive("horizon", a.horizon)?;
    let m = model(&a.model, a.horizon)?;
    let grid = uniform(0.0, a.horizon, a.points)?;
    let mut t = Table::new(
        "perturbed distribution function X(t)",
        &["path_id", "t", "w", "x", "cdf"],
    );
    t.meta("hazard", &a.model.hazard)
        .meta("c", m.noise().c())
        .meta("lambda", m.noise().lambda())
        .meta("paths", a.paths)
        .meta("seed", seed);
    for i in 0..a.paths {
        for pt in m.sample_x_path(a.horizon, &grid, derive_seed(seed, i as u64))? {
            t.push(vec![i as f64, pt.t, pt.w, pt.x, m.hazard().cdf(pt.t)?]);
        }
    }
    Ok(t)
}

fn density(a: &Density) -> Result<Table> {
    if a.points == 0 {
        return Err(Error::Validation("--points must be > 0".into()).into());
    }
    let horizon = a.times.iter().copied().fold(0.0, f64::max);
    for &time in &a.times {
        positive("times", time)?;
    }
    let mut t = Table::new("", &["t", "x", "density", "cdf"]);
    let interior = |lo: f64, hi: f64| (1..=a.points).map(move |k| lo + (hi - lo) * k as f64 / (a.points + 1) as f64);
    match a.process {
        Process::W => {
            let p = noise_for(&a.model)?;
            t.title = "density of W(t)".into();
            t.meta("c", p.c()).meta("lambda", p.lambda());
            for &time in &a.times {
                let ct = p.c() * time;
                t.meta(&format!("atom mass at ±{ct}"), telegraph::w_atom_prob(&p, time)?);
                for x in interior(-ct, ct) {
                    t.push(vec![
                        time,
                        x,
                        telegraph::w_density(&p, time, x)?,
                        telegraph::w_cdf(&p, time, x)?,
                    ]);
                }
            }
        }
        Process::X => {
            let m = model(&a.model, horizon)?;
            t.title = "density of X(t)".into();
            t.meta("hazard", &a.model.hazard)
                .meta("c", m.noise().c())
                .meta("lambda", m.noise().lambda());
            for &time in &a.times {
                let band = m.band(time)?;
                t.meta(
                    &format!("t={time}: atoms at a={} and b={}", band.a, band.b),
                    m.x_atom_prob(time)?,
                );
                for x in interior(band.a, band.b) {
                    t.push(vec![time, x, m.x_density(x, time)?, m.x_cdf(x, time)?]);
                }
            }
        }
    }
    Ok(t)
}

fn moments(a: &Moments) -> Result<Table> {
    positive("t-max", a.t_max)?;
    let m = model(&a.model, a.t_max)?;
    moments_table(&m, &a.model.hazard, &uniform(0.0, a.t_max, a.points)?)
}

fn moments_table(m: &PerturbedModel, name: &str, grid: &[f64]) -> Result<Table> {
    let mut t = Table::new(
        "mean, variance and support of X(t)",
        &["t", "mean", "variance", "a", "b", "width"],
    );
    t.meta("hazard", name)
        .meta("c", m.noise().c())
        .meta("lambda", m.noise().lambda())
        .meta("nu", m.nu())
        .meta("terminal width exp(-nu)", m.terminal_width());
    for &time in grid {
        let b = m.band(time)?;
        t.push(vec![time, m.x_mean(time)?, m.x_variance(time)?, b.a, b.b, b.width]);
    }
    Ok(t)
}

fn load_data(a: &DataArgs) -> Result<NamedDataset> {
    match (&a.dataset, &a.data) {
        (Some(name), None) => Ok(datasets::builtin(name)?),
        (None, Some(path)) => Ok(datasets::load(path)?),
        _ => bail!("give exactly one of --dataset or --data"),
    }
}

fn band_config(sample: &Sample, a: &BandArgs) -> Result<BandConfig> {
    if a.points == 0 {
        return Err(Error::Validation("--points must be > 0".into()).into());
    }
    Ok(BandConfig::uniform_with_points(sample, a.bandwidth, a.alpha, a.points)?)
}

fn band(sample: &Sample, a: &BandArgs) -> Result<(ConfidenceBand, BandConfig)> {
    let cfg = band_config(sample, a)?;
    Ok((confidence_band(sample, &KERNEL, &cfg)?, cfg))
}

fn data_meta(t: &mut Table, data: &NamedDataset, a: &BandArgs) {
    t.meta("dataset", &data.name)
        .meta("n", data.sample.len())
        .meta("bandwidth", a.bandwidth)
        .meta("alpha", a.alpha);
}

fn band_table(data: &NamedDataset, a: &BandArgs, band: &ConfidenceBand) -> Table {
    let mut t = Table::new(
        "pointwise confidence band for the hazard rate",
        &["t", "f_hat", "cdf_hat", "r_hat", "half_width", "lower", "upper"],
    );
    data_meta(&mut t, data, a);
    t.meta("z_alpha", band.z_alpha)
        .meta("unusable grid points", band.unusable.len());
    for p in &band.points {
        t.push(vec![p.t, p.f_hat, p.cdf_hat, p.r_hat, p.half_width, p.lower, p.upper]);
    }
    t
}

fn estimate(a: &Estimate) -> Result<Table> {
    let data = load_data(&a.data)?;
    estimate_table(&data, a.bandwidth, a.from, a.to, a.points)
}

fn estimate_table(data: &NamedDataset, h: f64, from: Option<f64>, to: Option<f64>, points: usize) -> Result<Table> {
    positive("bandwidth", h)?;
    let values = data.sample.values();
    let reach = h * KERNEL.support_radius();
    let lo = from.unwrap_or(0.0);
    let hi = to.unwrap_or(values[values.len() - 1] + reach);
    let mut t = Table::new("kernel estimates", &["t", "f_hat", "cdf_hat", "r_hat"]);
    t.meta("dataset", &data.name)
        .meta("n", values.len())
        .meta("bandwidth", h);
    for time in uniform(lo, hi, points)? {
        let r = match hazard_estimate(values, &KERNEL, h, time) {
            Ok(r) => r,
            Err(Error::UpperTailUnstable { .. }) => f64::NAN,
            Err(e) => return Err(e.into()),
        };
        t.push(vec![
            time,
            kde_density(values, &KERNEL, h, time)?,
            kde_cdf(values, &KERNEL, h, time)?,
            r,
        ]);
    }
    Ok(t)
}

fn defensibility(sample: &Sample, a: &BandArgs, baseline: &HazardSpec, c: f64) -> Result<DefensibilityReport> {
    let cfg = band_config(sample, a)?;
    Ok(defensibility_test(sample, &KERNEL, &cfg, baseline, c)?)
}

fn defensibility_table(data: &NamedDataset, a: &BandArgs, hazard: &str, rep: &DefensibilityReport) -> Table {
    let mut t = Table::new(
        "defensibility of baseline ± c",
        &["t", "r_hat", "lower", "upper", "baseline", "margin"],
    );
    data_meta(&mut t, data, a);
    t.meta("baseline", hazard)
        .meta("c", rep.c)
        .meta("holds", rep.holds)
        .meta("max_admissible_c", rep.max_admissible_c)
        .meta(
            "violating_t",
            rep.violating_t.map_or_else(|| "none".to_string(), |v| v.to_string()),
        )
        .meta("unusable grid points", rep.unusable.len());
    for r in &rep.rows {
        t.push(vec![r.t, r.r_hat, r.lower, r.upper, r.baseline, r.margin]);
    }
    t
}

fn write_file(dir: &Path, name: &str, table: &Table, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    emit(table, Format::Csv, Some(&path))?;
    written.push(path);
    Ok(())
}

fn reproduce(target: Target, cli: &Cli) -> Result<u8> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut written = Vec::new();
    let mut summary = Table::new(format!("reproduce {target:?}").to_lowercase(), &[]);
    let mut code = exit::OK;
    match target {
        Target::Fig1 => {
            let w = simulate_w(
                &SimulateW {
                    c: 2.0,
                    lambda: 15.0,
                    horizon: 1.0,
                    paths: 2,
                    points: 201,
                },
                cli.seed,
            )?;
            write_file(&dir, "fig1_w.csv", &w, &mut written)?;
            let x = simulate_x(
                &SimulateX {
                    model: preset_model("fig1"),
                    horizon: 1.0,
                    paths: 2,
                    points: 201,
                },
                cli.seed,
            )?;
            write_file(&dir, "fig1_x.csv", &x, &mut written)?;
            summary.meta("c", 2).meta("lambda", 15).meta("seed", cli.seed);
        }
        Target::Fig2 => {
            let grid = uniform(0.0, 5.0, 501)?;
            let cases = ["fig2a", "fig2b", "fig2c"];
            let models = cases
                .iter()
                .map(|id| model(&preset_model(id), 5.0))
                .collect::<Result<Vec<_>>>()?;
            let mut t = Table::new("support band width D(t)", &["t", "width_a", "width_b", "width_c"]);
            for &time in &grid {
                let mut row = vec![time];
                for m in &models {
                    row.push(m.band(time)?.width);
                }
                t.push(row);
            }
            write_file(&dir, "fig2.csv", &t, &mut written)?;
            for (id, m) in cases.iter().zip(&models) {
                summary.meta(&format!("{id} limit of D(t)"), m.terminal_width());
            }
        }
        Target::Fig3 => {
            let t = density(&Density {
                process: Process::X,
                model: preset_model("fig3"),
                times: vec![0.25, 0.5, 1.0],
                points: 399,
            })?;
            write_file(&dir, "fig3.csv", &t, &mut written)?;
            summary.meta.extend(t.meta.clone());
        }
        Target::Fig4 => {
            let m = model(&preset_model("fig4"), 2.0)?;
            let t = moments_table(&m, "fig4", &uniform(0.0, 2.0, 201)?)?;
            write_file(&dir, "fig4.csv", &t, &mut written)?;
            summary.meta("c", 1).meta("lambda", 15);
        }
        Target::App1 | Target::App2 => {
            let id = if target == Target::App1 { "app1" } else { "app2" };
            let app = presets::application(id)?;
            let data = datasets::builtin(app.dataset)?;
            let args = BandArgs {
                data: DataArgs {
                    dataset: Some(app.dataset.to_string()),
                    data: None,
                },
                bandwidth: app.bandwidth,
                alpha: app.alpha,
                points: telehazard::estimation::DEFAULT_GRID_POINTS,
            };
            let est = estimate_table(&data, app.bandwidth, None, None, 512)?;
            write_file(&dir, &format!("{id}_estimate.csv"), &est, &mut written)?;
            let (b, _) = band(&data.sample, &args)?;
            write_file(
                &dir,
                &format!("{id}_band.csv"),
                &band_table(&data, &args, &b),
                &mut written,
            )?;
            let rep = defensibility(&data.sample, &args, &app.baseline, app.c)?;
            let t = defensibility_table(&data, &args, id, &rep);
            write_file(&dir, &format!("{id}_defensibility.csv"), &t, &mut written)?;
            summary.meta.extend(t.meta.clone());
            if !rep.holds {
                code = exit::NOT_DEFENSIBLE;
            }
        }
    }
    for p in &written {
        summary.meta("wrote", p.display());
    }
    summary.write_report(std::io::stdout().lock())?;
    Ok(code)
}

fn preset_model(id: &str) -> ModelArgs {
    ModelArgs {
        hazard: id.to_string(),
        c: None,
        lambda: None,
    }
}
