use std::fmt::{self, Write as _};
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use symorder_core::ensemble::EnsembleConfig;
use symorder_core::groups::{
    build_group, build_invariant, check_invariance, extract_label_blocks, pair_orbits, GroupName,
    GroupSummary,
};
use symorder_core::irrep::{block_spectra, decompose, ground_state_irrep_census};
use symorder_core::linalg::{eigenvalues, spectrum_deviation, SymMatrix};
use symorder_core::output::{census_csv, fmt_sig, gs_distribution_csv, widths_csv};
use symorder_core::su2::{gs_distribution, DimensionTable, GsRun, WidthTable};

use crate::manifest::RunManifest;
use crate::{Command, Format, GroupArgs, GroupKind, OutputArgs};

#[derive(Debug)]
pub enum CliError {
    Core(symorder_core::Error),
    Io(io::Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<symorder_core::Error> for CliError {
    fn from(e: symorder_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn group_name(args: &GroupArgs) -> Result<GroupName> {
    let kind = match args.group {
        GroupKind::Cyclic => "cyclic",
        GroupKind::Tetra => "tetra",
        GroupKind::Octa => "octa",
        GroupKind::Cube => "cube",
    };
    Ok(GroupName::from_parts(kind, args.n)?)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

/// Writes `body` to `out` (plus its manifest) or to stdout.
fn emit(
    command: &str,
    body: &str,
    out: Option<&Path>,
    config: Value,
    diagnostics: Value,
) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            let manifest = RunManifest::new(command, config, path, diagnostics);
            let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            text.push('\n');
            fs::write(RunManifest::path_for(path), text)?;
        }
        None => {
            io::stdout().lock().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("result serializes");
    s.push('\n');
    s
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Build { group, m, seed, sigma0, out } => cmd_build(&group, m, seed, sigma0, out.as_deref()),
        Command::Spectrum { input, group, m, output } => cmd_spectrum(&input, &group, m, &output),
        Command::Census { group, m, trials, seed, sigma0, output } => {
            cmd_census(&group, m, trials, seed, sigma0, &output)
        }
        Command::Su2Widths { jmax, quad_points, output } => cmd_su2_widths(jmax, quad_points, &output),
        Command::Gsdist { dims, trials, seed, jmax, quad_points, sigma0, output } => {
            cmd_gsdist(&dims, trials, seed, jmax, quad_points, sigma0, &output)
        }
        Command::Group { group, out } => cmd_group(&group, out.as_deref()),
    }
}

fn cmd_build(args: &GroupArgs, m: usize, seed: u64, sigma0: f64, out: Option<&Path>) -> Result<()> {
    let name = group_name(args)?;
    let cfg = EnsembleConfig::new(name, m, 1, seed).with_sigma0(positive("sigma0", sigma0)?);
    cfg.validate()?;
    let g = build_group(name)?;
    let orbits = pair_orbits(&g);
    let blocks: Vec<SymMatrix> = cfg
        .draw_blocks(0, orbits.num_labels())?
        .into_iter()
        .map(|b| b.matrix)
        .collect();
    let h = build_invariant(&orbits, &blocks)?;
    let violation = check_invariance(&h, &g, m)?;
    emit(
        "build",
        &h.to_text(),
        out,
        json!({ "group": name, "m": m, "seed": seed, "sigma0": sigma0 }),
        json!({ "dim": h.dim(), "invariance_violation": violation }),
    )
}

#[derive(Serialize)]
struct SpectrumReport {
    blocks: Vec<BlockRow>,
    dense: Vec<f64>,
    max_deviation: f64,
    invariance_violation: f64,
    input_asymmetry: f64,
}

#[derive(Serialize)]
struct BlockRow {
    irrep_label: String,
    copies: usize,
    eigenvalues: Vec<f64>,
}

fn cmd_spectrum(input: &Path, args: &GroupArgs, m: usize, output: &OutputArgs) -> Result<()> {
    let name = group_name(args)?;
    let file = File::open(input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", input.display())))?;
    let (h, asymmetry) = SymMatrix::read_text(BufReader::new(file))?;
    let g = build_group(name)?;
    let orbits = pair_orbits(&g);
    let decomp = decompose(&g)?;
    let blocks = extract_label_blocks(&h, &orbits, m)?;
    let spectra = block_spectra(&decomp, &blocks)?;
    let dense = eigenvalues(&h)?;
    let deviation = spectrum_deviation(&dense, &spectra.union).expect("equal dimensions");
    let violation = check_invariance(&h, &g, m)?;

    let report = SpectrumReport {
        blocks: decomp
            .irreps
            .iter()
            .zip(&spectra.per_irrep)
            .map(|(irrep, ev)| BlockRow {
                irrep_label: irrep.label.clone(),
                copies: irrep.copies,
                eigenvalues: ev.clone(),
            })
            .collect(),
        dense,
        max_deviation: deviation,
        invariance_violation: violation,
        input_asymmetry: asymmetry,
    };
    let body = match output.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("irrep_label,eigenvalue\n");
            for row in &report.blocks {
                for _ in 0..row.copies {
                    for v in &row.eigenvalues {
                        writeln!(s, "{},{}", row.irrep_label, fmt_sig(*v)).unwrap();
                    }
                }
            }
            for v in &report.dense {
                writeln!(s, "dense,{}", fmt_sig(*v)).unwrap();
            }
            writeln!(s, "# max_deviation={}", fmt_sig(deviation)).unwrap();
            writeln!(s, "# invariance_violation={}", fmt_sig(violation)).unwrap();
            writeln!(s, "# input_asymmetry={}", fmt_sig(asymmetry)).unwrap();
            s
        }
    };
    emit(
        "spectrum",
        &body,
        output.out.as_deref(),
        json!({ "input": input.display().to_string(), "group": name, "m": m, "format": format_name(output.format) }),
        json!({ "max_deviation": deviation, "invariance_violation": violation, "input_asymmetry": asymmetry }),
    )
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn cmd_census(
    args: &GroupArgs,
    m: usize,
    trials: u64,
    seed: u64,
    sigma0: f64,
    output: &OutputArgs,
) -> Result<()> {
    let name = group_name(args)?;
    let cfg = EnsembleConfig::new(name, m, trials, seed).with_sigma0(positive("sigma0", sigma0)?);
    cfg.validate()?;
    let census = ground_state_irrep_census(&cfg)?;
    if census.ties > 0 {
        eprintln!("warning: {} trials had exactly degenerate block minima", census.ties);
    }
    let body = match output.format {
        Format::Csv => census_csv(&census),
        Format::Json => {
            let rows: Vec<Value> = census
                .irreps
                .iter()
                .zip(census.fractions())
                .zip(census.dimensional_fractions())
                .zip(&census.counts)
                .map(|(((irrep, f), d), count)| {
                    json!({
                        "irrep_label": irrep.label,
                        "copies": irrep.copies,
                        "block_dim": census.block_dim,
                        "predicted_variance_factor": irrep.variance_factor,
                        "gs_fraction": f,
                        "dimensional_fraction": d,
                        "count": count,
                    })
                })
                .collect();
            to_json(&json!({ "trials": census.trials, "ties": census.ties, "irreps": rows }))
        }
    };
    let mut config = serde_json::to_value(&cfg).expect("config serializes");
    config["format"] = json!(format_name(output.format));
    emit("census", &body, output.out.as_deref(), config, json!({ "ties": census.ties }))
}

fn cmd_su2_widths(jmax: u32, quad_points: usize, output: &OutputArgs) -> Result<()> {
    let table = WidthTable::compute(jmax, quad_points)?;
    let body = match output.format {
        Format::Csv => widths_csv(&table),
        Format::Json => to_json(&table.entries),
    };
    emit(
        "su2-widths",
        &body,
        output.out.as_deref(),
        json!({ "jmax": jmax, "quad_points": quad_points, "format": format_name(output.format) }),
        Value::Null,
    )
}

fn cmd_gsdist(
    dims_path: &Path,
    trials: u64,
    seed: u64,
    jmax: Option<u32>,
    quad_points: usize,
    sigma0: f64,
    output: &OutputArgs,
) -> Result<()> {
    let file = File::open(dims_path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", dims_path.display())))?;
    let dims = DimensionTable::from_csv(BufReader::new(file))?;
    let table_max = dims.max_two_j();
    if let Some(jmax) = jmax {
        if table_max > 2 * jmax {
            return Err(CliError::Usage(format!(
                "dimension table reaches twoJ = {table_max}, above --jmax {jmax}"
            )));
        }
    }
    let mut run = GsRun::new(trials, seed);
    run.quad_points = quad_points;
    run.sigma_scale = positive("sigma0", sigma0)?;
    let dist = gs_distribution(&dims, &run)?;
    if dist.ties > 0 {
        eprintln!("warning: {} trials had exactly degenerate minima", dist.ties);
    }
    let body = match output.format {
        Format::Csv => gs_distribution_csv(&dist),
        Format::Json => to_json(&dist),
    };
    let mut config = serde_json::to_value(&run).expect("config serializes");
    config["dims"] = json!(dims_path.display().to_string());
    config["jmax"] = json!(jmax.unwrap_or(table_max / 2));
    config["format"] = json!(format_name(output.format));
    emit("gsdist", &body, output.out.as_deref(), config, json!({ "ties": dist.ties }))
}

fn cmd_group(args: &GroupArgs, out: Option<&Path>) -> Result<()> {
    let name = group_name(args)?;
    let summary = GroupSummary::new(&build_group(name)?);
    emit("group", &to_json(&summary), out, json!({ "group": name }), Value::Null)
}
