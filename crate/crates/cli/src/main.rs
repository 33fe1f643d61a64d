mod args;
mod error;
mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use gabor_core::search::{search, SearchConfig};
use gabor_core::{
    ambiguity_table, apply_all, run_suite, spectrum_closed_form, Suite, SuiteParams,
    TolerancePolicy64, TransformSpec, UnitVector64,
};
use serde::Serialize;

use args::{Cli, Command, Common, Format, SearchArgs, VerifyArgs};
use error::CliError;
use input::{policy, resolve, to_pairs};
use report::{emit, spectrum_csv, to_json, write, AnglesOut, Report, SpectrumOut};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verification) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(c) => cmd_spectrum("spectrum", &c),
        Command::Rank(c) => cmd_spectrum("rank", &c),
        Command::Angles(c) => cmd_spectrum("angles", &c),
        Command::Heatmap(c) => cmd_heatmap(&c),
        Command::Transform { common, apply } => cmd_transform(&common, &apply),
        Command::Search(a) => cmd_search(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[derive(Serialize)]
struct SpectrumBody {
    spectrum: SpectrumOut,
    angles: AnglesOut,
}

fn cmd_spectrum(command: &'static str, c: &Common) -> Result<(), CliError> {
    let start = Instant::now();
    let pol = policy(&c.tol)?;
    let input = resolve(&c.input)?;
    let s = spectrum_closed_form(&input.g, &pol);
    if c.format == Format::Csv {
        return emit(&spectrum_csv(&s), c.out.as_deref());
    }
    let body = SpectrumBody {
        spectrum: SpectrumOut::new(&s),
        angles: angles_of(&input.g, &pol),
    };
    let rep = Report {
        schema_version: report::SCHEMA_VERSION,
        command,
        d: input.g.dim(),
        input: input.source,
        vector: to_pairs(input.g.vec()),
        tolerances: (&pol).into(),
        seed: None,
        elapsed_ms: elapsed_ms(start),
        body,
    };
    emit(&to_json(&rep)?, c.out.as_deref())
}

/// `|<g, M^k T^l g>|` with rows k and columns l.
fn heat_grid(g: &UnitVector64) -> Vec<f64> {
    let t = ambiguity_table(g);
    let d = g.dim() as i64;
    (0..d)
        .flat_map(|k| (0..d).map(move |l| (k, l)))
        .map(|(k, l)| t.modulus(l, k))
        .collect()
}

fn pgm(d: usize, grid: &[f64]) -> Vec<u8> {
    let vmax = grid.iter().copied().fold(0.0, f64::max);
    let mut bytes = format!("P5\n{d} {d}\n255\n").into_bytes();
    bytes.extend(grid.iter().map(|&v| {
        if vmax > 0.0 {
            (255.0 * v / vmax).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    bytes
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".csv");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct HeatmapBody {
    image: String,
    values_csv: String,
    distinct_values: usize,
}

fn cmd_heatmap(c: &Common) -> Result<(), CliError> {
    let start = Instant::now();
    let out = c
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("heatmap needs --out".into()))?;
    let pol = policy(&c.tol)?;
    let input = resolve(&c.input)?;
    let d = input.g.dim();
    let grid = heat_grid(&input.g);
    let csv_path = sidecar(out);
    let mut csv = String::new();
    for row in grid.chunks(d) {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        csv.push_str(&line.join(","));
        csv.push('\n');
    }
    write(out, &pgm(d, &grid))?;
    write(&csv_path, csv.as_bytes())?;
    let rep = Report {
        schema_version: report::SCHEMA_VERSION,
        command: "heatmap",
        d,
        input: input.source,
        vector: to_pairs(input.g.vec()),
        tolerances: (&pol).into(),
        seed: None,
        elapsed_ms: elapsed_ms(start),
        body: HeatmapBody {
            image: out.display().to_string(),
            values_csv: csv_path.display().to_string(),
            distinct_values: ambiguity_table(&input.g)
                .distinct_moduli(pol.angle_cluster_tol, true)
                .len(),
        },
    };
    emit(&to_json(&rep)?, None)
}

#[derive(Serialize)]
struct Side {
    rank: usize,
    angles: AnglesOut,
}

#[derive(Serialize)]
struct TransformBody {
    transforms: Vec<String>,
    before: Side,
    after: Side,
    transformed_vector: Vec<[f64; 2]>,
    rank_preserved: bool,
    angles_preserved: bool,
}

fn side(g: &UnitVector64, pol: &TolerancePolicy64) -> Side {
    let s = spectrum_closed_form(g, pol);
    Side {
        rank: s.rank,
        angles: angles_of(g, pol),
    }
}

fn angles_of(g: &UnitVector64, pol: &TolerancePolicy64) -> AnglesOut {
    let values = ambiguity_table(g).distinct_moduli(pol.angle_cluster_tol, true);
    AnglesOut {
        count: values.len(),
        values,
    }
}

fn cmd_transform(c: &Common, apply: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let pol = policy(&c.tol)?;
    let input = resolve(&c.input)?;
    let specs = apply
        .iter()
        .flat_map(|s| s.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse::<TransformSpec<f64>>)
        .collect::<Result<Vec<_>, _>>()?;
    let h = apply_all(&specs, &input.g)?;
    let (before, after) = (side(&input.g, &pol), side(&h, &pol));
    let angles_preserved = before.angles.count == after.angles.count
        && before
            .angles
            .values
            .iter()
            .zip(&after.angles.values)
            .all(|(x, y)| (x - y).abs() <= pol.angle_cluster_tol);
    let body = TransformBody {
        transforms: specs.iter().map(ToString::to_string).collect(),
        rank_preserved: before.rank == after.rank,
        angles_preserved,
        before,
        after,
        transformed_vector: to_pairs(h.vec()),
    };
    let rep = Report {
        schema_version: report::SCHEMA_VERSION,
        command: "transform",
        d: input.g.dim(),
        input: input.source,
        vector: to_pairs(input.g.vec()),
        tolerances: (&pol).into(),
        seed: None,
        elapsed_ms: elapsed_ms(start),
        body,
    };
    emit(&to_json(&rep)?, c.out.as_deref())
}

#[derive(Serialize)]
struct SearchBody {
    objective: f64,
    max_angle_deviation: f64,
    iterations_used: usize,
    restart_index: usize,
    restart_seed: u64,
    converged: bool,
    restarts: usize,
    rank: usize,
    is_sic: bool,
}

fn cmd_search(a: &SearchArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let pol = policy(&a.tol)?;
    let cfg = SearchConfig {
        restarts: a.restarts,
        max_iters: a.max_iters,
        convergence_tol: a.convergence_tol,
        ..SearchConfig::new(a.d, a.seed)
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let r = search(&cfg)?;
    let s = spectrum_closed_form(&r.g, &pol);
    let rep = Report {
        schema_version: report::SCHEMA_VERSION,
        command: "search",
        d: a.d,
        input: format!("search:{}", a.d),
        vector: to_pairs(r.g.vec()),
        tolerances: (&pol).into(),
        seed: Some(a.seed),
        elapsed_ms: elapsed_ms(start),
        body: SearchBody {
            objective: r.objective,
            max_angle_deviation: r.max_angle_deviation,
            iterations_used: r.iterations_used,
            restart_index: r.restart_index,
            restart_seed: r.seed,
            converged: r.converged,
            restarts: cfg.restarts,
            rank: s.rank,
            is_sic: s.is_sic,
        },
    };
    emit(&to_json(&rep)?, a.out.as_deref())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let suite: Suite = a.suite.parse()?;
    let pol = policy(&a.tol)?;
    let generator = if a.generator.is_some() || a.vec.is_some() {
        let args = args::InputArgs {
            d: a.d,
            generator: a.generator.clone(),
            vec: a.vec.clone(),
            input: None,
            normalize: false,
        };
        Some(resolve(&args)?.g)
    } else {
        None
    };
    let d = match (a.d, &generator) {
        (Some(d), _) => d,
        (None, Some(g)) => g.dim(),
        (None, None) if suite == Suite::Dim45 => 0,
        (None, None) => return Err(CliError::Usage(format!("suite {suite} needs --d"))),
    };
    let params = SuiteParams {
        d,
        trials: a.trials,
        seed: a.seed,
        policy: pol,
        generator,
    };
    let report = run_suite(suite, &params)?;
    #[derive(Serialize)]
    struct Wrapped<'a> {
        schema_version: &'static str,
        command: &'static str,
        #[serde(flatten)]
        report: &'a gabor_core::VerifyReport,
    }
    let text = to_json(&Wrapped {
        schema_version: report::SCHEMA_VERSION,
        command: "verify",
        report: &report,
    })?;
    emit(&text, a.out.as_deref())?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}
