use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aquameter::core::{onsite_wue, OnsiteConfig, WetBulbTemp};
use aquameter::run;
use aquameter::{Error, RunConfig};

/// Data-center water usage efficiency and inference water footprints.
///
/// Exit codes: 0 success, 1 validation or data error, 2 usage error.
#[derive(Parser)]
#[command(name = "aquameter", version, about, propagate_version = true)]
struct Cli {
    /// Config file with `key = value` lines; flags override file values.
    /// Falls back to the AQUAMETER_CONFIG environment variable.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the onsite WUE (L/kWh) for one wet-bulb temperature.
    Wue(WueArgs),
    /// Build the per-country hourly WUE dataset from the input tables.
    Build(BuildArgs),
    /// Estimate the water footprint of one task in one location.
    Estimate(EstimateArgs),
    /// Rank locations by water footprint for one task.
    Compare(CompareArgs),
    /// Emit plot-ready monthly aggregates and the regional comparison.
    Export(ExportArgs),
}

fn parse_formula(raw: &str) -> Result<OnsiteConfig, String> {
    raw.parse()
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TempArg {
    /// Wet-bulb temperature in Fahrenheit.
    #[arg(long, allow_negative_numbers = true)]
    temp_f: Option<f64>,
    /// Wet-bulb temperature in Celsius.
    #[arg(long, allow_negative_numbers = true)]
    temp_c: Option<f64>,
}

#[derive(Args)]
struct WueArgs {
    #[command(flatten)]
    temp: TempArg,
    /// Curve to evaluate: `approach` or `coldwater`.
    #[arg(long, value_parser = parse_formula, default_value = "coldwater")]
    formula: OnsiteConfig,
}

/// Input-table flags shared by the data-driven subcommands. Everything is
/// optional here; each subcommand checks for what it actually needs after
/// the config file is merged in.
#[derive(Args)]
struct SourceArgs {
    /// Weather CSV (timestamp,country,wet_bulb_c|wet_bulb_f,humidity,precip_mm).
    #[arg(long, value_name = "FILE")]
    weather: Option<PathBuf>,
    /// Fuel-mix CSV (country,year,fuel,generation|share).
    #[arg(long, value_name = "FILE")]
    fuel_mix: Option<PathBuf>,
    /// Water-intensity CSV (fuel,l_per_kwh).
    #[arg(long, value_name = "FILE")]
    intensity: Option<PathBuf>,
    /// PUE override CSV (region,pue); extends the built-in table.
    #[arg(long, value_name = "FILE")]
    pue: Option<PathBuf>,
    /// Energy-registry override CSV (model,task,output_tokens,energy_wh,embedded_pue).
    #[arg(long, value_name = "FILE")]
    energy: Option<PathBuf>,
    /// Carbon-intensity CSV (region,kg_per_kwh); enables the carbon column.
    #[arg(long, value_name = "FILE")]
    carbon: Option<PathBuf>,
    /// Region-map CSV (country,region); replaces the built-in map.
    #[arg(long, value_name = "FILE")]
    region_map: Option<PathBuf>,
    /// Gamma-table CSV (key,gamma_on,gamma_off); direct WUE source.
    #[arg(long, value_name = "FILE")]
    gammas: Option<PathBuf>,
    /// Previously built dataset directory; gammas come from its summary.json.
    #[arg(long, value_name = "DIR")]
    dataset: Option<PathBuf>,
    /// Curve for onsite WUE: `approach` or `coldwater` (default).
    #[arg(long, value_parser = parse_formula)]
    formula: Option<OnsiteConfig>,
    /// Minimum fraction of hours a month needs before its mean is reported.
    #[arg(long, value_name = "FRACTION")]
    coverage_threshold: Option<f64>,
    /// Fuel-mix year (required when a country carries several years).
    #[arg(long)]
    year: Option<i32>,
    /// Offsite WUE (L/kWh) for the US baseline.
    #[arg(long, value_name = "L_PER_KWH")]
    offsite_us: Option<f64>,
    /// Offsite WUE (L/kWh) for the GLOBAL baseline.
    #[arg(long, value_name = "L_PER_KWH")]
    offsite_global: Option<f64>,
}

impl SourceArgs {
    fn into_config(self, out_dir: Option<PathBuf>) -> RunConfig {
        RunConfig {
            weather: self.weather,
            fuel_mix: self.fuel_mix,
            intensity: self.intensity,
            pue: self.pue,
            energy: self.energy,
            carbon: self.carbon,
            region_map: self.region_map,
            gammas: self.gammas,
            dataset: self.dataset,
            out_dir,
            formula: self.formula,
            coverage_threshold: self.coverage_threshold,
            year: self.year,
            offsite_us: self.offsite_us,
            offsite_global: self.offsite_global,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    sources: SourceArgs,
    /// Output directory for the dataset layout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    sources: SourceArgs,
    /// Model identifier, e.g. llama-3-70b or gpt-4.
    #[arg(long)]
    model: String,
    /// Task identifier, e.g. report-10p or email.
    #[arg(long)]
    task: String,
    /// Country or region key, e.g. ZA, US, GLOBAL.
    #[arg(long)]
    country: String,
    /// Also include the reference rows: us, global, or us,global.
    #[arg(long, value_name = "LIST")]
    baselines: Option<String>,
    /// Couple the workload to one UTC hour of day (0-23) instead of the
    /// annual mean.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=23))]
    hour: Option<u32>,
    /// Also write the machine-readable comparison CSV here.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    sources: SourceArgs,
    /// Model identifier, e.g. llama-3-70b or gpt-4.
    #[arg(long)]
    model: String,
    /// Task identifier, e.g. report-10p or email.
    #[arg(long)]
    task: String,
    /// Comma-separated country/region keys.
    #[arg(long, value_delimiter = ',', required = true, value_name = "KEYS")]
    countries: Vec<String>,
    /// Also include the reference rows: us, global, or us,global.
    #[arg(long, value_name = "LIST")]
    baselines: Option<String>,
    /// Couple the workload to one UTC hour of day (0-23) instead of the
    /// annual mean.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=23))]
    hour: Option<u32>,
    /// Also write the machine-readable comparison CSV here.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    sources: SourceArgs,
    /// Plot-ready long-format monthly CSV destination.
    #[arg(long, value_name = "FILE")]
    plot: Option<PathBuf>,
    /// Regional comparison JSON destination.
    #[arg(long, value_name = "FILE")]
    regional: Option<PathBuf>,
}

fn cmd_wue(args: WueArgs) -> Result<String, Error> {
    let temp = match (args.temp.temp_f, args.temp.temp_c) {
        (Some(f), None) => WetBulbTemp::from_fahrenheit(f)?,
        (None, Some(c)) => WetBulbTemp::from_celsius(c)?,
        _ => unreachable!("clap enforces exactly one temperature flag"),
    };
    let wue = onsite_wue(temp, args.formula);
    Ok(format!("{}\n", aquameter::export::fmt6(wue.liters_per_kwh)))
}

fn comparison_output(
    config: &RunConfig,
    keys: &[String],
    model: &str,
    task: &str,
    hour: Option<u32>,
    csv: Option<&PathBuf>,
) -> Result<String, Error> {
    let table = run::run_comparison(config, keys, model, task, hour)?;
    if let Some(path) = csv {
        aquameter::export::write_text(path, &aquameter::export::render_comparison_csv(&table))?;
    }
    Ok(aquameter::report::comparison_table(&table))
}

fn dispatch(cli: Cli) -> Result<String, Error> {
    let file_config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Wue(args) => cmd_wue(args),
        Command::Build(args) => {
            let flags = args.sources.into_config(args.out);
            run::cmd_build(&file_config.overlay(flags))
        }
        Command::Estimate(args) => {
            let mut keys = vec![args.country.clone()];
            if let Some(ref raw) = args.baselines {
                keys.extend(run::parse_baselines(raw)?);
            }
            let config = file_config.overlay(args.sources.into_config(None));
            comparison_output(
                &config,
                &keys,
                &args.model,
                &args.task,
                args.hour,
                args.csv.as_ref(),
            )
        }
        Command::Compare(args) => {
            let mut keys = args.countries.clone();
            if let Some(ref raw) = args.baselines {
                keys.extend(run::parse_baselines(raw)?);
            }
            let config = file_config.overlay(args.sources.into_config(None));
            comparison_output(
                &config,
                &keys,
                &args.model,
                &args.task,
                args.hour,
                args.csv.as_ref(),
            )
        }
        Command::Export(args) => {
            let plot = args.plot.clone();
            let regional = args.regional.clone();
            let config = file_config.overlay(args.sources.into_config(None));
            run::run_export(&config, plot.as_deref(), regional.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprint!("error: {error}");
            eprintln!();
            ExitCode::from(1)
        }
    }
}
