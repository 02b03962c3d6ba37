//! The five commands. Each writes into its output directory and finishes by
//! writing `manifest.json`; nothing is written to the directory's manifest
//! when a command fails.

use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use itfleet_core::fleet::{
    build_lifetime_table, fleet_summary, generate_synthetic_fleet, with_sampled_failures, years_between,
    SyntheticFleetSpec,
};
use itfleet_core::health::{score_asset, AhiConfig};
use itfleet_core::sim::{compare_scenarios, SimulationReport};
use itfleet_core::survival::km_fit;
use itfleet_core::weibull::{fit_weibull_mle, fit_weibull_rank_regression};
use itfleet_core::{AssetRecord, PerClass, VoltageClass, WeibullLaw};

use crate::assets::{format_date, parse_asset_csv, write_asset_csv, write_summary_csv};
use crate::error::{Error, Result};
use crate::laws::{fit_summary, laws_by_family, parse_laws, reference_entries, LawEntry, LawFile, LawSource};
use crate::manifest::RunManifest;
use crate::runner::run_parallel;
use crate::scenario_file::load_scenario;
use crate::tables::{
    write_ahi_row, write_comparison, write_km_rows, write_kpis, write_totex_series, AhiRow, AHI_HEADER, KM_HEADER,
};

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(Error::io(path))
}

fn prepare_out(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(Error::io(out))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing CSV to memory cannot fail");
    buf
}

fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialise");
    v.push(b'\n');
    v
}

fn load_assets(path: &Path, manifest: &mut RunManifest) -> Result<Vec<AssetRecord>> {
    let bytes = read(path)?;
    manifest.input(path, &bytes);
    parse_asset_csv(bytes.as_slice(), &path.display().to_string())
}

/// Which voltage families a command covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyFilter {
    All,
    One(VoltageClass),
}

impl FamilyFilter {
    pub fn parse(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(FamilyFilter::All);
        }
        VoltageClass::parse(s)
            .map(FamilyFilter::One)
            .ok_or_else(|| Error::Invalid(format!("unknown family '{s}' (use all, 110, 150 or 220_380)")))
    }

    fn includes(self, c: VoltageClass) -> bool {
        self == FamilyFilter::All || self == FamilyFilter::One(c)
    }

    fn label(self) -> &'static str {
        match self {
            FamilyFilter::All => "all",
            FamilyFilter::One(c) => c.label(),
        }
    }
}

pub struct FitArgs {
    pub assets: PathBuf,
    pub cutoff: NaiveDate,
    pub family: FamilyFilter,
    pub out: PathBuf,
}

/// Kaplan-Meier curves (`km.csv`), Weibull laws by maximum likelihood and
/// rank regression (`law.json`) and a fleet summary per family.
///
/// `km.csv` is written before fitting, so it is available even when a
/// family cannot be fitted.
pub fn cmd_fit(args: &FitArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut m = RunManifest::new("fit");
    m.parameter("cutoff", format_date(args.cutoff));
    m.parameter("family", args.family.label());
    let assets = load_assets(&args.assets, &mut m)?;
    let selected: Vec<AssetRecord> =
        assets.into_iter().filter(|a| args.family.includes(a.voltage_class())).collect();
    if selected.is_empty() {
        return Err(Error::Invalid(format!("no assets in family {}", args.family.label())));
    }
    let observations = build_lifetime_table(&selected, args.cutoff)?;
    prepare_out(&args.out)?;

    let summary = fleet_summary(&observations);
    m.write_output(&args.out, "fleet_summary.json", &json_bytes(&summary))?;
    m.write_output(&args.out, "fleet_summary.csv", &csv_bytes(|b| write_summary_csv(&summary, b)))?;

    let mut curves = Vec::new();
    for class in VoltageClass::ALL {
        let obs: Vec<_> = observations.iter().copied().filter(|o| o.voltage_class == class).collect();
        if !obs.is_empty() {
            curves.push((class, km_fit(&obs)?, obs));
        }
    }
    let km = csv_bytes(|b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(KM_HEADER)?;
        for (class, curve, _) in &curves {
            write_km_rows(&mut w, *class, curve)?;
        }
        w.flush()?;
        Ok(())
    });
    m.write_output(&args.out, "km.csv", &km)?;

    let mut mle = Vec::new();
    let mut rank = Vec::new();
    let mut fits = Vec::new();
    for (class, curve, obs) in &curves {
        let (law, diagnostics) = fit_weibull_mle(obs)?;
        let rr = fit_weibull_rank_regression(curve)?;
        mle.push(LawEntry { family: *class, beta: law.beta, eta: law.eta, source: LawSource::Mle });
        rank.push(LawEntry { family: *class, beta: rr.beta, eta: rr.eta, source: LawSource::RankRegression });
        fits.push(fit_summary(*class, curve, &law, &diagnostics)?);
    }
    mle.extend(rank);
    m.write_output(&args.out, "law.json", &json_bytes(&LawFile { laws: mle, fits }))?;
    m.finish(&args.out, started.elapsed())
}

pub struct ScoreArgs {
    pub assets: PathBuf,
    /// A law file, or `reference` for the reference laws.
    pub laws: String,
    pub as_of: NaiveDate,
    pub out: PathBuf,
}

fn load_law_entries(spec: &str, m: &mut RunManifest) -> Result<Vec<LawEntry>> {
    if spec == "reference" {
        m.parameter("laws", "reference");
        return Ok(reference_entries());
    }
    let path = Path::new(spec);
    let bytes = read(path)?;
    m.input(path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Document { file: spec.into(), message: "not UTF-8".into() })?;
    parse_laws(&text, spec)
}

/// Health index of every asset in service at `as_of`, in input order.
///
/// Apparent age equals real age (the register carries no degradation
/// data); the age bands compare against the family's average in-service
/// age.
pub fn cmd_score(args: &ScoreArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut m = RunManifest::new("score");
    m.parameter("as_of", format_date(args.as_of));
    let assets = load_assets(&args.assets, &mut m)?;
    let laws = laws_by_family(&load_law_entries(&args.laws, &mut m)?);

    let in_service: Vec<(&AssetRecord, f64)> = assets
        .iter()
        .filter(|a| a.commission_date <= args.as_of && a.failure_date.is_none_or(|f| f > args.as_of))
        .map(|a| (a, years_between(a.commission_date, args.as_of)))
        .collect();
    let mut sums = PerClass::<(f64, usize)>::default();
    for (a, age) in &in_service {
        let s = sums.get_mut(a.voltage_class());
        s.0 += age;
        s.1 += 1;
    }
    let config = AhiConfig::default();
    let mut rows = Vec::with_capacity(in_service.len());
    for (a, age) in &in_service {
        let class = a.voltage_class();
        let law: &WeibullLaw = laws
            .get(class)
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("no law for family {class} (needed by asset {})", a.asset_id)))?;
        let (sum, n) = *sums.get(class);
        let score = score_asset(law, *age, sum / n as f64, &config)?;
        rows.push(AhiRow { asset_id: &a.asset_id, voltage_kv: a.voltage_kv, age: *age, apparent_age: *age, score });
    }
    let ahi = csv_bytes(|b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(AHI_HEADER)?;
        for r in &rows {
            write_ahi_row(&mut w, r)?;
        }
        w.flush()?;
        Ok(())
    });
    prepare_out(&args.out)?;
    m.write_output(&args.out, "ahi.csv", &ahi)?;
    m.finish(&args.out, started.elapsed())
}

pub struct SimulateArgs {
    pub fleet: PathBuf,
    /// A scenario file or a built-in scenario name.
    pub scenario: String,
    pub out: PathBuf,
    pub jobs: usize,
    /// Overrides the scenario's master seed.
    pub seed: Option<u64>,
}

/// Runs all replications and writes `report.json` and `kpis.csv`.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut m = RunManifest::new("simulate");
    let fleet = load_assets(&args.fleet, &mut m)?;
    let mut scenario = load_scenario(&args.scenario)?;
    let path = Path::new(&args.scenario);
    if path.exists() {
        m.input(path, &read(path)?);
    } else {
        m.parameter("scenario", &args.scenario);
    }
    if let Some(seed) = args.seed {
        scenario.master_seed = seed;
    }
    m.seeds.insert("master_seed".into(), scenario.master_seed);
    m.parameter("replications", scenario.replications);
    let report = run_parallel(&fleet, &scenario, args.jobs)?;
    prepare_out(&args.out)?;
    m.write_output(&args.out, "scenario.json", &json_bytes(&scenario))?;
    m.write_output(&args.out, "report.json", &json_bytes(&report))?;
    m.write_output(&args.out, "kpis.csv", &csv_bytes(|b| write_kpis(&report, b)))?;
    m.finish(&args.out, started.elapsed())
}

/// Synthetic fleet description; `failures` optionally samples failure
/// dates up to a cutoff from the given laws (the reference laws when
/// omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub sizes: PerClass<usize>,
    pub first_year: i32,
    pub last_year: i32,
    pub seed: u64,
    #[serde(default)]
    pub failures: Option<SynthFailures>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthFailures {
    pub cutoff: NaiveDate,
    #[serde(default)]
    pub laws: Option<Vec<LawEntry>>,
}

pub fn parse_synth_spec(text: &str, file: &str) -> Result<SynthSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Document { file: file.into(), message: format!("{}: {}", e.path(), e.inner()) })
}

pub fn synthesize(spec: &SynthSpec) -> Result<Vec<AssetRecord>> {
    let fleet = generate_synthetic_fleet(&SyntheticFleetSpec {
        sizes: spec.sizes,
        first_year: spec.first_year,
        last_year: spec.last_year,
        seed: spec.seed,
    })?;
    let Some(f) = &spec.failures else { return Ok(fleet) };
    let entries = f.laws.clone().unwrap_or_else(reference_entries);
    let by_family = laws_by_family(&entries);
    let mut laws = Vec::with_capacity(3);
    for class in VoltageClass::ALL {
        match by_family.get(class) {
            Some(l) => laws.push(*l),
            None => return Err(Error::Invalid(format!("failures.laws: no law for family {class}"))),
        }
    }
    let laws = PerClass { v110: laws[0], v150: laws[1], v220_380: laws[2] };
    for (class, l) in laws.iter() {
        l.validate().map_err(|e| Error::Invalid(format!("failures.laws: {class}: {e}")))?;
    }
    // failures use their own stream so the commission dates do not change
    Ok(with_sampled_failures(&fleet, &laws, f.cutoff, spec.seed ^ 0x5EED_FA11))
}

pub struct SynthArgs {
    pub spec: PathBuf,
    pub out: PathBuf,
}

pub fn cmd_synth(args: &SynthArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut m = RunManifest::new("synth");
    let bytes = read(&args.spec)?;
    m.input(&args.spec, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Document { file: args.spec.display().to_string(), message: "not UTF-8".into() })?;
    let spec = parse_synth_spec(&text, &args.spec.display().to_string())?;
    m.seeds.insert("seed".into(), spec.seed);
    let fleet = synthesize(&spec)?;
    prepare_out(&args.out)?;
    m.write_output(&args.out, "fleet.csv", &csv_bytes(|b| write_asset_csv(&fleet, b)))?;
    m.finish(&args.out, started.elapsed())
}

pub struct ReportArgs {
    /// A `report.json` or a directory containing one.
    pub a: PathBuf,
    pub b: PathBuf,
    pub out: PathBuf,
}

fn load_report(path: &Path, m: &mut RunManifest) -> Result<SimulationReport> {
    let file = if path.is_dir() { path.join("report.json") } else { path.to_path_buf() };
    let bytes = read(&file)?;
    m.input(&file, &bytes);
    let de = &mut serde_json::Deserializer::from_slice(&bytes);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Document { file: file.display().to_string(), message: format!("{}: {}", e.path(), e.inner()) })
}

/// Year-by-year TOTEX comparison (`comparison.csv`, `comparison.json`) and
/// stacked per-year cost series for plotting (`plotdata/`).
pub fn cmd_report(args: &ReportArgs) -> Result<RunManifest> {
    let started = Instant::now();
    let mut m = RunManifest::new("report");
    let a = load_report(&args.a, &mut m)?;
    let b = load_report(&args.b, &mut m)?;
    let comparison = compare_scenarios(&a, &b)?;
    prepare_out(&args.out)?;
    m.write_output(&args.out, "comparison.csv", &csv_bytes(|w| write_comparison(&comparison, w)))?;
    m.write_output(&args.out, "comparison.json", &json_bytes(&comparison))?;
    m.write_output(&args.out, "plotdata/a_totex.csv", &csv_bytes(|w| write_totex_series(&a.aggregates, w)))?;
    m.write_output(&args.out, "plotdata/b_totex.csv", &csv_bytes(|w| write_totex_series(&b.aggregates, w)))?;
    m.finish(&args.out, started.elapsed())
}
