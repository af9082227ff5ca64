//! Command-line front end.
//!
//! Every run writes `<out>.csv`, a JSON manifest `<out>.json` holding the
//! argument vector and the effective configuration, and a gnuplot script
//! `<out>.gp` plotting the CSV. Exit codes: 0 success, 1 runtime error,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::amc::{parse_scheme, CodeRate, SnrEstimator, FULL_TABLE};
use crate::config::Settings;
use crate::constellation::{Constellation, Kind};
use crate::error::{Error, Result};
use crate::fec::search::search_rate_half;
use crate::sim::{
    calibrated_table, recalibrate_thresholds, run_coded_ber, run_link_throughput, run_network_sim, run_uncoded_ber,
    CalibrationConfig, CodedBerConfig, DecoderMetric, Engine, LinkConfig, NetworkConfig, SimReport, UncodedBerConfig,
};
use crate::symbols::Radix;

#[derive(Debug, Parser)]
#[command(name = "hexqam", version, about = "Hexagonal QAM link and network simulator")]
pub struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed (overrides the config file; default 1).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses the available parallelism. Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output CSV path; the manifest and gnuplot script sit next to it
    /// (default: `<command>.csv`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump a constellation: index, coordinates and labels.
    Constellation {
        /// bpsk, qpsk, rect8qam, 8psk, 16qam, tpsk, h6, h8, h12 or 6psk.
        #[arg(long)]
        kind: Kind,
    },
    /// Uncoded BER over AWGN with hard decisions.
    UncodedBer {
        /// Comma-separated constellation kinds.
        #[arg(long, value_delimiter = ',', default_value = "bpsk,qpsk")]
        kinds: Vec<Kind>,
        /// Es/N0 grid in dB: `start:step:stop`, a comma list or one value.
        #[arg(long, default_value = "0:2:10")]
        snr: String,
        #[arg(long, default_value_t = 100)]
        min_errors: u64,
        #[arg(long, default_value_t = 100_000_000)]
        max_symbols: u64,
    },
    /// Coded BER of the full packet pipeline over AWGN.
    CodedBer {
        /// Comma-separated `<kind>:<rate>` pairs, e.g. `tpsk:3/4,qpsk:1/2`.
        #[arg(long, default_value = "tpsk:3/4,qpsk:1/2")]
        schemes: String,
        #[arg(long, default_value = "4:1:8")]
        snr: String,
        #[command(flatten)]
        coded: CodedArgs,
    },
    /// Single-link AMC throughput under Rician block fading.
    LinkThroughput {
        /// Mean SNR values in dB.
        #[arg(long, default_value = "8,11,14,17")]
        snr: String,
        #[arg(long, default_value_t = 1000)]
        packets: usize,
        /// SNR estimation error std in dB (default from config, else 1.0).
        #[arg(long)]
        csi_std: Option<f64>,
        /// Selection back-off in dB (default: equal to the error std).
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Downlink network throughput and energy per bit.
    NetworkSim {
        /// Comma-separated user counts.
        #[arg(long, value_delimiter = ',', default_value = "5,30")]
        users: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        topologies: usize,
        #[arg(long, default_value_t = 10)]
        packets_per_user: usize,
        #[arg(long)]
        csi_std: Option<f64>,
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Exhaustive rate-1/2 convolutional code search.
    CodeSearch {
        /// 2 or 3.
        #[arg(long, default_value_t = 3)]
        radix: u8,
        #[arg(long, default_value_t = 4)]
        memory: usize,
        /// Rows to keep.
        #[arg(long, default_value_t = 20)]
        top: usize,
    },
    /// Derive AMC thresholds from simulated coded BER curves.
    RecalibrateThresholds {
        /// Schemes to calibrate (default: every scheme of the full table).
        #[arg(long)]
        schemes: Option<String>,
        #[arg(long, default_value = "0:0.5:18")]
        snr: String,
        #[arg(long, default_value_t = 1e-5)]
        target_ber: f64,
        #[command(flatten)]
        coded: CodedArgs,
    },
}

#[derive(Debug, Args)]
pub struct CodedArgs {
    /// Decoder metric: hard or soft (default from config, else hard).
    #[arg(long)]
    pub metric: Option<DecoderMetric>,
    #[arg(long, default_value_t = 100)]
    pub min_errors: u64,
    #[arg(long, default_value_t = 10)]
    pub min_packet_errors: u64,
    /// Payload bits after which a point stops.
    #[arg(long, default_value_t = 20_000_000)]
    pub max_digits: u64,
    /// Overrides `packet_bytes` from the config.
    #[arg(long)]
    pub packet_bytes: Option<usize>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Constellation { .. } => "constellation",
            Command::UncodedBer { .. } => "uncoded-ber",
            Command::CodedBer { .. } => "coded-ber",
            Command::LinkThroughput { .. } => "link-throughput",
            Command::NetworkSim { .. } => "network-sim",
            Command::CodeSearch { .. } => "code-search",
            Command::RecalibrateThresholds { .. } => "recalibrate-thresholds",
        }
    }
}

/// Parses `start:step:stop`, a comma list, or a single value.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::MalformedInput(format!("bad SNR grid '{s}'"));
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let (start, step, stop) = (v[0], v[1], v[2]);
        if !(step > 0.0) || stop < start || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        // Round away float drift so 0.5 steps print as 8.5, not 8.500000000000002.
        return Ok((0..=n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect());
    }
    if parts.len() != 1 {
        return Err(bad());
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if v.is_empty() || v.iter().any(|x| x.is_nan()) {
        return Err(bad());
    }
    Ok(v)
}

fn parse_schemes(s: &str) -> Result<Vec<(Kind, CodeRate)>> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(parse_scheme).collect()
}

fn with_ext(p: &Path, ext: &str) -> PathBuf {
    p.with_extension(ext)
}

/// Everything needed to re-run a command.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    argv: Vec<String>,
    seed: u64,
    config: String,
    outputs: Vec<String>,
}

struct Runner {
    settings: Settings,
    engine: Engine,
    out: PathBuf,
    argv: Vec<String>,
    command: &'static str,
}

impl Runner {
    fn manifest_base(&self) -> RunConfig<'_> {
        let out = &self.out;
        RunConfig {
            command: self.command,
            argv: self.argv.clone(),
            seed: self.settings.seed,
            config: self.settings.to_config_string(),
            outputs: vec![
                out.display().to_string(),
                with_ext(out, "json").display().to_string(),
                with_ext(out, "gp").display().to_string(),
            ],
        }
    }

    fn write_manifest(&self, extra: serde_json::Value) -> Result<()> {
        let mut m = serde_json::to_value(self.manifest_base()).map_err(|e| Error::Io(e.to_string()))?;
        if let (Some(obj), serde_json::Value::Object(x)) = (m.as_object_mut(), extra) {
            obj.extend(x);
        }
        let f = File::create(with_ext(&self.out, "json"))?;
        serde_json::to_writer_pretty(BufWriter::new(f), &m).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    fn write_report<R: Serialize>(&self, report: &SimReport<R>, plot: &str) -> Result<()> {
        let csv = report.csv_string()?;
        std::fs::write(&self.out, &csv)?;
        self.write_manifest(serde_json::json!({ "run": report.manifest() }))?;
        std::fs::write(with_ext(&self.out, "gp"), plot)?;
        print_table(&csv);
        Ok(())
    }

    fn csv_name(&self) -> String {
        self.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
    }

    /// Gnuplot script drawing one curve per distinct value of column 1.
    fn plot(&self, labels: &[String], x: usize, y: usize, xlabel: &str, ylabel: &str, log_y: bool) -> String {
        let csv = self.csv_name();
        let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\nset grid\n");
        s += &format!("set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n");
        if log_y {
            s += "set logscale y\nset format y '10^{%L}'\n";
        }
        s += &format!("set terminal pngcairo size 900,600\nset output '{}'\n", csv.replace(".csv", ".png"));
        let curves: Vec<String> = labels
            .iter()
            .map(|l| format!("'{csv}' using {x}:(strcol(1) eq '{l}' ? ${y} : 1/0) with linespoints title '{l}'"))
            .collect();
        s += &format!("plot {}\n", curves.join(", \\\n     "));
        s
    }

    fn estimator(&self, csi_std: Option<f64>, margin: Option<f64>) -> Result<SnrEstimator> {
        let std = csi_std.unwrap_or(self.settings.estimator.error_std_db);
        let m = match (csi_std, margin) {
            (_, Some(m)) => m,
            (Some(s), None) => s,
            (None, None) => self.settings.estimator.margin_db,
        };
        SnrEstimator::with_margin(std, m)
    }

    fn coded_config(&self, schemes: Vec<(Kind, CodeRate)>, grid: Vec<f64>, a: &CodedArgs) -> CodedBerConfig {
        let mut cfg = CodedBerConfig::new(schemes, grid);
        cfg.base = self.settings.pipeline.clone();
        if let Some(m) = a.metric {
            cfg.base.metric = m;
        }
        if let Some(b) = a.packet_bytes {
            cfg.base.packet_bytes = b;
        }
        cfg.min_errors = a.min_errors;
        cfg.min_packet_errors = a.min_packet_errors;
        cfg.max_digits = a.max_digits;
        cfg
    }

    fn run(&self, cmd: &Command) -> Result<()> {
        let seed = self.settings.seed;
        match cmd {
            Command::Constellation { kind } => {
                let c = Constellation::build(*kind);
                let mut buf = Vec::new();
                c.write_csv(&mut buf)?;
                std::fs::write(&self.out, &buf)?;
                self.write_manifest(serde_json::json!({
                    "kind": kind.name(),
                    "points": c.size(),
                    "r": c.r(),
                    "r2_over_es": c.r2_over_es(),
                    "peak_energy": c.peak_energy(),
                }))?;
                let csv = self.csv_name();
                std::fs::write(
                    with_ext(&self.out, "gp"),
                    format!(
                        "set datafile separator ','\nset size square\nset grid\nset terminal pngcairo size 700,700\n\
                         set output '{}'\nplot '{csv}' every ::1 using 2:3 with points pt 7 notitle, \\\n     \
                         '' every ::1 using 2:3:(sprintf('%s|%s', strcol(4), strcol(5))) with labels offset 0,1 notitle\n",
                        csv.replace(".csv", ".png")
                    ),
                )?;
                print_table(&String::from_utf8_lossy(&buf));
                println!(
                    "{}: {} points, r = {:.6}, r^2/Es = {:.6}, peak/avg energy = {:.4}",
                    kind,
                    c.size(),
                    c.r(),
                    c.r2_over_es(),
                    c.peak_energy() / c.avg_energy()
                );
            }
            Command::UncodedBer { kinds, snr, min_errors, max_symbols } => {
                let mut cfg = UncodedBerConfig::new(kinds.clone(), parse_snr_grid(snr)?);
                cfg.min_errors = *min_errors;
                cfg.max_symbols = *max_symbols;
                let r = run_uncoded_ber(&cfg, seed, &self.engine)?;
                let labels: Vec<String> = kinds.iter().map(|k| k.to_string()).collect();
                self.write_report(&r, &self.plot(&labels, 2, 6, "Es/N0 (dB)", "BER", true))?;
            }
            Command::CodedBer { schemes, snr, coded } => {
                let schemes = parse_schemes(schemes)?;
                let cfg = self.coded_config(schemes.clone(), parse_snr_grid(snr)?, coded);
                let r = run_coded_ber(&cfg, seed, &self.engine)?;
                let labels: Vec<String> = schemes.iter().map(|(k, c)| format!("{k}:{c}")).collect();
                self.write_report(&r, &self.plot(&labels, 2, 6, "Es/N0 (dB)", "BER", true))?;
            }
            Command::LinkThroughput { snr, packets, csi_std, margin } => {
                let cfg = LinkConfig {
                    tables: self.settings.tables(),
                    mean_snr_db: parse_snr_grid(snr)?,
                    n_packets: *packets,
                    estimator: self.estimator(*csi_std, *margin)?,
                    rician_k_db: self.settings.rician_k_db,
                    base: self.settings.pipeline.clone(),
                };
                let r = run_link_throughput(&cfg, seed, &self.engine)?;
                let labels: Vec<String> = cfg.tables.iter().map(|t| t.name.clone()).collect();
                self.write_report(&r, &self.plot(&labels, 3, 9, "mean SNR (dB)", "throughput (b/sym)", false))?;
            }
            Command::NetworkSim { users, topologies, packets_per_user, csi_std, margin } => {
                let cfg = NetworkConfig {
                    n_users: users.clone(),
                    n_topologies: *topologies,
                    packets_per_user: *packets_per_user,
                    path_loss: self.settings.path_loss,
                    tables: self.settings.tables(),
                    estimator: self.estimator(*csi_std, *margin)?,
                    rician_k_db: self.settings.rician_k_db,
                    base: self.settings.pipeline.clone(),
                };
                let r = run_network_sim(&cfg, seed, &self.engine)?;
                let csv = self.csv_name();
                let plot = format!(
                    "set datafile separator ','\nset style data histograms\nset style fill solid\nset grid\n\
                     set ylabel 'throughput (b/sym)'\nset terminal pngcairo size 800,600\nset output '{}'\n\
                     plot '{csv}' every ::1 using 10:xtic(sprintf('%s users, %s', strcol(1), strcol(2))) notitle\n",
                    csv.replace(".csv", ".png")
                );
                self.write_report(&r, &plot)?;
            }
            Command::CodeSearch { radix, memory, top } => {
                let radix = Radix::from_value(*radix)?;
                if *memory == 0 || *memory > 6 {
                    return Err(Error::Config("code-search supports memory 1..=6".into()));
                }
                let pattern = self.settings.pipeline.puncture.clone();
                let scores = self.engine.map(1, |_| search_rate_half(radix, *memory, &pattern)).remove(0);
                #[derive(Serialize)]
                struct Row {
                    rank: usize,
                    generators: String,
                    free_distance: u32,
                    multiplicity: u64,
                    punctured_free_distance: u32,
                    punctured_multiplicity: u64,
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                for (i, s) in scores.iter().take(*top).enumerate() {
                    let generators = s
                        .generators
                        .iter()
                        .map(|g| g.iter().map(|d| char::from(b'0' + d)).collect::<String>())
                        .collect::<Vec<_>>()
                        .join(" ");
                    w.serialize(Row {
                        rank: i + 1,
                        generators,
                        free_distance: s.free_distance,
                        multiplicity: s.multiplicity,
                        punctured_free_distance: s.punctured_free_distance,
                        punctured_multiplicity: s.punctured_multiplicity,
                    })
                    .map_err(|e| Error::Io(e.to_string()))?;
                }
                let buf = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                std::fs::write(&self.out, &buf)?;
                self.write_manifest(serde_json::json!({ "codes_scored": scores.len() }))?;
                let csv = self.csv_name();
                std::fs::write(
                    with_ext(&self.out, "gp"),
                    format!(
                        "set datafile separator ','\nset grid\nset xlabel 'rank'\nset ylabel 'distance'\n\
                         set terminal pngcairo size 800,600\nset output '{}'\n\
                         plot '{csv}' every ::1 using 1:3 with linespoints title 'free distance', \\\n     \
                         '' every ::1 using 1:5 with linespoints title 'punctured free distance'\n",
                        csv.replace(".csv", ".png")
                    ),
                )?;
                print_table(&String::from_utf8_lossy(&buf));
            }
            Command::RecalibrateThresholds { schemes, snr, target_ber, coded } => {
                let schemes = match schemes {
                    Some(s) => parse_schemes(s)?,
                    None => FULL_TABLE.iter().map(|r| (r.0, r.1)).collect(),
                };
                if !(*target_ber > 0.0 && *target_ber < 0.5) {
                    return Err(Error::Config("target BER must lie in (0, 0.5)".into()));
                }
                let cfg = CalibrationConfig {
                    target_ber: *target_ber,
                    ber: self.coded_config(schemes.clone(), parse_snr_grid(snr)?, coded),
                };
                let r = recalibrate_thresholds(&cfg, seed, &self.engine)?;
                let csv = self.csv_name();
                let plot = format!(
                    "set datafile separator ','\nset style data histograms\nset style fill solid\nset grid\n\
                     set ylabel 'threshold (dB)'\nset xtics rotate\nset terminal pngcairo size 900,600\n\
                     set output '{}'\nplot '{csv}' using 3:xtic(1) title 'simulated', '' using 4 title 'table'\n",
                    csv.replace(".csv", ".png")
                );
                self.write_report(&r, &plot)?;
                if let Ok(t) = calibrated_table("calibrated", &r.rows) {
                    println!("amc.augmented = {}", t.to_config_value());
                }
            }
        }
        Ok(())
    }
}

/// Prints a CSV document as an aligned table.
fn print_table(csv: &str) {
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.len()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(i, s)| format!("{s:>w$}", w = widths[i])).collect();
        println!("{}", line.join("  "));
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, args.iter().map(|a| a.to_string_lossy().into_owned()).collect()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::MalformedInput(_) => 2,
                _ => 1,
            }
        }
    }
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<()> {
    let mut settings = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    if let Some(s) = cli.seed {
        settings.seed = s;
    }
    if let Some(w) = cli.workers {
        settings.workers = w;
    }
    let command = cli.command.name();
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(format!("{command}.csv")));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let runner = Runner {
        engine: Engine::new(settings.workers)?,
        settings,
        out,
        argv,
        command,
    };
    runner.run(&cli.command)
}
