//! Python bindings for the `hexqam` crate.

use hexqam::amc::{self, AmcTable, CodeRate, SnrEstimator};
use hexqam::channel;
use hexqam::constellation::{self, Kind};
use hexqam::fec::{self, PuncturePattern, ViterbiDecoder};
use hexqam::sim::{self, Engine, LinkConfig, Pipeline, PipelineConfig, UncodedBerConfig};
use hexqam::symbols::{self, Radix};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err(e: hexqam::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Digit vectors go out as lists of ints rather than `bytes`.
fn digit_list<'py>(py: Python<'py>, v: Vec<u8>) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, v)
}

fn kind(s: &str) -> PyResult<Kind> {
    s.parse().map_err(err)
}

fn rate(s: &str) -> PyResult<CodeRate> {
    s.parse().map_err(err)
}

fn table(name: &str) -> PyResult<AmcTable> {
    let (conv, aug) = amc::default_tables();
    match name {
        "conventional" => Ok(conv),
        "augmented" => Ok(aug),
        "full" => Ok(amc::full_table()),
        other => Err(PyValueError::new_err(format!("unknown table '{other}'"))),
    }
}

#[pyclass(name = "Constellation", module = "hexqam_py", frozen)]
struct PyConstellation(constellation::Constellation);

#[pymethods]
impl PyConstellation {
    #[new]
    fn new(kind_name: &str) -> PyResult<Self> {
        Ok(PyConstellation(constellation::Constellation::build(kind(kind_name)?)))
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.kind().name().to_string()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn bits_per_symbol(&self) -> usize {
        self.0.bits_per_symbol()
    }

    #[getter]
    fn trits_per_symbol(&self) -> usize {
        self.0.trits_per_symbol()
    }

    /// Minimum-distance radius `r` at unit average energy.
    #[getter]
    fn r(&self) -> f64 {
        self.0.r()
    }

    fn r2_over_es(&self) -> f64 {
        self.0.r2_over_es()
    }

    fn avg_energy(&self) -> f64 {
        self.0.avg_energy()
    }

    fn points(&self) -> Vec<Complex64> {
        self.0.points().to_vec()
    }

    /// `(bit_label, trit_label)` strings per point.
    fn labels(&self) -> Vec<(String, String)> {
        (0..self.0.size())
            .map(|i| (self.0.bit_label_string(i), self.0.trit_label_string(i)))
            .collect()
    }

    /// Digits are laid out per symbol: bits first, then trits.
    fn modulate(&self, digits: Vec<u8>) -> PyResult<Vec<Complex64>> {
        self.0.modulate(&digits).map_err(err)
    }

    fn modulate_lanes(&self, bits: Vec<u8>, trits: Vec<u8>) -> PyResult<Vec<Complex64>> {
        self.0.modulate_lanes(&bits, &trits).map_err(err)
    }

    fn demodulate<'py>(&self, py: Python<'py>, received: Vec<Complex64>) -> PyResult<Bound<'py, PyList>> {
        digit_list(py, self.0.demodulate_hard(&received))
    }

    fn demodulate_lanes<'py>(&self, py: Python<'py>, received: Vec<Complex64>) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyList>)> {
        let (b, t) = self.0.demodulate_lanes(&received);
        Ok((digit_list(py, b)?, digit_list(py, t)?))
    }

    fn __repr__(&self) -> String {
        format!("Constellation('{}', size={})", self.0.kind().name(), self.0.size())
    }
}

#[pyclass(name = "BlockConversionCodec", module = "hexqam_py", frozen)]
struct PyCodec(symbols::BlockConversionCodec);

#[pymethods]
impl PyCodec {
    #[new]
    #[pyo3(signature = (bits_per_block = 11, trits_per_block = 7))]
    fn new(bits_per_block: usize, trits_per_block: usize) -> PyResult<Self> {
        symbols::BlockConversionCodec::new(bits_per_block, trits_per_block)
            .map(PyCodec)
            .map_err(err)
    }

    #[getter]
    fn efficiency(&self) -> f64 {
        self.0.efficiency()
    }

    fn bits_to_trits<'py>(&self, py: Python<'py>, bits: Vec<u8>) -> PyResult<Bound<'py, PyList>> {
        digit_list(py, self.0.bits_to_trits_raw(&bits).map_err(err)?)
    }

    fn trits_to_bits<'py>(&self, py: Python<'py>, trits: Vec<u8>, bit_len: usize) -> PyResult<Bound<'py, PyList>> {
        digit_list(py, self.0.trits_to_bits_raw(&trits, bit_len).map_err(err)?)
    }
}

#[pyclass(name = "ConvCode", module = "hexqam_py", frozen)]
struct PyConvCode {
    decoder: ViterbiDecoder,
}

#[pymethods]
impl PyConvCode {
    /// `puncture` is a keep pattern such as `"111001"`.
    #[new]
    #[pyo3(signature = (radix, generators, puncture = None))]
    fn new(radix: u8, generators: Vec<Vec<u8>>, puncture: Option<&str>) -> PyResult<Self> {
        let r = Radix::from_value(radix).map_err(err)?;
        let p = puncture.map(PuncturePattern::parse).transpose().map_err(err)?;
        let code = fec::ConvCodeSpec::new(r, generators).map_err(err)?.with_puncture(p);
        code.validate().map_err(err)?;
        Ok(PyConvCode {
            decoder: ViterbiDecoder::new(&code),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (radix, rate = "1/2"))]
    fn default(radix: u8, rate: &str) -> PyResult<Self> {
        let r = Radix::from_value(radix).map_err(err)?;
        let code = fec::ConvCodeSpec::default_for(r).with_puncture(self::rate(rate)?.puncture());
        Ok(PyConvCode {
            decoder: ViterbiDecoder::new(&code),
        })
    }

    #[getter]
    fn radix(&self) -> usize {
        self.decoder.code().q()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<u8>> {
        self.decoder.code().generators.clone()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.decoder.code().rate()
    }

    fn free_distance(&self) -> u32 {
        let code = self.decoder.code();
        fec::search::free_distance(&code.trellis(), code.puncture.as_ref())
    }

    fn coded_len(&self, msg_len: usize) -> usize {
        self.decoder.code().coded_len(msg_len)
    }

    /// Zero-terminated, punctured if configured.
    fn encode<'py>(&self, py: Python<'py>, msg: Vec<u8>) -> PyResult<Bound<'py, PyList>> {
        let code = self.decoder.code();
        if let Some(&d) = msg.iter().find(|&&d| d as usize >= code.q()) {
            return Err(PyValueError::new_err(format!("digit {d} out of range")));
        }
        digit_list(py, code.encode_raw(&msg))
    }

    fn decode_hard<'py>(&self, py: Python<'py>, received: Vec<u8>, msg_len: usize) -> PyResult<Bound<'py, PyList>> {
        digit_list(py, self.decoder.decode_hard(&received, msg_len).map_err(err)?)
    }

    /// `costs[k][v]` is the cost of coded digit `k` taking value `v`.
    fn decode<'py>(&self, py: Python<'py>, costs: Vec<[f64; 3]>, msg_len: usize) -> PyResult<Bound<'py, PyList>> {
        digit_list(py, self.decoder.decode(&costs, msg_len).map_err(err)?)
    }
}

#[pyfunction]
fn q_function(x: f64) -> f64 {
    constellation::q_function(x)
}

#[pyfunction]
fn awgn(symbols: Vec<Complex64>, snr_db: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    channel::apply_awgn(&symbols, channel::n0_from_snr_db(snr_db), &mut rng)
}

#[pyfunction]
fn rician_gains(n_blocks: usize, k_db: f64, seed: u64) -> PyResult<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    channel::rician_block_gains(n_blocks, k_db, &mut rng).map_err(err)
}

#[pyfunction]
fn nominal_throughput(kind_name: &str, code_rate: &str) -> PyResult<f64> {
    Ok(amc::nominal_throughput(kind(kind_name)?, rate(code_rate)?))
}

/// `(label, throughput, min_snr_db)` rows of a named table:
/// `conventional`, `augmented` or `full`.
#[pyfunction]
fn amc_table(name: &str) -> PyResult<Vec<(String, f64, f64)>> {
    Ok(table(name)?
        .schemes()
        .iter()
        .map(|s| (s.label(), s.throughput, s.min_snr_db))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (table_name, snr_db, margin_db = 0.0))]
fn select_scheme(table_name: &str, snr_db: f64, margin_db: f64) -> PyResult<Option<String>> {
    let t = table(table_name)?;
    let est = SnrEstimator::with_margin(0.0, margin_db).map_err(err)?;
    Ok(amc::select_scheme(snr_db, &est, &t).map(|s| s.label()))
}

/// One coded packet over AWGN: `(payload_bits, bit_errors, symbols)`.
#[pyfunction]
#[pyo3(signature = (kind_name, code_rate, snr_db, seed, packet_bytes = 1024, soft = false))]
fn run_packet(kind_name: &str, code_rate: &str, snr_db: f64, seed: u64, packet_bytes: usize, soft: bool) -> PyResult<(usize, usize, usize)> {
    let mut cfg = PipelineConfig::new(kind(kind_name)?, rate(code_rate)?);
    cfg.packet_bytes = packet_bytes;
    if soft {
        cfg.metric = sim::DecoderMetric::Soft;
    }
    let p = Pipeline::new(cfg).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = p.run_packet(channel::n0_from_snr_db(snr_db), &mut rng).map_err(err)?;
    Ok((o.payload_bits, o.bit_errors, o.symbols))
}

/// Uncoded BER sweep; returns CSV text.
#[pyfunction]
#[pyo3(signature = (kinds, snr_db, seed = 1, min_errors = 100, max_symbols = 1_000_000, workers = 1))]
fn uncoded_ber(kinds: Vec<String>, snr_db: Vec<f64>, seed: u64, min_errors: u64, max_symbols: u64, workers: usize) -> PyResult<String> {
    let kinds = kinds.iter().map(|k| kind(k)).collect::<PyResult<Vec<_>>>()?;
    let mut cfg = UncodedBerConfig::new(kinds, snr_db);
    cfg.min_errors = min_errors;
    cfg.max_symbols = max_symbols;
    let engine = Engine::new(workers).map_err(err)?;
    sim::run_uncoded_ber(&cfg, seed, &engine).and_then(|r| r.csv_string()).map_err(err)
}

/// Conventional vs augmented AMC over Rician fading; returns CSV text.
#[pyfunction]
#[pyo3(signature = (mean_snr_db, n_packets = 200, csi_error_std_db = 0.0, seed = 1, workers = 1))]
fn link_throughput(mean_snr_db: Vec<f64>, n_packets: usize, csi_error_std_db: f64, seed: u64, workers: usize) -> PyResult<String> {
    let cfg = LinkConfig {
        mean_snr_db,
        n_packets,
        estimator: SnrEstimator::new(csi_error_std_db),
        ..LinkConfig::default()
    };
    let engine = Engine::new(workers).map_err(err)?;
    sim::run_link_throughput(&cfg, seed, &engine).and_then(|r| r.csv_string()).map_err(err)
}

#[pymodule]
fn hexqam_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConstellation>()?;
    m.add_class::<PyCodec>()?;
    m.add_class::<PyConvCode>()?;
    m.add(
        "KINDS",
        Kind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>(),
    )?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(awgn, m)?)?;
    m.add_function(wrap_pyfunction!(rician_gains, m)?)?;
    m.add_function(wrap_pyfunction!(nominal_throughput, m)?)?;
    m.add_function(wrap_pyfunction!(amc_table, m)?)?;
    m.add_function(wrap_pyfunction!(select_scheme, m)?)?;
    m.add_function(wrap_pyfunction!(run_packet, m)?)?;
    m.add_function(wrap_pyfunction!(uncoded_ber, m)?)?;
    m.add_function(wrap_pyfunction!(link_throughput, m)?)?;
    Ok(())
}
