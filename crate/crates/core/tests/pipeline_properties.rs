use hexqam::amc::CodeRate;
use hexqam::constellation::Kind;
use hexqam::sim::*;
use hexqam::symbols::BlockConversionCodec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_scheme_is_lossless_without_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for kind in Kind::ALL {
        for rate in [CodeRate::Half, CodeRate::ThreeQuarters] {
            for metric in [DecoderMetric::Hard, DecoderMetric::Soft] {
                let mut cfg = PipelineConfig::new(kind, rate);
                cfg.metric = metric;
                let p = Pipeline::new(cfg).unwrap();
                let payload: Vec<u8> = (0..p.payload_bits()).map(|_| rng.random_range(0..2)).collect();
                let tx = p.transmit(&payload).unwrap();
                assert_eq!(tx.len(), p.symbols_per_packet());
                assert_eq!(p.receive(&tx).unwrap(), payload, "{kind} {rate} {metric:?}");
            }
        }
    }
}

#[test]
fn transmitted_energy_is_unit_on_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for kind in [Kind::H6, Kind::H12, Kind::Tpsk] {
        let p = Pipeline::new(PipelineConfig::new(kind, CodeRate::ThreeQuarters)).unwrap();
        let payload: Vec<u8> = (0..p.payload_bits()).map(|_| rng.random_range(0..2)).collect();
        let tx = p.transmit(&payload).unwrap();
        let es = tx.iter().map(|z| z.norm_sqr()).sum::<f64>() / tx.len() as f64;
        assert!((es - 1.0).abs() < 0.05, "{kind}: {es}");
    }
}

#[test]
fn coded_beats_uncoded_where_uncoded_is_low() {
    // At 8 dB uncoded QPSK BER is about 6e-3; coded QPSK 1/2 must do better.
    let e = Engine::new(1).unwrap();
    let mut u = UncodedBerConfig::new(vec![Kind::Qpsk], vec![8.0]);
    u.max_symbols = 200_000;
    let ur = run_uncoded_ber(&u, 1, &e).unwrap();
    let mut c = CodedBerConfig::new(vec![(Kind::Qpsk, CodeRate::Half)], vec![8.0]);
    c.max_digits = 8192 * 20;
    let cr = run_coded_ber(&c, 1, &e).unwrap();
    assert!(ur.rows[0].ber < 1e-2);
    assert!(cr.rows[0].ber < ur.rows[0].ber);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let mut cfg = CodedBerConfig::new(vec![(Kind::H6, CodeRate::ThreeQuarters)], vec![9.0, 10.0]);
    cfg.base.packet_bytes = 64;
    cfg.max_digits = 512 * 40;
    let a = run_coded_ber(&cfg, 3, &Engine::new(1).unwrap()).unwrap().csv_string().unwrap();
    let b = run_coded_ber(&cfg, 3, &Engine::new(3).unwrap()).unwrap().csv_string().unwrap();
    assert_eq!(a, b);
    let c = run_coded_ber(&cfg, 4, &Engine::new(1).unwrap()).unwrap().csv_string().unwrap();
    assert_ne!(a, c);
}

proptest! {
    #[test]
    fn codec_round_trips_any_stream(bits in proptest::collection::vec(0u8..2, 0..500)) {
        let codec = BlockConversionCodec::default();
        let trits = codec.bits_to_trits_raw(&bits).unwrap();
        prop_assert!(trits.iter().all(|&t| t < 3));
        prop_assert_eq!(codec.trits_to_bits_raw(&trits, bits.len()).unwrap(), bits);
    }

    #[test]
    fn short_packets_round_trip(bytes in 1usize..40, kind_idx in 0usize..10, three_quarters: bool) {
        let rate = if three_quarters { CodeRate::ThreeQuarters } else { CodeRate::Half };
        let mut cfg = PipelineConfig::new(Kind::ALL[kind_idx], rate);
        cfg.packet_bytes = bytes;
        let p = Pipeline::new(cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(bytes as u64);
        let o = p.run_packet(0.0, &mut rng).unwrap();
        prop_assert_eq!(o.bit_errors, 0);
    }
}
