"""Quick check that the hexqam_py extension imports and behaves sensibly.

Build first:  pip install --no-build-isolation ./crates/py
"""

import random

import hexqam_py as hq


def check_constellations():
    for name in hq.KINDS:
        c = hq.Constellation(name)
        pts = c.points()
        assert len(pts) == c.size == len(c.labels())
        es = sum(abs(p) ** 2 for p in pts) / len(pts)
        assert abs(es - 1.0) < 1e-9, (name, es)
    h8 = hq.Constellation("h8")
    assert abs(h8.r2_over_es() - 2 / 9) < 1e-9
    n = h8.bits_per_symbol + h8.trits_per_symbol
    digits = []
    for _ in range(50):
        digits += [random.randrange(2) for _ in range(h8.bits_per_symbol)]
        digits += [random.randrange(3) for _ in range(h8.trits_per_symbol)]
    assert h8.demodulate(h8.modulate(digits)) == digits
    assert len(h8.modulate(digits)) * n == len(digits)


def check_codec():
    codec = hq.BlockConversionCodec()
    bits = [random.randrange(2) for _ in range(110)]
    trits = codec.bits_to_trits(bits)
    assert len(trits) == 70
    assert codec.trits_to_bits(trits, len(bits)) == bits


def check_codes():
    for radix in (2, 3):
        for rate in ("1/2", "3/4"):
            code = hq.ConvCode.default(radix, rate)
            msg = [random.randrange(radix) for _ in range(200)]
            c = code.encode(msg)
            assert len(c) == code.coded_len(len(msg))
            c[10] = (c[10] + 1) % radix
            assert code.decode_hard(c, len(msg)) == msg
    assert hq.ConvCode.default(3).free_distance() == 9
    assert hq.ConvCode.default(2, "3/4").free_distance() == 5


def check_channel_and_amc():
    tx = hq.Constellation("qpsk").modulate([0, 1] * 2000)
    rx = hq.awgn(tx, 10.0, seed=3)
    noise = sum(abs(a - b) ** 2 for a, b in zip(rx, tx)) / len(tx)
    assert 0.08 < noise < 0.12, noise
    g = hq.rician_gains(20000, 6.0, seed=4)
    assert abs(sum(abs(x) ** 2 for x in g) / len(g) - 1.0) < 0.05
    assert abs(hq.q_function(0.0) - 0.5) < 1e-12
    assert hq.select_scheme("conventional", -10.0) is None
    best = hq.amc_table("augmented")[-1]
    assert hq.select_scheme("augmented", 40.0) == best[0]


def check_sims():
    payload, errors, symbols = hq.run_packet("h8", "1/2", 20.0, seed=5)
    assert payload == 8192 and errors == 0 and symbols > 0
    csv = hq.uncoded_ber(["qpsk"], [4.0], seed=1, max_symbols=20000)
    assert csv.splitlines()[0].startswith("kind,snr_db")
    csv = hq.link_throughput([14.0], n_packets=20)
    assert len(csv.splitlines()) == 3


if __name__ == "__main__":
    random.seed(0)
    check_constellations()
    check_codec()
    check_codes()
    check_channel_and_amc()
    check_sims()
    print("hexqam_py smoke test OK")
