import hashlib
import io

import numpy as np
import pytest
from PIL import Image

from xorca import (
    ComplexityTrace,
    Configuration,
    EvolutionRun,
    RuleParams,
    RunFormatError,
    RunTruncatedError,
    RunVersionError,
    SpaceTimeImage,
    emit_csv,
    fft,
    emit_pbm,
    evolve_trace,
    figure_preset,
    load_run,
    run_scenario,
    save_run,
    spectra_csv,
    trace_csv,
)

from conftest import random_configuration

# frozen from the deterministic single-one preset; pure bit operations,
# so the bytes cannot vary across platforms
FIG7_PBM_SHA256 = "4a3ed60b783170dd35658694e860cdb21c59a07155776957b2bbc9ede0d3a642"


def test_minimal_p1():
    img = SpaceTimeImage(1, 1, np.array([[1]], dtype=np.uint8))
    assert emit_pbm(img, binary=False) == b"P1\n1 1\n1\n"


def test_p1_rows_from_run():
    run = evolve_trace(Configuration.from_string("0001"), RuleParams(1), 1)
    img = SpaceTimeImage.from_run(run)
    assert emit_pbm(img, binary=False) == b"P1\n4 2\n0001\n1001\n"


def test_p4_packing_and_padding():
    run = evolve_trace(Configuration.from_string("0001"), RuleParams(1), 1)
    img = SpaceTimeImage.from_run(run)
    blob = emit_pbm(img, binary=True)
    # rows 0001 and 1001, leftmost cell in the byte's MSB, zero padding
    assert blob == b"P4\n4 2\n" + bytes([0b00010000, 0b10010000])


@pytest.mark.parametrize("binary", [False, True])
def test_pbm_opens_in_image_readers(binary, rnd):
    c = random_configuration(rnd, 24)
    run = evolve_trace(c, RuleParams(1), 9)
    img = SpaceTimeImage.from_run(run)
    loaded = Image.open(io.BytesIO(emit_pbm(img, binary=binary)))
    assert loaded.size == (24, 10)
    pixels = np.asarray(loaded)
    # PBM: raster bit 1 = black; readers decode black as False/0
    assert np.array_equal(pixels == 0, img.rows == 1)


def test_fig7_preset_golden(tmp_path):
    run_scenario(figure_preset("fig7"), out_dir=tmp_path)
    blob = (tmp_path / "fig7_spacetime.pbm").read_bytes()
    assert hashlib.sha256(blob).hexdigest() == FIG7_PBM_SHA256
    # last row is all ones: 256 black cells
    assert blob.endswith(b"\xff" * 32)


def test_trace_csv():
    assert emit_csv(ComplexityTrace("x", ())) == b"t,c_lz\n"
    assert emit_csv(ComplexityTrace("x", ((0, 129),))) == b"t,c_lz\n0,129\n"
    blob = trace_csv(ComplexityTrace("x", ((0, 5), (1, 4))))
    assert blob == b"t,c_lz\n0,5\n1,4\n"


def test_spectra_csv():
    s = fft(Configuration.from_string("1111"))
    blob = emit_csv({0: s})
    lines = blob.decode().splitlines()
    assert lines[0] == "t,f,S"
    assert lines[1] == "0,0,1"
    assert lines[2] == "0,1,0" and len(lines) == 5


def test_spectra_csv_ordering_and_digits():
    a = fft(Configuration.from_string("0101"))
    b = fft(Configuration.from_string("1110"))
    blob = spectra_csv({7: a, 2: b}).decode()
    rows = [line.split(",") for line in blob.splitlines()[1:]]
    assert [(int(t), int(f)) for t, f, _ in rows] == [
        (2, 0), (2, 1), (2, 2), (2, 3), (7, 0), (7, 1), (7, 2), (7, 3),
    ]
    assert rows[4][2] == "0.25"
    # 12 significant digits on a non-terminating value
    assert rows[1][2] == f"{b.power[1]:.12g}"


def test_run_container_round_trip(rnd):
    c = random_configuration(rnd, 37)
    run = evolve_trace(c, RuleParams(3), 11, stride=4)
    again = load_run(save_run(run))
    assert again == run


def test_run_container_round_trip_dense(rnd):
    run = evolve_trace(random_configuration(rnd, 64), RuleParams(1), 64)
    assert load_run(save_run(run)) == run


def test_load_rejects_bad_magic(rnd):
    blob = bytearray(save_run(evolve_trace(random_configuration(rnd, 8), RuleParams(1), 2)))
    blob[:4] = b"NOPE"
    with pytest.raises(RunFormatError):
        load_run(bytes(blob))


def test_load_rejects_wrong_version(rnd):
    blob = bytearray(save_run(evolve_trace(random_configuration(rnd, 8), RuleParams(1), 2)))
    blob[4] = 99
    with pytest.raises(RunVersionError):
        load_run(bytes(blob))


def test_load_rejects_truncation(rnd):
    blob = save_run(evolve_trace(random_configuration(rnd, 8), RuleParams(1), 2))
    with pytest.raises(RunTruncatedError):
        load_run(blob[:-1])
    with pytest.raises(RunTruncatedError):
        load_run(blob[:10])


def test_load_rejects_zero_size(rnd):
    import struct

    blob = bytearray(save_run(evolve_trace(random_configuration(rnd, 8), RuleParams(1), 2)))
    struct.pack_into("<Q", blob, 8, 0)  # N field
    with pytest.raises(RunFormatError):
        load_run(bytes(blob))


def test_emitters_are_deterministic(rnd):
    c = random_configuration(rnd, 40)
    run = evolve_trace(c, RuleParams(1), 12)
    img = SpaceTimeImage.from_run(run)
    assert emit_pbm(img) == emit_pbm(img)
    assert save_run(run) == save_run(run)
