import gzip

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from fecg_anc.cli import main
from fecg_anc.errors import FetchError, InputError, ParseError
from fecg_anc.recording import (DAISY_ROLES, fetch_dataset, parse_recording, read_recording,
                                serialize_recording)
from fecg_anc.signals import MultichannelRecording


def test_parse_with_time_column():
    rec = parse_recording("0.000 1 2\n0.004 3 4\n0.008 5 6\n")
    np.testing.assert_array_equal(rec.data, [[1, 2], [3, 4], [5, 6]])
    assert rec.fs == 250.0


def test_parse_without_time_column():
    rec = parse_recording("1.5 -2\n0.5 4e-3\n", time_column=False)
    np.testing.assert_array_equal(rec.data, [[1.5, -2], [0.5, 4e-3]])
    rec = parse_recording("1.5 -2\n0.5 4e-3\n")
    assert rec.n_channels == 2


def test_parse_daisy_roles():
    rows = "\n".join(" ".join(str(v) for v in [k / 250] + [k] * 8) for k in range(3))
    rec = parse_recording(rows)
    assert rec.n_channels == 8 and rec.roles == DAISY_ROLES


def test_ragged_row_names_line():
    with pytest.raises(ParseError) as info:
        parse_recording("1 2 3\n4 5 6\n7 8\n")
    assert info.value.line == 3
    assert "line 3" in str(info.value)


def test_non_numeric_token():
    with pytest.raises(ParseError) as info:
        parse_recording("1 2\n3 x\n")
    assert info.value.line == 2


def test_too_few_rows():
    with pytest.raises(InputError):
        parse_recording("1 2 3\n")
    with pytest.raises(InputError):
        parse_recording("")


@given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 9)),
              elements=st.floats(-1e6, 1e6, allow_subnormal=True)),
       st.sampled_from([250.0, 500.0, 1000.0]), st.booleans())
@settings(max_examples=60)
def test_round_trip_exact(data, fs, with_time):
    rec = MultichannelRecording(data, fs)
    back = parse_recording(serialize_recording(rec, time_column=with_time), fs,
                           time_column=with_time)
    np.testing.assert_array_equal(back.data, rec.data)


def test_synthetic_record_round_trip(synthetic_recording):
    text = serialize_recording(synthetic_recording)
    assert parse_recording(text) == synthetic_recording
    assert serialize_recording(parse_recording(text)) == text


def test_read_gzip(tmp_path, synthetic_recording):
    text = serialize_recording(synthetic_recording)
    (tmp_path / "r.dat.gz").write_bytes(gzip.compress(text.encode()))
    (tmp_path / "r.dat").write_text(text)
    assert read_recording(tmp_path / "r.dat.gz") == read_recording(tmp_path / "r.dat")


def test_fetch_unreachable(tmp_path):
    with pytest.raises(FetchError):
        fetch_dataset(tmp_path / "x.dat", url="http://127.0.0.1:9/foetal_ecg.dat", timeout=2)
    assert not (tmp_path / "x.dat").exists()


def test_fetch_rejects_corrupt_payload(tmp_path):
    bad = tmp_path / "bad.dat"
    bad.write_text("1 2 3\n4 5 6\n")
    with pytest.raises(FetchError, match="2500 x 8"):
        fetch_dataset(tmp_path / "x.dat", url=bad.as_uri())
    junk = tmp_path / "junk.gz"
    junk.write_bytes(b"\x1f\x8b not really gzip")
    with pytest.raises(FetchError):
        fetch_dataset(tmp_path / "x.dat", url=junk.as_uri())
    assert not (tmp_path / "x.dat").exists()


def test_fetch_accepts_valid_payload(tmp_path):
    rng = np.random.default_rng(1)
    rec = MultichannelRecording(rng.standard_normal((2500, 8)), 250.0)
    src = tmp_path / "src.dat.gz"
    src.write_bytes(gzip.compress(serialize_recording(rec).encode()))
    out = fetch_dataset(tmp_path / "data" / "foetal_ecg.dat", url=src.as_uri())
    np.testing.assert_array_equal(read_recording(out).data, rec.data)


def test_cli_fetch_failure_exit_code(tmp_path, capsys):
    code = main(["fetch", "--url", "http://127.0.0.1:9/x", "--dest", str(tmp_path / "x"),
                 "--timeout", "2"])
    assert code != 0
    assert "error" in capsys.readouterr().err.lower()
