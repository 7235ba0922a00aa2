import json

import numpy as np
import pytest

from pmlforge import design_file as dfile
from pmlforge.balance_optimizer import design_balanced
from pmlforge.composite_layer import SpectralWindow


@pytest.fixture(scope="module")
def balanced():
    return design_balanced(SpectralWindow(-0.01, 0.01, 1.0), 6)


def test_roundtrip_is_bit_identical(tmp_path, balanced):
    design, report = balanced
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    dfile.save(dfile.DesignFile.from_design(design, report), a)
    loaded = dfile.load(a)
    rebuilt = loaded.to_design()
    np.testing.assert_array_equal(rebuilt.t_e.roots, design.t_e.roots)
    np.testing.assert_array_equal(rebuilt.h2.roots, design.h2.roots)
    np.testing.assert_array_equal(rebuilt.fd_tail.h, design.fd_tail.h)
    np.testing.assert_array_equal(rebuilt.fe_segment.lengths, design.fe_segment.lengths)
    dfile.save(dfile.DesignFile.from_design(rebuilt, report), b)
    assert a.read_bytes() == b.read_bytes()


def test_file_layout(tmp_path, balanced):
    design, report = balanced
    path = tmp_path / "d.json"
    dfile.save(dfile.DesignFile.from_design(design, report), path)
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    data = json.loads(raw)
    assert data["schema_version"] == 1
    assert data["k_total"] == 6 and data["split_l"] == 3
    assert set(data["achieved"]) == {
        "max_reflection_evanescent",
        "max_reflection_propagative",
        "max_ntd_rel_error_evanescent",
        "max_ntd_rel_error_propagative",
    }
    assert all(len(pair) == 2 for pair in data["t_e"])


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.update(schema_version=2), "schema_version"),
        (lambda d: d.pop("t_e"), "missing keys"),
        (lambda d: d.update(fd_h=[[1.0, 2.0, 3.0]]), "fd_h"),
        (lambda d: d["window"].pop("lambda2"), "window"),
    ],
)
def test_invalid_files(tmp_path, balanced, mutate, message):
    design, report = balanced
    data = dfile.DesignFile.from_design(design, report).to_dict()
    mutate(data)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(dfile.DesignFileError, match=message):
        dfile.load(path).to_design()


def test_unreadable(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    with pytest.raises(dfile.DesignFileError):
        dfile.load(path)
    with pytest.raises(dfile.DesignFileError):
        dfile.load(tmp_path / "missing.json")


def test_pairs_roundtrip():
    z = np.array([1.5 - 0.0j, -2e-300 + 3j, 0.1 + 0.2j])
    np.testing.assert_array_equal(dfile.unpairs(dfile.pairs(z)), z)
    assert dfile.unpairs([]).size == 0
