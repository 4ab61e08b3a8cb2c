import numpy as np
import pytest

from nozzle_solver.cli import DEFAULT_CONFIG_PATH, load_config, parse_config, serialize_config
from nozzle_solver.core.errors import ParseError, ValidationError

GAS = """
gamma = 2.0
S0 = 1.0
J0 = 1.4142135623730951
b0 = 0.5
rho0 = 0.5
E0 = 0.0
"""


def test_shipped_defaults():
    cfg = load_config()
    assert (cfg.domain.n1, cfg.domain.n2, cfg.domain.m) == (513, 257, 16)
    assert cfg.solver.fp_tol == 1e-10
    assert cfg.solver.max_iter == 100
    assert cfg.gas.rho0 == 0.5
    assert load_config(DEFAULT_CONFIG_PATH) == cfg


def test_missing_keys_take_defaults():
    cfg = parse_config(GAS)
    assert cfg.domain.L == 0.5
    assert cfg.data.u_en == []
    assert cfg.outputs == ["csv", "svg", "json"]
    data = cfg.data.boundary_data(cfg.domain.m)
    assert data.irrotational
    assert np.all(data.du_en.coeffs == 0.0)


def test_comments_and_lists():
    cfg = parse_config(GAS + "# perturbations\nu_en = 0, 1e-3 , 2e-4\noutputs = csv\nn2 = 65\nm = 8\n")
    assert cfg.data.u_en == [0.0, 1e-3, 2e-4]
    assert cfg.wants("csv") and not cfg.wants("svg")
    data = cfg.data.boundary_data(8)
    assert data.du_en.coeffs.size == 9
    assert data.du_en.coeffs[2] == 2e-4


def test_subsonic_inlet_is_rejected():
    with pytest.raises(ValidationError, match="rho0 not supersonic"):
        parse_config(GAS.replace("rho0 = 0.5", "rho0 = 1.5"))


@pytest.mark.parametrize(
    "line, reason",
    [
        ("n1 513", "expected 'key = value'"),
        ("2n = 3", "malformed key"),
        ("nozzle_width = 3", "unknown key 'nozzle_width'"),
        ("gamma = 2.0", "duplicate key 'gamma'"),
    ],
)
def test_bad_lines_name_their_line(line, reason):
    text = GAS + line + "\n"
    with pytest.raises(ParseError, match=reason) as info:
        parse_config(text)
    assert info.value.line == len(text.splitlines())
    assert info.value.exit_code == 2


def test_v_en_parity():
    with pytest.raises(ValidationError, match="v_en"):
        parse_config(GAS + "v_en = 1e-3\n")
    cfg = parse_config(GAS + "v_en = 0, 1e-3\n")
    assert not cfg.data.boundary_data(cfg.domain.m).irrotational


def test_truncation_beyond_resolution():
    with pytest.raises(ValidationError, match="exceeds"):
        parse_config(GAS + "n2 = 33\nm = 9\n")


def test_too_many_coefficients():
    with pytest.raises(ValidationError, match="u_en"):
        parse_config(GAS + "n2 = 33\nm = 2\nu_en = 0, 0, 0, 1e-3\n")


def test_unknown_artifact():
    with pytest.raises(ValidationError, match="unknown artifacts"):
        parse_config(GAS + "outputs = csv, png\n")


def test_serialize_round_trip():
    cfg = parse_config(GAS + "u_en = 0, 1e-3\nb_profile = 1.0, -0.5\ncheck_length = false\nauto_radii = true\n")
    assert parse_config(serialize_config(cfg)) == cfg


def test_unreadable_files(tmp_path):
    with pytest.raises(ValidationError, match="cannot read"):
        load_config(tmp_path / "missing.cfg")
    binary = tmp_path / "binary.cfg"
    binary.write_bytes(b"\xff\xfe\x00gamma")
    with pytest.raises(ParseError):
        load_config(binary)
