import os
import pytest
import numpy as np

from errors import ConfigError


def test_load_minimal_config(write_config, constant_config):
    """A document with just the required blocks gets the defaults."""
    from run_config import load_config
    config = load_config(write_config(constant_config()))
    assert config.model.kind == "constant"
    assert config.model.epsilon == 2.0
    assert config.atom.k0 == 1.0
    assert config.z_grid is None
    assert config.units == "reduced"
    assert config.output.format == "csv"
    assert config.output.path is None


def test_expected_keys_cover_required_keys():
    from run_config import EXPECTED_KEYS, REQUIRED_KEYS
    assert REQUIRED_KEYS <= EXPECTED_KEYS


def test_z_grid_log_spacing(constant_config):
    from run_config import parse_config
    config = parse_config(constant_config(z_grid={"min": 1e-9, "max": 1e-6, "points": 4}))
    np.testing.assert_allclose(config.z_grid.values(), [1e-9, 1e-8, 1e-7, 1e-6], rtol=1e-12)


def test_z_grid_linear_and_single_point(constant_config):
    from run_config import parse_config
    config = parse_config(constant_config(z_grid={"min": 1.0, "max": 2.0, "points": 3, "spacing": "linear"}))
    np.testing.assert_allclose(config.z_grid.values(), [1.0, 1.5, 2.0])
    single = parse_config(constant_config(z_grid={"min": 0.5}))
    assert list(single.z_grid.values()) == [0.5]


def test_single_relaxation_model(constant_config):
    from run_config import parse_config
    doc = constant_config()
    doc["model"] = {"kind": "single_relaxation", "chi0": 1.0, "kc": 5.0}
    config = parse_config(doc)
    assert config.model.kind == "single_relaxation"
    assert config.model.kc == 5.0


def test_inline_table(constant_config):
    from run_config import parse_config
    doc = constant_config()
    doc["model"] = {"kind": "tabulated", "table": [[0.0, 3.0], [1.0, 2.0], [2.0, 1.0]], "interpolation": "linear"}
    config = parse_config(doc)
    assert config.model.k_range == (0.0, 2.0)


def test_table_path_is_relative_to_config(temp_dir, write_config, constant_config):
    from run_config import load_config
    with open(os.path.join(temp_dir, "eps.csv"), "w", encoding="utf-8") as fh:
        fh.write("k,epsilon\n0,4.0\n10,2.0\n100,1.0\n")
    doc = constant_config()
    doc["model"] = {"kind": "tabulated", "table_path": "eps.csv"}
    config = load_config(write_config(doc, "tabulated.json"))
    assert config.model.static_epsilon == 4.0


def test_read_table_rejects_wrong_columns(temp_dir):
    from run_config import read_table
    path = os.path.join(temp_dir, "bad.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("omega,eps\n0,2\n1,1.5\n")
    with pytest.raises(ConfigError):
        read_table(path)
    with pytest.raises(ConfigError):
        read_table(os.path.join(temp_dir, "missing.csv"))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("atom"),
    lambda d: d.update(schema_version=2),
    lambda d: d.update(colour="blue"),
    lambda d: d.update(atom={"k0": -1.0, "alpha0": 1.0}),
    lambda d: d.update(atom={"k0": "1", "alpha0": 1.0}),
    lambda d: d.update(model={"kind": "constant", "epsilon": 0.5}),
    lambda d: d.update(model={"kind": "drude", "epsilon": 2.0}),
    lambda d: d.update(model={"kind": "constant", "epsilon": 2.0, "sigma": 1.0}),
    lambda d: d.update(model={"kind": "tabulated"}),
    lambda d: d.update(model={"kind": "tabulated", "table": [[0.0, 2.0], [1.0]]}),
    lambda d: d.update(z_grid={"min": 0.0, "max": 1.0}),
    lambda d: d.update(z_grid={"min": 2.0, "max": 1.0}),
    lambda d: d.update(z_grid={"min": 1.0, "max": 2.0, "points": 0}),
    lambda d: d.update(z_grid={"min": 1.0, "max": 2.0, "spacing": "cubic"}),
    lambda d: d.update(tol=1.0),
    lambda d: d.update(tol=True),
    lambda d: d.update(units="furlongs"),
    lambda d: d.update(output={"format": "xml"}),
])
def test_invalid_documents_rejected(constant_config, mutate):
    from run_config import parse_config
    doc = constant_config()
    mutate(doc)
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_malformed_json(write_config):
    from run_config import load_config
    with pytest.raises(ConfigError):
        load_config(write_config("{not json", "broken.json"))
    with pytest.raises(ConfigError):
        load_config(write_config("[1, 2]", "list.json"))


def test_missing_file(temp_dir):
    from run_config import load_config
    with pytest.raises(ConfigError):
        load_config(os.path.join(temp_dir, "nowhere.json"))
