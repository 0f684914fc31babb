from fractions import Fraction as F

import pytest

from seqspace.config import Config, load_config, parse_config_text
from seqspace.errors import ConfigurationError


def test_defaults():
    c = load_config(env={})
    assert c == Config() and c.precision == 50 and c.format == "json"


def test_file_env_and_overrides(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nprecision = 60\nseed = 9  # trailing\nformat = table\nestimator_tolerance = 1/1000\n")
    c = load_config(str(p), env={})
    assert (c.precision, c.seed, c.format, c.estimator_tolerance) == (60, 9, "table", F(1, 1000))
    assert load_config(str(p), env={"SEQSPACE_PRECISION": "40"}).precision == 40
    assert load_config(str(p), env={"SEQSPACE_PRECISION": "40"}, precision=70).precision == 70


def test_precision_floor():
    with pytest.raises(ConfigurationError):
        Config(precision=19)
    with pytest.raises(ConfigurationError):
        load_config(env={"SEQSPACE_PRECISION": "abc"})


@pytest.mark.parametrize("text", ["colour = red", "precision 50", "seed = x"])
def test_bad_lines(text):
    with pytest.raises(ConfigurationError):
        parse_config_text(text)


def test_missing_file():
    with pytest.raises(ConfigurationError):
        load_config("/nonexistent/seqspace.cfg", env={})


def test_as_dict_is_json_safe():
    assert Config().as_dict()["estimator_tolerance"] == "1/1000000"
