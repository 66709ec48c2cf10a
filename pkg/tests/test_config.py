import pytest

from reechsim.config import ConfigError, ExperimentConfig, dump_config, load_config, parse_config_text


def test_defaults_match_table():
    c = ExperimentConfig().validate()
    assert (c.field_width, c.field_height) == (100, 100)
    assert (c.sink_x, c.sink_y) == (50, 50)
    assert sum(c.region_quotas) == 100
    assert c.initial_energy == 0.5
    assert c.e_elec == 50e-9 and c.e_da == 5e-9
    assert c.packet_bits == 4000
    assert c.drop_probability == 0.3
    assert c.seeds == (1, 2, 3, 4, 5)
    assert c.max_rounds == 5000
    assert c.confidence == 0.95
    assert c.rng == "PCG64"


def test_round_trip():
    c = ExperimentConfig(eps_mp=1.7e-15, seeds=(3, 9), protocol="leach", output_dir="x y")
    assert parse_config_text(dump_config(c)) == c


def test_file_with_comments(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# paper settings\ndrop_probability = 0.1  # lighter loss\n\nseeds = 4, 5,6\n")
    c = load_config(p)
    assert c.drop_probability == 0.1 and c.seeds == (4, 5, 6)


@pytest.mark.parametrize(
    "text, key",
    [
        ("drop_probability = -0.1", "drop_probability"),
        ("drop_probability = 1.2", "drop_probability"),
        ("eps_fs = 0", "eps_fs"),
        ("protocol = heed", "protocol"),
        ("confidence = 1", "confidence"),
        ("max_rounds = 0", "max_rounds"),
        ("sink_x = 120", "sink_x"),
        ("region_quotas = 1,2,3", "region_quotas"),
        ("seeds = 1,1", "seeds"),
        ("rng = MT19937", "rng"),
        ("leach_p = 0", "leach_p"),
    ],
)
def test_validation_names_field(text, key):
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text).validate()
    assert exc.value.key == key
    assert key in str(exc.value)


def test_unknown_key():
    with pytest.raises(ConfigError, match="bogus"):
        parse_config_text("bogus = 1")


def test_unparseable_value():
    with pytest.raises(ConfigError, match="max_rounds"):
        parse_config_text("max_rounds = lots")


def test_missing_equals():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("seeds = 1,2\nnonsense\n")
