from src.polsqueezesim.ui.uiconfigfile import Config


def test_defaults():
    config = Config()
    assert config.get_setup_options() == ["S0", "S1", "S2", "S3"]
    assert config.get_output_formats() == ["csv", "json"]
    assert config.get_band() == (3e6, 10e6, 10e3)
    assert config.get_rbw_hz() == 300e3
    assert config.get_trace_averages() == 3
    assert config.get_oracle_samples() == 200_000
    assert config.get_oracle_gate_sigma() == 5.0


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("SQZ_SEED", "42")
    assert Config().get_default_seed() == 42
    monkeypatch.delenv("SQZ_SEED")
    assert Config().get_default_seed() == 20020101


def test_alternate_config_file(tmp_path, monkeypatch):
    path = tmp_path / "sqz.ini"
    path.write_text("[DEFAULT]\nORACLE_SAMPLES = 5e4\nELLIPSOID_TOLERANCE = 0.05\n", encoding="utf-8")
    monkeypatch.setenv("SQZ_CONFIG_FILE", str(path))
    config = Config()
    assert config.get_oracle_samples() == 50_000
    assert config.get_ellipsoid_tolerance() == 0.05
