import os

import pytest

from config import ConfigManager


@pytest.fixture
def config_manager(monkeypatch, tmp_path):
    """ConfigManager pointed at an empty .env, with the GA and machine keys cleared."""
    for key in ConfigManager.EXPECTED_KEYS:
        monkeypatch.delenv(key, raising=False)
    env_file = tmp_path / ".env"
    env_file.write_text("", encoding="utf-8")
    return ConfigManager(dotenv_path=str(env_file))


def test_builtin_defaults(config_manager):
    """Unset keys fall back to the built-in defaults."""
    assert config_manager.get_setting("GENE_MACHINE_MERGE_MODE") == "one-way"
    assert config_manager.get_int("GA_POPULATION") == 50
    assert config_manager.get_float("GENE_MACHINE_BETA1") == 8.0
    assert config_manager.get_int("GENE_MACHINE_MAX_WORKERS") is None


def test_environment_overrides_defaults(config_manager, monkeypatch):
    monkeypatch.setenv("GENE_MACHINE_BETA0", "0.25")
    monkeypatch.setenv("GENE_MACHINE_MACHINES", "4")
    assert config_manager.get_float("GENE_MACHINE_BETA0") == 0.25
    assert config_manager.get_int("GENE_MACHINE_MACHINES") == 4


def test_bad_numbers_fall_back_to_the_given_default(config_manager, monkeypatch):
    monkeypatch.setenv("GA_ELITISM", "two")
    monkeypatch.setenv("GA_MUTATION_RATE", "lots")
    assert config_manager.get_int("GA_ELITISM", 1) == 1
    assert config_manager.get_float("GA_MUTATION_RATE", 0.2) == 0.2


def test_dotenv_file_is_loaded(monkeypatch, tmp_path):
    monkeypatch.delenv("GENE_MACHINE_CYCLES", raising=False)
    env_file = tmp_path / ".env"
    env_file.write_text("GENE_MACHINE_CYCLES=6\n", encoding="utf-8")
    try:
        config_manager = ConfigManager(dotenv_path=str(env_file))
        assert config_manager.get_int("GENE_MACHINE_CYCLES") == 6
    finally:
        os.environ.pop("GENE_MACHINE_CYCLES", None)


def test_all_config_dict_lists_every_key(config_manager):
    settings = config_manager.get_all_config_dict()
    assert set(settings) == set(ConfigManager.EXPECTED_KEYS)
    assert settings["LOG_LEVEL"] == "INFO"
