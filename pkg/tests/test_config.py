import functools

import dotenv
import pytest

from ri_tails.config import Settings
from ri_tails.exceptions import ConfigurationError


class TestSettings:
    def test_defaults(self):
        settings = Settings.from_env(load_file=False)
        assert settings == Settings(seed_override=None, log_level="WARNING", workers=1)

    def test_reads_environment(self, monkeypatch):
        monkeypatch.setenv("RI_TAILS_SEED", "0x2a")
        monkeypatch.setenv("RI_TAILS_LOG_LEVEL", "debug")
        monkeypatch.setenv("RI_TAILS_WORKERS", "4")
        settings = Settings.from_env(load_file=False)
        assert settings.seed_override == 42
        assert settings.log_level == "DEBUG"
        assert settings.workers == 4

    def test_blank_seed_is_unset(self, monkeypatch):
        monkeypatch.setenv("RI_TAILS_SEED", "  ")
        assert Settings.from_env(load_file=False).seed_override is None

    def test_dotenv_file(self, monkeypatch, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text("RI_TAILS_WORKERS=3\nRI_TAILS_SEED=7\n")
        monkeypatch.setattr("ri_tails.config.load_dotenv", functools.partial(dotenv.load_dotenv, env_file))
        # registered so that teardown removes what the file loads
        monkeypatch.setenv("RI_TAILS_WORKERS", "")
        monkeypatch.delenv("RI_TAILS_WORKERS")
        monkeypatch.setenv("RI_TAILS_SEED", "11")
        settings = Settings.from_env()
        assert settings.workers == 3
        assert settings.seed_override == 11

    @pytest.mark.parametrize(
        "name, value",
        [
            ("RI_TAILS_SEED", "abc"),
            ("RI_TAILS_SEED", "-1"),
            ("RI_TAILS_SEED", str(2 ** 64)),
            ("RI_TAILS_LOG_LEVEL", "chatty"),
            ("RI_TAILS_WORKERS", "0"),
            ("RI_TAILS_WORKERS", "two"),
        ],
    )
    def test_malformed(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigurationError, match=name):
            Settings.from_env(load_file=False)
