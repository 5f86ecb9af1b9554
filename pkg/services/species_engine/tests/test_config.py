import pytest
from pydantic import ValidationError as SettingsError

from services.species_engine.core.config import (
    EngineSettings,
    SearchSettings,
    SplitSettings,
    parse_pool,
)


def test_pool_range():
    assert parse_pool("-2..2") == [-2, -1, 0, 1, 2]


def test_pool_list():
    assert parse_pool("1, 3,2") == [1, 2, 3]


@pytest.mark.parametrize("text", ["", "a..b", "3..1"])
def test_bad_pools(text):
    with pytest.raises(ValueError):
        parse_pool(text)


def test_defaults():
    settings = EngineSettings()
    assert settings.DEFAULT_DEGREE == 8
    assert settings.search.SEARCH_SEED == 42
    assert settings.search.pool() == [-2, -1, 0, 1, 2]
    assert settings.split.SPLIT_SEED == 0


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("SEARCH_TRIALS", "5")
    monkeypatch.setenv("SEARCH_POOL", "0..3")
    monkeypatch.setenv("SPLIT_SEED", "9")
    assert SearchSettings().SEARCH_TRIALS == 5
    assert SearchSettings().pool() == [0, 1, 2, 3]
    assert SplitSettings().SPLIT_SEED == 9


def test_invalid_pool_in_environment(monkeypatch):
    monkeypatch.setenv("SEARCH_POOL", "x")
    with pytest.raises(SettingsError):
        SearchSettings()
