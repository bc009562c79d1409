import pytest

from ilpk.caps import Caps, caps_from_env


def test_defaults():
    caps = Caps()
    assert caps.exact_tw == 20
    assert caps.dp_cells == 1 << 28
    assert caps.brute_box == 1 << 24
    assert caps.tu_dim == 6


def test_parse_overrides():
    caps = caps_from_env("exact_tw=12, brute_box=4096")
    assert caps.exact_tw == 12
    assert caps.brute_box == 4096
    assert caps.dp_cells == Caps().dp_cells


def test_parse_empty_is_defaults():
    assert caps_from_env("") == Caps()


@pytest.mark.parametrize("bad", ["nonsense=3", "exact_tw", "exact_tw=abc"])
def test_parse_rejects_bad_entries(bad):
    with pytest.raises(ValueError):
        caps_from_env(bad)
