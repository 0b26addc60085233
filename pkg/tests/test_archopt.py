"""Test the archopt package."""

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from pathlib import Path

from archopt import __version__


def test_version_matches_pyproject_toml():
    """The package version is the one in pyproject.toml."""
    pyproject = Path(__file__).parent.parent / "pyproject.toml"
    pyproject_toml = tomllib.loads(pyproject.read_text(encoding="utf-8"))

    assert __version__ == pyproject_toml["tool"]["poetry"]["version"]
