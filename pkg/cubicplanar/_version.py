"""Version string, filled in at build time by versioningit."""

from __future__ import annotations

from pathlib import Path

# Replaced during the versioningit `onbuild` step of a normal install
__version__ = ""


def _resolve_version() -> str:
    """Version from git metadata in a source checkout, installed metadata otherwise."""
    try:
        import versioningit
    except ImportError:  # pragma: no cover
        import importlib.metadata

        return importlib.metadata.version("cubicplanar")
    return versioningit.get_version(project_dir=Path(__file__).parent.parent)


if not __version__:
    __version__ = _resolve_version()
