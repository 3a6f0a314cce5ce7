"""Package version resolution."""

from __future__ import annotations

import re
from importlib.metadata import PackageNotFoundError, version as _package_version
from pathlib import Path

try:
    __version__ = _package_version("meanaudit")
except PackageNotFoundError:
    _manifest = Path(__file__).resolve().parent.parent / "pyproject.toml"
    try:
        _m = re.search(
            r'^version\s*=\s*"([^"]+)"', _manifest.read_text(encoding="utf-8"), re.M
        )
        __version__ = _m.group(1) if _m else "0.0.0"
    except OSError:
        __version__ = "0.0.0"
