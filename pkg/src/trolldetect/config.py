"""Key-value run configuration.

Format: one ``key = value`` pair per line, # comments and blank lines
ignored.  Keys use the long option names of the CLI with underscores
(``learning_rate = 0.05``).  Values stay strings; argparse applies the
option's type when such a default is consumed.
"""

from __future__ import annotations

from pathlib import Path


def load_config(path) -> dict[str, str]:
    values: dict[str, str] = {}
    for i, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {i}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not key:
            raise ValueError(f"{path}: line {i}: empty key")
        values[key] = value.strip()
    return values
