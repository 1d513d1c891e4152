#!/usr/bin/env python3
"""Regenerate the pinned fixture files in fixtures/ from the builders.

The files are canonical: tests assert byte equality against the builders,
so rerun this script (and review the diff) after any builder change.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rigidcat.builders import FIXTURE_BUILDERS, FIXTURE_FILES  # noqa: E402
from rigidcat.fincat import category_to_json  # noqa: E402


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "fixtures"
    out_dir.mkdir(exist_ok=True)
    for key, build in FIXTURE_BUILDERS.items():
        path = out_dir / FIXTURE_FILES[key]
        path.write_text(category_to_json(build()), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
