#!/usr/bin/env python3
"""Regenerate src/multlab/fixtures/bands.json from the oracle sweep.

The bands are derived regression constants (the underlying results are
order-of-magnitude, so the first trusted run records the observed window and
later runs are held to it).  Run from the repository root:

    python scripts/derive_fixtures.py
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from multlab.acceptance import DEFAULT_SEED, oracle_sweep  # noqa: E402


def main() -> int:
    bands = oracle_sweep(seed=DEFAULT_SEED)
    out = (pathlib.Path(__file__).resolve().parents[1]
           / "src" / "multlab" / "fixtures" / "bands.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(bands, indent=2, sort_keys=True) + "\n",
                   encoding="utf-8")
    print(f"wrote {out}")
    print(json.dumps(bands, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
