"""Regenerate tiles_delta.json: the optimizer's delta for Tiles plus the grid oracle value.

    python3 tests/fixtures/make_tiles_delta.py
"""

import json
from dataclasses import asdict
from pathlib import Path

from pptdisc.upb import DeltaConfig, delta_s, delta_s_grid_oracle, tiles_upb

OUT = Path(__file__).with_name("tiles_delta.json")


def main():
    cfg = DeltaConfig()
    est = delta_s(tiles_upb(), cfg)
    doc = {
        "config": asdict(cfg),
        "delta": est.value,
        "restarts_at_best": int(sum(v <= est.value + 1e-9 for v in est.restart_values)),
        "grid_oracle_resolution": 12,
        "grid_oracle": delta_s_grid_oracle(tiles_upb(), resolution=12),
    }
    OUT.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
