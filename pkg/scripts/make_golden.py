#!/usr/bin/env python3
"""
Golden Report Script for the Species Potentials Engine.

Runs the CLI on the bundled problem files and stores the stable part of
each report under services/species_engine/tests/golden/. The CLI tests
compare fresh reports against these files.

Usage:
    python scripts/make_golden.py            # Rewrite every golden file
    python scripts/make_golden.py --check    # Compare only; exit 1 on drift
"""
import argparse
import json
import sys
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from services.species_engine.main import run  # noqa: E402

# =============================================================================
# CONFIGURATION
# =============================================================================

PROBLEMS = ROOT / "problems"
GOLDEN = ROOT / "services" / "species_engine" / "tests" / "golden"


def mutation_subset(data: dict) -> dict:
    """Keep what does not depend on the choice of complements."""
    return {
        "vertex": data["vertex"],
        "removed": sorted(data["removed"]),
        "bimodule": data["bimodule"],
        "potential_terms": data["potential"]["terms"],
        "exchange_matrix": data["exchange_matrix"],
        "fz_mutated": data["fz_mutated"],
        "matrix_coherent": data["matrix_coherent"],
    }


@dataclass
class GoldenCase:
    """One CLI invocation and the report subset worth pinning."""

    name: str
    argv: list[str]
    extract: Callable[[dict], dict] = field(default=mutation_subset)

    @property
    def path(self) -> Path:
        return GOLDEN / f"{self.name}.json"


# =============================================================================
# CASES
# =============================================================================

GOLDEN_CASES = [
    GoldenCase(
        name="three_cycle_mutate_k2",
        argv=["mutate", "--in", str(PROBLEMS / "three_cycle.json"), "--k", "2"],
    ),
]


# =============================================================================
# RUNNER
# =============================================================================


def render(case: GoldenCase) -> str | None:
    code, envelope, _ = run(case.argv)
    if code != 0:
        error = envelope.get("error", {})
        print(f"   ❌ {case.name}: exit {code} ({error.get('code')})")
        print(f"      {error.get('message')}")
        return None
    return json.dumps(case.extract(envelope["data"]), indent=2) + "\n"


def main():
    parser = argparse.ArgumentParser(description="Regenerate golden CLI reports")
    parser.add_argument(
        "--check", action="store_true", help="Compare instead of writing"
    )
    args = parser.parse_args()

    print("🧮 Species Engine golden reports")
    print(f"   Directory: {GOLDEN}")
    print("=" * 60)

    GOLDEN.mkdir(parents=True, exist_ok=True)
    failures = 0
    for case in GOLDEN_CASES:
        text = render(case)
        if text is None:
            failures += 1
            continue

        if args.check:
            current = case.path.read_text() if case.path.exists() else None
            if current is None or json.loads(current) != json.loads(text):
                print(f"   ⚠️  Drift: {case.name}")
                failures += 1
            else:
                print(f"   ✅ Unchanged: {case.name}")
        else:
            case.path.write_text(text)
            print(f"   ✅ Wrote: {case.path.name}")

    print("=" * 60)
    if failures:
        print(f"❌ {failures} case(s) failed")
        sys.exit(1)
    print("✅ Done")


if __name__ == "__main__":
    main()
