#!/usr/bin/env python3
"""Quick end-to-end check that the cost benchmark runs on the shipped scenarios."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent
SCENARIOS = ROOT / "scenarios"


def run(*args: str) -> int:
    """Run the CLI in a subprocess and return its exit code."""
    result = subprocess.run(
        [sys.executable, "-m", "costbench", "--log-level", "WARNING", *args],
        cwd=ROOT,
        capture_output=True,
        text=True
    )
    if result.returncode != 0:
        print(result.stderr)
    return result.returncode


def check_validate() -> bool:
    """Validate every shipped fixture file."""
    print("Validating shipped files...")
    files = [str(p) for d in ("catalogs", "deployments", "suts", "slos", "scenarios")
             for p in sorted((ROOT / d).glob("*.env"))]
    if run("validate", *files) == 0:
        print(f"✓ {len(files)} files valid")
        return True
    print("✗ Validation failed")
    return False


def check_compare(use_case: str, out: Path) -> bool:
    """Compare the baseline function and stream processing scenarios of a use case."""
    print(f"\nComparing {use_case} baseline scenarios...")
    code = run(
        "compare",
        "--scenario", str(SCENARIOS / f"{use_case}-faas.env"),
        "--scenario", str(SCENARIOS / f"{use_case}-dsp.env"),
        "--out", str(out)
    )
    if code != 0:
        print(f"✗ Compare failed with exit code {code}")
        return False

    report = json.loads((out / "report.json").read_text())
    for entry in report["break_evens"]:
        print(f"✓ Break-even {entry['faas']} vs {entry['dsp']}: {entry['break_even']['rate']} events/s")
    for label, shares in report["shares"].items():
        top = max(shares, key=shares.get)
        print(f"  - {label}: largest cost share {top} ({shares[top]:.1%})")
    return True


def check_measure(out: Path) -> bool:
    """Count store accesses of the stateful function implementation."""
    print("\nMeasuring UC2 function accesses...")
    if run("measure", "--scenario", str(SCENARIOS / "uc2-faas.env"), "--out", str(out)) != 0:
        print("✗ Measure failed")
        return False
    print(f"✓ {(out / 'manifest.env').read_text().count(chr(10))} manifest entries written")
    return True


def main():
    """Run all checks."""
    print("=" * 60)
    print("Cost Benchmark Smoke Test")
    print("=" * 60)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        ok = check_validate()
        ok = check_compare("uc1", tmp / "uc1") and ok
        ok = check_compare("uc2", tmp / "uc2") and ok
        ok = check_measure(tmp / "measure") and ok

    print("\n" + "=" * 60)
    if ok:
        print("✓ All checks passed")
    else:
        print("❌ Some checks failed")
        sys.exit(1)


if __name__ == "__main__":
    main()
