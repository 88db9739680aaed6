"""Run every corpus config through the CLI and summarize verdicts.

Usage: python3 scripts/run_corpus.py [--out DIR]
Reports are written to DIR (default: reports/) as <config>.report.json.
"""
import argparse
import json
import sys
from pathlib import Path

from toricpos.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", default=str(ROOT / "corpus"))
    ap.add_argument("--out", default=str(ROOT / "reports"))
    args = ap.parse_args()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for cfg in sorted(Path(args.corpus).glob("*.json")):
        target = out_dir / f"{cfg.stem}.report.json"
        code = cli_main(["--config", str(cfg), "--out", str(target)])
        if code != 0:
            failures += 1
            print(f"{cfg.name:45s} exit {code}")
            continue
        result = json.loads(target.read_text())["result"]
        verdict = result.get("verdict")
        if verdict is None and "disagreements" in result:
            verdict = f"{result['checked']} checked, {result['disagreements']} disagreements"
        print(f"{cfg.name:45s} {verdict if verdict is not None else 'ok'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
