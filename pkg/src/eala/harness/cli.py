"""Command-line front end: ``eala <suite> --config scenario.json``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional

import jsonschema

from .report import FAIL, INCONCLUSIVE, combine_status
from .scenario import SUITES, ScenarioConfig
from .suites import run_characters, run_suite

EXIT = {"pass": 0, FAIL: 1, INCONCLUSIVE: 2}

log = logging.getLogger("eala")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eala", description="Exact verification suites for "
                                "toroidal loop modules inside a finite window.")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--config", required=True, type=Path, help="scenario JSON file")
    p.add_argument("--out", type=Path, help="write the JSON report here")
    p.add_argument("--tsv", type=Path, help="write the character table here")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for 'all'")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(suites: List[str], sc: ScenarioConfig, jobs: int = 1):
    if jobs > 1 and len(suites) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_suite, name, sc) for name in suites]
            return [f.result() for f in futures]
    reports = []
    for name in suites:
        log.info("running %s", name)
        reports.append(run_suite(name, sc))
    return reports


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        sc = ScenarioConfig.load(args.config)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError, ValueError) as exc:
        print(f"eala: invalid scenario {args.config}: {exc}", file=sys.stderr)
        return 1
    if args.suite == "all":
        suites = sc.selected()
    else:
        suites = [args.suite]
    tsv_wanted = args.tsv is not None
    reports = run([s for s in suites if not (s == "characters" and tsv_wanted)], sc, args.jobs)
    if tsv_wanted:
        report, tsv = run_characters(sc)
        args.tsv.write_text(tsv)
        if "characters" in suites:
            reports.append(report)
    status = combine_status(r.status for r in reports)
    doc = {"scenario": sc.name, "status": status, "reports": [r.to_dict() for r in reports]}
    text = json.dumps(doc, indent=2)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)
    for r in reports:
        print(f"{r.suite}: {r.status}", file=sys.stderr)
    return EXIT[status]


if __name__ == "__main__":
    sys.exit(main())
