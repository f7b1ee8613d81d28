"""Shared bits for the experiment scripts."""

import argparse
from pathlib import Path

from posrate.cli import write_csv


def parser(description: str, default_name: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", default=str(Path("results") / default_name), help="CSV output path")
    return p


def save(path: str, header, rows) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    write_csv(path, header, rows)
    print(f"wrote {len(rows)} rows to {path}")
