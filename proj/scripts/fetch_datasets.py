#!/usr/bin/env python3
"""Download the larger benchmark tables into data/fetched/ as plain numeric CSV.

PIMA and IONOSPHERE come from public mirrors. The US city table has no stable
canonical URL, so it is taken from --uscity (a local path or URL) with the
coordinate columns named by --uscity-columns.

Checksums of the raw downloads are kept in data/fetched/checksums.json. The
first successful fetch records them; later fetches must match, and --verify
only checks files already on disk.
"""

import argparse
import csv
import hashlib
import io
import json
import sys
import urllib.request
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "data" / "fetched"
CHECKSUMS = DATA / "checksums.json"

SOURCES = {
    "pima": {
        "url": "https://raw.githubusercontent.com/jbrownlee/Datasets/master/pima-indians-diabetes.data.csv",
        # Eight features; the class label in the last column is dropped.
        "features": slice(0, 8),
    },
    "ionosphere": {
        "url": "https://archive.ics.uci.edu/ml/machine-learning-databases/ionosphere/ionosphere.data",
        "features": slice(0, 34),
    },
}


def read_source(location: str) -> bytes:
    if location.startswith(("http://", "https://")):
        with urllib.request.urlopen(location, timeout=60) as response:
            return response.read()
    return Path(location).read_bytes()


def numeric_rows(raw: bytes, features: slice):
    rows = []
    for record in csv.reader(io.StringIO(raw.decode("utf-8"))):
        if not record or record[0].startswith("#"):
            continue
        rows.append([float(value) for value in record[features]])
    return rows


def column_rows(raw: bytes, columns):
    reader = csv.DictReader(io.StringIO(raw.decode("utf-8")))
    missing = [c for c in columns if c not in (reader.fieldnames or [])]
    if missing:
        raise SystemExit(f"uscity: columns not found: {', '.join(missing)}")
    return [[float(record[c]) for c in columns] for record in reader]


def write_table(name: str, rows, source: str) -> Path:
    path = DATA / f"{name}.csv"
    with path.open("w", newline="") as out:
        out.write(f"# {name}: {len(rows)} rows, {len(rows[0])} columns, from {source}\n")
        csv.writer(out).writerows([repr(v) for v in row] for row in rows)
    return path


def check(name: str, digest: str, sums: dict) -> None:
    known = sums.get(name)
    if known is None:
        sums[name] = digest
        print(f"{name}: recorded sha256 {digest}")
    elif known != digest:
        raise SystemExit(f"{name}: sha256 {digest} does not match recorded {known}")
    else:
        print(f"{name}: sha256 ok")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--only", nargs="*", choices=[*SOURCES, "uscity"], help="subset to fetch")
    parser.add_argument("--uscity", help="path or URL of the US city CSV")
    parser.add_argument("--uscity-columns", default="latitude,longitude",
                        help="comma-separated header names of the coordinate columns")
    parser.add_argument("--verify", action="store_true", help="only check recorded checksums of fetched raw files")
    args = parser.parse_args()

    DATA.mkdir(parents=True, exist_ok=True)
    sums = json.loads(CHECKSUMS.read_text()) if CHECKSUMS.exists() else {}
    wanted = args.only or [*SOURCES, "uscity"]

    if args.verify:
        bad = 0
        for name in wanted:
            raw = DATA / f"{name}.raw"
            if not raw.exists():
                print(f"{name}: not fetched")
                continue
            digest = hashlib.sha256(raw.read_bytes()).hexdigest()
            ok = sums.get(name) == digest
            bad += not ok
            print(f"{name}: {'ok' if ok else 'MISMATCH'}")
        return 1 if bad else 0

    failures = 0
    for name in wanted:
        if name == "uscity":
            if not args.uscity:
                print("uscity: skipped (pass --uscity PATH_OR_URL)")
                continue
            location = args.uscity
        else:
            location = SOURCES[name]["url"]
        try:
            raw = read_source(location)
        except OSError as error:
            print(f"{name}: download failed: {error}", file=sys.stderr)
            failures += 1
            continue
        check(name, hashlib.sha256(raw).hexdigest(), sums)
        (DATA / f"{name}.raw").write_bytes(raw)
        if name == "uscity":
            rows = column_rows(raw, args.uscity_columns.split(","))
        else:
            rows = numeric_rows(raw, SOURCES[name]["features"])
        print(f"{name}: wrote {write_table(name, rows, location)}")

    CHECKSUMS.write_text(json.dumps(sums, indent=2, sort_keys=True) + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
