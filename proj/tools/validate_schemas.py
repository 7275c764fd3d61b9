#!/usr/bin/env python3
"""Validate artifacts and configs against docs/*.schema.json."""
import glob
import json
import os
import sys

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def main():
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    schemas = {os.path.basename(p): json.load(open(p)) for p in glob.glob(os.path.join(root, "docs", "*.schema.json"))}
    registry = Registry().with_resources([(k, Resource.from_contents(v)) for k, v in schemas.items()])
    jobs = [(p, "run_config.schema.json") for p in glob.glob(os.path.join(root, "configs", "*.json"))]
    for p in glob.glob(os.path.join(root, "tests", "golden", "*", "*.json")):
        tag = json.load(open(p))["schema"].split("/")[1]
        jobs.append((p, tag.replace("-", "_") + ".schema.json"))
    bad = 0
    for path, name in sorted(jobs):
        errors = list(Draft202012Validator(schemas[name], registry=registry).iter_errors(json.load(open(path))))
        for e in errors[:5]:
            print(f"{path}: {list(e.absolute_path)}: {e.message[:200]}")
        bad += bool(errors)
    print(f"{len(jobs) - bad}/{len(jobs)} documents valid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
