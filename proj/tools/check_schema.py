#!/usr/bin/env python3
# Copyright 2026 The Kaya Authors
# SPDX-License-Identifier: Apache-2.0
"""Validates a JSON document against a JSON Schema. Exit 0 when valid."""

import json
import sys

import jsonschema


def main() -> int:
    if len(sys.argv) != 3:
        print("usage: check_schema.py SCHEMA DOCUMENT", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as f:
        schema = json.load(f)
    with open(sys.argv[2]) as f:
        document = json.load(f)
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(document), key=str)
    for e in errors:
        print(f"{'/'.join(map(str, e.absolute_path))}: {e.message}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
