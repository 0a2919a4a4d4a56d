#!/usr/bin/env python3
"""Validate JSON documents against a JSON schema.

usage: validate_schema.py SCHEMA FILE... | validate_schema.py SCHEMA --stdin
       add --expect-invalid to require every document to be rejected.
"""
import json
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)


def main(argv):
    expect_invalid = "--expect-invalid" in argv
    args = [a for a in argv[1:] if a != "--expect-invalid"]
    schema = json.load(open(args[0]))
    jsonschema.Draft7Validator.check_schema(schema)
    validator = jsonschema.Draft7Validator(schema)
    docs = [("<stdin>", json.load(sys.stdin))] if args[1:] == ["--stdin"] else [(p, json.load(open(p))) for p in args[1:]]
    bad = 0
    for name, doc in docs:
        errors = list(validator.iter_errors(doc))
        if bool(errors) != expect_invalid:
            bad += 1
            print(f"{name}: {'accepted' if not errors else errors[0].message}")
    print(f"{len(docs) - bad}/{len(docs)} as expected")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
