#!/usr/bin/env python3
"""Toy external evaluator.

Reads one JSON line {"learning_rate", "dropout", "units"} from stdin and
writes {"fitness": x} to stdout. A real evaluator would train the decoded
network and report its validation error here.
"""
import json
import sys

request = json.loads(sys.stdin.readline())
units = request["units"]
fitness = (
    abs(len(units) - 4)
    + sum(abs(u - 150) for u in units) / 100.0
    + abs(request["dropout"] - 0.2) * 10
    + (0.0 if request["learning_rate"] == 0.001 else 1.0)
)
json.dump({"fitness": fitness}, sys.stdout)
sys.stdout.write("\n")
