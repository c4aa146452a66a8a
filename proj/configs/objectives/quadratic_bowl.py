#!/usr/bin/env python3
"""Conformance objective: a quadratic bowl with minimum 0 at (0.3, -0.2)."""
import json
import sys

msg = json.loads(sys.stdin.readline())
p = msg["params"]
value = (p["x1"] - 0.3) ** 2 + (p["x2"] + 0.2) ** 2
print("evaluating trial", msg["trial"])
print(repr(value))
