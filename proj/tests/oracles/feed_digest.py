#!/usr/bin/env python3
"""Feed digests and drift computed independently of the C++ code.

digest: SHA-256 over canon(title) 0x1F canon(body) 0x1E per item, where
canon trims and collapses whitespace.
drift: 1 - best / max(n, m), with `best` the largest set of order-preserving
item pairs with equal canonical (title, body), found by trying every
subset of pairings.
"""
import hashlib
import itertools
import json
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

FEEDS = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "fixtures" / "feeds"


def canon(s):
    return " ".join((s or "").split())


def items(path):
    if path.suffix == ".json":
        return [(canon(i["title"]), canon(i["body"])) for i in json.loads(path.read_text())]
    root = ET.parse(path).getroot()
    return [(canon(i.findtext("title")), canon(i.findtext("description"))) for i in root.iter("item")]


def digest(its):
    h = hashlib.sha256()
    for t, b in its:
        h.update(t.encode() + b"\x1f" + b.encode() + b"\x1e")
    return h.hexdigest()


def best_alignment(a, b):
    pairs = [(i, j) for i in range(len(a)) for j in range(len(b)) if a[i] == b[j]]
    for r in range(min(len(a), len(b)), 0, -1):
        for combo in itertools.combinations(pairs, r):
            ii = [p[0] for p in combo]
            jj = [p[1] for p in combo]
            if len(set(ii)) == r and len(set(jj)) == r and ii == sorted(ii) and jj == sorted(jj):
                return r
    return 0


def drift(a, b):
    if digest(a) == digest(b):
        return 0.0
    return 1.0 - best_alignment(a, b) / max(len(a), len(b))


if __name__ == "__main__":
    feeds = sorted(p for p in FEEDS.iterdir() if p.suffix in (".rss", ".json"))
    for p in feeds:
        print(f"digest\t{p.name}\t{digest(items(p))}")
    base = items(FEEDS / "jokes.rss")
    for p in feeds:
        print(f"drift\tjokes.rss\t{p.name}\t{drift(base, items(p)):.12f}")
