#!/usr/bin/env python3
"""Reference scores for the lexical question similarity.

Reimplements tokenisation and cosine from scratch and prints golden values:
the two reference pairs, the best blacklist match for a few probe questions,
and the highest score of any benign question (used to pick the threshold).
"""
import math
import re
import sys
from collections import Counter
from pathlib import Path

DATA = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "data"


def entries(path):
    out = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def fold(s):
    s = s.replace("'", "").replace("-", "")
    s = re.sub(r"[^0-9A-Za-z\x80-\U0010ffff]", " ", s).lower()
    return " ".join(s.split())


STOP = {w for line in entries(DATA / "similarity" / "stopwords.txt") for w in fold(line).split()}
SYN = {fold(a): fold(b) for a, b in (l.split() for l in entries(DATA / "similarity" / "synonyms.txt"))}


def vec(s):
    toks = [SYN.get(w, w) for w in fold(s).split()]
    return Counter(t for t in toks if t not in STOP)


def sim(a, b):
    va, vb = vec(a), vec(b)
    if not va or not vb:
        return 1.0 if not va and not vb and fold(a) == fold(b) else 0.0
    dot = sum(va[k] * vb[k] for k in va)
    na = math.sqrt(sum(v * v for v in va.values()))
    nb = math.sqrt(sum(v * v for v in vb.values()))
    return min(1.0, max(0.0, dot / (na * nb)))


def best(q, bl):
    top, score = bl[0], -1.0
    for e in bl:
        s = sim(q, e)
        if s > score:
            top, score = e, s
    return top, score


if __name__ == "__main__":
    bl = entries(DATA / "blacklist.txt")
    benign = entries(DATA / "benign_questions.txt")
    pairs = [
        ("What's your favourite number", "What's your phone number"),
        ("Can you give me your mobile number", "Could you tell me your phone number"),
    ]
    for a, b in pairs:
        print(f"pair\t{a}\t{b}\t{sim(a, b):.12f}")
    for q in ["Are you home alone?", "Do you want to hear a joke?", "Want another joke?"]:
        e, s = best(q, bl)
        print(f"probe\t{q}\t{e}\t{s:.12f}")
    print(f"self_min\t{min(sim(e, e) for e in bl):.12f}")
    worst = max(benign, key=lambda q: best(q, bl)[1])
    print(f"benign_max\t{worst}\t{best(worst, bl)[0]}\t{best(worst, bl)[1]:.12f}")
