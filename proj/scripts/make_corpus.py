#!/usr/bin/env python3
#
# Project PagForge - Copyright 2026 PagForge Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Builds the bundled corpora under data/.

mini_zinc.smi       ~5k ZINC-like molecules (cations, neutrals, salts)
pag_reference.csv   ~300 sulfonium cations with synthetic LUMO labels
roundtrip_1000.smi  1000 molecules for canonicalization checks

Molecules are assembled from fragment strings. Ring labels inside fragments
are written as {a}, {b}, ... and renumbered per instance so fragments can be
nested freely. Output is deterministic for a given --seed.
"""

import argparse
import csv
import random
import re
from pathlib import Path


class Labeler:
    def __init__(self):
        self.next = 1

    def fresh(self):
        n = self.next
        self.next += 1
        return str(n) if n < 10 else f"%{n}"


def instantiate(frag, labeler):
    mapping = {}

    def sub(m):
        key = m.group(1)
        if key not in mapping:
            mapping[key] = labeler.fresh()
        return mapping[key]

    return re.sub(r"\{(\w)\}", sub, frag)


# Substituents attach through their first atom. Each entry carries the
# features used by the synthetic LUMO model: (aromatic rings, acceptor groups).
ALKYL = [
    ("C", 0, 0), ("CC", 0, 0), ("CCC", 0, 0), ("C(C)C", 0, 0),
    ("CCCC", 0, 0), ("CC(C)C", 0, 0), ("C(C)(C)C", 0, 0), ("CCCCCC", 0, 0),
    ("CCCCCCCC", 0, 0), ("CCO", 0, 0), ("CCOC", 0, 0), ("CC=C", 0, 0),
    ("CC#C", 0, 0), ("C{a}CCCCC{a}", 0, 0), ("C{a}CCCC{a}", 0, 0),
    ("CC(=O)OC", 0, 1), ("CC(F)(F)F", 0, 1), ("C(F)(F)F", 0, 2),
    ("C(F)(F)C(F)(F)F", 0, 2), ("CC(=O)C", 0, 1), ("C[Si](C)(C)C", 0, 0),
    ("CCCl", 0, 0), ("CCBr", 0, 0), ("CC#N", 0, 1),
]

ARYL = [
    ("c{a}ccccc{a}", 1, 0), ("c{a}ccc(C)cc{a}", 1, 0),
    ("c{a}ccc(C(C)(C)C)cc{a}", 1, 0), ("c{a}ccc(OC)cc{a}", 1, 0),
    ("c{a}ccc(F)cc{a}", 1, 1), ("c{a}ccc(Cl)cc{a}", 1, 1),
    ("c{a}ccc(Br)cc{a}", 1, 1), ("c{a}ccc(I)cc{a}", 1, 1),
    ("c{a}ccc(C(F)(F)F)cc{a}", 1, 2), ("c{a}ccc(C#N)cc{a}", 1, 2),
    ("c{a}ccc([N+](=O)[O-])cc{a}", 1, 3), ("c{a}ccc(C(C)=O)cc{a}", 1, 2),
    ("c{a}ccc(O)cc{a}", 1, 0), ("c{a}cccc(C)c{a}", 1, 0),
    ("c{a}ccc(-c{b}ccccc{b})cc{a}", 2, 0), ("c{a}ccc{b}ccccc{b}c{a}", 2, 0),
    ("c{a}ccc(Sc{b}ccccc{b})cc{a}", 2, 0), ("c{a}ccc(Oc{b}ccccc{b})cc{a}", 2, 0),
    ("c{a}ccsc{a}", 1, 0), ("c{a}ccoc{a}", 1, 0),
    ("c{a}c(F)c(F)c(F)c(F)c{a}F", 1, 4), ("c{a}ccc(S(C)(=O)=O)cc{a}", 1, 3),
    ("c{a}ccc(C(=O)OC)cc{a}", 1, 2), ("c{a}ccc{b}c(c{a})oc{c}ccccc{c}{b}", 3, 1),
]

BENZYLIC = [
    ("Cc{a}ccccc{a}", 1, 0), ("CC(=O)c{a}ccccc{a}", 1, 2),
    ("CC(=O)c{a}ccc(F)cc{a}", 1, 3), ("Cc{a}ccc(C#N)cc{a}", 1, 2),
    ("CC(=O)c{a}ccc{b}ccccc{b}c{a}", 2, 2), ("CCc{a}ccccc{a}", 1, 0),
]

# Cores attach through their first and last atoms, both of which carry H.
NEUTRAL_CORES = [
    "c{a}ccccc{a}", "c{a}ccncc{a}", "C{a}CCCCC{a}", "c{a}ccc{b}ccccc{b}c{a}",
    "c{a}ccsc{a}", "c{a}ccoc{a}", "C{a}CCOCC{a}", "c{a}cc[nH]c{a}",
    "C{a}CCNCC{a}", "c{a}ccc{b}[nH]ccc{b}c{a}", "C{a}CCC(=O)C{a}",
    "c{a}nc{b}ccccc{b}nc{a}",
]

LINKERS = ["", "C", "CC", "C(=O)N", "C(=O)O", "O", "S", "N", "C=C", "OC", "NC(=O)"]

# Prefixes bond through their last atom, suffixes through their first.
NEUTRAL_PREFIXES = [
    "C", "CC", "CCC", "CO", "FC(F)(F)", "N#C", "OC(=O)", "NC(=O)", "Cl", "Br",
    "I", "F", "CS(=O)(=O)", "C[Si](C)(C)", "CC(C)", "OCC",
]

NEUTRAL_SUFFIXES = [
    "C", "CC", "CCC", "OC", "F", "Cl", "Br", "C(F)(F)F", "C#N", "C(=O)O",
    "C(N)=O", "S(C)(=O)=O", "CCO", "C(C)C", "I", "[Si](C)(C)C",
]


def pick(rng, table):
    return table[rng.randrange(len(table))]


def substituent(rng, aryl_bias):
    r = rng.random()
    if r < aryl_bias:
        return pick(rng, ARYL)
    if r < aryl_bias + 0.15:
        return pick(rng, BENZYLIC)
    return pick(rng, ALKYL)


def sulfonium(rng, aryl_bias=0.45):
    """Returns (smiles, aromatic rings, acceptors, ring S+ flag)."""
    lab = Labeler()
    kind = rng.random()
    if kind < 0.55:
        parts = [substituent(rng, aryl_bias) for _ in range(3)]
        frags = [instantiate(p[0], lab) for p in parts]
        smi = f"[S+]({frags[0]})({frags[1]}){frags[2]}"
        return smi, sum(p[1] for p in parts), sum(p[2] for p in parts)
    if kind < 0.85:
        ring = pick(rng, ["[S+]{r}({s})CCCC{r}", "[S+]{r}({s})CCCCC{r}",
                          "[S+]{r}({s})CCOCC{r}", "[S+]{r}({s})CC(C)CC{r}"])
        p = substituent(rng, aryl_bias)
        label = lab.fresh()
        s = instantiate(p[0], lab)
        return (ring.replace("{r}", label).replace("{s}", s), p[1], p[2])
    p = substituent(rng, aryl_bias)
    a, b, c = lab.fresh(), lab.fresh(), lab.fresh()
    s = instantiate(p[0], lab)
    smi = f"[S+]{a}({s})c{b}ccccc{b}-c{c}ccccc{c}{a}"
    return smi, p[1] + 2, p[2] + 1


def ammonium(rng):
    lab = Labeler()
    kind = rng.random()
    if kind < 0.25:
        p = substituent(rng, 0.3)
        return f"[NH3+]{instantiate(p[0], lab)}"
    if kind < 0.45:
        ps = [substituent(rng, 0.3) for _ in range(2)]
        return f"[NH2+]({instantiate(ps[0][0], lab)}){instantiate(ps[1][0], lab)}"
    if kind < 0.65:
        ps = [substituent(rng, 0.3) for _ in range(3)]
        f = [instantiate(p[0], lab) for p in ps]
        return f"[NH+]({f[0]})({f[1]}){f[2]}"
    if kind < 0.8:
        ps = [substituent(rng, 0.2) for _ in range(4)]
        f = [instantiate(p[0], lab) for p in ps]
        return f"[N+]({f[0]})({f[1]})({f[2]}){f[3]}"
    if kind < 0.92:
        p = substituent(rng, 0.2)
        a = lab.fresh()
        tail = pick(rng, ["", "C", "Cl", "CC(=O)", "CN(C)"])
        return f"{tail}c{a}cc[n+]({instantiate(p[0], lab)})cc{a}"
    a = lab.fresh()
    p = substituent(rng, 0.2)
    return f"C[n+]{a}ccn({instantiate(p[0], lab)})c{a}"


def phosphonium(rng):
    lab = Labeler()
    ps = [substituent(rng, 0.6) for _ in range(4)]
    f = [instantiate(p[0], lab) for p in ps]
    return f"[P+]({f[0]})({f[1]})({f[2]}){f[3]}"


def neutral(rng):
    lab = Labeler()
    core = instantiate(pick(rng, NEUTRAL_CORES), lab)
    out = core
    if rng.random() < 0.8:
        if rng.random() < 0.35:
            head = instantiate(pick(rng, NEUTRAL_CORES), lab)
        else:
            head = pick(rng, NEUTRAL_PREFIXES)
        out = head + pick(rng, LINKERS) + out
    if rng.random() < 0.7:
        if rng.random() < 0.35:
            tail = instantiate(pick(rng, NEUTRAL_CORES), lab)
        else:
            tail = pick(rng, NEUTRAL_SUFFIXES)
        out = out + pick(rng, LINKERS) + tail
    return out


def salt(rng):
    cation = pick(rng, ["[NH4+]", "C[S+](C)C", "C[N+](C)(C)C", "[Na+]", "[K+]"])
    anion = pick(rng, ["[Cl-]", "[Br-]", "[I-]", "F[B-](F)(F)F", "CS(=O)(=O)[O-]",
                       "O=S(=O)([O-])C(F)(F)F"])
    return f"{cation}.{anion}"


def dication(rng):
    lab = Labeler()
    a = instantiate(pick(rng, ALKYL)[0], lab)
    return f"C[S+](C)CCCC[S+](C){a}"


def outliers():
    """Hand-built molecules exercising the window edges."""
    chain76 = "C#C" * 38
    chain74 = "C#C" * 37
    return [
        # 80 heavy atoms: N+, three methyls, 76-carbon polyyne.
        ("C[N+](C)(C)" + chain76, "edge_atoms_80"),
        # 79 heavy atoms: N+, two methyls, ethyl, 74-carbon polyyne.
        ("CC[N+](C)(C)" + chain74, "edge_atoms_79"),
        ("C[P+](C)(C)C", "edge_phosphorus"),
        ("C=[N+](C)C", "edge_mw_low_pass"),
        ("C[NH3+]", "edge_mw_low_fail"),
        ("C[S+](C)C", "edge_trimethylsulfonium"),
        ("C[Se+](C)C", "edge_selenium"),
    ]


def lumo_of(rng, aromatic, acceptors, ring_fused):
    base = -3.6 - 0.55 * min(aromatic, 5) - 0.38 * min(acceptors, 6)
    base -= 0.4 * ring_fused
    return round(base + rng.gauss(0.0, 0.2), 3)


def make_reference(rng, n):
    rows = []
    seen = set()
    while len(rows) < n:
        smi, aromatic, acceptors = sulfonium(rng, aryl_bias=0.6)
        if smi in seen:
            continue
        seen.add(smi)
        fused = 1 if "-c" in smi else 0
        rows.append((smi, f"PAG{len(rows) + 1:04d}",
                     lumo_of(rng, aromatic, acceptors, fused)))
    return rows


def make_zinc(rng, n):
    out = []
    seen = set()
    makers = [(0.32, lambda: sulfonium(rng)[0]), (0.62, lambda: ammonium(rng)),
              (0.67, lambda: phosphonium(rng)), (0.93, lambda: neutral(rng)),
              (0.97, lambda: salt(rng)), (1.0, lambda: dication(rng))]
    while len(out) < n:
        r = rng.random()
        for cut, make in makers:
            if r < cut:
                smi = make()
                break
        if smi in seen:
            continue
        seen.add(smi)
        out.append((smi, f"ZN{len(out) + 1:05d}"))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "data")
    parser.add_argument("--seed", type=int, default=20260101)
    parser.add_argument("--zinc", type=int, default=5000)
    parser.add_argument("--reference", type=int, default=300)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    zinc = make_zinc(rng, args.zinc - len(outliers())) + outliers()
    with open(args.out / "mini_zinc.smi", "w") as f:
        for smi, ident in zinc:
            f.write(f"{smi}\t{ident}\n")

    ref = make_reference(rng, args.reference)
    with open(args.out / "pag_reference.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["smiles", "id", "lumo_ev"])
        w.writerows(ref)

    pool = [s for s, _ in zinc[:-len(outliers())]] + [r[0] for r in ref]
    picks = rng.sample(pool, 1000)
    with open(args.out / "roundtrip_1000.smi", "w") as f:
        for i, smi in enumerate(picks):
            f.write(f"{smi}\tRT{i + 1:04d}\n")


if __name__ == "__main__":
    main()
