#!/usr/bin/env python3
# Copyright 2026 The popnet Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the bundled Kenya-style attribute and matching networks.

The numbers are reconstructions: the marital-status table is transcribed
from published survey statistics, everything else is a plausible stand-in.
Run from the repository root: python3 tools/make_kenya_data.py
"""
import math
import os

SLICES = ["0-14", "15-19", "20-24", "25-29", "30-34", "35-39", "40-44",
          "45-49", "50-54", "55+"]
MIDPOINT = [7, 17, 22, 27, 32, 37, 42, 47, 52, 65]
LOCATIONS = ["village1", "village2"] + [f"R{i}" for i in range(1, 13)]
LOCATION_PRIOR = [0.2, 0.2] + [0.05] * 12

# p(maritalStatus=yes | gender, ageSlices); the 55+ slice reuses 50-54.
MARRIED_YES = {
    "male": [0.0, 0.019, 0.184, 0.619, 0.793, 0.893, 0.886, 0.943, 0.938, 0.938],
    "female": [0.0, 0.494, 0.689, 0.739, 0.759, 0.732, 0.721, 0.721, 0.721, 0.721],
}


def slice_of(age):
    if age < 15:
        return 0
    return min(9, 1 + (age - 15) // 5)


def fmt(x):
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def normalize(row):
    total = sum(row)
    out = [round(x / total, 12) for x in row]
    # push the rounding residue into the largest entry
    i = max(range(len(out)), key=lambda k: out[k])
    out[i] = round(out[i] + (1.0 - sum(out)), 12)
    return out


def truncated_poisson(mean, top):
    if mean <= 0:
        return [1.0] + [0.0] * top
    w = [math.exp(-mean) * mean ** k / math.factorial(k) for k in range(top + 1)]
    return normalize(w)


class Bn:
    def __init__(self):
        self.lines = []

    def var(self, name, domain):
        self.lines.append(f"variable {name} {{ {', '.join(domain)} }}")

    def root(self, name, probs):
        self.lines.append(f"cpt {name} {{")
        self.lines.append("  " + ", ".join(fmt(p) for p in probs))
        self.lines.append("}")

    def cpt(self, name, parents, rows):
        """rows: list of (parent labels, probabilities) in table order."""
        self.lines.append(f"cpt {name} | {', '.join(parents)} {{")
        for labels, probs in rows:
            self.lines.append(f"  {', '.join(labels)} : {', '.join(fmt(p) for p in probs)}")
        self.lines.append("}")

    def blank(self):
        self.lines.append("")

    def text(self, header=None):
        body = "\n".join(self.lines) + "\n"
        return (header + "\n\n" + body) if header else body


def age_prior():
    return normalize([math.exp(-a / 22.0) for a in range(100)])


def attribute_bn(spouse_counts):
    bn = Bn()
    bn.var("ageDetail", [str(a) for a in range(100)])
    bn.var("ageSlices", SLICES)
    bn.var("gender", ["male", "female"])
    bn.var("maritalStatus", ["no", "yes"])
    bn.var("location", LOCATIONS)
    bn.var("workWater", ["yes", "no"])
    bn.var("workMarket", ["yes", "no"])
    bn.var("RC_spouses", [str(k) for k in range(len(spouse_counts["male"]))])
    bn.var("RC_motherOf", [str(k) for k in range(9)])
    bn.var("RC_friendship", [str(k) for k in range(9)])
    bn.var("RC_colleagues", [str(k) for k in range(7)])
    bn.blank()

    bn.root("ageDetail", age_prior())
    bn.cpt("ageSlices", ["ageDetail"],
           [([str(a)], [1.0 if slice_of(a) == s else 0.0 for s in range(10)])
            for a in range(100)])
    bn.root("gender", [0.5, 0.5])
    rows = []
    for g in ["male", "female"]:
        for s, label in enumerate(SLICES):
            yes = MARRIED_YES[g][s]
            rows.append(([g, label], [round(1.0 - yes, 12), yes]))
    bn.cpt("maritalStatus", ["gender", "ageSlices"], rows)
    bn.root("location", LOCATION_PRIOR)

    def work(p_child, p_male, p_female):
        rows = []
        for g in ["male", "female"]:
            for s, label in enumerate(SLICES):
                p = p_child if s == 0 else (p_male if g == "male" else p_female)
                rows.append(([g, label], [p, round(1.0 - p, 12)]))
        return rows

    bn.cpt("workWater", ["gender", "ageSlices"], work(0.05, 0.2, 0.35))
    bn.cpt("workMarket", ["gender", "ageSlices"], work(0.02, 0.25, 0.3))

    rows = []
    for g in ["male", "female"]:
        for m in ["no", "yes"]:
            dist = spouse_counts[g] if m == "yes" else [1.0] + [0.0] * (len(spouse_counts[g]) - 1)
            rows.append(([g, m], dist))
    bn.cpt("RC_spouses", ["gender", "maritalStatus"], rows)

    children_mean = [0.0, 0.4, 1.3, 2.2, 2.9, 3.4, 3.7, 3.8, 3.8, 3.0]
    rows = []
    for g in ["male", "female"]:
        for m in ["no", "yes"]:
            for s, label in enumerate(SLICES):
                mean = 0.0 if g == "male" else children_mean[s] * (1.0 if m == "yes" else 0.35)
                rows.append(([g, m, label], truncated_poisson(mean, 8)))
    bn.cpt("RC_motherOf", ["gender", "maritalStatus", "ageSlices"], rows)

    bn.cpt("RC_friendship", ["ageSlices"],
           [([label], truncated_poisson(3.0, 8)) for label in SLICES])
    colleagues = [0.05, 0.15, 0.2, 0.25, 0.2, 0.1, 0.05]
    rows = []
    for w in ["yes", "no"]:
        for k in ["yes", "no"]:
            dist = colleagues if (w == "yes" or k == "yes") else [1.0] + [0.0] * 6
            rows.append(([w, k], dist))
    bn.cpt("RC_colleagues", ["workWater", "workMarket"], rows)
    return bn.text("# Kenya-style attribute network. Marital status by gender and age\n"
                   "# slice follows published survey statistics; other tables are\n"
                   "# reconstructed.")


def copies(bn, name, domain, prefixes=("a1_", "a2_")):
    for p in prefixes:
        bn.var(p + name, domain)


def uniform(n):
    return normalize([1.0] * n)


def gate(bn, name, parents, parent_domains, p_yes):
    """Binary {yes,no} node with p(yes | parents) = p_yes(*labels)."""
    bn.var(name, ["yes", "no"])
    rows = []

    def rec(i, labels):
        if i == len(parents):
            p = p_yes(*labels)
            rows.append((labels, [p, round(1.0 - p, 12)]))
            return
        for v in parent_domains[i]:
            rec(i + 1, labels + [v])

    rec(0, [])
    return (name, parents, rows)


def and_link(bn, name, gates):
    bn.var(name, ["yes", "no"])
    rows = []
    n = len(gates)
    for mask in range(2 ** n):
        labels = ["yes" if not (mask >> (n - 1 - i)) & 1 else "no" for i in range(n)]
        yes = all(l == "yes" for l in labels)
        rows.append((labels, [1.0 if yes else 0.0, 0.0 if yes else 1.0]))
    return (name, gates, rows)


def matching_bn(header, attrs, gates, link):
    """attrs: list of (name, domain, prefixes); gates: list of gate specs."""
    bn = Bn()
    for name, domain, prefixes in attrs:
        copies(bn, name, domain, prefixes)
    specs = [gate(bn, *g) for g in gates]
    link_spec = and_link(bn, link, [g[0] for g in gates])
    bn.blank()
    for name, domain, prefixes in attrs:
        for p in prefixes:
            bn.root(p + name, uniform(len(domain)))
    for spec in specs + [link_spec]:
        bn.cpt(*spec)
    return bn.text(header)


def spouses_age(a1, a2):
    i, j = SLICES.index(a1), SLICES.index(a2)
    if i == 0 or j == 0:
        return 0.0
    return {0: 0.3, 1: 1.0, 2: 0.8, 3: 0.4}.get(i - j, 0.1 if i - j > 3 else 0.05)


def spouses():
    return matching_bn(
        "matching spouses link=linkSpouses a1=a1_ a2=a2_ counts=both",
        [("gender", ["male", "female"], ("a1_", "a2_")),
         ("ageSlices", SLICES, ("a1_", "a2_")),
         ("location", LOCATIONS, ("a1_", "a2_"))],
        [("husbandAndWife", ["a1_gender", "a2_gender"], [["male", "female"]] * 2,
          lambda g1, g2: 1.0 if (g1, g2) == ("male", "female") else 0.0),
         ("rightAge", ["a1_ageSlices", "a2_ageSlices"], [SLICES] * 2, spouses_age),
         ("sameLocation", ["a1_location", "a2_location"], [LOCATIONS] * 2,
          lambda l1, l2: 1.0 if l1 == l2 else 0.0)],
        "linkSpouses")


def mother_age(a1, a2):
    gap = MIDPOINT[SLICES.index(a1)] - MIDPOINT[SLICES.index(a2)]
    if 15 <= gap <= 40:
        return 1.0
    if 10 <= gap < 15 or 40 < gap <= 45:
        return 0.3
    return 0.0


def mother_location(child_age, l1, l2):
    if l1 == l2:
        return 1.0
    return 0.0 if child_age == "0-14" else 0.05


def mother_of():
    return matching_bn(
        "matching motherOf link=linkMotherOf a1=a1_ a2=a2_ counts=a1",
        [("gender", ["male", "female"], ("a1_",)),
         ("ageSlices", SLICES, ("a1_", "a2_")),
         ("location", LOCATIONS, ("a1_", "a2_"))],
        [("isWoman", ["a1_gender"], [["male", "female"]],
          lambda g: 1.0 if g == "female" else 0.0),
         ("ageGap", ["a1_ageSlices", "a2_ageSlices"], [SLICES] * 2, mother_age),
         ("livesNear", ["a2_ageSlices", "a1_location", "a2_location"],
          [SLICES, LOCATIONS, LOCATIONS], mother_location)],
        "linkMotherOf")


def friend_age(a1, a2):
    d = abs(SLICES.index(a1) - SLICES.index(a2))
    return {0: 1.0, 1: 0.3}.get(d, 0.01)


def friendship():
    return matching_bn(
        "matching friendship link=linkFriends a1=a1_ a2=a2_ counts=both",
        [("gender", ["male", "female"], ("a1_", "a2_")),
         ("ageSlices", SLICES, ("a1_", "a2_")),
         ("location", LOCATIONS, ("a1_", "a2_"))],
        [("sameGender", ["a1_gender", "a2_gender"], [["male", "female"]] * 2,
          lambda g1, g2: 1.0 if g1 == g2 else 0.4),
         ("similarAge", ["a1_ageSlices", "a2_ageSlices"], [SLICES] * 2, friend_age),
         ("oftenSameLocation", ["a1_location", "a2_location"], [LOCATIONS] * 2,
          lambda l1, l2: 1.0 if l1 == l2 else 0.02)],
        "linkFriends")


def colleagues():
    yn = ["yes", "no"]
    return matching_bn(
        "matching colleagues link=linkColleagues a1=a1_ a2=a2_ counts=both",
        [("workWater", yn, ("a1_", "a2_")),
         ("workMarket", yn, ("a1_", "a2_")),
         ("location", LOCATIONS, ("a1_", "a2_"))],
        [("sameActivity", ["a1_workWater", "a2_workWater", "a1_workMarket", "a2_workMarket"],
          [yn] * 4,
          lambda w1, w2, m1, m2: 1.0 if (w1 == w2 == "yes" or m1 == m2 == "yes") else 0.0),
         ("sameLocation", ["a1_location", "a2_location"], [LOCATIONS] * 2,
          lambda l1, l2: 1.0 if l1 == l2 else 0.0)],
        "linkColleagues")


def main():
    os.makedirs("data/kenya", exist_ok=True)
    os.makedirs("data/fixtures", exist_ok=True)
    files = {
        "data/kenya/attributes.bn": attribute_bn(
            {"male": [0.0, 0.85, 0.12, 0.03], "female": [0.0, 1.0, 0.0, 0.0]}),
        "data/kenya/spouses.bn": spouses(),
        "data/kenya/mother_of.bn": mother_of(),
        "data/kenya/friendship.bn": friendship(),
        "data/kenya/colleagues.bn": colleagues(),
        # Married men want two to four wives, married women accept one.
        "data/fixtures/polygyny_attributes.bn": attribute_bn(
            {"male": [0.0, 0.0, 0.4, 0.3, 0.3], "female": [0.0, 1.0, 0.0, 0.0, 0.0]}),
    }
    for path, text in files.items():
        with open(path, "w") as f:
            f.write(text)


if __name__ == "__main__":
    main()
