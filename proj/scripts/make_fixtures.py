#!/usr/bin/env python3
"""Regenerates the synthetic fixtures under data/fixtures.

Output is fully determined by the seed; rerunning overwrites the files with
identical bytes.
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "data" / "fixtures"
SEED = 20240101

RELATIONS = [
    "associate", "cause", "compare", "cotreat", "drug_interact", "inhibit",
    "interact", "negative_correlate", "positive_correlate", "prevent",
    "stimulate", "treat",
]
MUTATION = ["mutation", "protein_mutation", "dna_mutation", "snp"]
VALID = {
    "associate": [("C", "D"), ("C", "G"), ("C", "V"), ("D", "G"), ("D", "V"), ("V", "V")],
    "cause": [("C", "D"), ("V", "D")],
    "compare": [("C", "C")],
    "cotreat": [("C", "C")],
    "drug_interact": [("C", "C")],
    "inhibit": [("C", "V"), ("G", "D")],
    "interact": [("C", "G"), ("C", "V"), ("G", "G")],
    "negative_correlate": [("C", "G"), ("C", "V"), ("G", "G")],
    "positive_correlate": [("C", "C"), ("C", "G"), ("G", "G")],
    "prevent": [("V", "D")],
    "stimulate": [("C", "V"), ("G", "D")],
    "treat": [("C", "D")],
}
JOURNALS = [
    "Annals of Metabolic Research", "Cell Signalling Letters", "Clinical Endocrine Reports",
    "Drug Discovery Quarterly", "Genome Insights", "Journal of Applied Pharmacology",
    "Molecular Medicine Notes", "Translational Diabetes", "Vascular Biology Today",
    "", "Pediatric Disease Review", "Open Biomedical Reports",
]
WORDS = (
    "expression signaling pathway patients cohort therapy dose response receptor "
    "inflammation insulin glucose metabolism cells mice trial outcome risk serum level "
    "treatment clinical association variant protein binding activity oxidative stress "
    "mitochondrial kinase transcription regulation plasma hepatic renal cardiac vascular "
    "adipose tissue secretion marker biomarker phenotype genotype"
).split()
SYLLABLES = "al bo ra zin mex tol vir dan lor phe quin sar tev ox cor ly mu nep".split()


def make_name(rng, parts, suffix):
    return "".join(rng.choice(SYLLABLES) for _ in range(parts)).capitalize() + suffix


def entities(rng):
    ents = {"C": [], "D": [], "G": [], "V": [], "S": [], "L": []}
    used = set()

    def unique(fn):
        while True:
            n = fn()
            if n not in used:
                used.add(n)
                return n

    for i in range(18):
        ents["C"].append({"id": f"MESH:D01{i:04d}", "name": unique(lambda: make_name(rng, 2, "ine")),
                          "type": "chemical"})
    for i in range(14):
        ents["D"].append({"id": f"MESH:D02{i:04d}", "name": unique(lambda: make_name(rng, 2, " syndrome")),
                          "type": "disease"})
    for i in range(16):
        ents["G"].append({"id": f"NCBI:{1001 + i}",
                          "name": unique(lambda: "".join(rng.choice("ABCDEFGHKLMNPRST") for _ in range(3))
                                         + str(rng.randint(1, 9))),
                          "type": "gene"})
    for i in range(8):
        t = MUTATION[i % 4]
        name = "" if i % 2 == 0 else f"c.{100 + i}A>G"
        ents["V"].append({"id": f"VAR:{i + 1}", "name": name, "type": t})
    for i, n in enumerate(["Mus musculus", "Homo sapiens", "Rattus norvegicus"]):
        ents["S"].append({"id": f"TAX:{10000 + i}", "name": n, "type": "species"})
    for i, n in enumerate(["HeLa", "HepG2"]):
        ents["L"].append({"id": f"CVCL:{i + 1}", "name": n, "type": "cellline"})
    return ents


def random_date(rng):
    year = rng.randint(2012, 2025)
    month = rng.randint(1, 12)
    day = rng.randint(1, 28)
    r = rng.random()
    if r < 0.05:
        return f"{year}"
    if r < 0.12:
        return f"{year}-{month:02d}"
    return f"{year}-{month:02d}-{day:02d}"


def sentence(rng, names, n):
    words = [rng.choice(WORDS) for _ in range(n)]
    for name in names:
        words.insert(rng.randrange(len(words) + 1), name)
    return " ".join(words)


def synthetic():
    rng = random.Random(SEED)
    ents = entities(rng)
    named = [e for k in "CDG" for e in ents[k]] + [e for e in ents["V"] if e["name"]]

    lines = []
    pmids = []
    for i in range(450):
        pmid = 10000 + i
        pmids.append(pmid)
        mentioned = [e["name"] for e in rng.sample(named, 2)]
        art = {
            "pmid": pmid,
            "title": sentence(rng, mentioned[:1], rng.randint(4, 9)),
            "abstract": sentence(rng, mentioned, rng.randint(20, 45)),
            "pub_date": random_date(rng),
            "journal": rng.choice(JOURNALS),
        }
        r = rng.random()
        if r < 0.03:
            art["pub_date"] = ""
        elif r < 0.05:
            del art["pub_date"]
        elif r < 0.08:
            art["title"] = ""
            art["abstract"] = ""
        lines.append(json.dumps(art))
        if rng.random() < 0.01:
            lines.append(json.dumps(dict(art, title="duplicate " + art["title"])))
    for _ in range(5):
        lines.insert(rng.randrange(len(lines)), '{"pmid": 77, "title": "broken",')
    lines.insert(rng.randrange(len(lines)), json.dumps({"pmid": -5, "title": "t", "abstract": "a",
                                                        "pub_date": "2010-01-01", "journal": ""}))
    articles = lines

    # A pool of directed keys; sampling from it with replacement makes merges.
    keys = []
    while len(keys) < 360:
        rel = rng.choice(RELATIONS)
        s_cls, o_cls = rng.choice(VALID[rel])
        s = rng.choice(ents[s_cls])
        o = rng.choice(ents[o_cls])
        if s["id"] == o["id"]:
            continue
        keys.append((s, rel, o))

    def triplet(s, rel, o, pm):
        return {
            "subject_id": s["id"], "subject_name": s["name"], "subject_type": s["type"],
            "relation": rel,
            "object_id": o["id"], "object_name": o["name"], "object_type": o["type"],
            "pmids": pm,
        }

    trip = []
    for _ in range(1000):
        r = rng.random()
        pm = rng.sample(pmids, rng.choice([1, 1, 1, 2, 3]))
        if r < 0.03:
            trip.append(rng.choice([
                '{"subject_id": "MESH:D010000", "relation": "treat"',
                json.dumps({"subject_id": "X", "relation": "heals", "object_id": "Y",
                            "subject_type": "chemical", "object_type": "disease", "pmids": [1]}),
                json.dumps({"subject_id": "X", "relation": "treat", "object_id": "Y",
                            "subject_type": "plant", "object_type": "disease", "pmids": [1]}),
                "not json at all",
            ]))
            continue
        if r < 0.11:
            rel = rng.choice(RELATIONS)
            pool = [e for k in "CDGVSL" for e in ents[k]]
            while True:
                s, o = rng.choice(pool), rng.choice(pool)
                cls = {"chemical": "C", "disease": "D", "gene": "G", "species": "S",
                       "cellline": "L"}.get(s["type"], "V"), \
                      {"chemical": "C", "disease": "D", "gene": "G", "species": "S",
                       "cellline": "L"}.get(o["type"], "V")
                if cls not in VALID[rel]:
                    break
            trip.append(json.dumps(triplet(s, rel, o, pm)))
            continue
        s, rel, o = rng.choice(keys)
        if r < 0.15:
            if s["type"] not in MUTATION:
                s = dict(s, name="")
            else:
                o = dict(o, name="")
            if o["type"] in MUTATION and s["type"] in MUTATION:
                s = dict(rng.choice(ents["C"]), name="")
                rel = "associate"
        elif r < 0.18:
            pm = [9000000 + rng.randint(0, 99)]
        elif r < 0.22:
            pm = pm + [9000000 + rng.randint(0, 99)]
        trip.append(json.dumps(triplet(s, rel, o, pm)))

    mesh = []
    tree = {}
    for k, root in (("D", "C"), ("C", "D")):
        for i, e in enumerate(ents[k]):
            if i < 3:
                num = f"{root}{i + 1:02d}"
            else:
                parent_owner = ents[k][rng.randrange(i)]
                parent = rng.choice(tree[parent_owner["id"]])
                num = f"{parent}.{100 + i:03d}"
            tree.setdefault(e["id"], []).append(num)
    for k in ("D", "C"):
        for e in ents[k]:
            mesh.append(json.dumps({"entity_id": e["id"], "tree_numbers": tree[e["id"]]}))

    out = ROOT / "synthetic"
    out.mkdir(parents=True, exist_ok=True)
    (out / "triplets.jsonl").write_text("\n".join(trip) + "\n")
    (out / "articles.jsonl").write_text("\n".join(articles) + "\n")
    (out / "mesh.jsonl").write_text("\n".join(mesh) + "\n")


def mesh50():
    rng = random.Random(SEED + 50)
    numbers = {}
    all_numbers = []
    for i in range(50):
        eid = f"M{i:03d}"
        if i < 4:
            num = f"{'ABCD'[i]}{i + 1:02d}"
        else:
            parent = rng.choice(all_numbers)
            num = f"{parent}.{i:03d}"
        numbers[eid] = [num]
        all_numbers.append(num)
    # A few entities sit under two branches.
    for i in rng.sample(range(4, 50), 8):
        eid = f"M{i:03d}"
        parent = rng.choice([n for n in all_numbers if not n.startswith(numbers[eid][0])])
        num = f"{parent}.{500 + i:03d}"
        numbers[eid].append(num)
        all_numbers.append(num)
    out = ROOT / "mesh50"
    out.mkdir(parents=True, exist_ok=True)
    (out / "mesh.jsonl").write_text(
        "\n".join(json.dumps({"entity_id": k, "tree_numbers": v}) for k, v in numbers.items()) + "\n")


if __name__ == "__main__":
    synthetic()
    mesh50()
