import json
from pathlib import Path

import pytest

from multicat import load_dataset

DATASETS = Path(__file__).resolve().parent.parent / "datasets"

EXAMPLE_1 = (" QUERY (\\x -> if creditLimit x > 3000 then cons x else nil)\n"
             "FROM customers\n"
             "TO graph/xml/relational")

EXAMPLE_2 = (
    "LET t BE\n"
    "QUERY (\\x xs -> if elem \"Book\" (map productName (orderProducts x)) "
    "then cons x xs else xs)\n"
    "FROM orders TO relational IN\n"
    "QUERY (\\x -> if any (\\y -> orderedBy y customers == x) t "
    "then cons (customerName x, countryName(located x locations)) else nil)\n"
    "FROM customers TO algebraic graph/relational/xml")


@pytest.fixture(scope="session")
def ecommerce():
    return load_dataset(DATASETS / "ecommerce")


@pytest.fixture(scope="session")
def company():
    return load_dataset(DATASETS / "company")


@pytest.fixture(scope="session")
def corpus():
    out = []
    for name in ("ecommerce", "company"):
        doc = json.loads((DATASETS / name / "examples.json").read_text())
        out.extend((name, ex["title"], ex["query"]) for ex in doc)
    return out
