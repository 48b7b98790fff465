"""Regenerates Keccak-256 and derived-slot golden files with pycryptodome.

Derived slots are computed from solc's own storage-layout output (the
*.solc.json goldens), walking solc's type table, so nothing here depends on
the C++ implementation.

    pip install pycryptodome && python3 tools/golden/keccak_goldens.py
"""
import json
import pathlib

from Crypto.Hash import keccak

ROOT = pathlib.Path(__file__).resolve().parents[2]
GOLDEN = ROOT / "tests" / "golden"


def k256(data: bytes) -> bytes:
    return keccak.new(digest_bits=256, data=data).digest()


def pad32(value: int) -> bytes:
    return (value % (1 << 256)).to_bytes(32, "big")


def alias_address(alias: str, prefix: bytes = b"kaya:") -> int:
    return int.from_bytes(k256(prefix + alias.encode())[12:], "big")


VECTORS = [
    b"",
    b"abc",
    b"a" * 135,
    b"a" * 136,
    b"a" * 137,
    bytes(i % 256 for i in range(200)),
    bytes(i % 256 for i in range(272)),
    pad32(1) + pad32(2),
    pad32(3),
    b"kaya:a",
]

ALIASES = ["a", "b", "alice", "player1"]
CONTRACT_ALIASES = ["C", "SnailThrone"]

# (fixture, root, accessors). Key values are ints or "alias:<name>".
PATHS = [
    ("mappings", "m", [("key", "alias:a")]),
    ("mappings", "m", [("key", "alias:b")]),
    ("mappings", "approvals", [("key", 7), ("key", "alias:b")]),
    ("mappings", "small", [("key", "alias:a")]),
    ("mappings", "owners", [("key", 5)]),
    ("mappings", "owners", [("key", (1 << 256) - 1)]),
    ("arrays", "small", [("index", 3)]),
    ("arrays", "mid", [("index", 17)]),
    ("arrays", "big", [("index", 2)]),
    ("arrays", "dyn", [("index", 5)]),
    ("arrays", "dyn", [("length",)]),
    ("arrays", "dyn8", [("index", 40)]),
    ("arrays", "odd", [("index", 2)]),
    ("arrays", "flags", [("index", 33)]),
    ("arrays", "admins", [("index", 1)]),
    ("nested", "grid", [("index", 2), ("index", 1)]),
    ("nested", "packedGrid", [("index", 1), ("index", 2)]),
    ("nested", "lists", [("key", "alias:a"), ("index", 2)]),
    ("nested", "lists", [("key", "alias:a"), ("length",)]),
    ("nested", "twoLists", [("index", 1), ("index", 4)]),
    ("nested", "quads", [("key", "alias:a"), ("index", 3)]),
    ("nested", "split", [("index", 1), ("key", "alias:a")]),
    ("snail_throne", "hatcherySnail", [("key", "alias:a")]),
    ("snail_throne", "playerEarnings", [("key", "alias:a")]),
    ("snail_throne", "sellLog", [("index", 0)]),
    ("snail_throne", "roundPots", [("index", 3)]),
]


def is_value_type(t: dict) -> bool:
    return t["encoding"] == "inplace" and "base" not in t and "members" not in t


def walk(layout: dict, root: str, accessors):
    types = layout["types"]
    var = next(v for v in layout["storage"] if v["label"] == root)
    tid, slot, offset = var["type"], int(var["slot"]), var["offset"]
    for acc in accessors:
        t = types[tid]
        if acc[0] == "length":
            assert t["encoding"] == "dynamic_array"
            return slot, 0, 32
        if t["encoding"] == "mapping":
            key = acc[1]
            if isinstance(key, str):
                key = alias_address(key.split(":", 1)[1])
            slot = int.from_bytes(k256(pad32(key) + pad32(slot)), "big")
            tid, offset = t["value"], 0
            continue
        base = slot
        if t["encoding"] == "dynamic_array":
            base = int.from_bytes(k256(pad32(slot)), "big")
        elem = types[t["base"]]
        size = int(elem["numberOfBytes"])
        index = acc[1]
        if is_value_type(elem):
            per = 32 // size
            slot = (base + index // per) % (1 << 256)
            offset = (index % per) * size
        else:
            slot = (base + index * ((size + 31) // 32)) % (1 << 256)
            offset = 0
        tid = t["base"]
    final = types[tid]
    assert is_value_type(final)
    return slot, offset, int(final["numberOfBytes"])


def main():
    vectors = [{"input": data.hex(), "digest": k256(data).hex()} for data in VECTORS]
    addresses = [{"alias": a, "address": "0x%040x" % alias_address(a)} for a in ALIASES]
    derived = []
    for fixture, root, accessors in PATHS:
        layout = json.loads((GOLDEN / "layout" / f"{fixture}.solc.json").read_text())
        slot, offset, width = walk(layout, root, accessors)
        encoded = []
        for acc in accessors:
            if acc[0] == "length":
                encoded.append({"kind": "length"})
                continue
            value = acc[1]
            if isinstance(value, str):
                value = alias_address(value.split(":", 1)[1])
            encoded.append({"kind": acc[0], "value": "0x%x" % value})
        derived.append({
            "fixture": fixture,
            "root": root,
            "accessors": encoded,
            "slot": "0x%064x" % slot,
            "offset": offset,
            "width": width,
        })
    contracts = [
        {"alias": a, "address": "0x%040x" % alias_address(a, b"kaya:contract:")} for a in CONTRACT_ALIASES
    ]
    out = {
        "keccak256": vectors,
        "account_addresses": addresses,
        "contract_addresses": contracts,
        "derived_slots": derived,
    }
    (GOLDEN / "keccak.json").write_text(json.dumps(out, indent=2) + "\n")
    print("wrote", (GOLDEN / "keccak.json").relative_to(ROOT))


if __name__ == "__main__":
    main()
