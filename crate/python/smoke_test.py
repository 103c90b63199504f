#!/usr/bin/env python3
"""Smoke test for the graphmcg Python extension.

Build the extension first:

    cargo build -p graphmcg-py --release

then run this script from the repository root (or anywhere):

    python3 python/smoke_test.py [--selftest]
"""

import argparse
import shutil
import sys
import tempfile
from pathlib import Path


def locate_library() -> Path:
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "libgraphmcg.so",
        root / "target" / "debug" / "libgraphmcg.so",
        root / "target" / "release" / "libgraphmcg.dylib",
        root / "target" / "debug" / "libgraphmcg.dylib",
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "extension not built; run `cargo build -p graphmcg-py --release` first"
    )


def import_extension():
    library = locate_library()
    staging = Path(tempfile.mkdtemp(prefix="graphmcg-py-"))
    target = staging / ("graphmcg" + (".so" if library.suffix == ".so" else ".so"))
    shutil.copy2(library, target)
    sys.path.insert(0, str(staging))
    import graphmcg  # noqa: E402

    return graphmcg


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--selftest",
        action="store_true",
        help="also run the full acceptance criteria through the bindings",
    )
    args = parser.parse_args()

    m = import_extension()

    # end spaces
    millipede_ends = m.EndSpace("seq!(pt)")
    assert millipede_ends.is_valid()
    assert millipede_ends.cardinality("marked") == "1"
    assert millipede_ends.cardinality("all") == "aleph0"
    bad = m.EndSpace("seq(pt!)")
    assert not bad.is_valid() and bad.violations()

    cantor = m.EndSpace("cantor")
    assert cantor.basis(3) == ["0", "00", "10", "000", "100", "010", "110"]
    assert cantor.decompose("[01]", 3) == "1*[0] + -1*[00]"

    # classification
    millipede = m.Graph("inf", "seq!(pt)")
    assert millipede.classify() == "CB"
    ladder = m.Graph("inf", "sum(pt!, pt!)")
    assert ladder.classify() == "CB-generated"
    assert ladder.h1_rank() == "1"
    assert ladder.table_cell() == "(n in [2,inf), t=0)"
    rank2 = m.Graph("2", "sum(pt, pt)")
    assert rank2.pmap_type() == "F_2^1 x| Aut(F_2)"
    assert rank2.is_residually_finite()
    assert not ladder.is_residually_finite()
    assert ladder.wedge() == {"loops": 0, "rays": 0, "lochness": 2, "millipedes": 0}

    # flux: fast path against the corank oracle
    three = m.Graph("inf", "sum(pt!, pt!, pt!)")
    ctx = three.flux_context(5)
    assert ctx.ladder_count() == 2
    word = "shift(1)^2 swap({1.0},{2.1}) shift(2)^-1"
    assert ctx.flux_fast(word, "[A1]") == 2
    assert ctx.flux_fast(word, "[A2]") == -1
    for index in range(ctx.ladder_count()):
        fast = ctx.flux_fast(word, f"[A{index + 1}]")
        assert fast == ctx.flux_oracle(word, index)
        assert fast == ctx.flux_oracle(word, index, enlarge=2)
    vector, residual = ctx.split(word)
    assert vector == {0: 2, 1: -1}
    assert ctx.flux_projection(residual) == {}
    assert ctx.section({0: 2, 1: -1}).startswith("shift(1)^2")

    # witnesses
    assert m.wreath_relation_check(2, 1)
    assert m.grigorchuk_relation_check(5) == (True, True)

    if args.selftest:
        outcomes = m.selftest()
        for cid, name, passed, details in outcomes:
            print(f"criterion {cid}: {name} — {'PASS' if passed else 'FAIL'} ({details})")
        assert all(passed for _, _, passed, _ in outcomes)

    print("smoke test passed")


if __name__ == "__main__":
    main()
