#!/usr/bin/env python3
"""Smoke test for the sensebench_py extension module.

Builds nothing itself: run `cargo build -p sensebench-py` (or --release)
first, then `python3 python/smoke_test.py`. The script locates the compiled
cdylib under target/, links it into a temp directory under the importable
name, and exercises the main types and operations.
"""

import shutil
import sys
import tempfile
from pathlib import Path


def locate_extension() -> Path:
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libsensebench_py.so", "sensebench_py.so", "libsensebench_py.dylib")
    ]
    found = [p for p in candidates if p.exists()]
    if not found:
        sys.exit(
            "extension not found; run `cargo build -p sensebench-py` first "
            f"(searched {[str(c) for c in candidates]})"
        )
    return max(found, key=lambda p: p.stat().st_mtime)


def import_module():
    ext = locate_extension()
    staging = Path(tempfile.mkdtemp(prefix="sensebench_py_"))
    shutil.copy2(ext, staging / "sensebench_py.so")
    sys.path.insert(0, str(staging))
    import sensebench_py

    return sensebench_py


def main() -> None:
    sb = import_module()
    checks = 0

    def ok(name: str, condition: bool) -> None:
        nonlocal checks
        if not condition:
            sys.exit(f"FAIL {name}")
        checks += 1
        print(f"ok {name}")

    # Corpus generation, serialization, reload.
    corpus = sb.Corpus.generate(docs=2, words=30, max_senses=5, sentence_length=6, seed=7)
    ok("corpus shape", corpus.document_count == 2 and corpus.total_words == 60)
    again = sb.Corpus.generate(docs=2, words=30, max_senses=5, sentence_length=6, seed=7)
    ok("generation deterministic", corpus.serialize() == again.serialize())
    with tempfile.TemporaryDirectory() as tmp:
        path = str(Path(tmp) / "corpus.txt")
        corpus.save(path)
        reloaded = sb.Corpus.load(path)
        ok("corpus round trip", reloaded.serialize() == corpus.serialize())

    # Gold standard and the F1 oracle.
    gold = corpus.gold(0)
    ok("gold aligned", len(gold) == corpus.words(0))
    perfect = [g if g is not None else 0 for g in gold]
    ok("perfect F1", sb.f1(perfect, gold) == 1.0)

    # Configurations and the mutation primitive.
    cfg = sb.random_configuration(corpus, 0, seed=1)
    ok(
        "random configuration in range",
        all(0 <= a < s for a, s in zip(cfg, corpus.sense_counts(0))),
    )
    moved = sb.make_random_changes(corpus, 0, cfg, 5, seed=2)
    ok("changes bounded", 0 < sb.hamming_distance(cfg, moved) <= 5)
    ok(
        "changes deterministic",
        moved == sb.make_random_changes(corpus, 0, cfg, 5, seed=2),
    )

    # Budgeted scorer driven from Python.
    scorer = sb.Scorer(corpus, 0, budget=10)
    for _ in range(10):
        scorer.score(cfg)
    ok("budget consumed", scorer.call_count == 10 and scorer.remaining == 0)
    try:
        scorer.score(cfg)
        sys.exit("FAIL budget exhaustion should raise")
    except RuntimeError:
        ok("budget exhaustion raises", True)
    ok("best tracked", scorer.best_f1 is not None and scorer.best_config == cfg)
    ok("trace recorded", scorer.trace[0][0] == 1)

    # All four algorithms under preset parameters.
    for algo in sb.ALGORITHMS:
        params = sb.preset(algo, 200)
        result = sb.run_algorithm(corpus, 0, algo, budget=200, seed=11, params=params)
        ok(
            f"{algo} runs within budget",
            result["calls"] <= 200 and 0.0 <= result["best_f1"] <= 1.0,
        )
        repeat = sb.run_algorithm(corpus, 0, algo, budget=200, seed=11, params=params)
        ok(f"{algo} deterministic", repeat == result)

    # Lévy sampling stays above the location.
    draws = sb.levy_samples(5.0, 0.5, 1000, seed=3)
    ok("levy support", all(d > 5.0 for d in draws))

    # Mann-Whitney U on separated samples.
    u, p, significant = sb.mann_whitney_u([0.1, 0.2, 0.3, 0.25], [0.7, 0.8, 0.9, 0.85])
    ok("u test separates", u == 0.0 and p < 0.05 and significant)

    # A tiny tuning session.
    tuning, evaluation = corpus.split_tuning(2)
    ok("split partitions", tuning.total_words + evaluation.total_words == corpus.total_words)
    tuned = sb.tune(
        tuning,
        "csa",
        budget_per_run=50,
        seed=5,
        runs_per_candidate=4,
        meta_iterations=3,
        meta_nests=2,
    )
    ok("tuner returns params", "levy_scale" in tuned["params"])
    ok("tuner mean in range", 0.0 <= tuned["mean_f1"] <= 1.0)

    print(f"PASS ({checks} checks)")


if __name__ == "__main__":
    main()
