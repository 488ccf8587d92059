"""The shipped scenario corpus, its golden reports and batch verification."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..errors import GysinError
from ..io import complex_file_to_dict, dumps, read_complex_file
from .examples import disc_bundle, riemann_surface, sphere_base, subcritical_model, torus_base
from .pipeline import run_scenario

ENV_VAR = "GYSIN_CORPUS_DIR"
GOLDEN_SUFFIX = ".golden.json"


def default_corpus_dir() -> Path:
    return Path(__file__).with_name("corpus")


def corpus_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else default_corpus_dir()


def shipped_scenarios():
    return [
        riemann_surface(0, 5),
        riemann_surface(1, 4),
        subcritical_model({4: 1}, 2, 5, name="subcritical-ball"),
        disc_bundle(torus_base(), 4, name="discbundle-T2"),
        disc_bundle(sphere_base(), 4, name="discbundle-S2"),
    ]


def build_corpus(directory=None):
    """Write every shipped scenario and its golden report; returns the written paths."""
    directory = Path(directory or default_corpus_dir())
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for sc in shipped_scenarios():
        path = directory / f"{sc.name}.json"
        path.write_text(dumps(complex_file_to_dict(sc)), encoding="utf-8")
        golden = directory / f"{sc.name}{GOLDEN_SUFFIX}"
        golden.write_text(dumps(run_scenario(read_complex_file(path))), encoding="utf-8")
        written += [path, golden]
    return written


def scenario_paths(directory=None):
    directory = Path(directory or corpus_dir())
    if not directory.is_dir():
        return []
    return sorted(p for p in directory.glob("*.json") if not p.name.endswith(GOLDEN_SUFFIX))


def find_scenario(name, directory=None):
    for p in scenario_paths(directory):
        if p.stem == name:
            return p
    return None


def _verify_one(path: Path):
    entry = {"name": path.stem, "file": path.name}
    try:
        report = run_scenario(read_complex_file(path))
    except GysinError as exc:
        entry.update({"ok": False, "error": f"{type(exc).__name__}: {exc}"})
        return entry
    entry["checks_failed"] = [c["name"] for c in report["checks"] if not c["ok"]]
    golden = path.with_name(path.stem + GOLDEN_SUFFIX)
    if golden.exists():
        text = golden.read_text(encoding="utf-8")
        entry["golden"] = "match" if text == dumps(report) else "mismatch"
    else:
        entry["golden"] = "missing"
    entry["ok"] = report["ok"] and entry["golden"] != "mismatch"
    return entry


def verify_all(directory=None, workers=None):
    """Run every scenario in the corpus concurrently; results are ordered by name."""
    directory = Path(directory or corpus_dir())
    paths = scenario_paths(directory)
    warnings = []
    if not paths:
        warnings.append(f"no scenarios found in {directory}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_verify_one, paths))
    results.sort(key=lambda e: e["name"])
    return {
        "corpus": "default" if directory == default_corpus_dir() else str(directory),
        "scenarios": results,
        "failed": [e["name"] for e in results if not e["ok"]],
        "warnings": warnings,
        "ok": all(e["ok"] for e in results),
    }
