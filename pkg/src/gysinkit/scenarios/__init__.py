"""Worked examples as runnable scenarios, closed-form verifiers and the shipped corpus."""

from .corpus import build_corpus, corpus_dir, find_scenario, verify_all
from .examples import (
    BaseMorse,
    BettiInput,
    Scenario,
    cotangent_gysin,
    disc_bundle,
    riemann_surface,
    sphere_base,
    subcritical_model,
    subcritical_stein,
    torus_base,
)
from .pipeline import run_scenario

__all__ = [
    "BaseMorse",
    "BettiInput",
    "Scenario",
    "build_corpus",
    "corpus_dir",
    "cotangent_gysin",
    "disc_bundle",
    "find_scenario",
    "riemann_surface",
    "run_scenario",
    "sphere_base",
    "subcritical_model",
    "subcritical_stein",
    "torus_base",
    "verify_all",
]
