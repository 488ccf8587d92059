"""Complex files: strict JSON schema, parsing and deterministic serialisation.

Every number that is not an integer travels as a ``"p/q"`` string; JSON
floats are refused at parse time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

from .algebra.complex import ZERO_CLASS, ZERO_LABEL, ChainComplex, Generator, HomologyClass
from .algebra.rational import format_rational, parse_rational
from .errors import ParseError
from .filtration import FilteredComplex
from .orbits import OrbitSet, ReebOrbit, Side, build_morse_bott_complex, morse_bott_chain_complex

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$"}]}
_ENTRY = {
    "type": "object",
    "additionalProperties": False,
    "required": ["from", "to", "coeff"],
    "properties": {"from": {"type": "string"}, "to": {"type": "string"}, "coeff": _RATIONAL},
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["n"],
    "properties": {
        "name": {"type": "string"},
        "n": {"type": "integer"},
        "side": {"enum": ["symplectic", "contact_s1"]},
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["label"],
                "properties": {
                    "label": {"type": "string"},
                    "c1_pairing": {"type": "integer"},
                    "omega_energy": _RATIONAL,
                },
            },
        },
        "orbits": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "action", "mu"],
                "properties": {
                    "name": {"type": "string"},
                    "action": _RATIONAL,
                    "mu": {"type": "integer"},
                    "kappa": {"type": "integer", "minimum": 1},
                    "class": {"type": "string"},
                    "underlying_simple": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["name", "iterate"],
                        "properties": {"name": {"type": "string"}, "iterate": {"type": "integer", "minimum": 1}},
                    },
                    "parity_evidence": {
                        "type": "array",
                        "items": {"type": "integer"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "neg_eigencount": {"type": "integer", "minimum": 0},
                    "augmentation": _RATIONAL,
                },
            },
        },
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name", "degree"],
                "properties": {
                    "name": {"type": "string"},
                    "degree": {"type": "integer"},
                    "filtration": {"type": "integer"},
                    "class": {"type": "string"},
                    "novikov": {"type": "string"},
                },
            },
        },
        "differential": {"type": "array", "items": _ENTRY},
        "contact_differential": {"type": "array", "items": _ENTRY},
        "truncation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "excluded_from": {"type": ["integer", "null"]},
                "action_bound": _RATIONAL,
                "b_max": {"type": "integer"},
                "k_max": {"type": "integer"},
                "degree_offset": {"type": "integer"},
            },
        },
        "expected": {"type": "object"},
        "scenario": {"type": "object"},
    },
}


def _reject_float(text):
    raise ParseError(f"floating point number {text} in input; write rationals as \"p/q\" strings")


def loads(text: str) -> dict:
    try:
        data = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ParseError(f"schema violation at {where}: {exc.message}") from None
    return data


def load_path(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _entries(items):
    return tuple((e["from"], e["to"], parse_rational(e["coeff"])) for e in items or ())


@dataclass
class ComplexFile:
    """A parsed complex file.

    With ``orbits`` present the file describes a Morse-Bott complex; plain
    ``generators`` are then an extra block (such as constant orbits) glued
    onto it by the entries of ``differential`` that touch them.
    """

    name: str
    n: int
    side: Side
    classes: tuple
    orbit_set: OrbitSet | None
    generators: tuple
    differential: tuple
    contact_differential: tuple
    truncation: dict
    expected: dict = field(default_factory=dict)
    scenario: dict = field(default_factory=dict)

    @property
    def excluded_from(self):
        return self.truncation.get("excluded_from")

    def extra_names(self):
        return {g.name for g in self.generators}

    def morse_bott(self):
        """The orbit part as a MorseBottComplex; entries touching extra generators are left out."""
        extra = self.extra_names()
        data = [e for e in self.differential if e[0] not in extra and e[1] not in extra]
        return build_morse_bott_complex(
            self.orbit_set, self.side, data, self.contact_differential, self.excluded_from
        )

    def complex(self) -> ChainComplex:
        """The whole complex (orbit part plus extra generators); not validated."""
        if self.orbit_set is None:
            return ChainComplex(self.generators, self.differential)
        extra = self.extra_names()
        data = [e for e in self.differential if e[0] not in extra and e[1] not in extra]
        glue = [e for e in self.differential if e[0] in extra or e[1] in extra]
        mb, _, _ = morse_bott_chain_complex(self.orbit_set, self.side, data, self.contact_differential)
        return ChainComplex(mb.generators + tuple(self.generators), mb.entries + tuple(glue))

    def filtered(self) -> FilteredComplex:
        if self.orbit_set is not None:
            return self.morse_bott()
        return FilteredComplex(
            self.complex(),
            excluded_from=self.excluded_from,
            degree_offset=self.truncation.get("degree_offset", 0),
        )


def complex_file_from_dict(data: dict) -> ComplexFile:
    classes = tuple(
        HomologyClass(c["label"], c.get("c1_pairing", 0), parse_rational(c.get("omega_energy", 0)))
        for c in data.get("classes", ())
    ) or (ZERO_CLASS,)
    by_label = {c.label: c for c in classes}
    trunc = dict(data.get("truncation", {}))
    if "action_bound" in trunc:
        trunc["action_bound"] = parse_rational(trunc["action_bound"])
    orbit_set = None
    if data.get("orbits"):
        orbits = []
        for o in data["orbits"]:
            us = o.get("underlying_simple")
            orbits.append(
                ReebOrbit(
                    o["name"],
                    parse_rational(o["action"]),
                    o["mu"],
                    o.get("kappa", 1),
                    o.get("class", ZERO_LABEL),
                    (us["name"], us["iterate"]) if us else None,
                    tuple(o["parity_evidence"]) if "parity_evidence" in o else None,
                    o.get("neg_eigencount"),
                    parse_rational(o.get("augmentation", 0)),
                )
            )
        orbit_set = OrbitSet(orbits, data["n"], trunc.get("action_bound"), classes)
    gens = []
    for g in data.get("generators", ()):
        lbl = g.get("novikov", ZERO_LABEL)
        if lbl not in by_label:
            raise ParseError(f"generator {g['name']}: undeclared class {lbl!r}")
        gens.append(Generator(g["name"], g["degree"], g.get("filtration", 0), g.get("class", ZERO_LABEL), by_label[lbl]))
    return ComplexFile(
        data.get("name", ""),
        data["n"],
        Side(data.get("side", "symplectic")),
        classes,
        orbit_set,
        tuple(gens),
        _entries(data.get("differential")),
        _entries(data.get("contact_differential")),
        trunc,
        data.get("expected", {}),
        data.get("scenario", {}),
    )


def read_complex_file(path) -> ComplexFile:
    return complex_file_from_dict(load_path(path))


def _entry_json(entries):
    return [{"from": s, "to": t, "coeff": format_rational(c)} for s, t, c in entries]


def complex_file_to_dict(cf: ComplexFile) -> dict:
    out = {"name": cf.name, "n": cf.n, "side": cf.side.value}
    out["classes"] = [
        {"label": c.label, "c1_pairing": c.c1_pairing, "omega_energy": format_rational(c.omega_energy)}
        for c in cf.classes
    ]
    if cf.orbit_set is not None:
        orbits = []
        for o in cf.orbit_set.orbits:
            d = {"name": o.name, "action": format_rational(o.action), "mu": o.mu, "kappa": o.multiplicity, "class": o.class_label}
            if o.underlying_simple:
                d["underlying_simple"] = {"name": o.underlying_simple[0], "iterate": o.underlying_simple[1]}
            if o.parity_evidence is not None:
                d["parity_evidence"] = list(o.parity_evidence)
            if o.neg_eigencount is not None:
                d["neg_eigencount"] = o.neg_eigencount
            if o.augmentation:
                d["augmentation"] = format_rational(o.augmentation)
            orbits.append(d)
        out["orbits"] = orbits
    if cf.generators:
        out["generators"] = [
            {"name": g.name, "degree": g.degree, "filtration": g.filtration, "class": g.class_label, "novikov": g.novikov.label}
            for g in cf.generators
        ]
    out["differential"] = _entry_json(cf.differential)
    if cf.contact_differential:
        out["contact_differential"] = _entry_json(cf.contact_differential)
    trunc = dict(cf.truncation)
    if "action_bound" in trunc:
        trunc["action_bound"] = format_rational(trunc["action_bound"])
    out["truncation"] = trunc
    if cf.expected:
        out["expected"] = cf.expected
    if cf.scenario:
        out["scenario"] = cf.scenario
    return out


def chain_to_json(chain):
    return {nm: format_rational(c) for nm, c in sorted(chain.items())}


def dims_from_json(data):
    return {int(k): int(v) for k, v in data.items()}
