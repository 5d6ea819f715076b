"""Self-describing JSON documents for rings, chains, functions,
presentations, schedules and simulation configs.

Every document is an object with a ``kind`` field.  Chain probabilities
are stored as decimal strings so published 4-decimal matrices survive a
round trip exactly; rows are renormalized at load time, never in the
stored document.  Nested references (a presentation's ring, a sim
config's source) may be inline documents or string paths relative to the
referencing file.
"""

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .functions import FunctionSpec, Presentation
from .markov import MarkovChain
from .rings import FiniteRing, make_modular_ring, make_product_ring, make_table_ring, make_triangular_ring
from .simulate import SimConfig

__all__ = [
    "DocumentError",
    "load_document",
    "load_path",
    "dump_document",
    "ring_to_doc",
    "ring_from_doc",
    "chain_to_doc",
    "chain_from_doc",
    "function_to_doc",
    "function_from_doc",
    "presentation_to_doc",
    "presentation_from_doc",
    "path_to_doc",
    "path_from_doc",
    "schedule_to_doc",
    "schedule_from_doc",
    "simconfig_from_doc",
]


class DocumentError(ValueError):
    """Raised for malformed or mismatched documents."""


def _require(doc: dict, key: str, kind: str):
    if key not in doc:
        raise DocumentError(f"{kind} document is missing {key!r}")
    return doc[key]


# ---------------------------------------------------------------- rings


def ring_to_doc(ring: FiniteRing, kind_hint: dict | None = None) -> dict:
    """Serialize a ring.  Without a construction hint the full tables are
    written (kind \"table\")."""
    if kind_hint:
        return dict(kind_hint)
    return {
        "kind": "ring",
        "construction": "table",
        "labels": ring.labels,
        "add": ring.add.tolist(),
        "mul": ring.mul.tolist(),
        "zero": ring.zero,
        "one": ring.one,
        "description": ring.description,
    }


def modular_ring_doc(q: int) -> dict:
    return {"kind": "ring", "construction": "modular", "q": q}


def triangular_ring_doc(p: int) -> dict:
    return {"kind": "ring", "construction": "triangular", "p": p}


def ring_from_doc(doc: dict) -> FiniteRing:
    construction = _require(doc, "construction", "ring")
    if construction == "modular":
        return make_modular_ring(int(_require(doc, "q", "ring")))
    if construction == "triangular":
        return make_triangular_ring(int(_require(doc, "p", "ring")))
    if construction == "product":
        factors = [ring_from_doc(f) for f in _require(doc, "factors", "ring")]
        return make_product_ring(*factors)
    if construction == "table":
        return make_table_ring(
            _require(doc, "labels", "ring"),
            _require(doc, "add", "ring"),
            _require(doc, "mul", "ring"),
            int(_require(doc, "zero", "ring")),
            int(_require(doc, "one", "ring")),
            doc.get("description", "table ring"),
        )
    raise DocumentError(f"unknown ring construction {construction!r}")


# ---------------------------------------------------------------- chains


def _state_to_json(state):
    return list(state) if isinstance(state, tuple) else state


def _state_from_json(state):
    return tuple(state) if isinstance(state, list) else state


def chain_to_doc(chain: MarkovChain, decimals: int = 12) -> dict:
    rows = [[f"{v:.{decimals}f}" for v in row] for row in chain.P]
    return {
        "kind": "chain",
        "states": [_state_to_json(s) for s in chain.states],
        "rows": rows,
    }


def chain_doc(states, rows) -> dict:
    """Chain document from decimal-string rows, stored verbatim."""
    return {
        "kind": "chain",
        "states": [_state_to_json(s) for s in states],
        "rows": [[str(v) for v in row] for row in rows],
    }


def chain_from_doc(doc: dict) -> MarkovChain:
    states = [_state_from_json(s) for s in _require(doc, "states", "chain")]
    rows = _require(doc, "rows", "chain")
    try:
        return MarkovChain.from_decimal_rows(rows, states=states)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad chain document: {exc}") from exc


# ---------------------------------------------------------------- paths


def path_to_doc(path, source_doc: dict | None = None) -> dict:
    """Serialize a sampled path; ``source_doc`` records where it came from."""
    doc = {"kind": "path", "states": [int(v) for v in path]}
    if source_doc is not None:
        doc["source"] = source_doc
    return doc


def path_from_doc(doc: dict, base: Path | None = None):
    """Returns (state-index array, source object or None)."""
    states = np.asarray(_require(doc, "states", "path"), dtype=np.int64)
    source = doc.get("source")
    if isinstance(source, str):
        source = load_path(_resolve(source, base))
    elif isinstance(source, dict):
        source = load_document(source, base)
    return states, source


# ---------------------------------------------------------------- schedules


def schedule_to_doc(chains, init=None) -> dict:
    doc = {"kind": "schedule", "chains": [chain_to_doc(c) for c in chains]}
    if init is not None:
        doc["init"] = [str(v) for v in init]
    return doc


def schedule_from_doc(doc: dict):
    chains = [chain_from_doc(c) for c in _require(doc, "chains", "schedule")]
    init = doc.get("init")
    if init is not None:
        init = np.array([float(Fraction(str(v))) for v in init])
        init = init / init.sum()
    return chains, init


# ---------------------------------------------------------------- functions


def function_to_doc(g: FunctionSpec) -> dict:
    return {
        "kind": "function",
        "domains": [list(d) for d in g.domains],
        "codomain": list(g.codomain),
        "table": g.table.reshape(-1).tolist(),
    }


def function_from_doc(doc: dict) -> FunctionSpec:
    domains = _require(doc, "domains", "function")
    codomain = _require(doc, "codomain", "function")
    flat = np.asarray(_require(doc, "table", "function"), dtype=np.int64)
    shape = tuple(len(d) for d in domains)
    if flat.size != int(np.prod(shape)):
        raise DocumentError("function table size does not match the domains")
    return FunctionSpec(domains, codomain, flat.reshape(shape))


# ---------------------------------------------------------------- presentations


def presentation_to_doc(p: Presentation, ring_doc: dict | None = None) -> dict:
    return {
        "kind": "presentation",
        "ring": ring_doc or ring_to_doc(p.ring),
        "maps": [m.tolist() for m in p.maps],
        "h": {str(k): v for k, v in p.h.items()},
    }


def presentation_from_doc(doc: dict, base: Path | None = None) -> Presentation:
    ring_ref = _require(doc, "ring", "presentation")
    if isinstance(ring_ref, str):
        ring = ring_from_doc(_read_json(_resolve(ring_ref, base)))
    else:
        ring = ring_from_doc(ring_ref)
    maps = _require(doc, "maps", "presentation")
    h = {int(k): int(v) for k, v in _require(doc, "h", "presentation").items()}
    return Presentation(ring, maps, h)


# ---------------------------------------------------------------- sim configs


def simconfig_from_doc(doc: dict, base: Path | None = None) -> SimConfig:
    def resolve(ref, loader):
        if isinstance(ref, str):
            return loader(_read_json(_resolve(ref, base)))
        return loader(ref)

    ring = resolve(_require(doc, "ring", "simconfig"), ring_from_doc)
    kwargs = {
        "ring": ring,
        "n": int(_require(doc, "n", "simconfig")),
        "k": int(_require(doc, "k", "simconfig")),
        "trials": int(_require(doc, "trials", "simconfig")),
        "seed": int(doc.get("seed", 0)),
        "decoder": doc.get("decoder", "ml"),
        "eps": float(doc.get("eps", 0.3)),
    }
    if "budget" in doc:
        kwargs["budget"] = int(doc["budget"])
    if "function" in doc:
        kwargs["function"] = resolve(doc["function"], function_from_doc)
    if "presentation" in doc:
        pres_ref = doc["presentation"]
        if isinstance(pres_ref, str):
            kwargs["presentation"] = presentation_from_doc(
                _read_json(_resolve(pres_ref, base)), base
            )
        else:
            kwargs["presentation"] = presentation_from_doc(pres_ref, base)
    computing = "presentation" in kwargs
    source = _require(doc, "source", "simconfig")
    if isinstance(source, str):
        source = _read_json(_resolve(source, base))
    kind = _require(source, "kind", "simconfig source")
    if kind == "chain":
        kwargs["joint" if computing else "chain"] = chain_from_doc(source)
    elif kind == "schedule":
        chains, _ = schedule_from_doc(source)
        kwargs["schedule"] = chains
    else:
        raise DocumentError(f"unsupported simconfig source kind {kind!r}")
    if kwargs.get("schedule") is not None and not computing:
        raise DocumentError("schedule sources are only supported for computing runs")
    try:
        return SimConfig(**kwargs)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


# ---------------------------------------------------------------- generic I/O


def _read_json(path: Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not valid JSON ({exc})") from exc
    except OSError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def _resolve(ref: str, base: Path | None) -> Path:
    p = Path(ref)
    if not p.is_absolute() and base is not None:
        p = Path(base) / p
    return p


_LOADERS = {
    "ring": lambda doc, base: ring_from_doc(doc),
    "chain": lambda doc, base: chain_from_doc(doc),
    "schedule": lambda doc, base: schedule_from_doc(doc),
    "function": lambda doc, base: function_from_doc(doc),
    "presentation": presentation_from_doc,
    "simconfig": simconfig_from_doc,
    "path": path_from_doc,
}


def load_document(doc: dict, base: Path | None = None):
    """Instantiate whatever object a document describes."""
    kind = _require(doc, "kind", "document")
    if kind not in _LOADERS:
        raise DocumentError(f"unknown document kind {kind!r}")
    return _LOADERS[kind](doc, base)


def load_path(path) -> object:
    """Read a JSON document file and instantiate it."""
    path = Path(path)
    return load_document(_read_json(path), base=path.parent)


def dump_document(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
