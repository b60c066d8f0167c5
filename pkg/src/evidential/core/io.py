"""
io.py

Reads and writes the mass-function interchange document:

    {"frame": ["a", "b"], "masses": {"a": 0.6, "a|b": 0.4}, "meta": {...}}

Floats go through `json`, which writes `repr(float)`; round trips are exact.
"""
from __future__ import absolute_import, annotations, division, print_function
import json
import os
from typing import Any, Optional, Sequence

from evidential.core.frame import Frame
from evidential.core.mass import MassFunction, mass_from_assignments
from evidential.errors import ValidationError


def mass_to_dict(m: MassFunction, meta: Optional[dict] = None) -> dict:
    doc: dict[str, Any] = {
        'frame': list(m.frame.labels),
        'masses': {m.frame.key(k): v for k, v in m.items()},
    }
    if meta:
        doc['meta'] = meta
    return doc


def mass_from_dict(doc: dict) -> MassFunction:
    try:
        frame = Frame(tuple(doc['frame']))
        masses = doc['masses']
    except (KeyError, TypeError) as exc:
        raise ValidationError(
            f'Mass document needs `frame` and `masses`: {doc!r}'
        ) from exc
    if not isinstance(masses, dict):
        raise ValidationError('`masses` must map focal-set keys to numbers')
    return mass_from_assignments(
        frame, [(frame.parse_key(k), v) for k, v in masses.items()]
    )


def dumps(m: MassFunction, meta: Optional[dict] = None) -> str:
    return json.dumps(mass_to_dict(m, meta))


def loads(text: str) -> MassFunction:
    return mass_from_dict(json.loads(text))


def save_masses(
        fpath: os.PathLike,
        masses: Sequence[MassFunction],
        metas: Optional[Sequence[Optional[dict]]] = None,
) -> None:
    """Write a collection file: a JSON list of mass documents."""
    if metas is None:
        metas = [None] * len(masses)
    docs = [mass_to_dict(m, meta) for m, meta in zip(masses, metas)]
    with open(fpath, 'w') as f:
        json.dump(docs, f, indent=1)
        f.write('\n')


def load_masses(fpath: os.PathLike) -> list[MassFunction]:
    with open(fpath, 'r') as f:
        docs = json.load(f)
    if isinstance(docs, dict):
        docs = [docs]
    return [mass_from_dict(doc) for doc in docs]
