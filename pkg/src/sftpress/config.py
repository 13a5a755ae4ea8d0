"""Structured JSON configs describing systems, potentials and named points.

One file describes one system.  Grammar (all keys lowercase):

    {
      "label": "golden-mean",
      "kind": "sft" | "map",
      "sft":  {"alphabet_size": 2, "transitions": [[1,1],[1,0]]},
      "map":  {"times_k": 3}
            | {"branches": [{"lo": "0", "hi": "1/2",
                             "slope": "2", "offset": "0"}, ...]},
      "potential": {"depth": 1, "values": {"0": 0.0, "1": 0.693...}}
                 | "log-slope"          (maps only; the default for maps)
                 | omitted              (zero potential),
      "points": {"z0": {"preperiod": "", "period": "0"}, ...}
    }

Rationals are strings "p/q"; words are literals like "0110" (or
comma-separated "10,2" for wide alphabets).  Serialization round-trips:
dump(load(f)) parses back to an identical structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .sft import EventuallyPeriodicPoint, Sft, eventually_periodic, format_word
from .potentials import Potential
from .maps import Branch, PiecewiseLinearMarkovMap, code_map, times_k
from .moran import MoranParams


@dataclass(frozen=True, eq=False)
class SystemSpec:
    label: str
    kind: str
    sft: Sft
    phi: Potential
    points: dict
    pl_map: Optional[PiecewiseLinearMarkovMap] = None
    symbol_names: Optional[tuple] = None
    raw: Optional[dict] = None

    def point(self, name: str) -> EventuallyPeriodicPoint:
        if name not in self.points:
            raise ValueError(
                f"unknown point {name!r}; defined: {sorted(self.points)}")
        return self.points[name]


def _fraction(text) -> Fraction:
    return Fraction(text) if isinstance(text, str) else Fraction(text)


def load_system(path: str) -> SystemSpec:
    with open(path) as handle:
        data = json.load(handle)
    return system_from_dict(data)


def system_from_dict(data: dict) -> SystemSpec:
    label = data.get("label", "system")
    kind = data.get("kind")
    if kind not in ("sft", "map"):
        raise ValueError(f"kind must be 'sft' or 'map', got {kind!r}")

    pl_map = None
    names = None
    if kind == "sft":
        block = data.get("sft")
        if not isinstance(block, dict):
            raise ValueError("kind 'sft' needs an 'sft' block")
        matrix = np.asarray(block["transitions"], dtype=np.uint8)
        size = int(block.get("alphabet_size", matrix.shape[0]))
        if matrix.shape != (size, size):
            raise ValueError(
                f"transition matrix shape {matrix.shape} does not match "
                f"alphabet_size {size}")
        if "symbols" in block:
            names = tuple(str(s) for s in block["symbols"])
            if len(names) != size:
                raise ValueError(f"{len(names)} symbol names for {size} symbols")
        sft = Sft(matrix, label=label)
    else:
        block = data.get("map")
        if not isinstance(block, dict):
            raise ValueError("kind 'map' needs a 'map' block")
        if "times_k" in block:
            pl_map = times_k(int(block["times_k"]))
        else:
            branches = tuple(
                Branch(_fraction(b["lo"]), _fraction(b["hi"]),
                       _fraction(b["slope"]), _fraction(b["offset"]))
                for b in block["branches"]
            )
            pl_map = PiecewiseLinearMarkovMap(branches, label=label)
        sft, _ = code_map(pl_map)
        sft = Sft(sft.transitions, label=label)

    pot = data.get("potential")
    if pot is None:
        phi = Potential.zero(sft)
    elif pot == "log-slope":
        if pl_map is None:
            raise ValueError("'log-slope' potential needs kind 'map'")
        _, phi = code_map(pl_map)
    elif isinstance(pot, dict):
        phi = Potential.from_table(sft, int(pot.get("depth", 1)),
                                   pot.get("values", {}),
                                   default=pot.get("default"),
                                   label=pot.get("label", "phi"))
    else:
        raise ValueError(f"bad potential block: {pot!r}")

    points = {}
    for name, spec in data.get("points", {}).items():
        points[name] = eventually_periodic(spec.get("preperiod", ""),
                                           spec["period"])

    return SystemSpec(label, kind, sft, phi, points, pl_map,
                      symbol_names=names, raw=data)


def system_to_dict(spec: SystemSpec) -> dict:
    out = {"label": spec.label, "kind": spec.kind}
    if spec.kind == "sft":
        out["sft"] = {
            "alphabet_size": spec.sft.alphabet_size,
            "transitions": spec.sft.transitions.astype(int).tolist(),
        }
        if spec.symbol_names:
            out["sft"]["symbols"] = list(spec.symbol_names)
    else:
        raw_map = spec.raw.get("map") if spec.raw else None
        if raw_map and "times_k" in raw_map:
            out["map"] = {"times_k": int(raw_map["times_k"])}
        else:
            out["map"] = {"branches": [
                {"lo": str(b.lo), "hi": str(b.hi),
                 "slope": str(b.slope), "offset": str(b.offset)}
                for b in spec.pl_map.branches
            ]}
    raw_pot = spec.raw.get("potential") if spec.raw else None
    if raw_pot == "log-slope":
        out["potential"] = "log-slope"
    elif raw_pot is not None:
        out["potential"] = {
            "depth": spec.phi.depth,
            "values": {format_word(w): v for w, v in spec.phi.values.items()},
        }
    if spec.points:
        out["points"] = {
            name: {"preperiod": format_word(p.preperiod),
                   "period": format_word(p.period)}
            for name, p in spec.points.items()
        }
    return out


def load_moran_params(path: str, spec: SystemSpec) -> MoranParams:
    """Construction constants; z0 and y refer to named points of the system."""
    with open(path) as handle:
        data = json.load(handle)
    try:
        return MoranParams(
            e=int(data["e"]),
            e0=int(data["e0"]),
            eta=float(data["eta"]),
            C=float(data["C"]),
            M=int(data["M"]),
            m=int(data["m"]),
            n_seq=tuple(int(n) for n in data["n_seq"]),
            N_seq=tuple(int(N) for N in data["N_seq"]),
            z0=spec.point(data.get("z0", "z0")),
            y=spec.point(data.get("y", "y")),
            y_visit_len=int(data.get("y_visit_len", 1)),
        )
    except KeyError as err:
        raise ValueError(f"moran params file is missing key {err}") from None
