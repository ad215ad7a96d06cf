"""Minimal optical circuit producing general pure n-mode Gaussian states.

Mode 1 and 2 are squeezed in orthogonal quadratures and mixed on a 50:50
beam splitter.  Each further mode k is squeezed and then coupled to every
mode i = 2..k-1 in ascending order by a beam splitter followed by a
seraphique; the last pair (n-1, n) gets no seraphique.  For n >= 3 this
uses exactly n^2 - 2n parameters.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import gstate
from .errors import BadModeIndex, BadParamShape, NonPositiveSqueeze, TooFewModes
from .symplectic import beam_splitter, embed, phase_shifter, seraphique, squeezer

KINDS = ("squeezer", "beam_splitter", "seraphique", "phase_shifter")


@dataclass(frozen=True)
class CircuitElement:
    kind: str
    modes: tuple  # 1-based
    value: float = 0.0  # z for squeezers, theta for two-mode elements

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        want = 2 if self.kind in ("beam_splitter", "seraphique") else 1
        if len(self.modes) != want or len(set(self.modes)) != want:
            raise BadModeIndex(f"{self.kind} needs {want} distinct modes, got {self.modes}")
        if self.kind == "squeezer" and not self.value > 0:
            raise NonPositiveSqueeze(f"squeezing factor must be positive, got {self.value}")

    def matrix(self):
        if self.kind == "squeezer":
            return squeezer(self.value)
        if self.kind == "phase_shifter":
            return phase_shifter()
        if self.kind == "beam_splitter":
            return beam_splitter(self.value)
        return seraphique(self.value)

    def to_dict(self):
        if self.kind == "squeezer":
            return {"kind": "squeezer", "mode": self.modes[0], "z": self.value}
        if self.kind == "phase_shifter":
            return {"kind": "phase_shifter", "mode": self.modes[0]}
        return {"kind": self.kind, "i": self.modes[0], "k": self.modes[1], "theta": self.value}

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == "squeezer":
            return cls(kind, (int(d["mode"]),), float(d["z"]))
        if kind == "phase_shifter":
            return cls(kind, (int(d["mode"]),))
        return cls(kind, (int(d["i"]), int(d["k"])), float(d["theta"]))


@dataclass(frozen=True)
class Circuit:
    n: int
    elements: tuple = ()

    def __post_init__(self):
        for el in self.elements:
            if max(el.modes) > self.n or min(el.modes) < 1:
                raise BadModeIndex(f"element {el} outside 1..{self.n}")

    def inverse(self):
        """Reversed circuit of inverse elements (phase shifters become three quarter turns)."""
        out = []
        for el in reversed(self.elements):
            if el.kind == "squeezer":
                out.append(CircuitElement("squeezer", el.modes, 1.0 / el.value))
            elif el.kind == "phase_shifter":
                out.extend([el, el, el])
            else:
                out.append(CircuitElement(el.kind, el.modes, -el.value))
        return Circuit(self.n, tuple(out))

    def to_dict(self):
        return {"n": self.n, "elements": [el.to_dict() for el in self.elements]}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n"]), tuple(CircuitElement.from_dict(e) for e in d["elements"]))


def _pairs(n):
    return [(i, k) for k in range(3, n + 1) for i in range(2, k)]


@dataclass
class SchemeParams:
    """Free parameters of the scheme.

    ``r`` maps mode k (3..n) to its squeezing factor; ``b`` and ``c`` map
    mode pairs ``(i, k)`` to beam-splitter and seraphique angles.  Squeezing
    is multiplicative with neutral value 1.
    """

    s: float
    r: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)
    c: dict = field(default_factory=dict)
    n: int = 2

    def __post_init__(self):
        n = self.n
        if n < 2:
            raise TooFewModes("the scheme needs at least two modes")
        pairs = _pairs(n)
        want_c = [p for p in pairs if p != (n - 1, n)]
        if sorted(self.r) != list(range(3, n + 1)):
            raise BadParamShape(f"expected squeezings for modes 3..{n}, got {sorted(self.r)}")
        if sorted(self.b) != sorted(pairs):
            raise BadParamShape("beam-splitter angles do not match the mode pairs")
        if sorted(self.c) != sorted(want_c):
            raise BadParamShape("seraphique angles do not match the mode pairs")
        if not self.s > 0 or any(not v > 0 for v in self.r.values()):
            raise NonPositiveSqueeze("squeezing factors must be positive")

    @property
    def count(self):
        return 1 + len(self.r) + len(self.b) + len(self.c)

    @classmethod
    def neutral(cls, n):
        pairs = _pairs(n)
        return cls(1.0, {k: 1.0 for k in range(3, n + 1)}, {p: 0.0 for p in pairs},
                   {p: 0.0 for p in pairs if p != (n - 1, n)}, n)

    @classmethod
    def random(cls, n, rng, squeeze=(1.0, 2.5), angles=(0.0, 2 * math.pi), seraphique_angles=None):
        """Draw parameters uniformly: squeezing factors in ``squeeze``, angles in ``angles``."""
        pairs = _pairs(n)
        lo, hi = squeeze
        ser = angles if seraphique_angles is None else seraphique_angles
        s = float(rng.uniform(lo, hi))
        r = {k: float(rng.uniform(lo, hi)) for k in range(3, n + 1)}
        b = {p: float(rng.uniform(*angles)) for p in pairs}
        c = {p: float(rng.uniform(*ser)) for p in pairs if p != (n - 1, n)}
        return cls(s, r, b, c, n)

    def to_dict(self):
        return {
            "n": self.n,
            "s": self.s,
            "r": {str(k): v for k, v in sorted(self.r.items())},
            "b": {f"{i},{k}": v for (i, k), v in sorted(self.b.items())},
            "c": {f"{i},{k}": v for (i, k), v in sorted(self.c.items())},
        }

    @classmethod
    def from_dict(cls, d):
        def pair(key):
            i, k = key.split(",")
            return int(i), int(k)

        return cls(float(d["s"]), {int(k): float(v) for k, v in d.get("r", {}).items()},
                   {pair(k): float(v) for k, v in d.get("b", {}).items()},
                   {pair(k): float(v) for k, v in d.get("c", {}).items()}, int(d["n"]))


def build_scheme(params):
    n = params.n
    els = [
        CircuitElement("squeezer", (1,), params.s),
        CircuitElement("squeezer", (2,), 1.0 / params.s),
        CircuitElement("beam_splitter", (1, 2), math.pi / 4),
    ]
    for k in range(3, n + 1):
        els.append(CircuitElement("squeezer", (k,), params.r[k]))
        for i in range(2, k):
            els.append(CircuitElement("beam_splitter", (i, k), params.b[(i, k)]))
            if (i, k) != (n - 1, n):
                els.append(CircuitElement("seraphique", (i, k), params.c[(i, k)]))
    return Circuit(n, tuple(els))


def circuit_to_symplectic(circuit):
    """Product ``E1 @ E2 @ ...`` of the embedded elements in circuit order."""
    out = np.eye(2 * circuit.n)
    for el in circuit.elements:
        out = out @ embed(el.matrix(), list(el.modes), circuit.n)
    return out


def apply_scheme(params):
    s = circuit_to_symplectic(build_scheme(params))
    return gstate.validate_cm(s.T @ s)


def scheme_param_count(n):
    """``(pair squeezing, single squeezings, beam splitters, seraphiques)``; sums to n^2 - 2n."""
    if n < 3:
        raise TooFewModes("the parameter count applies for n >= 3")
    parts = (1, n - 2, (n - 1) * (n - 2) // 2, n * (n - 3) // 2)
    assert sum(parts) == n * n - 2 * n
    return parts
