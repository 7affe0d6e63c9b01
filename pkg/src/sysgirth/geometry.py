"""Surface-group words as isometries of the upper half-plane.

A representation assigns SL(2, R) matrices to x, y, x' (letter ``a``) and
y' (letter ``b``); a word evaluates to the product of its letters' matrices
in reading order.  Matrices are compared up to sign, since PSL(2, R) is
what acts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .baumslag import SurfaceAction
from .words import RELATOR, U, V, enumerate_ball

DEFAULT_TOLERANCE = 1e-8
HYPERBOLIC_TOL = 1e-9

BOLZA_SYSTOLE = 2 * math.acosh(1 + math.sqrt(2))
_KEYS = {"x": "x", "y": "y", "a": "x_prime", "b": "y_prime"}


class RepError(ValueError):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


class NotHyperbolicError(ValueError):
    pass


def normalize(M: np.ndarray) -> np.ndarray:
    """Rescale to determinant 1 (the determinant must be positive)."""
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if det <= 0:
        raise ValueError(f"determinant {det} is not positive")
    return M / math.sqrt(det)


def sign_distance(A: np.ndarray, B: np.ndarray) -> float:
    """max-entry distance between A and the nearer of B, -B."""
    return float(min(np.abs(A - B).max(), np.abs(A + B).max()))


@dataclass(frozen=True, eq=False)
class FuchsianRep:
    matrices: dict  # letter -> 2x2 array, inverses included
    tolerance: float = DEFAULT_TOLERANCE

    def word_matrix(self, word: str) -> np.ndarray:
        M = np.eye(2)
        for c in word:
            M = normalize(M @ self.matrices[c])
        return M

    def relator_residual(self) -> float:
        return sign_distance(self.word_matrix(RELATOR), np.eye(2))

    def to_config(self) -> dict:
        cfg = {name: self.matrices[c].reshape(4).tolist() for c, name in _KEYS.items()}
        cfg["tolerance"] = self.tolerance
        return cfg


def bolza_config() -> dict:
    """Generators of the Bolza surface group.

    With g_j the translation of length s along the axis through i at angle
    j*pi/4 (s the Bolza systole), the standard octagon pairings satisfy
    g0 g3 g2^-1 g1 g0^-1 g3^-1 g2 g1^-1 = 1, and x = g0, y = g3,
    x' = g3 g0 g2^-1, y' = g1 g2^-1 turn this into [x, y][x', y'] = 1.
    """
    def rot(phi):
        c, s = math.cos(phi / 2), math.sin(phi / 2)
        return np.array([[c, s], [-s, c]])
    D = np.diag([math.exp(BOLZA_SYSTOLE / 2), math.exp(-BOLZA_SYSTOLE / 2)])
    g = [rot(j * math.pi / 4) @ D @ rot(-j * math.pi / 4) for j in range(4)]
    inv = np.linalg.inv
    mats = {"x": g[0], "y": g[3], "a": g[3] @ g[0] @ inv(g[2]), "b": g[1] @ inv(g[2])}
    cfg = {name: mats[c].reshape(4).tolist() for c, name in _KEYS.items()}
    cfg["tolerance"] = DEFAULT_TOLERANCE
    return cfg


def load_rep(config: dict | str | Path | None = None) -> FuchsianRep:
    """Validated representation from a config dict or JSON file; the Bolza
    surface when no config is given."""
    if config is None:
        config = bolza_config()
    elif not isinstance(config, dict):
        config = json.loads(Path(config).read_text())
    tol = float(config.get("tolerance", DEFAULT_TOLERANCE))
    mats = {}
    problems = []
    for c, name in _KEYS.items():
        try:
            M = np.asarray(config[name], dtype=float).reshape(2, 2)
        except (KeyError, ValueError) as exc:
            raise RepError([f"missing or malformed matrix {name!r}: {exc}"]) from exc
        det = np.linalg.det(M)
        if det <= 0:
            raise RepError([f"det({name}) = {det:.6g} is not positive"])
        M = normalize(M)
        mats[c] = M
        if abs(np.trace(M)) <= 2 + HYPERBOLIC_TOL:
            problems.append(f"{name} is not hyperbolic (|trace| = {abs(np.trace(M)):.12g})")
    for c in "xyab":
        M = mats[c]
        mats[c.upper()] = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])
    rep = FuchsianRep(mats, tol)
    residual = rep.relator_residual()
    if residual > tol:
        problems.append(f"relator residual {residual:.3g} exceeds tolerance {tol:g}")
    if problems:
        raise RepError(problems)
    return rep


def translation_length(M: np.ndarray, tol: float = HYPERBOLIC_TOL) -> float:
    t = abs(float(np.trace(M)))
    if t <= 2 + tol:
        raise NotHyperbolicError(f"|trace| = {t} is not above 2")
    return 2 * math.acosh(t / 2)


def moebius(M: np.ndarray, z: complex) -> complex:
    return (M[0, 0] * z + M[0, 1]) / (M[1, 0] * z + M[1, 1])


def hyperbolic_distance(z: complex, w: complex) -> float:
    return math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def displacement(M: np.ndarray, p: complex = 1j) -> float:
    return hyperbolic_distance(p, moebius(M, p))


class Bound(NamedTuple):
    upper_bound: float
    witness: str
    cutoff: int

    def to_dict(self) -> dict:
        return self._asdict()


def systole_upper_bound(rep: FuchsianRep, action: SurfaceAction, cutoff: int,
                        extra_words=()) -> Bound:
    """Least translation length over nontrivial base-stabilizing elements of
    word length <= cutoff (and any stabilizing ``extra_words``).  Each such
    element is a closed geodesic of the cover, so this bounds its systole
    from above."""
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    best: tuple[float, str] | None = None
    candidates = [e.word for e in enumerate_ball(cutoff) if e.length]
    candidates += [w for w in extra_words if w]
    for w in candidates:
        if not action.contains(w):
            continue
        t = translation_length(rep.word_matrix(w))
        if best is None or t < best[0] - 1e-12:
            best = (t, w)
    if best is None:
        raise LookupError(f"no stabilizing element of length <= {cutoff}")
    return Bound(best[0], best[1], cutoff)


class MilnorSchwarz(NamedTuple):
    q: float
    beta: float
    radius: int


def milnor_schwarz_frontier(rep: FuchsianRep, radius: int, p: complex = 1j):
    """(word length, displacement of p) for every element of the ball."""
    return [(e.length, displacement(rep.word_matrix(e.word), p)) for e in enumerate_ball(radius)]


def estimate_milnor_schwarz(rep: FuchsianRep, radius: int, grid: float = 1e-3) -> MilnorSchwarz:
    """Constants with l/q - beta <= d(p, g p) <= q l + beta on the whole ball.

    For every q the least admissible beta is explicit, and beta = 0 becomes
    admissible once q reaches the largest ratio d/l or l/d; the smallest beta
    is taken first and then the smallest q on the grid.  Valid for the
    sampled ball only.
    """
    if radius < 2:
        raise ValueError("radius must be at least 2")
    data = [(l, d) for l, d in milnor_schwarz_frontier(rep, radius) if l]
    q = max(max(d / l, l / d) for l, d in data)
    q = math.ceil(q / grid) * grid
    beta = max(0.0, max(max(l / q - d, d - q * l) for l, d in data))
    return MilnorSchwarz(q, beta, radius)


def min_beta(rep: FuchsianRep, radius: int, q: float) -> float:
    """Least beta that works on the ball for a fixed q."""
    data = milnor_schwarz_frontier(rep, radius)
    return max(0.0, max(max(l / q - d, d - q * l) for l, d in data))


def commutator_check(rep: FuchsianRep) -> float:
    """Distance between the matrices of u and v up to sign."""
    return sign_distance(rep.word_matrix(U), rep.word_matrix(V))


def genus_of_cover(n: int) -> int:
    """Genus of a degree-n cover of a genus-2 surface (chi multiplies by n)."""
    if n < 1:
        raise ValueError("degree must be positive")
    return n + 1
