"""Retractions of the genus-2 surface group onto F2 that are injective on balls.

For l >= 1 the map fixing x, y and sending a -> u^l y u^-l, b -> u^l x u^-l
kills the relator xyXY abAB, so it is a homomorphism SG2 -> F2 restricting to
the identity on F2.  With l = 7k its kernel misses every element of word
length 2..k, and it stretches lengths by at most 63k.  Pulling a finite-index
subgroup of F2 back along it gives a subgroup of SG2 of the same index whose
short elements are controlled by both facts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .schreier import SchreierAction
from .words import (
    RELATOR, SURFACE_LETTERS, SurfaceWord, enumerate_ball, in_cyclic_u, inverse, reduce,
    surface_equal, u_power,
)

DEFAULT_D = 7
DEFAULT_EPSILON = 63


class PsiPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PsiMap:
    """The retraction with conjugating exponent l = d*k."""

    k: int
    d: int = DEFAULT_D
    epsilon: int = DEFAULT_EPSILON
    images: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        ul, ui = u_power(self.l), u_power(-self.l)
        img = {"x": "x", "y": "y", "a": reduce(ul + "y" + ui), "b": reduce(ul + "x" + ui)}
        for c in "xyab":
            img[c.upper()] = inverse(img[c])
        object.__setattr__(self, "images", img)

    @property
    def l(self) -> int:
        return self.d * self.k


def psi_apply(psi: PsiMap, w: str | SurfaceWord) -> str:
    """Image of a surface word in F2, freely reduced."""
    return reduce("".join(psi.images[c] for c in str(w)))


def in_free_factor(w: str | SurfaceWord) -> bool:
    """Does the element lie in the subgroup generated by x and y?

    Any retraction onto F2 sends w to an F2 word equal to w exactly when w is
    already in F2, and that equality is decided by Dehn's algorithm.
    """
    w = str(w)
    return surface_equal(w, psi_apply(PsiMap(1), w))


def k_from_girth(a: int) -> int:
    """floor(sqrt(a / 63)); 0 means a is too small for any k >= 1."""
    if a < 1:
        raise ValueError("a must be positive")
    return math.isqrt(a // DEFAULT_EPSILON)


def verify_ball_injectivity(psi: PsiMap, radius: int) -> dict:
    """Apply psi to every element of the ball of the given radius.

    Counts as violations: a trivial image of an element with
    1 < l_B <= radius; an image longer than epsilon * k * l_B; an element
    outside F2 whose nontrivial image has at most k letters; a trivial image
    of a generator.
    """
    if radius > psi.k:
        raise ValueError(f"radius {radius} exceeds k = {psi.k}")
    checked = violations = 0
    max_len = 0
    examples: list[str] = []
    for e in enumerate_ball(radius):
        if e.length == 0:
            continue
        checked += 1
        img = psi_apply(psi, e.word)
        max_len = max(max_len, len(img))
        bad = len(img) > psi.epsilon * psi.k * e.length
        if not img:
            bad = True
        elif len(img) <= psi.k and not in_free_factor(e.word):
            bad = True
        if bad:
            violations += 1
            if len(examples) < 5:
                examples.append(e.word)
    return {"k": psi.k, "radius": radius, "elements_checked": checked,
            "violations": violations, "max_image_length": max_len,
            "violating_words": examples}


def relator_image(psi: PsiMap) -> str:
    return psi_apply(psi, RELATOR)


def _delta_variants(parts: list[str]) -> dict[str, str]:
    """The four words obtained by keeping or deleting the first and the last
    block independently."""
    out = {}
    for s in (True, False):
        for t in (True, False):
            body = parts[1:-1]
            word = (parts[0] if s else "") + "".join(body) + (parts[-1] if t else "")
            out[f"{'keep' if s else 'drop'}_first,{'keep' if t else 'drop'}_last"] = reduce(word)
    return out


def delta_word_check(gammas: list[str], etas: list[str], k: int, d: int = DEFAULT_D) -> dict:
    """Check that gamma_1 u^dk eta_1 u^-dk gamma_2 ... u^dk eta_r u^-dk gamma_{r+1}
    is nontrivial, with or without the end blocks gamma_1 and gamma_{r+1}.

    Inner gammas and all etas must lie outside <u> (so in particular be
    nontrivial), and their total length may not exceed k.  Every variant is
    also checked against the lower bound l_A > 18k.
    """
    r = len(etas)
    if r < 1 or len(gammas) != r + 1:
        raise PsiPreconditionError("need r >= 1 etas and r + 1 gammas")
    gammas = [reduce(g) for g in gammas]
    etas = [reduce(e) for e in etas]
    for i, g in enumerate(gammas[1:-1], start=2):
        if in_cyclic_u(g):
            raise PsiPreconditionError(f"gamma_{i} = {g!r} lies in <u>")
    for j, e in enumerate(etas, start=1):
        if in_cyclic_u(e):
            raise PsiPreconditionError(f"eta_{j} = {e!r} lies in <u>")
    total = sum(map(len, gammas)) + sum(map(len, etas))
    if total > k:
        raise PsiPreconditionError(f"total length {total} exceeds k = {k}")
    up, um = u_power(d * k), u_power(-d * k)
    parts = [gammas[0]]
    for j in range(r):
        parts.append(up + etas[j] + um + (gammas[j + 1] if j + 1 < r else ""))
    parts.append(gammas[r])
    variants = _delta_variants(parts)
    lengths = {name: len(w) for name, w in variants.items()}
    return {"k": k, "r": r, "d": d, "lengths": lengths,
            "all_nontrivial": all(lengths.values()),
            "above_18k": all(v > 18 * k for v in lengths.values())}


@dataclass(frozen=True, eq=False)
class SurfaceAction:
    """Right action of SG2 on n points, given by the images of x, y, a, b."""

    n: int
    perms: dict
    base: int = 0

    def __post_init__(self):
        full = {}
        for c in "xyab":
            p = np.asarray(self.perms[c], dtype=np.int64)
            q = np.empty_like(p)
            q[p] = np.arange(self.n)
            full[c], full[c.upper()] = p, q
        object.__setattr__(self, "perms", full)
        ident = np.arange(self.n)
        if not np.array_equal(self.word_perm(RELATOR), ident):
            raise ValueError("the relator does not act trivially")

    def word_perm(self, word: str) -> np.ndarray:
        """Where each point goes under the word (left to right)."""
        idx = np.arange(self.n)
        for c in word:
            idx = self.perms[c][idx]
        return idx

    def act(self, word: str, point: int | None = None) -> int:
        p = self.base if point is None else point
        for c in word:
            p = int(self.perms[c][p])
        return p

    def contains(self, w: str | SurfaceWord) -> bool:
        return self.act(str(w)) == self.base

    def orbit_size(self) -> int:
        seen = {self.base}
        stack = [self.base]
        while stack:
            p = stack.pop()
            for c in SURFACE_LETTERS:
                q = int(self.perms[c][p])
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen)

    def to_dict(self) -> dict:
        return {"n": self.n, "base": self.base + 1,
                **{c: [int(v) + 1 for v in self.perms[c]] for c in "xyab"}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def trivial_surface_action() -> SurfaceAction:
    z = [0]
    return SurfaceAction(1, {"x": z, "y": z, "a": z, "b": z})


def preimage_action(psi: PsiMap, gamma: SchreierAction) -> SurfaceAction:
    """The action of SG2 through psi: a point moves under a surface word as
    it moves under the word's image in F2.  The base stabilizer is the
    preimage of the subgroup, of the same index because psi is onto."""
    perms = {"x": gamma.perm_x, "y": gamma.perm_y}
    for c in "ab":
        idx = np.arange(gamma.n)
        for letter in psi.images[c]:
            idx = gamma.perm(letter)[idx]
        perms[c] = idx
    return SurfaceAction(gamma.n, perms, gamma.base)


def short_stabilizers(action: SurfaceAction, radius: int) -> list[str]:
    """Canonical words of all nontrivial elements with l_B <= radius that
    fix the base point (exhaustive over the ball)."""
    return [e.word for e in enumerate_ball(radius) if e.length and action.contains(e.word)]
