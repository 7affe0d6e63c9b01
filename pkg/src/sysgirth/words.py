"""Word arithmetic in the free group F2 = <x, y> and the genus-2 surface group.

Words are plain strings.  Free-group words use the letters ``x X y Y``
(capital = inverse).  Surface-group words additionally use ``a A b B`` for
the second copy of the generators x', y'.  The surface group is

    <x, y, a, b | xyXY abAB>

i.e. u = [x, y] = xyXY equals v = [b, a] = baBA.  Words act and compose left
to right everywhere in this package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

FREE_LETTERS = "xXyY"
SURFACE_LETTERS = "xXyYaAbB"

U = "xyXY"
V = "baBA"
RELATOR = "xyXYabAB"

DEFAULT_MAX_RADIUS = 8


class InCyclicSubgroupError(ValueError):
    """The word lies in <u>, where the requested decomposition is undefined."""


class WordTooLongError(ValueError):
    pass


class OutOfRadiusError(ValueError):
    """Exact geodesic length is not available; ``upper_bound`` still is."""

    def __init__(self, message: str, upper_bound: int):
        super().__init__(message)
        self.upper_bound = upper_bound


def _check(letters: str, alphabet: str) -> None:
    bad = set(letters) - set(alphabet)
    if bad:
        raise ValueError(f"letters {sorted(bad)} not in alphabet {alphabet!r}")


def inverse(w: str) -> str:
    return w[::-1].swapcase()


def _free_reduce(w: str) -> str:
    out: list[str] = []
    for c in w:
        if out and out[-1] == c.swapcase():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def reduce(letters: Iterable[str] | str) -> str:
    """Freely reduce a word over ``xXyY``."""
    w = "".join(letters)
    _check(w, FREE_LETTERS)
    return _free_reduce(w)


def length_A(w: str) -> int:
    return len(reduce(w))


def power(w: str, j: int) -> str:
    """Reduced form of w**j (j may be negative)."""
    if j < 0:
        w, j = inverse(w), -j
    return _free_reduce(w * j)


def u_power(j: int) -> str:
    return U * j if j >= 0 else inverse(U) * (-j)


def multiply(*words: str) -> str:
    return _free_reduce("".join(words))


def reacts(h: str, f: str) -> bool:
    """True iff the product hf is shorter than h and f put together."""
    h, f = reduce(h), reduce(f)
    return len(_free_reduce(h + f)) < len(h) + len(f)


def wedge(h: str, f: str) -> bool:
    return not reacts(h, f)


def in_cyclic_u(w: str) -> bool:
    w = reduce(w)
    if len(w) % 4:
        return False
    j = len(w) // 4
    return w in (U * j, inverse(U) * j)


class WedgeSplit(NamedTuple):
    i1: int
    core: str
    i2: int

    def recombine(self) -> str:
        return _free_reduce(u_power(self.i1) + self.core + u_power(self.i2))


def wedge_split_u(gamma: str) -> WedgeSplit:
    """Strip maximal powers of u from both ends of a reduced word not in <u>."""
    w = reduce(gamma)
    if in_cyclic_u(w):
        raise InCyclicSubgroupError(f"{w!r} lies in <u>")
    ui = inverse(U)
    i1 = 0
    while True:
        if w.startswith(U):
            w, i1 = w[4:], i1 + 1
        elif w.startswith(ui):
            w, i1 = w[4:], i1 - 1
        else:
            break
    i2 = 0
    while True:
        if w.endswith(U):
            w, i2 = w[:-4], i2 + 1
        elif w.endswith(ui):
            w, i2 = w[:-4], i2 - 1
        else:
            break
    return WedgeSplit(i1, w, i2)


class Sandwich(NamedTuple):
    left: int  # exponent of u
    core: str
    right: int  # exponent of u


def sandwich_normalize(m: int, l: int, eps1: int, eps2: int, gamma: str) -> Sandwich:
    """Decompose u^(eps1*m*l) gamma u^(eps2*m*l) as
    u^(eps1*(m-2)*l) ^ gamma' ^ u^(eps2*(m-2)*l) with gamma' != 1.

    Every claimed property is checked on the explicit product; an
    ``AssertionError`` here would contradict the decomposition itself.
    """
    if m < 3 or l < 2 or eps1 not in (1, -1) or eps2 not in (1, -1):
        raise ValueError("need m >= 3, l >= 2, eps in {1, -1}")
    g = reduce(gamma)
    if in_cyclic_u(g):
        raise InCyclicSubgroupError(f"{g!r} lies in <u>")
    if len(g) > l:
        raise WordTooLongError(f"l_A(gamma) = {len(g)} exceeds l = {l}")
    product = _free_reduce(u_power(eps1 * m * l) + g + u_power(eps2 * m * l))
    left, right = eps1 * (m - 2) * l, eps2 * (m - 2) * l
    lw, rw = u_power(left), u_power(right)
    core = _free_reduce(inverse(lw) + product + inverse(rw))
    assert core, "gamma' is trivial"
    # non-reaction of the three blocks: the product is their literal concatenation
    assert product == lw + core + rw, "blocks react"
    return Sandwich(left, core, right)


# --- surface group ---------------------------------------------------------

def _rotations(w: str) -> list[str]:
    return [w[i:] + w[:i] for i in range(len(w))]


def _dehn_table() -> dict[str, str]:
    table = {}
    for r in _rotations(RELATOR) + _rotations(inverse(RELATOR)):
        for s in range(5, 9):
            table[r[:s]] = inverse(r[s:])
    return table


_DEHN = _dehn_table()


def dehn_reduce(w: str) -> str:
    """Dehn's algorithm: free reduction plus replacing any subword longer than
    half a relator by the shorter complement.  The result is empty iff w is
    trivial (the presentation is C'(1/7))."""
    _check(w, SURFACE_LETTERS)
    w = _free_reduce(w)
    i = 0
    while i <= len(w) - 5:
        for s in (8, 7, 6, 5):
            rep = _DEHN.get(w[i:i + s])
            if rep is not None:
                w = _free_reduce(w[:i] + rep + w[i + s:])
                i = max(0, i - 8)
                break
        else:
            i += 1
    return w


def surface_equal(w1: str, w2: str) -> bool:
    return dehn_reduce(w1 + inverse(w2)) == ""


@dataclass(frozen=True)
class SurfaceWord:
    letters: str
    canonical: bool = False

    def __str__(self) -> str:
        return self.letters


# Bucketing key for ball lookups: the homomorphism fixing x, y and sending
# a -> u^3 y u^-3, b -> u^3 x u^-3.  Collisions are resolved with Dehn's
# algorithm, so correctness never depends on this map.
_KEY_L = 3
_KEY_IMG = {"x": "x", "X": "X", "y": "y", "Y": "Y"}
_KEY_IMG["a"] = _free_reduce(u_power(_KEY_L) + "y" + u_power(-_KEY_L))
_KEY_IMG["b"] = _free_reduce(u_power(_KEY_L) + "x" + u_power(-_KEY_L))
_KEY_IMG["A"] = inverse(_KEY_IMG["a"])
_KEY_IMG["B"] = inverse(_KEY_IMG["b"])


def _key(w: str) -> str:
    return _free_reduce("".join(_KEY_IMG[c] for c in w))


class BallElement(NamedTuple):
    word: str
    length: int


class _Ball:
    """Breadth-first enumeration of the surface group by word length.

    Parents are processed in shortlex order and letters in SURFACE_LETTERS
    order, so the first word found for an element is its shortlex-least
    geodesic, which serves as the canonical form.
    """

    def __init__(self) -> None:
        self.levels: list[list[str]] = [[""]]
        self.keys: dict[str, str] = {"": ""}
        self.buckets: dict[str, list[str]] = {"": [""]}
        self.length: dict[str, int] = {"": 0}

    @property
    def radius(self) -> int:
        return len(self.levels) - 1

    def find(self, w: str, key: str | None = None) -> str | None:
        for e in self.buckets.get(_key(w) if key is None else key, ()):
            if surface_equal(w, e):
                return e
        return None

    def extend_to(self, radius: int) -> None:
        while self.radius < radius:
            new: list[str] = []
            for w in self.levels[-1]:
                kw = self.keys[w]
                last = w[-1:].swapcase()
                for c in SURFACE_LETTERS:
                    if c == last:
                        continue
                    cand = w + c
                    kc = _free_reduce(kw + _KEY_IMG[c])
                    if self.find(cand, kc) is not None:
                        continue
                    new.append(cand)
                    self.keys[cand] = kc
                    self.buckets.setdefault(kc, []).append(cand)
                    self.length[cand] = len(cand)
            self.levels.append(new)


_BALL = _Ball()


def _ball(radius: int, max_radius: int) -> _Ball:
    if radius > max_radius:
        raise OutOfRadiusError(
            f"radius {radius} exceeds the configured maximum {max_radius}", radius)
    _BALL.extend_to(radius)
    return _BALL


def dehn_canonical(w: str | SurfaceWord, max_radius: int = DEFAULT_MAX_RADIUS) -> SurfaceWord:
    """Canonical representative: the shortlex-least geodesic.

    Exact when the Dehn-reduced form has at most ``max_radius`` letters;
    otherwise the Dehn-reduced word is returned with ``canonical=False``.
    """
    d = dehn_reduce(str(w))
    if len(d) > max_radius:
        return SurfaceWord(d, canonical=False)
    e = _ball(len(d), max_radius).find(d)
    if e is None:  # pragma: no cover - would mean the enumeration is broken
        raise RuntimeError(f"element of {d!r} missing from ball")
    return SurfaceWord(e, canonical=True)


def length_B(w: str | SurfaceWord, max_radius: int = DEFAULT_MAX_RADIUS) -> int:
    c = dehn_canonical(w, max_radius)
    if not c.canonical:
        raise OutOfRadiusError(
            f"geodesic length of {str(w)!r} may exceed radius {max_radius}", len(c.letters))
    return len(c.letters)


def enumerate_ball(radius: int, max_radius: int = DEFAULT_MAX_RADIUS) -> list[BallElement]:
    """All elements with l_B <= radius, each once, in shortlex order of
    their canonical words."""
    ball = _ball(radius, max_radius)
    return [BallElement(w, r) for r in range(radius + 1) for w in ball.levels[r]]


def sphere_sizes(radius: int, max_radius: int = DEFAULT_MAX_RADIUS) -> list[int]:
    ball = _ball(radius, max_radius)
    return [len(ball.levels[r]) for r in range(radius + 1)]


def ball_to_json(radius: int, max_radius: int = DEFAULT_MAX_RADIUS) -> str:
    return json.dumps([{"word": e.word, "length": e.length}
                       for e in enumerate_ball(radius, max_radius)])


def random_reduced_word(rng, length: int, alphabet: str = FREE_LETTERS) -> str:
    """Uniform random reduced word of the given length (``rng`` is a
    ``random.Random`` or numpy Generator)."""
    out: list[str] = []
    while len(out) < length:
        c = alphabet[int(rng.integers(len(alphabet)))] if hasattr(rng, "integers") \
            else rng.choice(alphabet)
        if out and out[-1] == c.swapcase():
            continue
        out.append(c)
    return "".join(out)


def growth_upper_bound(radius: int) -> int:
    """Size of the radius ball in the free group of rank 4."""
    return 1 + sum(8 * 7 ** (r - 1) for r in range(1, radius + 1))


