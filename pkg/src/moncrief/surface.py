"""Genus-2 holonomy from Fenchel-Nielsen coordinates, curve panel, lengths.

Topology: two pants P, P' glued along gamma_1, gamma_2, gamma_3.  P is built
from two right-angled hexagons with alternating sides l_i/2; P' is the mirror
image of P across the axis of gamma_1, shifted by the twist tau_1, and the
remaining two gluings are the deck transformations

    t_k = T_k R_k R_1 T_1^{-1},   k = 2, 3,

where R_k reflects in the axis of gamma_k and T_k translates along it by
tau_k.  Rewriting the resulting one-relator presentation gives the standard
generators

    a1 = X1^-1,  b1 = t3^-1,  a2 = t3^-1 X2 t3,  b2 = t2^-1 t3,

with [a1, b1][a2, b2] = 1.  In words: gamma_1 = A1, gamma_2 ~ a2,
gamma_3 ~ B1 A2 b1 a1 (upper case letters are inverses).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionFailure, EnumerationInconclusive
from .hyp2 import (
    MP,
    MoebiusMap,
    axis,
    mpf,
    standard_chart,
    translation_length,
)

GENERATORS = ("a1", "b1", "a2", "b2")
LETTERS = ("a1", "A1", "b1", "B1", "a2", "A2", "b2", "B2")
_INVERSE_INDEX = (1, 0, 3, 2, 5, 4, 7, 6)

DEFAULT_MAX_LENGTH = 6


def invert_letter(letter: str) -> str:
    return letter.swapcase()


def parse_word(text) -> tuple[str, ...]:
    """Parse ``"B1 a2 b1"`` or ``"B1a2b1"`` into a tuple of letters."""
    if not isinstance(text, str):
        return tuple(text)
    compact = "".join(text.split())
    if len(compact) % 2:
        raise ValueError(f"malformed word {text!r}")
    word = tuple(compact[i : i + 2] for i in range(0, len(compact), 2))
    for letter in word:
        if letter not in LETTERS:
            raise ValueError(f"unknown letter {letter!r}")
    return word


def reduce_word(word) -> tuple[str, ...]:
    """Free and cyclic reduction."""
    out: list[str] = []
    for letter in word:
        if out and out[-1] == invert_letter(letter):
            out.pop()
        else:
            out.append(letter)
    while len(out) > 1 and out[0] == invert_letter(out[-1]):
        out = out[1:-1]
    return tuple(out)


def inverse_word(word) -> tuple[str, ...]:
    return tuple(invert_letter(x) for x in reversed(word))


@dataclass(frozen=True)
class FNPoint:
    lengths: tuple
    twists: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        twists = tuple(float(x) for x in self.twists)
        if len(lengths) != 3 or len(twists) != 3:
            raise ValueError("genus 2 needs three lengths and three twists")
        if not all(math.isfinite(x) for x in lengths + twists):
            raise ValueError("FN coordinates must be finite")
        if min(lengths) <= 0:
            raise ValueError("lengths must be positive")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "twists", twists)


@dataclass(frozen=True)
class CurveClass:
    name: str
    word: tuple
    dt_intersections: tuple

    def __post_init__(self):
        word = parse_word(self.word)
        if not word or reduce_word(word) != word:
            raise ValueError(f"{self.name}: word must be non-empty and cyclically reduced")
        dt = tuple(int(x) for x in self.dt_intersections)
        if len(dt) != 3 or min(dt) < 0:
            raise ValueError(f"{self.name}: need three non-negative intersection numbers")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "dt_intersections", dt)

    def inverse(self) -> "CurveClass":
        return CurveClass(self.name + "^-1", inverse_word(self.word), self.dt_intersections)


@dataclass(frozen=True, eq=False)
class Holonomy:
    """Images of a1, b1, a2, b2 plus the pants-adapted elements they came from."""

    fn: FNPoint
    generators: dict
    relator_residual: float
    pants_elements: tuple = field(repr=False)

    def element(self, word) -> MoebiusMap:
        m = MoebiusMap.identity()
        for letter in parse_word(word):
            g = self.generators[letter.lower()]
            m = m @ (g if letter.islower() else g.inverse())
        return m

    @functools.cached_property
    def float_letters(self) -> np.ndarray:
        mats = []
        for name in GENERATORS:
            g = self.generators[name]
            mats.append(g.as_float())
            mats.append(g.inverse().as_float())
        return np.array(mats)


def _reflection(chart_inv: MoebiusMap) -> MoebiusMap:
    return chart_inv @ MoebiusMap(-1, 0, 0, 1) @ chart_inv.inverse()


def pants_hexagon_distance(l1, l2, l3):
    """Distance between boundary geodesics 1 and 2 of a pair of pants.

    Right-angled hexagon with alternate sides l1/2, l2/2, l3/2: the side
    opposite l3/2 has cosh d = (cosh l3/2 + cosh l1/2 cosh l2/2) / (sinh l1/2 sinh l2/2).
    """
    h1, h2, h3 = (mpf(x) / 2 for x in (l1, l2, l3))
    num = MP.cosh(h3) + MP.cosh(h1) * MP.cosh(h2)
    den = MP.sinh(h1) * MP.sinh(h2)
    if den <= 0 or num / den <= 1:
        raise ConstructionFailure("hexagon side relation has no solution")
    return MP.acosh(num / den)


def build_holonomy(h: FNPoint) -> Holonomy:
    l1, l2, l3 = (mpf(x) for x in h.lengths)
    d12 = pants_hexagon_distance(l1, l2, l3)
    # translation along (-1, 1) carries the imaginary axis to the axis of X2
    shift = MoebiusMap(MP.cosh(d12 / 2), MP.sinh(d12 / 2), MP.sinh(d12 / 2), MP.cosh(d12 / 2))
    x1 = MoebiusMap.diagonal(l1)
    x2 = MoebiusMap.diagonal(-l2).conjugate_by(shift)
    x3 = (x1 @ x2).inverse()
    charts = [standard_chart(axis(x)).inverse() for x in (x1, x2, x3)]
    refl = [_reflection(g) for g in charts]
    trans = [g @ MoebiusMap.diagonal(t) @ g.inverse() for g, t in zip(charts, h.twists)]
    t2 = trans[1] @ refl[1] @ refl[0] @ trans[0].inverse()
    t3 = trans[2] @ refl[2] @ refl[0] @ trans[0].inverse()
    gens = {
        "a1": x1.inverse(),
        "b1": t3.inverse(),
        "a2": t3.inverse() @ x2 @ t3,
        "b2": t2.inverse() @ t3,
    }
    for g in gens.values():
        if not all(MP.isfinite(x) for x in g.entries()):
            raise ConstructionFailure("non-finite generator")
    residual = relator(gens).distance_to(MoebiusMap.identity())
    return Holonomy(h, gens, residual, (x1, x2, x3, t2, t3))


def relator(gens: dict) -> MoebiusMap:
    a1, b1, a2, b2 = (gens[k] for k in GENERATORS)
    return (
        a1 @ b1 @ a1.inverse() @ b1.inverse() @ a2 @ b2 @ a2.inverse() @ b2.inverse()
    )


_PANEL = (
    ("gamma1", "A1", (0, 0, 0)),
    ("gamma2", "a2", (0, 0, 0)),
    ("gamma3", "B1 A2 b1 a1", (0, 0, 0)),
    ("delta1", "B1 a2 b1 b2 A2 B2", (2, 0, 0)),
    ("delta2", "A1 B1 B2 a1 b2 b1", (0, 2, 0)),
    ("delta3", "A1 B1 a1 b1", (0, 0, 2)),
    # products of duals, cyclically reduced
    ("delta1delta2", "a2 b1 b2 A2 B2 A1 B1 B2 a1 b2", (2, 2, 0)),
    ("delta1delta3", "a2 b1 b2 A2 B2 A1 B1 a1", (2, 0, 2)),
    ("delta2delta3", "A1 B1 B2 a1 b2 b1 A1 B1 a1 b1", (0, 2, 2)),
)


def curve_table() -> list[CurveClass]:
    """Pants curves, their duals and three composites."""
    return [CurveClass(name, word, dt) for name, word, dt in _PANEL]


def curve(name: str) -> CurveClass:
    for c in curve_table():
        if c.name == name:
            return c
    raise KeyError(name)


def pants_curve(index: int) -> CurveClass:
    """gamma_index for index in 1..3."""
    if index not in (1, 2, 3):
        raise ValueError("pants index must be 1, 2 or 3")
    return curve_table()[index - 1]


def geodesic_length(rep: Holonomy, c: CurveClass):
    return translation_length(rep.element(c.word))


# -- crossing enumeration ---------------------------------------------------


@dataclass(frozen=True)
class CrossingLift:
    """A lift g.axis(c) crossing the normalised axis (0, inf) of beta.

    ``right``/``left`` are the endpoints in the chart of beta's axis (right
    is positive).  ``parameter`` is the height ln|crossing point| reduced
    modulo l(beta); ``displacement`` is ln(right) - ln(-left).
    """

    conjugator: tuple
    right: object
    left: object
    parameter: object
    displacement: object


@functools.lru_cache(maxsize=2)
def _word_tree(letters_key: bytes, max_length: int):
    """All freely reduced words up to max_length, as float matrices.

    Returns (matrices, parent, letter, depth) arrays indexed by node.
    """
    letters = np.frombuffer(letters_key).reshape(8, 2, 2)
    mats = [np.eye(2)[None]]
    parents = [np.array([-1])]
    last = [np.array([-1])]
    depth = [np.array([0])]
    offset = 0
    cur, cur_last = mats[0], last[0]
    for level in range(1, max_length + 1):
        chunks, par, lets = [], [], []
        for j in range(8):
            keep = np.nonzero(cur_last != _INVERSE_INDEX[j])[0]
            chunks.append(cur[keep] @ letters[j])
            par.append(keep + offset)
            lets.append(np.full(keep.size, j))
        offset += cur.shape[0]
        cur = np.concatenate(chunks)
        cur_last = np.concatenate(lets)
        mats.append(cur)
        parents.append(np.concatenate(par))
        last.append(cur_last)
        depth.append(np.full(cur.shape[0], level))
    return (
        np.concatenate(mats),
        np.concatenate(parents),
        np.concatenate(last),
        np.concatenate(depth),
    )


def _node_word(node: int, parents, last) -> tuple[str, ...]:
    word = []
    while node > 0:
        word.append(LETTERS[last[node]])
        node = parents[node]
    return tuple(reversed(word))


def _homogeneous_float(p):
    u, v = p.homogeneous()
    return [float(u), float(v)]


def search_crossing_words(search_rep: Holonomy, c: CurveClass, beta: CurveClass, max_length: int):
    """Conjugator words g (|g| <= max_length) with g.axis(c) crossing axis(beta).

    Float64 search; one shortest word per approximate class, in order of
    increasing length.  Exact classification happens in :func:`crossing_lifts`.
    """
    mats, parents, last, depth = _word_tree(search_rep.float_letters.tobytes(), max_length)
    c_axis = axis(search_rep.element(c.word))
    b_elem = search_rep.element(beta.word)
    ell = float(translation_length(b_elem))
    # fold the chart of beta's axis into the two endpoint vectors: N g e = (N g N^-1)(N e)
    chart = standard_chart(axis(b_elem))
    chart_f = np.array(chart.as_float())
    chart_inv = np.array(chart.inverse().as_float())
    ends = chart_f @ np.array([_homogeneous_float(c_axis.start), _homogeneous_float(c_axis.end)]).T
    conj = np.einsum("ij,njk,kl->nil", chart_f, mats, chart_inv, optimize=True)
    m00, m01, m10, m11 = conj[:, 0, 0], conj[:, 0, 1], conj[:, 1, 0], conj[:, 1, 1]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.empty((mats.shape[0], 2))
        for k in range(2):
            u, v = ends[0, k], ends[1, k]
            x[:, k] = (m00 * u + m01 * v) / (m10 * u + m11 * v)
        lx = np.log(np.abs(x))
        disp = lx[:, 0] - lx[:, 1]
        hit = (x[:, 0] * x[:, 1] < 0) & np.isfinite(disp) & (np.abs(disp) < 40)
    nodes = np.nonzero(hit)[0]
    nodes = nodes[np.argsort(depth[nodes], kind="stable")]
    found: list[tuple[float, float]] = []
    words = []
    for node in nodes:
        xs = x[node]
        right, left = (xs[0], xs[1]) if xs[0] > 0 else (xs[1], xs[0])
        d = math.log(right) - math.log(-left)
        s = 0.5 * (math.log(right) + math.log(-left)) % ell
        dup = False
        for s0, d0 in found:
            ds = abs(s - s0)
            if min(ds, ell - ds) < 1e-3 * ell and abs(d - d0) < 1e-3:
                dup = True
                break
        if not dup:
            found.append((s, d))
            words.append(_node_word(int(node), parents, last))
    return words


def _exact_lift(rep: Holonomy, c: CurveClass, beta: CurveClass, word) -> CrossingLift | None:
    b_elem = rep.element(beta.word)
    ell = translation_length(b_elem)
    chart = standard_chart(axis(b_elem))
    g = rep.element(word)
    lift = axis(rep.element(c.word)).image(chart @ g)
    xs = []
    big = MP.mpf(10) ** (MP.dps // 2)
    for p in (lift.start, lift.end):
        if p.is_infinite or abs(p.value) > big or abs(p.value) < 1 / big:
            return None
        xs.append(p.value)
    if (xs[0] > 0) == (xs[1] > 0):
        return None
    right, left = (xs[0], xs[1]) if xs[0] > 0 else (xs[1], xs[0])
    lr, ll = MP.log(right), MP.log(-left)
    height = (lr + ll) / 2
    param = height - ell * MP.floor(height / ell)
    return CrossingLift(tuple(word), right, left, param, lr - ll)


def _same_class(p: CrossingLift, q: CrossingLift, ell) -> bool:
    ds = abs(p.parameter - q.parameter)
    tol = 1e-9 * ell
    return min(ds, ell - ds) < tol and abs(p.displacement - q.displacement) < 1e-9


def classify_lifts(rep: Holonomy, c: CurveClass, beta: CurveClass, words) -> list[CrossingLift]:
    """Exact crossing lifts on ``rep`` for candidate conjugators, one per orbit."""
    ell = translation_length(rep.element(beta.word))
    classes: list[CrossingLift] = []
    for w in words:
        lift = _exact_lift(rep, c, beta, w)
        if lift is None:
            continue
        if not any(_same_class(lift, k, ell) for k in classes):
            classes.append(lift)
    return classes


def crossing_lifts(
    rep: Holonomy,
    c: CurveClass,
    beta: CurveClass,
    max_length: int = DEFAULT_MAX_LENGTH,
    search_rep: Holonomy | None = None,
) -> list[CrossingLift]:
    """One crossing lift per intersection point of c with beta.

    Raises EnumerationInconclusive unless the count is the same using words of
    length max_length - 1 and max_length.  ``search_rep`` (default ``rep``)
    is the structure used for the float search; crossing patterns are
    topological, so any point of Teichmueller space gives the same words.
    """
    search_rep = rep if search_rep is None else search_rep
    words = search_crossing_words(search_rep, c, beta, max_length)
    full = classify_lifts(rep, c, beta, words)
    short = classify_lifts(rep, c, beta, [w for w in words if len(w) < max_length])
    if len(short) != len(full):
        raise EnumerationInconclusive(
            f"{c.name} vs {beta.name}: {len(short)} classes at L={max_length - 1}, "
            f"{len(full)} at L={max_length}"
        )
    return full


def geometric_intersection(
    rep: Holonomy, c: CurveClass, pants_index: int, max_length: int = DEFAULT_MAX_LENGTH
) -> int:
    beta = pants_curve(pants_index)
    if reduce_word(c.word) == beta.word:
        return 0
    return len(crossing_lifts(rep, c, beta, max_length))


@functools.lru_cache(maxsize=1)
def reference_holonomy() -> Holonomy:
    """Well-conditioned structure used to search for crossing words."""
    return build_holonomy(FNPoint((2.0, 2.0, 2.0), (0.0, 0.0, 0.0)))


def distance_lower_bound(hA: FNPoint, hB: FNPoint, panel) -> float:
    """max over the panel of |ln(l_A / l_B)| / 2, a lower bound for d_Teich."""
    if not panel:
        raise ValueError("panel must be non-empty")
    repA, repB = build_holonomy(hA), build_holonomy(hB)
    best = MP.zero
    for c in panel:
        ratio = geodesic_length(repA, c) / geodesic_length(repB, c)
        best = max(best, abs(MP.log(ratio)) / 2)
    return float(best)
