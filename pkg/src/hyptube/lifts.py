"""Group-element enumeration and lifts of a chosen closed geodesic.

Enumeration is breadth-first over freely reduced words with matrix
deduplication (up to sign); no geometric pruning is assumed valid.  The tube
radius computed from lifts within a word-length horizon is an upper bound on
the true tube radius, so every result carries its horizon, and a displacement
diagnostic over the frontier words is reported so callers can judge horizon
adequacy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hcore import (
    TOL,
    ComplexDistance,
    Geodesic,
    HPoint,
    IntersectingLines,
    Isometry,
    NotLoxodromic,
    SharedEndpoint,
    _send_to_zero_infinity,
    axis,
    classify,
    midplane,
    orthodistance,
)
from .bounds import LOG3_HALF

DEDUP_TOL = 1e-9
CONDITIONING_LIMIT = 1e12


@dataclass(frozen=True)
class Word:
    """Freely reduced word as a tuple of signed 1-based generator indices."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-s for s in reversed(self.letters)))

    def sort_key(self):
        # a < A < b < B < ...
        return tuple((abs(s), 0 if s > 0 else 1) for s in self.letters)

    def to_string(self, names) -> str:
        out = []
        for s in self.letters:
            nm = names[abs(s) - 1]
            out.append(nm if s > 0 else nm.upper())
        return "".join(out)


def free_reduce(letters) -> tuple:
    out = []
    for s in letters:
        if s == 0:
            raise ValueError("0 is not a generator index")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(int(s))
    return tuple(out)


@dataclass(frozen=True)
class GroupPresentation:
    """Named generating set of isometries; names are single lowercase letters."""

    names: tuple
    generators: tuple

    def __post_init__(self):
        if len(self.names) != len(self.generators):
            raise ValueError("names/generators length mismatch")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        for nm in self.names:
            if not (len(nm) == 1 and nm.islower() and nm.isalpha()):
                raise ValueError(f"bad generator name {nm!r}")

    @staticmethod
    def from_pairs(pairs) -> "GroupPresentation":
        names = tuple(nm for nm, _ in pairs)
        gens = tuple(g for _, g in pairs)
        return GroupPresentation(names, gens)

    def parse_word(self, text: str) -> Word:
        letters = []
        lower = {nm: i + 1 for i, nm in enumerate(self.names)}
        for ch in text:
            idx = lower.get(ch.lower())
            if idx is None:
                raise KeyError(f"unknown generator {ch!r} in word {text!r}")
            letters.append(idx if ch.islower() else -idx)
        return Word(tuple(letters))

    def letter(self, s: int) -> Isometry:
        g = self.generators[abs(s) - 1]
        return g if s > 0 else g.inverse()

    def element(self, word: Word) -> Isometry:
        g = Isometry.identity()
        for s in word.letters:
            g = g @ self.letter(s)
        return g

    def conjugated(self, h: Isometry) -> "GroupPresentation":
        return GroupPresentation(
            self.names, tuple(h @ g @ h.inverse() for g in self.generators)
        )


class _MatrixDeduper:
    """Vectorized matching of normalized matrices up to global sign."""

    def __init__(self, tol: float = DEDUP_TOL):
        self.tol = tol
        self._rows = []
        self._arr = None

    def find(self, g: Isometry) -> Optional[int]:
        if not self._rows:
            return None
        if self._arr is None or self._arr.shape[0] != len(self._rows):
            self._arr = np.array(self._rows)
        m = np.array(g.entries())
        dplus = np.abs(self._arr - m).max(axis=1)
        dminus = np.abs(self._arr + m).max(axis=1)
        d = np.minimum(dplus, dminus)
        j = int(d.argmin())
        return j if d[j] <= self.tol else None

    def add(self, g: Isometry) -> int:
        self._rows.append(list(g.entries()))
        self._arr = None
        return len(self._rows) - 1


@dataclass
class ElementBall:
    """Ball in the word metric: deduplicated isometries with shortest words."""

    elements: list  # of (Isometry, Word)
    relations: list = field(default_factory=list)  # words that collapse to 1
    warnings: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def enumerate_elements(G: GroupPresentation, maxlen: int) -> ElementBall:
    """All group elements representable by freely reduced words of length <= maxlen.

    Breadth-first over the Cayley graph; each element keeps a shortest
    producing word; output sorted by (word length, lexicographic).  Words that
    collapse to the identity are recorded as relations.
    """
    if maxlen < 0:
        raise ValueError("maxlen must be nonnegative")
    dedup = _MatrixDeduper()
    ball = ElementBall(elements=[(Isometry.identity(), Word())])
    dedup.add(Isometry.identity())
    ngen = len(G.generators)
    frontier = [(Isometry.identity(), Word())]
    for _ in range(maxlen):
        nxt = []
        for g, w in frontier:
            last = w.letters[-1] if w.letters else 0
            for s in list(range(1, ngen + 1)) + list(range(-1, -ngen - 1, -1)):
                if s == -last:
                    continue
                g2 = g @ G.letter(s)
                w2 = Word(w.letters + (s,))
                if max(abs(e) for e in g2.entries()) > CONDITIONING_LIMIT:
                    ball.warnings.append(
                        f"entries of word {w2.to_string(G.names)} exceed 1e12"
                    )
                j = dedup.find(g2)
                if j is not None:
                    if j == 0 and len(w2) > 0:
                        ball.relations.append(w2)
                    continue
                dedup.add(g2)
                ball.elements.append((g2, w2))
                nxt.append((g2, w2))
        # canonical order within each shell
        nxt.sort(key=lambda gw: gw[1].sort_key())
        frontier = nxt
    ball.elements.sort(key=lambda gw: (len(gw[1]), gw[1].sort_key()))
    return ball


@dataclass(frozen=True)
class Lift:
    geodesic: Geodesic
    word: Word
    wordlen: int


@dataclass
class LiftSet:
    """Distinct lifts {g . base} of a closed geodesic, within a word-length horizon."""

    base: Geodesic
    core: Isometry
    deltaword: Word
    lifts: list  # of Lift; lifts[0] is the base with the empty word
    horizon: int
    displacement: Optional[float] = None  # min d(x0, g x0) over frontier words
    relations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def basepoint(self) -> HPoint:
        return _send_to_zero_infinity(self.base).inverse().apply_h(HPoint(0j, 1.0))


def _geodesic_vec(g: Geodesic):
    p, q = g.endpoints
    return np.array(p.sphere_point() + q.sphere_point())


def _swap_vec(v):
    return np.concatenate([v[3:], v[:3]])


class _GeodesicDeduper:
    """Chordal matching of unordered endpoint pairs on the sphere."""

    def __init__(self, tol: float = 1e-9):
        self.tol = tol
        self._rows = []
        self._arr = None

    def find(self, g: Geodesic) -> Optional[int]:
        if not self._rows:
            return None
        if self._arr is None or self._arr.shape[0] != len(self._rows):
            self._arr = np.array(self._rows)
        v = _geodesic_vec(g)
        d1 = np.abs(self._arr - v).max(axis=1)
        d2 = np.abs(self._arr - _swap_vec(v)).max(axis=1)
        d = np.minimum(d1, d2)
        j = int(d.argmin())
        return j if d[j] <= self.tol else None

    def add(self, g: Geodesic) -> int:
        self._rows.append(list(_geodesic_vec(g)))
        self._arr = None
        return len(self._rows) - 1


def lifts_of_geodesic(G: GroupPresentation, deltaword: Word, maxlen: int) -> LiftSet:
    """Distinct geodesics {g . axis(deltaword)} over the word ball of radius maxlen.

    Elements fixing both base endpoints are stabilizer elements and create no
    new lift; stabilizers are recognized by endpoint comparison, not by
    assuming anything about the abstract stabilizer.
    """
    core = G.element(deltaword)
    if classify(core) != "loxodromic":
        raise NotLoxodromic(
            f"word {deltaword.to_string(G.names)!r} is {classify(core)}"
        )
    base = axis(core)
    ball = enumerate_elements(G, maxlen)
    dedup = _GeodesicDeduper()
    dedup.add(base)
    lifts = [Lift(base, Word(), 0)]
    for g, w in ball.elements:
        if len(w) == 0:
            continue
        geo = g.apply_geodesic(base)
        if dedup.find(geo) is None:
            dedup.add(geo)
            lifts.append(Lift(geo, w, len(w)))
    ls = LiftSet(
        base=base,
        core=core,
        deltaword=deltaword,
        lifts=lifts,
        horizon=maxlen,
        relations=ball.relations,
        warnings=ball.warnings,
    )
    x0 = ls.basepoint()
    frontier_disp = [
        g.apply_h(x0).dist(x0) for g, w in ball.elements if len(w) == maxlen
    ]
    ls.displacement = min(frontier_disp) if frontier_disp else None
    return ls


@dataclass(frozen=True)
class OrthoEntry:
    """One ortholength-spectrum entry: lift index, complex distance, coset word."""

    index: int
    distance: ComplexDistance
    word: Word


def ortho_spectrum(L: LiftSet, cutoff: float, max_wordlen: Optional[int] = None):
    """Sorted ortholength spectrum between the base lift and every other lift.

    Returns (entries, diagnostics); lifts sharing an ideal endpoint with the
    base are reported as diagnostics, not failures.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    entries = []
    diagnostics = []
    for j, lift in enumerate(L.lifts[1:], start=1):
        if max_wordlen is not None and lift.wordlen > max_wordlen:
            continue
        try:
            dist = orthodistance(L.base, lift.geodesic)
        except SharedEndpoint:
            diagnostics.append((j, "shares an endpoint with the base lift"))
            continue
        if dist.d <= cutoff:
            entries.append(OrthoEntry(j, dist, lift.word))
    entries.sort(key=lambda e: (e.distance.d, len(e.word), e.word.sort_key(), e.index))
    return entries, diagnostics


@dataclass(frozen=True)
class TubeRadius:
    radius: Optional[float]  # None means unbounded within the horizon
    witness: Optional[OrthoEntry]
    horizon: int


def tube_radius(L: LiftSet) -> TubeRadius:
    """Half the minimal real orthodistance between the base and any other lift.

    An upper bound on the true tube radius: only lifts within the word-length
    horizon are seen.  None (unbounded) when no other lift was found.
    """
    entries, _ = ortho_spectrum(L, cutoff=math.inf)
    if not entries:
        return TubeRadius(None, None, L.horizon)
    best = entries[0]
    return TubeRadius(best.distance.d / 2.0, best, L.horizon)


def spectrum_is_stable(L: LiftSet, cutoff: float) -> Optional[bool]:
    """True when the spectrum within cutoff is identical at the last two horizons.

    None when the lift set has no previous horizon to compare against.
    """
    if L.horizon < 1:
        return None
    cur, _ = ortho_spectrum(L, cutoff)
    prev, _ = ortho_spectrum(L, cutoff, max_wordlen=L.horizon - 1)
    return len(cur) == len(prev)


def check_log3_tube(L: LiftSet, tol: float = TOL) -> str:
    """'holds' / 'fails' / 'inconclusive' for the (log 3)/2 tube-radius test.

    Fails as soon as any witnessed orthodistance puts the radius below the
    threshold (the computed radius is an upper bound, so this is certain up to
    numerics).  Holds only when the radius clears the threshold and the
    sub-threshold spectrum is stable across the last two horizons.
    """
    tr = tube_radius(L)
    if tr.radius is not None and tr.radius < LOG3_HALF - tol:
        return "fails"
    stable = spectrum_is_stable(L, cutoff=2.0 * (LOG3_HALF + tol))
    if stable is None or not stable:
        return "inconclusive"
    if tr.radius is None or tr.radius > LOG3_HALF + tol:
        return "holds"
    return "inconclusive"


def tube_domain_faces(L: LiftSet, samples: int = 400):
    """Indices of lifts whose midplane contributes a face of the Dirichlet tube domain.

    Sampling-based: a reported face is certain up to tolerance; a face meeting
    the domain in a region smaller than the sample spacing may be missed.
    """
    if len(L.lifts) < 2:
        raise ValueError("need at least two lifts")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    # work in the chart where the base is the vertical axis; every midplane is
    # then an honest hemisphere not meeting the axis
    t = _send_to_zero_infinity(L.base)
    base0 = Geodesic.through(0.0, math.inf)
    planes = []  # (index, center, radius)
    for j, lift in enumerate(L.lifts[1:], start=1):
        geo = t.apply_geodesic(lift.geodesic)
        try:
            c = midplane(base0, geo)
        except (SharedEndpoint, IntersectingLines):
            continue
        planes.append((j, c.center, c.radius))
    if not planes:
        return []
    n_theta = max(8, int(math.ceil(math.sqrt(2.0 * samples))))
    n_phi = max(4, int(math.ceil(samples / n_theta)))
    thetas = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    phis = (np.arange(n_phi) + 0.5) * (math.pi / 2.0) / n_phi
    centers = np.array([c for _, c, _ in planes])
    radii = np.array([r for _, _, r in planes])
    faces = []
    for k, (j, cj, rj) in enumerate(planes):
        z = cj + rj * np.outer(np.cos(phis), np.exp(1j * thetas))
        tt = rj * np.sin(phis)[:, None] * np.ones_like(thetas)[None, :]
        zz = z.ravel()[None, :]
        hh = tt.ravel()[None, :]
        u = (
            np.abs(zz - centers[:, None]) ** 2
            + hh**2
            - (radii**2)[:, None]
        )
        mask = np.ones(len(planes), dtype=bool)
        mask[k] = False
        inside = (u[mask] > 1e-9 * (radii[mask] ** 2)[:, None]).all(axis=0)
        if inside.any():
            faces.append(j)
    return faces
