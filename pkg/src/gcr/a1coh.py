"""Exact first cohomology for rank-one modules built from twisted tilting
factors.

A *term* is a tensor product of Frobenius-twisted indecomposable tilting
modules for SL2, written as a sorted tuple of ``(m, t)`` pairs meaning
``T(m)^[t]``.  Because every restricted simple module equals the tilting
module of the same highest weight, the restrictions of the built-in
subgroup actions to unipotent-radical levels always decompose into sums of
such terms, and H^1 of each term can be computed exactly:

* a product of tiltings at one twist is tilting, hence has no H^1, and its
  indecomposable tilting summands are determined by its character;
* ``T(a) (x) T(b)^[1] = T(a + pb)`` whenever ``p - 1 <= a <= 2p - 2``, which
  also rewrites any ``T(m)`` with ``m > 2p - 2`` as a twisted product;
* for ``T(n) (x) N^[1]`` with ``n`` in the untwisted slot, the
  Lyndon-Hochschild-Serre sequence over the first Frobenius kernel G_1
  collapses: ``T(n)`` with ``p - 1 <= n <= 2p - 2`` is projective over G_1,
  restricted simples L(n) = T(n) with ``n <= p - 2`` have vanishing
  G_1-cohomology except ``H^1(G_1, L(p-2)) = L(1)^[1]``.  This yields

      n = 0:               H^1 = H^1(N)
      1 <= n <= p - 3:     H^1 = 0
      n = p - 2:           H^1 = Hom(L(1), N)
      p - 1 <= n <= 2p-3:  H^1 = 0
      n = 2p - 2:          H^1 = H^1(N)   (G_1-fixed points are trivial)

  with the Hom- and invariant dimensions computed by the same kind of
  recursion.

The module also provides alternating, symmetric and mixed (2,1) power
operations on sums of terms, so that fundamental modules of classical
factors restrict within the same representation.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter

from .modrep import a1_tilting_weights


# -- characters ---------------------------------------------------------------

def chi_coeffs(weights) -> Counter:
    """Expansion of a weight multiset into Weyl characters chi(n)."""
    remaining = Counter(weights)
    out: Counter = Counter()
    while True:
        remaining = Counter({w: c for w, c in remaining.items() if c})
        if not remaining:
            return out
        top = max(remaining)
        mult = remaining[top]
        if top < 0 or mult < 0:
            raise ArithmeticError("weight multiset is not a sum of Weyl characters")
        out[top] += mult
        for w in range(top, -top - 1, -2):
            remaining[w] -= mult


@functools.lru_cache(maxsize=None)
def tilting_product(ms: tuple, p: int) -> tuple:
    """Indecomposable tilting summands of a product of tiltings at a single
    twist: ``(x) T(m)`` for m in ms, as sorted ((n, mult), ...)."""
    weights = [0]
    for m in ms:
        tw = a1_tilting_weights(m, p)
        weights = [a + b for a in weights for b in tw]
    remaining = Counter(weights)
    out: Counter = Counter()
    while True:
        remaining = Counter({w: c for w, c in remaining.items() if c})
        if not remaining:
            return tuple(sorted(out.items()))
        top = max(remaining)
        mult = remaining[top]
        if top < 0 or mult < 0:
            raise ArithmeticError("product of tiltings with non-tilting character")
        out[top] += mult
        for w in a1_tilting_weights(top, p):
            remaining[w] -= mult


def _donkin_split(n: int, p: int) -> tuple[int, int]:
    """n = a + p*b with p - 1 <= a <= 2p - 2 (requires n > 2p - 2)."""
    a = (p - 1) + (n - (p - 1)) % p
    return a, (n - a) // p


def _strip(factors) -> tuple:
    out = tuple(sorted((m, t) for m, t in factors if m != 0))
    if not out:
        return ()
    t0 = min(t for _, t in out)
    return tuple((m, t - t0) for m, t in out)


def _split_levels(factors):
    level0 = tuple(sorted(m for m, t in factors if t == 0))
    higher = tuple(sorted((m, t - 1) for m, t in factors if t >= 1))
    return level0, higher


@functools.lru_cache(maxsize=None)
def _h1_term(factors: tuple, p: int) -> int:
    factors = _strip(factors)
    if not factors:
        return 0
    level0, higher = _split_levels(factors)
    tilts = tilting_product(level0, p)
    if not higher:
        return 0
    total = 0
    for n, mult in tilts:
        if n == 0 or n == 2 * p - 2:
            total += mult * _h1_term(higher, p)
        elif n == p - 2:
            total += mult * _hom_l1(higher, p)
        elif n <= 2 * p - 3:
            continue
        else:
            a, b = _donkin_split(n, p)
            rewritten = ((a, 0), (b, 1)) + tuple((m, t + 1) for m, t in higher)
            total += mult * _h1_term(rewritten, p)
    return total


@functools.lru_cache(maxsize=None)
def _hom_l1(factors: tuple, p: int) -> int:
    """dim Hom(L(1), M) for M the product of the twisted tilting factors."""
    factors = tuple(sorted((m, t) for m, t in factors if m != 0))
    if not factors:
        return 0
    if min(t for _, t in factors) >= 1:
        return 0
    level0, higher = _split_levels(factors)
    total = 0
    for n, mult in tilting_product(level0, p):
        if not higher:
            total += mult * chi_coeffs(a1_tilting_weights(n, p))[1]
            continue
        for d, md in tilting_product(tuple(sorted((1, n))), p):
            total += mult * md * _hom_tilt_twisted(d, higher, p)
    return total


@functools.lru_cache(maxsize=None)
def _inv(factors: tuple, p: int) -> int:
    """dim of the fixed points of the product of the twisted tilting factors."""
    factors = _strip(factors)
    if not factors:
        return 1
    level0, higher = _split_levels(factors)
    total = 0
    for n, mult in tilting_product(level0, p):
        if not higher:
            total += mult * chi_coeffs(a1_tilting_weights(n, p))[0]
        else:
            total += mult * _hom_tilt_twisted(n, higher, p)
    return total


@functools.lru_cache(maxsize=None)
def _hom_tilt_twisted(d: int, nfactors: tuple, p: int) -> int:
    """dim Hom(T(d), N^[1]) with N the product of the given factors.  Any
    such map factors through the largest quotient with trivial G_1-action,
    which vanishes unless d = 0 or d = 2p - 2, where it is trivial."""
    if d == 0 or d == 2 * p - 2:
        return _inv(nfactors, p)
    if d <= 2 * p - 3:
        return 0
    a, b = _donkin_split(d, p)
    return _hom_tilt_twisted(a, tuple(sorted(((b, 0),) + nfactors)), p)


def h1_dim(terms, p: int) -> int:
    """dim H^1 of a direct sum of twisted-tilting-product terms.  The input
    is an iterable of terms or a Counter keyed by terms."""
    if isinstance(terms, Counter):
        return sum(c * _h1_term(tuple(t), p) for t, c in terms.items())
    return sum(_h1_term(tuple(t), p) for t in terms)


def term_char(term, p: int) -> Counter:
    """Weight character of a single term."""
    weights = [0]
    for m, t in term:
        tw = [w * p ** t for w in a1_tilting_weights(m, p)]
        weights = [a + b for a in weights for b in tw]
    return Counter(weights)


def terms_char(terms, p: int) -> Counter:
    out: Counter = Counter()
    if isinstance(terms, Counter):
        items = terms.items()
    else:
        items = ((t, 1) for t in terms)
    for term, mult in items:
        for w, c in term_char(term, p).items():
            out[w] += mult * c
    return out


# -- alternating / symmetric powers -------------------------------------------

# Decomposition of a power of a tensor product A (x) B over the symmetric
# group on 2 or 3 letters; "s21" is the Schur functor of the partition (2,1).

_POWER_SPLIT = {
    ("alt", 2): ((("sym", 2), ("alt", 2)), (("alt", 2), ("sym", 2))),
    ("sym", 2): ((("sym", 2), ("sym", 2)), (("alt", 2), ("alt", 2))),
    ("alt", 3): ((("sym", 3), ("alt", 3)), (("s21", 3), ("s21", 3)),
                 (("alt", 3), ("sym", 3))),
    ("sym", 3): ((("sym", 3), ("sym", 3)), (("s21", 3), ("s21", 3)),
                 (("alt", 3), ("alt", 3))),
    ("s21", 3): ((("sym", 3), ("s21", 3)), (("s21", 3), ("sym", 3)),
                 (("s21", 3), ("alt", 3)), (("alt", 3), ("s21", 3)),
                 (("s21", 3), ("s21", 3))),
}


@functools.lru_cache(maxsize=None)
def _tilt_power(m: int, shape: str, k: int, p: int) -> tuple:
    """Tilting summands ((n, mult), ...) of the k-th power of T(m) cut out
    by the given symmetrizer; exact for k < p."""
    if k >= p:
        raise NotImplementedError("power not smaller than the characteristic")
    ws = a1_tilting_weights(m, p)
    idx = range(len(ws))
    if shape == "alt":
        weights = [sum(ws[i] for i in c) for c in itertools.combinations(idx, k)]
    elif shape == "sym":
        weights = [sum(ws[i] for i in c)
                   for c in itertools.combinations_with_replacement(idx, k)]
    elif shape == "s21":
        # ch S_(2,1)(V) = ch(V) * ch(alt^2 V) - ch(alt^3 V)
        alt2 = Counter(ws[i] + ws[j] for i, j in itertools.combinations(idx, 2))
        alt3 = Counter(sum(ws[i] for i in c)
                       for c in itertools.combinations(idx, 3))
        char: Counter = Counter()
        for w, c in alt2.items():
            for v in ws:
                char[w + v] += c
        char.subtract(alt3)
        weights = list(char.elements())
    else:
        raise ValueError(shape)
    remaining = Counter(weights)
    out: Counter = Counter()
    while True:
        remaining = Counter({w: c for w, c in remaining.items() if c})
        if not remaining:
            return tuple(sorted(out.items()))
        top = max(remaining)
        mult = remaining[top]
        if top < 0 or mult < 0:
            raise ArithmeticError("symmetrized power with non-tilting character")
        out[top] += mult
        for w in a1_tilting_weights(top, p):
            remaining[w] -= mult


def _term_power(term: tuple, shape: str, k: int, p: int) -> Counter:
    """Counter of terms for the symmetrized k-th power of a single term."""
    if k == 0:
        return Counter({(): 1})
    if k == 1:
        return Counter({term: 1})
    if len(term) == 0:
        # powers of the trivial module
        if shape == "alt":
            return Counter()
        if shape == "sym":
            return Counter({(): 1})
        return Counter()
    if len(term) == 1:
        (m, t), = term
        out: Counter = Counter()
        for n, mult in _tilt_power(m, shape, k, p):
            if n == 0:
                out[()] += mult
            else:
                out[((n, t),)] += mult
        return out
    head, rest = term[:1], term[1:]
    out = Counter()
    for (sh_a, ka), (sh_b, kb) in _POWER_SPLIT[(shape, k)]:
        pa = _term_power(head, sh_a, ka, p)
        pb = _term_power(rest, sh_b, kb, p)
        for ta, ca in pa.items():
            for tb, cb in pb.items():
                out[tuple(sorted(ta + tb))] += ca * cb
    return out


def sum_power(terms, shape: str, k: int, p: int) -> Counter:
    """Symmetrized k-th power of a direct sum of terms.  For the alternating
    power the summands distribute as alt^k(A + B) = sum alt^i A (x) alt^j B,
    and similarly with symmetric powers throughout for "sym"."""
    if shape not in ("alt", "sym"):
        raise ValueError(shape)
    terms = list(terms.elements()) if isinstance(terms, Counter) else list(terms)
    per_degree: list[Counter] = [Counter({(): 1})] + [Counter() for _ in range(k)]
    for term in terms:
        new_degrees = [Counter() for _ in range(k + 1)]
        for j in range(0, k + 1):
            piece = _term_power(tuple(term), shape, j, p)
            if not piece:
                continue
            for i in range(0, k + 1 - j):
                if not per_degree[i]:
                    continue
                for ta, ca in per_degree[i].items():
                    for tb, cb in piece.items():
                        new_degrees[i + j][tuple(sorted(ta + tb))] += ca * cb
        per_degree = new_degrees
    return per_degree[k]
