"""Calculus with words in root elements, torus elements and Weyl
representatives.

A word is a list of atoms:

    ('x', root, coeff)   root element x_root(coeff)
    ('h', i, coeff)      torus element h_i(coeff), i a 1-based simple index
    ('n', i)             Weyl representative n_i = x_i(1) x_{-i}(-1) x_i(1)

Coefficients live in any ring from gcr.rings.  Products of root elements
with positive roots are collected to the canonical ascending-root order by
the Chevalley swap identity; conjugation of such words by arbitrary root
elements is done atom by atom with the same identity.  Everything here can
be cross-checked against adjoint matrices, and the tests do so.
"""

from __future__ import annotations

import random
import re

import numpy as np

from .chevalley import ConstantTable
from .rings import ExtField, default_ext, rank, sparse_identity, sparse_mul
from .rootsystem import Root


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Root) -> Root:
    return tuple(-x for x in a)


def _scale(k: int, a: Root) -> Root:
    return tuple(k * x for x in a)


# -- collection --------------------------------------------------------------

def collect(table: ConstantTable, ring, atoms) -> list:
    """Canonical form of a product of root elements whose roots all lie in
    some closed set of positive roots: ascending total order, merged
    coefficients, zero coefficients dropped.  Atoms are (root, coeff)."""
    rs = table.rs
    work = [(r, c) for r, c in atoms if not ring.is_zero(c)]
    for r, _ in work:
        if r not in rs.index:
            raise ValueError(f"collection needs positive roots, got {rs.format_root(r)}")
    changed = True
    while changed:
        changed = False
        for k in range(len(work) - 1):
            (b, u), (a, t) = work[k], work[k + 1]
            if rs.index[b] > rs.index[a]:
                tail = []
                for i, j, r, cc in table.commutator_coeffs(a, b):
                    coeff = ring.from_int(cc)
                    coeff = ring.mul(coeff, _ring_pow(ring, ring.neg(t), i))
                    coeff = ring.mul(coeff, _ring_pow(ring, u, j))
                    if not ring.is_zero(coeff):
                        tail.append((r, coeff))
                work[k:k + 2] = [(a, t), (b, u)] + tail
                changed = True
                break
            if a == b:
                s = ring.add(u, t)
                work[k:k + 2] = [(a, s)] if not ring.is_zero(s) else []
                changed = True
                break
    return work


def _ring_pow(ring, a, n: int):
    out = ring.one
    for _ in range(n):
        out = ring.mul(out, a)
    return out


def invert_unipotent(table, ring, atoms) -> list:
    rev = [(r, ring.neg(c)) for r, c in reversed(atoms)]
    return collect(table, ring, rev)


def multiply(table, ring, *words) -> list:
    flat = [a for w in words for a in w]
    return collect(table, ring, flat)


def power(table, ring, atoms, m: int) -> list:
    out = []
    for _ in range(m):
        out = multiply(table, ring, out, atoms)
    return out


# -- conjugation -------------------------------------------------------------

def conj_atom_by_x(table, ring, alpha: Root, t, beta: Root, u) -> list:
    """x_alpha(t) x_beta(u) x_alpha(-t) as a list of (root, coeff); needs
    alpha != +-beta."""
    if alpha == beta:
        return [(beta, u)]
    if alpha == _neg(beta):
        raise ValueError("conjugation by the opposite root element leaves the unipotent world")
    out = [(beta, u)]
    for i, j, r, cc in table.commutator_coeffs(beta, alpha):
        # x_alpha(t) x_beta(u) = x_beta(u) x_alpha(t) prod x_{i beta + j alpha}(C (-u)^i t^j)
        coeff = ring.from_int(cc)
        coeff = ring.mul(coeff, _ring_pow(ring, ring.neg(u), i))
        coeff = ring.mul(coeff, _ring_pow(ring, t, j))
        if ring.is_zero(coeff):
            continue
        out.extend(conj_atom_by_x(table, ring, alpha, t, r, coeff))
    return out


def conj_by_x(table, ring, alpha: Root, t, atoms) -> list:
    """Conjugate a word of root atoms: x_alpha(t) w x_alpha(-t)."""
    out = []
    for r, c in atoms:
        out.extend(conj_atom_by_x(table, ring, alpha, t, r, c))
    return out


def conj_by_word(table, ring, conjugator, atoms) -> list:
    """Conjugate by a product of root atoms, leftmost outermost:
    g = a1 a2 ... an gives a1 (a2 (... an w an^-1 ...) a2^-1) a1^-1."""
    out = list(atoms)
    for alpha, t in reversed(conjugator):
        out = conj_by_x(table, ring, alpha, t, out)
    return out


def torus_eval(table, gamma: Root, torus_atoms, ring):
    """gamma(h) for h a product of ('h', i, coeff) atoms."""
    val = ring.one
    for atom in torus_atoms:
        _, i, c = atom
        k = table.rs.pairing_index(gamma, i - 1)
        val = ring.mul(val, _coeff_pow(ring, c, k))
    return val


def _coeff_pow(ring, c, k: int):
    if k >= 0:
        return _ring_pow(ring, c, k)
    if hasattr(ring, "inv"):
        return _ring_pow(ring, ring.inv(c), -k)
    # Laurent monomial in a polynomial ring
    if len(c) != 1:
        raise ValueError("negative torus powers need monomial entries")
    (e, v), = c.items()
    inv = {tuple(-x for x in e): pow(v, ring.p - 2, ring.p)}
    return _ring_pow(ring, inv, -k)


def conj_by_torus(table, ring, torus_atoms, atoms) -> list:
    """h w h^-1 for h a torus word: x_gamma(c) becomes x_gamma(gamma(h) c)."""
    out = []
    for r, c in atoms:
        out.append((r, ring.mul(torus_eval(table, r, torus_atoms, ring), c)))
    return out


def weyl_conj_data(table: ConstantTable, word: tuple[int, ...], gamma: Root):
    """(w(gamma), sign) for conjugation by n_word = n_{i1} n_{i2} ...,
    applied leftmost outermost."""
    r = gamma
    sign = 1
    for i in reversed(word):
        alpha = table.rs.simple(i)
        sign *= table.eta(alpha, r)
        k = table.rs.pairing(r, alpha)
        r = tuple(x - k * a for x, a in zip(r, alpha))
    return r, sign


def conj_by_weyl(table, ring, word, atoms) -> list:
    out = []
    for r, c in atoms:
        img, sign = weyl_conj_data(table, tuple(word), r)
        out.append((img, ring.mul(ring.from_int(sign), c)))
    return out


# -- adjoint matrices of words ----------------------------------------------

def atom_adjoint(table: ConstantTable, ring, atom) -> dict:
    """Sparse adjoint matrix of one atom over the given ring."""
    kind = atom[0]
    if kind == "x":
        _, gamma, c = atom
        powers = table.ad_divided_powers(gamma)
        out: dict = {}
        ck = ring.one
        for k, mat in enumerate(powers):
            if k:
                ck = ring.mul(ck, c)
            if ring.is_zero(ck):
                break
            for j, col in mat.items():
                dst = out.setdefault(j, {})
                for r, v in col.items():
                    dst[r] = ring.add(dst.get(r, ring.zero), ring.mul(ck, ring.from_int(v)))
        return {j: {r: v for r, v in col.items() if not ring.is_zero(v)}
                for j, col in out.items()}
    if kind == "h":
        _, i, c = atom
        out = {}
        for key, j in table.basis_index.items():
            if key[0] == "h":
                out[j] = {j: ring.one}
            else:
                k = table.rs.pairing_index(key[1], i - 1)
                v = _coeff_pow(ring, c, k)
                out[j] = {j: v}
        return out
    if kind == "n":
        _, i = atom
        alpha = table.rs.simple(i)
        m = table.adjoint_root_elem_int(alpha, 1)
        m2 = table.adjoint_root_elem_int(_neg(alpha), -1)
        from .chevalley import _int_sparse_mul
        mi = _int_sparse_mul(m, _int_sparse_mul(m2, m))
        return {j: {r: ring.from_int(v) for r, v in col.items()
                    if not ring.is_zero(ring.from_int(v))}
                for j, col in mi.items()}
    raise ValueError(f"unknown atom {atom!r}")


def word_adjoint(table, ring, atoms) -> dict:
    out = sparse_identity(table.dim, ring)
    for atom in atoms:
        out = sparse_mul(ring, out, atom_adjoint(table, ring, atom))
    return out


# -- parsing and formatting --------------------------------------------------

_ATOM_RE = re.compile(
    r"x\(\s*(-?\d+)\s*;\s*([^)]*)\)"
    r"|h(\d+)\(\s*([^)]*)\)"
    r"|n(\d+)"
)


def parse_word(table: ConstantTable, ring, text: str) -> list:
    """Parse a word like "x(122321; -k*l*c^5) h2(t^10) n4".  Coefficients
    are parsed by the ring (PolyRing) or as integers for plain fields."""
    atoms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _ATOM_RE.match(text, pos)
        if not m:
            if text[pos] in " \t*":
                pos += 1
                continue
            raise ValueError(f"cannot parse word at {text[pos:pos+20]!r}")
        if m.group(1) is not None:
            root = table.rs.parse_root(m.group(1))
            atoms.append(("x", root, _parse_coeff(ring, m.group(2))))
        elif m.group(3) is not None:
            atoms.append(("h", int(m.group(3)), _parse_coeff(ring, m.group(4))))
        else:
            atoms.append(("n", int(m.group(5))))
        pos = m.end()
    return atoms


def _parse_coeff(ring, s: str):
    s = s.strip()
    if hasattr(ring, "parse"):
        return ring.parse(s)
    return ring.from_int(int(s))


def format_word(table: ConstantTable, ring, atoms) -> str:
    parts = []
    for atom in atoms:
        if atom[0] == "x":
            _, r, c = atom
            cs = ring.format(c) if hasattr(ring, "format") else str(c)
            parts.append(f"x({table.rs.format_root(r)}; {cs})")
        elif atom[0] == "h":
            _, i, c = atom
            cs = ring.format(c) if hasattr(ring, "format") else str(c)
            parts.append(f"h{i}({cs})")
        else:
            parts.append(f"n{atom[1]}")
    return " ".join(parts) if parts else "1"


# -- fixed points ------------------------------------------------------------

def word_adjoint_ext(table: ConstantTable, field: ExtField, atoms) -> np.ndarray:
    """Adjoint matrix of a word with field coefficients, as a blocked GF(p)
    integer matrix of size dim * e."""
    n = table.dim
    out = np.eye(n * field.e, dtype=np.int64)
    for atom in atoms:
        sp = atom_adjoint(table, field, atom)
        m = np.zeros((n, n, field.e), dtype=np.int64)
        for j, col in sp.items():
            for r, v in col.items():
                m[r, j] = v
        out = out @ field.block_matrix(m) % field.p
    return out


def fixed_point_dim(table: ConstantTable, p: int, atom_sets, seed: int = 0,
                    min_samples: int = 5, max_samples: int = 12) -> int:
    """Dimension of the common fixed space of a family of group elements on
    the Lie algebra, over the algebraic closure of GF(p).

    atom_sets is a list of callables; each takes (field, rng) and returns a
    word with coefficients in the field (a random group element of the
    family).  Sampling continues past min_samples until the stacked kernel
    dimension repeats, and that stable value is returned."""
    field = default_ext(p)
    rng = random.Random(seed)
    n = table.dim * field.e
    stacked = np.zeros((0, n), dtype=np.int64)
    prev = None
    count = 0
    while count < max_samples:
        for make in atom_sets:
            atoms = make(field, rng)
            m = (word_adjoint_ext(table, field, atoms) - np.eye(n, dtype=np.int64)) % p
            stacked = np.concatenate([stacked, m], axis=0)
        count += 1
        dim = table.dim - rank(stacked, p) // field.e
        if count >= min_samples and dim == prev:
            return dim
        prev = dim
    return prev
