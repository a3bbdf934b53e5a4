"""Candidate scan: which irreducible rank-one (and G2) subgroups of Levi
factors see nonvanishing first cohomology on some level of the unipotent
radical.

The enumeration of irreducible actions per simple factor type is a built-in
table; restrictions of level summands are computed through alternating
powers (type A), the natural and half-spin modules (type D), and built-in
27- and 56-dimensional restriction rules for E6 and E7 factors.

For rank-one candidates the restrictions are carried as sums of tensor
products of twisted tilting modules, on which first cohomology is computed
exactly; a character-level test would over-flag whenever an H^1-positive
composition factor sits inside a tilting summand (for instance inside
T(2p) = T(p) (x) T(1)^[1]).  G2 candidates are evaluated on composition
factors, with structurally-tilting summands pruned.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass, field

from .a1coh import h1_dim, sum_power, terms_char
from .modrep import (
    ModExpr,
    a1_comp_factors,
    g2_comp_factors,
    g2_h1_irreducible,
    h1_irreducible,
    format_module,
    m_alt,
    m_simple,
    m_spin,
    m_sum,
    m_tensor,
    module_is_tilting,
    module_subst,
    module_twists,
    module_weights,
    parse_module,
    spin_halves_from_char,
)
from .parabolic import (
    component_type,
    decompose_level,
    levi_components,
    radical_levels,
)
from .rootsystem import RootSystem, build_root_system


# -- canonical form for action expressions ------------------------------------

def _atom_key(e: ModExpr):
    tw = e.twist if isinstance(e.twist, int) else (99, e.twist)
    w = e.weight if isinstance(e.weight, int) else 100 + 10 * e.weight[0] + e.weight[1]
    return (-w, tw)


def canonical_action(e: ModExpr) -> ModExpr:
    """Sort tensor factors and sum terms into the fixed display order:
    higher weights first, lower twists first."""
    if e.kind == "sum":
        parts = [canonical_action(t) for t in e.parts]
        parts.sort(key=_term_key)
        return m_sum(*parts)
    if e.kind == "tensor":
        parts = [canonical_action(t) for t in e.parts]
        parts.sort(key=_atom_key)
        return m_tensor(*parts)
    return e


def _term_key(e: ModExpr):
    if e.kind == "tensor":
        return tuple(_atom_key(t) for t in e.parts)
    return (_atom_key(e),)


def action_descriptor(e: ModExpr) -> str:
    return format_module(canonical_action(e))


# -- built-in irreducible actions per factor type ------------------------------

def _tensor_shapes(weights: tuple[int, ...], tmax: int):
    """All assignments of pairwise distinct twists to the tensor factors."""
    k = len(weights)
    for tw in itertools.permutations(range(tmax + 1), k):
        yield m_tensor(*(m_simple(w, t) for w, t in zip(weights, tw))) if k > 1 \
            else m_simple(weights[0], tw[0])


_A_SHAPES = {
    2: [(1,)],
    3: [(2,)],
    4: [(3,), (1, 1)],
    5: [(4,)],
    6: [(5,), (2, 1)],
    7: [(6,)],
}

_D_PATTERNS = {
    4: [[(6,), ()], [(4,), (2,)], [(3, 1)], [(2,), (1, 1), ()],
        [(1, 1), (1, 1)]],
    5: [[(6,), (2,)], [(4,), (4,)], [(4,), (1, 1), ()],
        [(2,), (2,), (1, 1)], [(2,), (2,), (2,), ()]],
    6: [[(5, 1)], [(6,), (4,)], [(6,), (1, 1), ()], [(2, 1, 1)],
        [(2, 2), (2,)], [(4,), (2,), (1, 1)], [(3, 1), (1, 1)],
        [(4,), (2,), (2,), ()], [(3, 1), (2,), ()],
        [(2,), (2,), (2,), (2,)], [(2,), (1, 1), (1, 1), ()],
        [(1, 1), (1, 1), (1, 1)]],
    7: [[(6,), (6,)], [(6,), (2,), (2,), ()], [(6,), (2,), (1, 1)],
        [(4,), (4,), (1, 1)], [(4,), (4,), (2,), ()], [(4,), (3, 1), ()],
        [(4,), (2,), (2,), (2,)], [(3, 1), (2,), (2,)],
        [(4,), (1, 1), (1, 1), ()], [(2,), (2,), (2,), (1, 1), ()],
        [(2,), (2,), (1, 1), (1, 1)]],
}


def _shape_ok(weights, p: int) -> bool:
    return all(w <= p - 1 for w in weights)


@functools.lru_cache(maxsize=None)
def a_type_actions(rank: int, p: int, tmax: int) -> tuple[ModExpr, ...]:
    """Irreducible rank-one actions on the natural module of A_rank, from the
    built-in table (no entries exist above rank 6)."""
    out = []
    seen = set()
    for shape in _A_SHAPES.get(rank + 1, []):
        if not _shape_ok(shape, p):
            continue
        for e in _tensor_shapes(shape, tmax):
            c = canonical_action(e)
            d = format_module(c)
            if d not in seen:
                seen.add(d)
                out.append(c)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def d_type_actions(rank: int, p: int, tmax: int) -> tuple[ModExpr, ...]:
    """Orthogonal irreducible rank-one actions on the natural module of
    D_rank: sums of pairwise distinct self-dual terms from the built-in
    patterns."""
    out = []
    seen = set()
    for pattern in _D_PATTERNS.get(rank, []):
        live = [shape for shape in pattern if shape]
        trivial = len(live) < len(pattern)
        if any(not _shape_ok(s, p) for s in live):
            continue
        for combo in itertools.product(*(_tensor_shapes(s, tmax) for s in live)):
            terms = [canonical_action(t) for t in combo]
            descs = [format_module(t) for t in terms]
            if len(set(descs)) != len(descs):
                continue
            full = list(terms) + ([m_simple(0)] if trivial else [])
            c = canonical_action(full[0] if len(full) == 1 else m_sum(*full))
            d = format_module(c)
            if d not in seen:
                seen.add(d)
                out.append(c)
    return tuple(out)


# restriction rules for the 27-dimensional module under the built-in chains
# through E6, keyed by chain name: (slot shapes, constraints, template with
# slot twists a, b, c)

_E6_CHAINS = [
    ("A1A5", ("1", "5"), "all", "1[r] x 5[s] + T(8)[s] + 0"),
    ("A2G2", ("2", "6"), "distinct", "4[r] + 2[r] x 6[s] + 0"),
    ("A1A5", ("1", "2x1"), "all", "1[r] x 2[s] x 1[t] + 4[s] + 2[s] x 2[t] + 0"),
    ("A2A2A2", ("2", "2", "2"), "pairwise", "2[r] x 2[s] + 2[r] x 2[t] + 2[s] x 2[t]"),
]

# the same for the 56-dimensional module through E7 (p = 7 only); the A1D6
# chain is handled separately since its second slot ranges over the D6 table

_E7_CHAINS = [
    ("A1A1", ("1", "1"), "distinct", "6[r] x 3[s] + 4[r] x 1[s] + 2[r] x 5[s]"),
    ("A1G2", ("1", "6"), "distinct", "3[r] x 6[s] + 1[r] x T(10)[s]"),
    ("G2C3", ("6", "5"), "distinct", "6[r] x 5[s] + T(9)[s]"),
    ("G2C3", ("6", "2x1"), "mid-free", "6[r] x 2[s] x 1[t] + 4[s] x 1[t] + 3[t]"),
]

_SLOT_NAMES = "rst"


def _chain_slot_exprs(shapes, twists):
    out = []
    for shape, t in zip(shapes, twists):
        if shape == "2x1":
            out.append(m_tensor(m_simple(2, t[0]), m_simple(1, t[1])))
        else:
            out.append(m_simple(int(shape), t[0]))
    return out


def _chain_twist_choices(shapes, rule, p, tmax):
    slots = []
    for shape in shapes:
        if shape == "2x1":
            slots.append([(a, b) for a in range(tmax + 1)
                          for b in range(tmax + 1) if a != b])
        else:
            if int(shape) > p - 1:
                return
            slots.append([(a,) for a in range(tmax + 1)])
    for combo in itertools.product(*slots):
        lead = [c[0] for c in combo]
        if rule == "distinct" and lead[0] == lead[1]:
            continue
        if rule == "pairwise":
            # the three slots carry the same weight, so order them
            if len(set(lead)) != 3 or lead != sorted(lead):
                continue
        if rule == "mid-free" and combo[1][0] in (lead[0], combo[1][1]):
            continue
        yield combo


# -- factor candidates ---------------------------------------------------------

@dataclass(frozen=True)
class FactorCandidate:
    """An irreducible action of the scanned subgroup on one simple factor:
    enough data to describe itself, restrict any occurring fundamental
    weight, and expose its Frobenius twists."""
    descriptor: str
    twists: tuple[int, ...]
    kind: str                      # module | chain | g2
    expr: ModExpr | None = None
    chain: tuple = ()


def _nontrivial_twists(e: ModExpr) -> tuple[int, ...]:
    """Twists of the non-trivial atoms: a trivial summand is insensitive to
    twisting, so it must not anchor the normalisation."""
    if e.kind in ("sum", "tensor"):
        return tuple(t for part in e.parts for t in _nontrivial_twists(part))
    if e.weight == 0 or e.weight == (0, 0):
        return ()
    return tuple(module_twists(e))


def _module_candidate(e: ModExpr) -> FactorCandidate:
    return FactorCandidate(action_descriptor(e), _nontrivial_twists(e),
                           "module", expr=e)


def _chain_candidate(name: str, shapes, twists, v_expr: ModExpr) -> FactorCandidate:
    parts = []
    for shape, t in zip(shapes, twists):
        slot = _chain_slot_exprs((shape,), (t,))[0]
        parts.append(format_module(slot))
    desc = f"{name}({', '.join(parts)})"
    flat = tuple(t for tw in twists for t in tw)
    return FactorCandidate(desc, flat, "chain", expr=v_expr,
                           chain=(name, tuple(parts)))


@functools.lru_cache(maxsize=None)
def e6_factor_candidates(p: int, tmax: int) -> tuple[FactorCandidate, ...]:
    out = []
    for name, shapes, rule, template in _E6_CHAINS:
        for combo in _chain_twist_choices(shapes, rule, p, tmax):
            flat = [t for tw in combo for t in tw]
            subst = dict(zip(_SLOT_NAMES, flat))
            v27 = module_subst(parse_module(template), subst)
            out.append(_chain_candidate(name, shapes, combo, v27))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def e7_factor_candidates(p: int, tmax: int) -> tuple[FactorCandidate, ...]:
    if p != 7:
        return ()
    out = []
    for name, shapes, rule, template in _E7_CHAINS:
        for combo in _chain_twist_choices(shapes, rule, p, tmax):
            flat = [t for tw in combo for t in tw]
            subst = dict(zip(_SLOT_NAMES, flat))
            v56 = module_subst(parse_module(template), subst)
            out.append(_chain_candidate(name, shapes, combo, v56))
    # rank-one subgroups of the A1 D6 subsystem: second slot runs over the
    # D6 table, and the 56-dimensional module restricts as
    # 1[a] x M plus a half-spin of M
    for a in range(tmax + 1):
        for m in d_type_actions(6, p, tmax):
            desc = f"A1D6(1{f'[{a}]' if a else ''}, {format_module(m)})"
            flat = (a, *_nontrivial_twists(m))
            out.append(FactorCandidate(desc, flat, "chain",
                                       expr=m, chain=("A1D6", (a,))))
    return tuple(out)


_G2_FACTOR_ACTIONS = {
    "A6": m_simple((1, 0)),
    "D4": m_sum(m_simple((1, 0)), m_simple((0, 0))),
    "D7": m_simple((0, 1)),
    "E6": m_sum(m_simple((2, 0)), m_simple((0, 0))),   # the 27 through F4
}


def g2_factor_candidate(type_name: str) -> FactorCandidate | None:
    e = _G2_FACTOR_ACTIONS.get(type_name)
    if e is None:
        return None
    desc = "max F4" if type_name == "E6" else format_module(e)
    return FactorCandidate(desc, (0,), "g2", expr=e)


def factor_candidates(type_name: str, p: int, tmax: int) -> tuple[FactorCandidate, ...]:
    """All built-in irreducible rank-one actions for one simple factor."""
    fam, rank = type_name[0], int(type_name[1:])
    if fam == "A":
        return tuple(_module_candidate(e) for e in a_type_actions(rank, p, tmax))
    if fam == "D":
        return tuple(_module_candidate(e) for e in d_type_actions(rank, p, tmax))
    if fam == "E" and rank == 6:
        return e6_factor_candidates(p, tmax)
    if fam == "E" and rank == 7:
        return e7_factor_candidates(p, tmax)
    return ()


# -- restriction of a summand weight through a factor candidate ----------------

def _fundamental_position(weight: tuple[int, ...]) -> int | None:
    nz = [i for i, x in enumerate(weight) if x]
    if not nz:
        return None
    if len(nz) > 1 or weight[nz[0]] != 1:
        raise NotImplementedError(f"summand weight {weight} is not fundamental")
    return nz[0] + 1


def _expr_terms(e: ModExpr) -> Counter:
    """Twisted-tilting-product terms of an expression built from sums,
    tensor products, twisted simples or tiltings, and trivials.  Restricted
    simples are tilting modules of the same highest weight, so the atoms
    map directly onto (weight, twist) factors."""
    if e.kind == "sum":
        out: Counter = Counter()
        for part in e.parts:
            out += _expr_terms(part)
        return out
    if e.kind == "tensor":
        out = Counter({(): 1})
        for part in e.parts:
            out = _terms_tensor(out, _expr_terms(part))
        return out
    if e.kind in ("simple", "tilt"):
        if e.weight == 0:
            return Counter({(): 1})
        return Counter({((e.weight, e.twist),): 1})
    raise NotImplementedError(f"no term form for {e.kind!r} expressions")


def _terms_tensor(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for ta, ca in a.items():
        for tb, cb in b.items():
            out[tuple(sorted(ta + tb))] += ca * cb
    return out


def _summand_piece(e: ModExpr):
    """(weight shape, matching twists) of one orthogonal summand, weights
    descending and equal-weight twists ascending."""
    atoms = e.parts if e.kind == "tensor" else [e]
    pairs = sorted(((a.weight, a.twist) for a in atoms),
                   key=lambda wt: (-wt[0], wt[1]))
    pairs = [wt for wt in pairs if wt[0] != 0]
    return tuple(w for w, _ in pairs), tuple(t for _, t in pairs)


def _piece_spinors(shape, tw):
    """Spinor factor of one orthogonal summand.  Odd-dimensional summands
    have a single spin factor; even-dimensional ones contribute a half-spin
    pair, and the two half-spin modules of the whole group multiply the
    halves of the pairs with an even (resp. odd) number of minus signs."""
    if shape == ():
        return "odd", [()]
    if shape == (2,):
        return "odd", [((1, tw[0]),)]
    if shape == (4,):
        return "odd", [((3, tw[0]),)]
    if shape == (6,):
        return "odd", [((6, tw[0]),), ()]
    if shape == (2, 2):
        r, s = tw
        return "odd", [tuple(sorted(((3, r), (1, s)))),
                       tuple(sorted(((3, s), (1, r))))]
    if shape == (1, 1):
        s, t = tw
        return "even", ([((1, s),)], [((1, t),)])
    if shape == (3, 1):
        r, s = tw
        return "even", ([tuple(sorted(((3, r), (1, s))))],
                        [((4, r),), ((2, s),)])
    if shape == (5, 1):
        r, s = tw
        return "even", ([tuple(sorted(((8, r), (1, s)))), ((3, s),)],
                        [((9, r),), tuple(sorted(((5, r), (2, s))))])
    if shape == (2, 1, 1):
        r, s, t = tw
        plus = [tuple(sorted(((4, r), (1, s)))), ((3, s),),
                tuple(sorted(((2, r), (2, t), (1, s))))]
        minus = [tuple(sorted(((4, r), (1, t)))), ((3, t),),
                 tuple(sorted(((2, r), (2, s), (1, t))))]
        return "even", (plus, minus)
    raise NotImplementedError(f"no spinor rule for summand shape {shape}")


def _tensor_term_lists(lists):
    out = [()]
    for lst in lists:
        out = [tuple(sorted(a + b)) for a in out for b in lst]
    return out


def spin_half_terms(expr: ModExpr, p: int) -> tuple[Counter, Counter]:
    """The two half-spin modules of a D-factor, restricted through the given
    orthogonal action, as term sums.  With no odd-dimensional summands the
    half-spin pairs of the even summands split by sign parity; otherwise
    both restrictions agree and carry multiplicity 2^(odd/2 - 1)."""
    summands = expr.parts if expr.kind == "sum" else [expr]
    odd, even = [], []
    for s in summands:
        kind, data = _piece_spinors(*_summand_piece(s))
        (odd if kind == "odd" else even).append(data)
    if odd:
        if len(odd) % 2:
            raise ArithmeticError("odd number of odd-dimensional summands")
        mult = 2 ** (len(odd) // 2 - 1)
        lists = odd + [plus + minus for plus, minus in even]
        half: Counter = Counter()
        for term in _tensor_term_lists(lists):
            half[term] += mult
        return half, half
    halves = [Counter(), Counter()]
    for signs in itertools.product((0, 1), repeat=len(even)):
        target = halves[sum(signs) % 2]
        for term in _tensor_term_lists([ev[s] for ev, s in zip(even, signs)]):
            target[term] += 1
    return halves[0], halves[1]


def factor_assignments(cand: FactorCandidate, type_name: str, p: int):
    """Conjugacy classes of the factor action: a candidate on a D-factor (or
    through a D6 subsystem) splits into a class per ordering of its two
    half-spin restrictions.  Equal halves mean a single class; non-D factors
    carry no choice."""
    fam = type_name[0]
    expr = cand.expr
    if (cand.kind == "module" and fam == "D") or (
            cand.kind == "chain" and cand.chain[0] == "A1D6"):
        h0, h1 = spin_half_terms(expr, p)
        return [(h0, h1)] if h0 == h1 else [(h0, h1), (h1, h0)]
    if cand.kind == "g2" and fam == "D":
        # triality-fixed subgroup of D4: every eight-dimensional node
        # restricts like the natural module; on D7 both half-spins have
        # the same composition factors (the classes differ only in module
        # structure, which the character-level scan does not see)
        if type_name == "D4":
            c = module_weights(expr, p)
        else:
            c = module_weights(m_sum(m_simple((1, 1)), m_simple((2, 0))), p)
        return [(c, c)]
    return [None]


def factor_restriction_terms(cand: FactorCandidate, type_name: str,
                             weight: tuple[int, ...], p: int,
                             assignment) -> Counter:
    """Terms of the factor's irreducible module of the given high weight,
    restricted to one class of a rank-one candidate subgroup.  The
    assignment fixes which half-spin restriction sits on which of the two
    spin nodes."""
    fam, rank = type_name[0], int(type_name[1:])
    pos = _fundamental_position(weight)
    if pos is None:
        return Counter({(): 1})
    if cand.kind == "chain":
        ok = (fam == "E") and (pos in (1, 6) if rank == 6 else pos == 7)
        if not ok:
            raise NotImplementedError(f"no restriction rule for {type_name} weight {weight}")
        if cand.chain[0] == "A1D6":
            a = cand.chain[1][0]
            tensor_part = _terms_tensor(Counter({((1, a),): 1}),
                                        _expr_terms(cand.expr))
            return tensor_part + assignment[1]
        return _expr_terms(cand.expr)
    if fam == "A":
        k = min(pos, rank + 1 - pos)
        nat = _expr_terms(cand.expr)
        return nat if k == 1 else sum_power(nat, "alt", k, p)
    if fam == "D":
        if pos == 1:
            return _expr_terms(cand.expr)
        if pos in (rank - 1, rank):
            return assignment[pos - rank + 1]
        raise NotImplementedError(f"no restriction rule for D{rank} weight {weight}")
    raise NotImplementedError(f"no restriction rule for {type_name} weight {weight}")


def factor_restriction_g2(cand: FactorCandidate, type_name: str,
                          weight: tuple[int, ...], p: int, assignment):
    """(expression for pruning, character) for a G2 candidate."""
    fam, rank = type_name[0], int(type_name[1:])
    pos = _fundamental_position(weight)
    if pos is None:
        e = m_simple((0, 0))
        return e, module_weights(e, p)
    e = cand.expr
    if fam == "A":
        k = min(pos, rank + 1 - pos)
        out = e if k == 1 else m_alt(e, k)
        return out, module_weights(out, p)
    if fam == "D":
        if pos == 1:
            return e, module_weights(e, p)
        if pos in (rank - 1, rank):
            return m_spin(rank, e), assignment[pos - rank + 1]
        raise NotImplementedError(f"no restriction rule for D{rank} weight {weight}")
    if fam == "E":
        if pos in (1, rank):
            return e, module_weights(e, p)
        raise NotImplementedError(f"no restriction rule for {type_name} weight {weight}")
    raise NotImplementedError(f"no restriction rule for {type_name} weight {weight}")


def char_h1_factors(char: Counter, p: int) -> list:
    """Composition factors of the character with nonzero H^1."""
    if any(isinstance(w, tuple) for w in char):
        factors = g2_comp_factors(char, p)
        return [w for w in factors if g2_h1_irreducible(w, p)]
    factors = a1_comp_factors(list(char.elements()), p)
    return [w for w in factors if h1_irreducible(w, p)]


# -- the scan ------------------------------------------------------------------

@dataclass
class CandidateReport:
    levi_type: str
    x_type: str
    actions: tuple[str, ...]
    classes: int                                 # number of flagged classes
    flagged: bool
    hits: list = field(default_factory=list)     # (level, factor weight)
    pruned: list = field(default_factory=list)
    parabolics: list = field(default_factory=list)
    class_units: list = field(default_factory=list)


def _char_fp(char: Counter):
    """Hashable fingerprint of a character."""
    return tuple(sorted(char.items()))


def _ordered_components(rs: RootSystem, levi):
    comps = levi_components(rs, levi)
    typed = [(component_type(rs, c), c) for c in comps]
    typed.sort(key=lambda tc: (tc[0][0], int(tc[0][1:]), min(tc[1])))
    return typed


@functools.lru_cache(maxsize=None)
def _summand_weights(name: str, levi: tuple[int, ...]):
    rs = build_root_system(name)
    typed = _ordered_components(rs, levi)
    comps = [c for _, c in typed]
    types = [t for t, _ in typed]
    out = []
    for lvl, roots in radical_levels(rs, levi).items():
        for s in decompose_level(rs, levi, roots):
            out.append((lvl, tuple(s["high_weight"][c] for c in comps)))
    return types, out


def scan_parabolic(name: str, levi: tuple[int, ...], p: int,
                   tmax: int = 2) -> list[CandidateReport]:
    """Evaluate every built-in candidate subgroup against the levels of one
    standard parabolic.  Candidates whose minimal Frobenius twist is positive
    are skipped (they repeat an untwisted candidate)."""
    types, summands = _summand_weights(name, levi)
    if not types:
        return []
    reports = []
    if p == 7 and len(types) == 1:
        cand = g2_factor_candidate(types[0])
        if cand is not None:
            reports.append(_evaluate(types, (cand,), "G2", summands, p))
    per_factor = [factor_candidates(t, p, tmax) for t in types]
    if all(per_factor):
        for combo in itertools.product(*per_factor):
            twists = [t for c in combo for t in c.twists]
            if min(twists) != 0:
                continue
            reports.append(_evaluate(types, combo, "A1", summands, p))
    return reports


def _class_unit(types, combo, p, assign):
    """Invariant description of one class: per factor, either None or the
    ordered triple of characters on the natural and the two spin nodes."""
    unit = []
    for t, c, a in zip(types, combo, assign):
        if a is None:
            unit.append(None)
        else:
            nat = module_weights(c.expr, p)
            halves = [terms_char(h, p) if c.kind != "g2" else h for h in a]
            unit.append((_char_fp(nat),
                         _char_fp(halves[0]), _char_fp(halves[1])))
    return tuple(unit)


def _evaluate(types, combo, x_type, summands, p) -> CandidateReport:
    rep = CandidateReport(
        levi_type="+".join(types), x_type=x_type,
        actions=tuple(c.descriptor for c in combo),
        classes=0, flagged=False)
    if x_type == "G2" and any(t == "D7" for t in types):
        printed_classes = 2
    else:
        printed_classes = 1
    assign_lists = [factor_assignments(c, t, p)
                    for c, t in zip(combo, types)]
    for assign in itertools.product(*assign_lists):
        class_flagged = False
        for lvl, weights in summands:
            if x_type == "G2":
                parts = [factor_restriction_g2(c, t, w, p, a)
                         for c, t, w, a in zip(combo, types, weights, assign)]
                char = None
                for _, piece in parts:
                    char = piece if char is None else _char_tensor(char, piece)
                positives = char_h1_factors(char, p)
                if not positives:
                    continue
                whole = (parts[0][0] if len(parts) == 1
                         else m_tensor(*(e for e, _ in parts)))
                if module_is_tilting(whole, p):
                    rep.pruned.append((lvl, positives))
                    continue
                hit = (lvl, positives)
            else:
                level = Counter({(): 1})
                for c, t, w, a in zip(combo, types, weights, assign):
                    level = _terms_tensor(
                        level, factor_restriction_terms(c, t, w, p, a))
                h1 = h1_dim(level, p)
                if not h1:
                    continue
                hit = (lvl, h1)
            class_flagged = True
            if hit not in rep.hits:
                rep.hits.append(hit)
        if class_flagged:
            rep.flagged = True
            rep.classes += printed_classes
            rep.class_units.append(_class_unit(types, combo, p, assign))
    return rep


def _wsum(a, b):
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _char_tensor(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            out[_wsum(w1, w2)] += c1 * c2
    return out


@dataclass
class ScanResult:
    """Flagged rows keyed (levi type, X type, action tuple), plus the
    candidates that show a cohomology-positive composition factor pruned
    away by a tilting argument without ever being flagged."""
    rows: dict
    pruned_nonrows: list


def scan_group(name: str, p: int, tmax: int = 2) -> ScanResult:
    """Evaluate every built-in candidate on every standard parabolic."""
    rs = build_root_system(name)
    nodes = list(range(1, rs.rank + 1))
    rows: dict = {}
    pruned: dict = {}
    for k in range(rs.rank):
        for levi in itertools.combinations(nodes, k):
            for rep in scan_parabolic(name, tuple(levi), p, tmax):
                key = (rep.levi_type, rep.x_type, rep.actions)
                if rep.flagged:
                    if key in rows:
                        rows[key].parabolics.append(levi)
                    else:
                        rep.parabolics = [levi]
                        rows[key] = rep
                elif rep.pruned and key not in pruned:
                    pruned[key] = rep.pruned
    nonrows = [(k[0], k[1], k[2], v) for k, v in sorted(pruned.items())]
    return ScanResult(rows, nonrows)
