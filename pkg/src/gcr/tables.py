"""Golden classification tables and table diffing.

The data files under ``data/`` record, one file per (group, prime), the
classification rows that the level scan is expected to reproduce: for each
Levi type, the irreducible rank-one (or G2-type) actions whose restriction to
some level of the unipotent radical has nonzero first cohomology, together
with the number of conjugacy classes each row accounts for.

Rows may be twist-parametric: factor strings contain twist variables
(``1[r]``, ``3[s] x 1[s+1]``) swept over a finite window, filtered by the
row's constraints.  Expansion pushes every instance through the same
canonicalisation as the scanner, so the diff compares like with like.

Diff statuses per row: ``match`` | ``mismatch`` (same action, different class
count) | ``missing`` (expected but not computed) | ``extra`` (computed but
not expected).  For Levi factors of type D4 the three 8-dimensional
fundamental weights are permuted by graph automorphisms, and which of them a
table names as "the" natural module is a frame choice; when direct matching
leaves a remainder on such a Levi, a second pass matches class units up to a
uniform relabelling of the three 8-dimensional nodes.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from .modrep import parse_module, format_module, module_twists, module_weights
from .h1scan import (ScanResult, scan_group, canonical_action,
                     spin_half_terms, _char_fp, _nontrivial_twists)
from .a1coh import terms_char


# -- golden data loading -------------------------------------------------------

def load_badx(group: str, p: int) -> dict:
    name = f"badx_{group.lower()}_p{p}.json"
    with resources.files(__package__).joinpath("data", name).open() as fh:
        return json.load(fh)


# -- parametric row expansion --------------------------------------------------

_TWIST_RE = re.compile(r"\[([^\]]+)\]")
_CHAIN_RE = re.compile(r"^((?:[A-G][1-9])+)\((.+)\)$")
_VAR_RE = re.compile(r"\b([rstu])\b")


def _step(u, *vals):
    """True if u equals one swept value and another swept value is its
    successor (the adjacency condition used by one parametric row)."""
    return any(u == a and b == a + 1
               for a, b in itertools.permutations(vals, 2))


def _subst(text: str, params: dict) -> str:
    def repl(m):
        val = eval(m.group(1), {"__builtins__": {}}, dict(params))
        return f"[{val}]"
    return _TWIST_RE.sub(repl, text)


@dataclass(frozen=True)
class GoldenFactor:
    descriptor: str
    kind: str                      # module | chain | g2
    exprs: tuple = ()              # parsed module expressions (canonical)


def canon_factor(text: str, tmax: int) -> GoldenFactor | None:
    """Canonicalise one factor-action string; None if a twist leaves the
    window."""
    if text == "max F4" or text.startswith("("):
        return GoldenFactor(text, "g2")
    m = _CHAIN_RE.match(text)
    if m:
        name = m.group(1)
        slots = [s.strip() for s in m.group(2).split(",")]
        exprs = [canonical_action(parse_module(s)) for s in slots]
        if any(t > tmax or t < 0 for e in exprs for t in module_twists(e)):
            return None
        desc = f"{name}({', '.join(format_module(e) for e in exprs)})"
        return GoldenFactor(desc, "chain", tuple(exprs))
    e = canonical_action(parse_module(text))
    if any(t > tmax or t < 0 for t in module_twists(e)):
        return None
    return GoldenFactor(format_module(e), "module", (e,))


@dataclass
class GoldenInstance:
    ref: str
    levi: str
    x: str
    actions: tuple[str, ...]
    classes: int
    factors: tuple[GoldenFactor, ...]

    @property
    def key(self):
        return (self.levi, self.x, self.actions)


def expand_rows(data: dict, tmax: int = 2) -> list[GoldenInstance]:
    """All in-window instances of the table's parametric rows, one per
    distinct canonical action tuple."""
    out: dict[tuple, GoldenInstance] = {}
    for row in data["rows"]:
        x = row.get("x", "A1")
        text = " ".join(row["factors"]) + " " + " ".join(row.get("constraints", ()))
        letters = sorted(set(_VAR_RE.findall(text)))
        for combo in itertools.product(range(tmax + 1), repeat=len(letters)):
            params = dict(zip(letters, combo))
            ns = {"step": _step, **params}
            if not all(eval(c, {"__builtins__": {}}, dict(ns))
                       for c in row.get("constraints", ())):
                continue
            factors = []
            for f in row["factors"]:
                cf = canon_factor(_subst(f, params), tmax)
                if cf is None:
                    break
                factors.append(cf)
            else:
                nz = [t for cf in factors for e in cf.exprs
                      for t in _nontrivial_twists(e)]
                if nz and min(nz) != 0:
                    continue
                inst = GoldenInstance(
                    ref=row["ref"], levi=row["levi"], x=x,
                    actions=tuple(cf.descriptor for cf in factors),
                    classes=row["classes"], factors=tuple(factors))
                prev = out.get(inst.key)
                if prev is not None and prev.classes != inst.classes:
                    raise ValueError(f"conflicting duplicates for {inst.key}")
                out.setdefault(inst.key, inst)
    return list(out.values())


# -- diffing -------------------------------------------------------------------

@dataclass
class DiffRow:
    status: str                    # match | mismatch | missing | extra
    ref: str
    levi: str
    x: str
    actions: tuple[str, ...]
    expected_classes: int | None
    computed_classes: int | None
    hits: tuple = ()
    note: str = ""


@dataclass
class TableDiff:
    group: str
    p: int
    table: str
    rows: list[DiffRow] = field(default_factory=list)
    pruned_nonrows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """Every expected row reproduced with the expected class count."""
        return not any(r.status in ("mismatch", "missing") for r in self.rows)

    def counts(self) -> Counter:
        return Counter(r.status for r in self.rows)


def _d4_positions(levi: str) -> list[int]:
    return [i for i, t in enumerate(levi.split("+")) if t == "D4"]


def _golden_units(inst: GoldenInstance, pos: int, p: int):
    """Class signatures of a golden instance: (other-action tuple, ordered
    triple of characters on the natural and the two half-spin nodes)."""
    expr = inst.factors[pos].exprs[0]
    nat = _char_fp(module_weights(expr, p))
    h0, h1 = spin_half_terms(expr, p)
    f0, f1 = _char_fp(terms_char(h0, p)), _char_fp(terms_char(h1, p))
    others = inst.actions[:pos] + inst.actions[pos + 1:]
    if inst.classes == 2 and f0 != f1:
        return [(others, (nat, f0, f1)), (others, (nat, f1, f0))]
    if inst.classes == 1 and f0 == f1:
        return [(others, (nat, f0, f1))]
    return None


def _engine_units(rep, pos: int):
    out = []
    for unit in rep.class_units:
        triple = unit[pos]
        others = rep.actions[:pos] + rep.actions[pos + 1:]
        out.append((others, triple))
    return out


_S3 = list(itertools.permutations(range(3)))


def _permute(triple, sigma):
    return tuple(triple[i] for i in sigma)


def _frame_match(golden_insts, engine_reps, p, pos):
    """Find a single relabelling of the three 8-dimensional D4 nodes under
    which the golden instances and the engine rows of one D4-bearing Levi
    type carry the same multiset of class units.  Returns the permutation,
    or None."""
    if not golden_insts or not engine_reps:
        return None
    gsig = []
    for inst in golden_insts:
        units = _golden_units(inst, pos, p)
        if units is None:
            return None
        gsig.extend(units)
    goal = Counter(gsig)
    for sigma in _S3:
        esig = Counter()
        for rep in engine_reps:
            for others, triple in _engine_units(rep, pos):
                esig[(others, _permute(triple, sigma))] += 1
        if esig == goal:
            return sigma
    return None


def diff_badx(group: str, p: int, tmax: int = 2,
              scan: ScanResult | None = None) -> TableDiff:
    """Diff the computed scan of (group, p) against the golden table."""
    data = load_badx(group, p)
    golden = expand_rows(data, tmax)
    if scan is None:
        scan = scan_group(group, p, tmax)
    engine = dict(scan.rows)
    diff = TableDiff(group=group, p=p, table=data["table"],
                     pruned_nonrows=list(scan.pruned_nonrows))

    groups: dict[tuple, list[GoldenInstance]] = {}
    for inst in golden:
        groups.setdefault((inst.levi, inst.x), []).append(inst)

    consumed: set = set()
    for (levi, x), insts in sorted(groups.items()):
        erows = {k: r for k, r in engine.items()
                 if k[0] == levi and k[1] == x}
        direct: list[DiffRow] = []
        leftover: list[GoldenInstance] = []
        used: set = set()
        for inst in insts:
            rep = erows.get(inst.key)
            if rep is None:
                leftover.append(inst)
                continue
            used.add(inst.key)
            status = "match" if rep.classes == inst.classes else "mismatch"
            direct.append(DiffRow(
                status, inst.ref, inst.levi, inst.x, inst.actions,
                inst.classes, rep.classes, tuple(rep.hits)))
        clean = (not leftover and len(used) == len(erows)
                 and all(r.status == "match" for r in direct))
        pos = _d4_positions(levi)
        if len(pos) == 1 and not clean:
            # the three 8-dimensional fundamentals of a D4 factor are only
            # labelled up to graph automorphism: re-match the whole group of
            # rows for this Levi type under a common relabelling
            sigma = _frame_match(insts, list(erows.values()), p, pos[0])
            if sigma is not None:
                hits = tuple(sorted({h for r in erows.values()
                                     for h in r.hits}))
                note = f"matched up to D4 node relabelling {sigma}"
                for inst in insts:
                    diff.rows.append(DiffRow(
                        "match", inst.ref, inst.levi, inst.x, inst.actions,
                        inst.classes, inst.classes, hits, note))
                consumed.update(erows)
                continue
        diff.rows.extend(direct)
        consumed.update(used)
        for inst in leftover:
            diff.rows.append(DiffRow(
                "missing", inst.ref, inst.levi, inst.x, inst.actions,
                inst.classes, None))

    for key, rep in sorted(engine.items()):
        if key in consumed:
            continue
        diff.rows.append(DiffRow(
            "extra", "", rep.levi_type, rep.x_type, rep.actions,
            None, rep.classes, tuple(rep.hits)))

    diff.rows.sort(key=lambda r: (r.levi, r.x, r.actions, r.status))
    return diff


# -- rendering -----------------------------------------------------------------

def render_diff(diff: TableDiff) -> str:
    lines = [f"table {diff.table} ({diff.group}, p={diff.p}): "
             + ", ".join(f"{v} {k}" for k, v in sorted(diff.counts().items()))]
    for r in diff.rows:
        acts = ", ".join(r.actions)
        line = f"  [{r.status:8}] {r.levi:12} {r.x:3} ({acts})"
        if r.expected_classes is not None:
            line += f" expected classes={r.expected_classes}"
        if r.computed_classes is not None:
            line += f" computed classes={r.computed_classes}"
        if r.hits:
            line += f" levels={[h[0] for h in r.hits]}"
        if r.ref:
            line += f"  <{r.ref}>"
        if r.note:
            line += f"  ({r.note})"
        lines.append(line)
    for levi, x, actions, pruned in diff.pruned_nonrows:
        acts = ", ".join(actions)
        lines.append(f"  [pruned  ] {levi:12} {x:3} ({acts})"
                     f" tilting-pruned at levels {[l for l, _ in pruned]}"
                     " (no row)")
    return "\n".join(lines)


def diff_to_json(diff: TableDiff) -> dict:
    return {
        "group": diff.group, "p": diff.p, "table": diff.table,
        "ok": diff.ok,
        "rows": [{
            "status": r.status, "ref": r.ref, "levi": r.levi, "x": r.x,
            "actions": list(r.actions),
            "expected_classes": r.expected_classes,
            "computed_classes": r.computed_classes,
            "levels": sorted({h[0] for h in r.hits}),
            "note": r.note,
        } for r in diff.rows],
        "pruned_nonrows": [{
            "levi": levi, "x": x, "actions": list(actions),
            "levels": [l for l, _ in pruned],
        } for levi, x, actions, pruned in diff.pruned_nonrows],
    }
