"""JSON specs for groups, G-sets and algebras, plus the built-in model registry.

Rationals are written as ``"num/den"`` strings.  An algebra spec looks like::

    {"group": "symmetric 3",
     "sector_dims": {"0": 1, "1": 1, ...},
     "action": {"<generator index>": [[row, col, "q"], ...]},
     "metric": [[i, j, "q"], ...],
     "mult": [[i, j, k, "q"], ...],
     "unit": [[i, "q"], ...]}

Basis vectors are numbered sector by sector in element order.  ``action``
gives the matrix of ``rho(g)`` for a generating set (``rho(g) e_col`` has
coefficient ``q`` on ``e_row``); the rest of the action follows from the
right-action law.  ``group`` is either a group-spec string or
``{"table": [[...]], "labels": [...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from . import frobenius, orbifold
from .frobenius import FrobeniusAlgebra, GFrobeniusAlgebra, fraction_text
from .gmodule import GGradedModule
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, GroupSpecError, build_group, named_group


class SpecError(ValueError):
    """Malformed or inconsistent JSON spec."""


def parse_scalar(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SpecError(f"scalar must be an integer or a 'p/q' string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"bad rational {x!r}") from exc


# -- groups ------------------------------------------------------------------------


def group_to_json(G: FiniteGroup):
    try:
        H = build_group(G.name, cap=max(G.order, 1))
    except (GroupSpecError, ValueError):
        H = None
    if H is not None and H.mul_table == G.mul_table:
        return G.name
    return {"table": [list(r) for r in G.mul_table], "labels": list(G.labels), "name": G.name}


def group_from_json(data, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if isinstance(data, str):
        return named_group(data, cap=cap)
    if isinstance(data, dict) and "table" in data:
        table = data["table"]
        if len(table) > cap:
            raise SpecError(f"group table of order {len(table)} exceeds the cap {cap}")
        n = len(table)
        if any(len(r) != n or any(not isinstance(x, int) or not 0 <= x < n for x in r) for r in table):
            raise SpecError("group table must be a square table of element indices")
        try:
            G = FiniteGroup(table, labels=data.get("labels"), name=data.get("name", ""))
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        for a in range(n):
            if sorted(table[a]) != list(range(n)):
                raise SpecError("group table is not a Latin square")
            for b in range(n):
                for c in range(n):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise SpecError("group table is not associative")
        gens = _generators_of(G)
        return FiniteGroup(table, labels=data.get("labels"), name=data.get("name", ""), generators=gens)
    raise SpecError("group must be a spec string or an object with a 'table'")


def _generators_of(G: FiniteGroup) -> Tuple[int, ...]:
    gens: List[int] = []
    span = G.subgroup_generated([])
    for g in G.elements():
        if g not in span:
            gens.append(g)
            span = G.subgroup_generated(gens)
    return tuple(gens)


# -- algebras ----------------------------------------------------------------------


def algebra_to_json(A: GFrobeniusAlgebra) -> Dict[str, object]:
    """Serialize with the basis regrouped by sector; the action is given on the group's generators."""
    G = A.group
    M = A.module
    order = sorted(range(A.dim), key=lambda i: (M.sector_of[i], i))
    new = {old: k for k, old in enumerate(order)}
    gens = G.generators or _generators_of(G)
    action = {}
    for g in gens:
        entries = []
        for old in order:
            for r, q in sorted((new[i], q) for i, q in M.action[g][old].items()):
                entries.append([r, new[old], fraction_text(q)])
        action[str(g)] = entries
    metric = sorted([new[i], new[j], fraction_text(q)] for (i, j), q in M.metric.items())
    mult = sorted(
        [new[i], new[j], new[k], fraction_text(q)] for (i, j), p in A.mult.items() for k, q in p.items()
    )
    dims = M.sector_dims()
    return {
        "group": group_to_json(G),
        "sector_dims": {str(m): d for m, d in enumerate(dims) if d},
        "action": action,
        "metric": metric,
        "mult": mult,
        "unit": sorted([new[i], fraction_text(q)] for i, q in A.unit.items()),
    }


def algebra_from_json(data: Mapping, cap: int = DEFAULT_ORDER_CAP) -> GFrobeniusAlgebra:
    try:
        G = group_from_json(data["group"], cap=cap)
        dims = {int(k): int(v) for k, v in data["sector_dims"].items()}
        if any(m < 0 or m >= G.order or d < 0 for m, d in dims.items()):
            raise SpecError("sector_dims keys must be element indices with nonnegative dimensions")
        sector_of = [m for m in G.elements() for _ in range(dims.get(m, 0))]
        n = len(sector_of)

        def idx(i) -> int:
            if not isinstance(i, int) or not 0 <= i < n:
                raise SpecError(f"basis index {i!r} out of range 0..{n - 1}")
            return i

        gen_action: Dict[int, List[Dict[int, Fraction]]] = {}
        for key, entries in data["action"].items():
            g = int(key)
            if not 0 <= g < G.order:
                raise SpecError(f"action key {key} is not an element index")
            cols: List[Dict[int, Fraction]] = [dict() for _ in range(n)]
            for r, c, q in entries:
                cols[idx(c)][idx(r)] = cols[idx(c)].get(r, Fraction(0)) + parse_scalar(q)
            gen_action[g] = cols
        metric = {}
        for i, j, q in data["metric"]:
            metric[(idx(i), idx(j))] = parse_scalar(q)
        mult: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for i, j, k, q in data["mult"]:
            mult.setdefault((idx(i), idx(j)), {})[idx(k)] = parse_scalar(q)
        unit = {idx(i): parse_scalar(q) for i, q in data["unit"]}
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed algebra spec: {exc}") from exc
    try:
        M = GGradedModule.from_generators(G, sector_of, gen_action, metric)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    return GFrobeniusAlgebra(M, mult, unit)


def classical_to_json(F: FrobeniusAlgebra, G: Optional[FiniteGroup] = None) -> Dict[str, object]:
    out: Dict[str, object] = {"dimension": F.dim}
    if G is not None:
        cc = G.conjugacy
        out["basis_classes"] = [G.label(cc.reps[c]) for c in F.labels]
    out["metric"] = [[fraction_text(x) for x in row] for row in F.metric]
    out["mult"] = [
        [i, j, k, fraction_text(x)]
        for i in range(F.dim)
        for j in range(F.dim)
        for k, x in enumerate(F.table[i][j])
        if x
    ]
    out["unit"] = [fraction_text(x) for x in F.unit]
    return out


# -- G-sets ------------------------------------------------------------------------


def gset_from_json(data: Mapping, cap: int = DEFAULT_ORDER_CAP) -> orbifold.FiniteGSet:
    """``{"group": ..., "points": n, "images": {"<gen index>": [x.g for x in 0..n-1]}}``."""
    try:
        G = group_from_json(data["group"], cap=cap)
        n = int(data["points"])
        gens = {int(k): [int(x) for x in v] for k, v in data["images"].items()}
        return orbifold.FiniteGSet.from_generators(G, n, gens)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed G-set spec: {exc}") from exc


def gset_to_json(X: orbifold.FiniteGSet) -> Dict[str, object]:
    G = X.group
    gens = G.generators or _generators_of(G)
    return {
        "group": group_to_json(G),
        "points": X.size,
        "images": {str(g): list(X.images[g]) for g in gens},
    }


# -- registry ----------------------------------------------------------------------


BUILTIN_HELP = (
    "groupring:<group>",
    "fgset:S3-natural",
    "fgset:D4-natural",
    "fgset:point:<group>",
    "fgset:regular:<group>",
    "trivial:<k>:<group>",
)


def builtin_model(name: str, cap: int = DEFAULT_ORDER_CAP) -> GFrobeniusAlgebra:
    """Resolve a built-in model name; ``<group>`` is a short name or a group-spec string."""
    kind, _, rest = name.partition(":")
    if kind == "groupring" and rest:
        return frobenius.group_ring(named_group(rest, cap=cap))
    if kind == "fgset":
        if rest == "S3-natural":
            return orbifold.fg_finite_gset(orbifold.natural(named_group("S3", cap=cap)))
        if rest == "D4-natural":
            return orbifold.fg_finite_gset(orbifold.natural(named_group("D4", cap=cap)))
        sub, _, gname = rest.partition(":")
        if sub == "point" and gname:
            return orbifold.fg_finite_gset(orbifold.point(named_group(gname, cap=cap)))
        if sub == "regular" and gname:
            return orbifold.fg_finite_gset(orbifold.regular(named_group(gname, cap=cap)))
    if kind == "trivial":
        k, _, gname = rest.partition(":")
        if k.isdigit() and int(k) > 0 and gname:
            F = frobenius.function_algebra(int(k))
            return orbifold.trivial_action_model(F, named_group(gname, cap=cap))
    raise SpecError(f"unknown built-in model {name!r}; known forms: {', '.join(BUILTIN_HELP)}")


def load_model(ref: str, cap: int = DEFAULT_ORDER_CAP) -> GFrobeniusAlgebra:
    """A built-in name, or a path to an algebra or G-set JSON spec."""
    if ref.split(":", 1)[0] in ("groupring", "fgset", "trivial"):
        return builtin_model(ref, cap=cap)
    try:
        with open(ref, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read model {ref!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"model {ref!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecError("model spec must be a JSON object")
    if "points" in data:
        return orbifold.fg_finite_gset(gset_from_json(data, cap=cap))
    return algebra_from_json(data, cap=cap)
