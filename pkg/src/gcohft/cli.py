"""Command-line reports: ``gcohft {group,omega,check,quotient}``.

Exit codes: 0 pass, 1 a checked property failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import covers, frobenius, specs
from .frobenius import fraction_text
from .groups import (
    DEFAULT_ORDER_CAP,
    GroupSizeError,
    GroupSpecError,
    commutator_distribution,
    involutive_section,
    named_group,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: Optional[str] = None
    model: Optional[str] = None
    fmt: str = "json"
    cap: int = DEFAULT_ORDER_CAP
    max_genus: int = 1
    max_points: int = 3
    k_rescaled: bool = False


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _load_group(cfg: RunConfig):
    if not cfg.group:
        raise InputError("a group spec is required")
    return named_group(cfg.group, cap=cfg.cap)


def cmd_group(cfg: RunConfig) -> tuple:
    G = _load_group(cfg)
    cc = G.conjugacy
    comm = commutator_distribution(G).class_totals(G)
    sec = involutive_section(G)
    if cfg.fmt == "csv":
        lines = ["class,representative,size,centralizer_order,inverse_class,commutator_pairs"]
        for c, rep in enumerate(cc.reps):
            lines.append(
                f"{c},{G.label(rep)},{cc.sizes[c]},{cc.centralizer_orders[c]},{cc.inverse_class[c]},{fraction_text(comm[c])}"
            )
        return "\n".join(lines) + "\n", EXIT_OK
    report = {
        "group": G.name,
        "order": G.order,
        "classes": [
            {
                "representative": G.label(rep),
                "size": cc.sizes[c],
                "centralizer_order": cc.centralizer_orders[c],
                "inverse_class": cc.inverse_class[c],
            }
            for c, rep in enumerate(cc.reps)
        ],
        "commutator_distribution": [fraction_text(x) for x in comm],
        "involutive_section": {
            "exists": sec.exists,
            "section": [G.label(g) for g in sec.section] if sec.exists else None,
            "witness_class": None if sec.exists else G.label(cc.reps[sec.witness_class]),
        },
    }
    return _dump(report), EXIT_OK


def cmd_omega(cfg: RunConfig) -> tuple:
    G = _load_group(cfg)
    if cfg.max_genus < 0 or cfg.max_points < 0:
        raise InputError("--max-genus and --max-points must be nonnegative")
    rows = covers.omega_table(G, cfg.max_genus, cfg.max_points)
    checked = 0
    failure = None
    for row in rows:
        try:
            checked += len(covers.all_gluing_checks(G, row.genus, row.classes))
        except covers.GluingIdentityError as exc:
            failure = str(exc)
            break
    status = "pass" if failure is None else "fail"
    if cfg.fmt == "csv":
        text = covers.omega_csv(G, rows) + f"# gluing: {status} ({checked} identities checked)\n"
    else:
        cc = G.conjugacy
        text = _dump(
            {
                "group": G.name,
                "rows": [
                    {
                        "genus": r.genus,
                        "classes": [G.label(cc.reps[c]) for c in r.classes],
                        "omega": fraction_text(r.value),
                    }
                    for r in rows
                ],
                "gluing": {"status": status, "checked": checked, "failure": failure},
            }
        )
    return text, EXIT_OK if failure is None else EXIT_FAIL


def _load_model(cfg: RunConfig):
    if not cfg.model:
        raise InputError("--model is required")
    return specs.load_model(cfg.model, cap=cfg.cap)


def cmd_check(cfg: RunConfig) -> tuple:
    A = _load_model(cfg)
    report = frobenius.full_report(A)
    out = {"model": cfg.model, "group": A.group.name, "dimension": A.dim}
    out.update(report.to_dict())
    return _dump(out), EXIT_OK if report.ok else EXIT_FAIL


def cmd_quotient(cfg: RunConfig) -> tuple:
    A = _load_model(cfg)
    report = frobenius.full_report(A)
    if not report.ok:
        out = {"model": cfg.model, "error": "model fails the axiom check"}
        out.update(report.to_dict())
        return _dump(out), EXIT_FAIL
    Q = frobenius.coinvariant_algebra(A)
    G = A.group
    alg = specs.classical_to_json(Q.algebra, G)
    out = {
        "model": cfg.model,
        "group": G.name,
        "dimension": Q.dim,
        "basis": "class sums (|G|/|C(m)|) pi_G(w), w invariant under C(m)",
        "eta_tilde": alg.pop("metric"),
        "algebra": alg,
    }
    if cfg.k_rescaled:
        K = frobenius.k_rescaling(Q)
        kr = specs.classical_to_json(K.rescaled, G)
        out["k_rescaled"] = {"k": list(K.k), **kr}
    return _dump(out), EXIT_OK


COMMANDS = {"group": cmd_group, "omega": cmd_omega, "check": cmd_check, "quotient": cmd_quotient}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gcohft", description="Exact computations for G-Frobenius algebras and cover counts.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_fmt):
        sp.add_argument("--format", choices=("json", "csv"), default=default_fmt, dest="fmt")
        sp.add_argument("--cap", type=int, default=DEFAULT_ORDER_CAP, help="maximum group order (default %(default)s)")

    g = sub.add_parser("group", help="conjugacy data, commutator counts, involutive section")
    g.add_argument("spec", nargs="?", help="group spec, e.g. 'symmetric 3' or a short name such as S3")
    g.add_argument("--group", dest="group_opt")
    common(g, "json")

    o = sub.add_parser("omega", help="Omega table with gluing self-check")
    o.add_argument("--group", required=True)
    o.add_argument("--max-genus", type=int, default=1)
    o.add_argument("--max-points", type=int, default=3)
    common(o, "csv")

    c = sub.add_parser("check", help="G-Frobenius axiom and trace report")
    c.add_argument("--model", required=True, help=f"built-in ({', '.join(specs.BUILTIN_HELP)}) or JSON path")
    common(c, "json")

    q = sub.add_parser("quotient", help="coinvariant algebra of a model")
    q.add_argument("--model", required=True)
    q.add_argument("--k-rescaled", action="store_true", help="also emit the k-rescaled variant")
    common(q, "json")
    return p


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    group = getattr(ns, "group", None)
    if ns.command == "group":
        if ns.spec and ns.group_opt:
            raise InputError("give the group either positionally or with --group, not both")
        group = ns.spec or ns.group_opt
    if ns.cap < 1:
        raise InputError("--cap must be positive")
    return RunConfig(
        command=ns.command,
        group=group,
        model=getattr(ns, "model", None),
        fmt=ns.fmt,
        cap=ns.cap,
        max_genus=getattr(ns, "max_genus", 1),
        max_points=getattr(ns, "max_points", 3),
        k_rescaled=getattr(ns, "k_rescaled", False),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_INPUT if exc.code else EXIT_OK
    except InputError as exc:
        print(f"gcohft: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        text, code = COMMANDS[cfg.command](cfg)
    except (InputError, GroupSpecError, GroupSizeError, specs.SpecError) as exc:
        print(f"gcohft: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
