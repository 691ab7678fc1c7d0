"""Batch command-line front end.

Loads ring / module / matrix-factorization descriptions from JSON, runs
one operation, and emits CSV, DOT or JSON artifacts.  Every artifact
records the seed; identical inputs, bounds and seed give byte-identical
output.  Exit codes: 0 success, 1 error, 2 inconclusive (a bounded
search ran out of budget without an answer).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from .catalog import catalog_names, load_catalog
from .cisupport import CIPresentation, eisenbud_operators, support_annihilator_window
from .errors import Inconclusive, MCMError, UsageError
from .functors import cosyzygy, dual, link, mcm_approx, stable_part, syzygy_signed, transpose
from .homs import is_isomorphic
from .mf import MatrixFactorization, from_resolution_tail
from .modules import (
    GradedModule,
    free_module,
    invariants,
    maximal_ideal_module,
    residue_field_module,
)
from .quiver import build_quiver, component_classify, middle_term, reverse_iso_check
from .resolution import detect_period, growth_report, resolve
from .rings import QuotientRing, WeightedPolyRing


# ---------------------------------------------------------------------------
# input loading
# ---------------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise UsageError(f"{path}: {exc}")


def load_ring(spec, modulus: Optional[int] = None) -> QuotientRing:
    if isinstance(spec, str):
        spec = _read_json(spec)
    if not isinstance(spec, dict):
        raise UsageError("ring description must be a JSON object")
    char = modulus if modulus is not None else spec.get("char", 7)
    vars_ = spec.get("vars")
    if not vars_:
        raise UsageError("ring description needs a 'vars' list")
    weights = spec.get("weights")
    R = WeightedPolyRing(char, vars_, weights)
    return R.quotient(spec.get("relations", []))


def load_module(spec, modulus: Optional[int] = None) -> GradedModule:
    if isinstance(spec, str):
        if spec.startswith("ade:"):
            return _catalog_module(spec, modulus)
        spec = _read_json(spec)
    if not isinstance(spec, dict):
        raise UsageError("module description must be a JSON object")
    ring_spec = spec.get("ring")
    if ring_spec is None:
        raise UsageError("module description needs a 'ring'")
    ring = load_ring(ring_spec, modulus)
    builtin = spec.get("builtin")
    if builtin:
        if builtin == "k":
            return residue_field_module(ring)
        if builtin in ("m", "maximal-ideal"):
            return maximal_ideal_module(ring)
        if builtin in ("A", "free"):
            return free_module(ring, spec.get("gen_degs", [0]), label="A")
        raise UsageError(f"unknown builtin module {builtin!r}")
    try:
        return GradedModule(
            ring,
            spec["gen_degs"],
            spec["rel_degs"],
            spec["presentation"],
            label=spec.get("label", ""),
        )
    except KeyError as exc:
        raise UsageError(f"module description missing field {exc}")


def _catalog_module(ref: str, modulus: Optional[int]) -> GradedModule:
    """Resolve "ade:A3:dim1/I1" to the named catalog cokernel."""
    if "/" not in ref:
        raise UsageError("catalog module reference must look like ade:A3:dim1/I1")
    cat_name, mod_name = ref.split("/", 1)
    cat = load_catalog(cat_name, modulus)
    if mod_name == "A":
        return cat.free_vertex()
    if mod_name == "k":
        return residue_field_module(cat.ring)
    if mod_name == "m":
        return maximal_ideal_module(cat.ring)
    for name, M in cat.modules():
        if name == mod_name:
            return M
    raise UsageError(f"catalog {cat_name} has no module named {mod_name!r}")


def load_mf(spec, modulus: Optional[int] = None) -> MatrixFactorization:
    if isinstance(spec, str):
        spec = _read_json(spec)
    ring_spec = spec.get("ring")
    if ring_spec is None:
        raise UsageError("matrix factorization description needs a 'ring'")
    if isinstance(ring_spec, str):
        ring_spec = _read_json(ring_spec)
    char = modulus if modulus is not None else ring_spec.get("char", 7)
    R = WeightedPolyRing(char, ring_spec["vars"], ring_spec.get("weights"))
    try:
        return MatrixFactorization(R, spec["f"], spec["phi"], spec["psi"],
                                   label=spec.get("label", ""))
    except KeyError as exc:
        raise UsageError(f"matrix factorization missing field {exc}")


def module_to_json(M: GradedModule) -> dict:
    ring = M.ring
    return {
        "ring": {
            "char": ring.characteristic,
            "vars": list(ring.variables),
            "weights": list(ring.weights),
            "relations": [ring.ambient.poly_to_str(r) for r in ring.relations],
        },
        "label": M.label,
        "gen_degs": list(M.gen_degs),
        "rel_degs": list(M.rel_degs),
        "presentation": [
            [ring.ambient.poly_to_str(e.poly) for e in row] for row in M.presentation
        ],
    }


def mf_to_json(mf: MatrixFactorization) -> dict:
    R = mf.poly_ring
    return {
        "ring": {
            "char": R.characteristic,
            "vars": list(R.variables),
            "weights": list(R.weights),
        },
        "label": mf.label,
        "f": R.ambient.poly_to_str(mf.f.poly),
        "phi": [[R.ambient.poly_to_str(e.poly) for e in row] for row in mf.phi],
        "psi": [[R.ambient.poly_to_str(e.poly) for e in row] for row in mf.psi],
    }


# ---------------------------------------------------------------------------
# artifact emission
# ---------------------------------------------------------------------------

def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def emit_json(data, args):
    payload = {"seed": args.seed, **data} if isinstance(data, dict) else data
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)


def emit_csv(header, rows, args):
    lines = [f"# seed={args.seed}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(x) for x in row))
    _emit("\n".join(lines) + "\n", args.out)


def emit_dot(dot_text: str, args):
    _emit(f"// seed={args.seed}\n" + dot_text, args.out)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_resolve(args) -> int:
    M = load_module(args.module, args.modulus)
    res = resolve(M, args.hom_bound, degree_cap=args.degree_bound)
    rows = [
        (i, b, " ".join(str(d) for d in degs))
        for i, b, degs in res.betti_table(args.hom_bound)
    ]
    emit_csv(("i", "betti", "gen_degrees"), rows, args)
    return 0


def cmd_syzygy(args) -> int:
    M = load_module(args.module, args.modulus)
    S = syzygy_signed(M, args.n, degree_cap=args.degree_bound)
    emit_json({"module": module_to_json(S.minimized())}, args)
    return 0


def cmd_cosyzygy(args) -> int:
    args.n = -abs(args.n)
    return cmd_syzygy(args)


def _functor_command(args, fn, name: str) -> int:
    M = load_module(args.module, args.modulus)
    out = fn(M)
    emit_json({name: module_to_json(out.minimized())}, args)
    return 0


def cmd_dual(args) -> int:
    return _functor_command(args, lambda m: dual(m, degree_cap=args.degree_bound), "dual")


def cmd_transpose(args) -> int:
    return _functor_command(args, lambda m: transpose(m, degree_cap=args.degree_bound), "transpose")


def cmd_link(args) -> int:
    return _functor_command(args, lambda m: link(m, degree_cap=args.degree_bound), "link")


def cmd_approx(args) -> int:
    M = load_module(args.module, args.modulus)
    X = mcm_approx(M, degree_cap=args.degree_bound)
    stable, frees = stable_part(X)
    emit_json({
        "approximation": module_to_json(X.minimized()),
        "stable_part": module_to_json(stable),
        "free_degrees": frees,
    }, args)
    return 0


def cmd_period(args) -> int:
    M = load_module(args.module, args.modulus)
    got = detect_period(M, p_max=args.p_max, n_max=args.n_max,
                        degree_cap=args.degree_bound, seed=args.seed)
    if got is None:
        emit_json({"found": False, "p_max": args.p_max, "n_max": args.n_max}, args)
    else:
        emit_json({"found": True, "n0": got[0], "period": got[1]}, args)
    return 0


def cmd_growth(args) -> int:
    M = load_module(args.module, args.modulus)
    rep = growth_report(M, H=args.hom_bound, degree_cap=args.degree_bound,
                        compare_with_k=True)
    emit_json(rep.as_dict(), args)
    return 0


def cmd_invariants(args) -> int:
    M = load_module(args.module, args.modulus)
    emit_json(invariants(M).as_dict(), args)
    return 0


def cmd_mf_validate(args) -> int:
    mf = load_mf(args.mf, args.modulus)
    emit_json({
        "valid": mf.validate(),
        "reduced": mf.is_reduced(),
        "size": mf.size,
        "f": mf.poly_ring.ambient.poly_to_str(mf.f.poly),
    }, args)
    return 0


def cmd_mf_extract(args) -> int:
    M = load_module(args.module, args.modulus)
    mf, n = from_resolution_tail(M, H=args.hom_bound, degree_cap=args.degree_bound)
    emit_json({"tail_index": n, "mf": mf_to_json(mf)}, args)
    return 0


def cmd_quiver(args) -> int:
    cat = load_catalog(args.catalog, args.modulus)
    q = build_quiver(cat, seed=args.seed)
    if args.format == "dot":
        emit_dot(q.to_dot(), args)
    else:
        data = {
            "catalog": cat.name,
            "modulus": cat.modulus,
            "vertices": [
                {"name": v.name, "free": v.is_free, "mu": v.mu, "e": v.e,
                 "residue_degree": v.residue_degree}
                for v in q.vertices
            ],
            "arrows": [
                {"from": q.vertices[a].name, "to": q.vertices[b].name, "irr": m,
                 "degrees": {str(t): c for t, c in sorted(q.arrow_degrees[(a, b)].items())}}
                for (a, b), m in sorted(
                    q.arrows.items(),
                    key=lambda kv: (q.vertices[kv[0][0]].name, q.vertices[kv[0][1]].name))
            ],
        }
        emit_json(data, args)
    return 0


def cmd_classify(args) -> int:
    cat = load_catalog(args.catalog, args.modulus)
    q = build_quiver(cat, seed=args.seed)
    prop = args.property
    value = None
    if ":" in prop:
        prop, raw = prop.split(":", 1)
        value = float(raw) if prop == "curv_leq" else int(raw)
    rep = component_classify(q, prop, value=value, seed=args.seed,
                             p_max=args.p_max, n_max=args.n_max, H=args.hom_bound)
    emit_json(rep, args)
    return 0


def cmd_ci_operators(args) -> int:
    M = load_module(args.module, args.modulus)
    ci = CIPresentation.from_ring(M.ring)
    ext = eisenbud_operators(ci, M, H=args.hom_bound, degree_cap=args.degree_bound)
    ops = {}
    for j in range(ext.codimension):
        ops[f"t{j + 1}"] = {
            str(n): [[int(ext.operator(j, n)[r, c]) for c in range(ext.operator(j, n).ncols)]
                     for r in range(ext.operator(j, n).nrows)]
            for n in range(0, max(0, args.hom_bound - 1))
        }
    emit_json({
        "betti": ext.betti[: args.hom_bound + 1],
        "commute": ext.commute_exactly(),
        "operators": ops,
    }, args)
    return 0


def cmd_support(args) -> int:
    M = load_module(args.module, args.modulus)
    ci = CIPresentation.from_ring(M.ring)
    ext = eisenbud_operators(ci, M, H=args.hom_bound, degree_cap=args.degree_bound)
    rep = support_annihilator_window(ext, tdeg_max=args.tdeg_max)
    emit_json(rep.as_dict(), args)
    return 0


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _suite_symmetry(cat, q, seed, jobs):
    checks = []
    mods = cat.modules()

    def per_module(item):
        name, M = item
        out = []
        out.append((f"link_involution[{name}]", is_isomorphic(link(link(M)), M, seed=seed)))
        out.append((f"double_dual[{name}]", is_isomorphic(dual(dual(M)), M, seed=seed)))
        out.append((f"cosyzygy_dual_is_link[{name}]",
                    is_isomorphic(cosyzygy(dual(M), 1), link(M), seed=seed)))
        from .resolution import syzygy

        out.append((f"syz3_is_syz1[{name}]",
                    is_isomorphic(syzygy(M, 3), syzygy(M, 1), seed=seed)))
        if cat.dim == 2:
            out.append((f"self_linkage[{name}]", is_isomorphic(link(M), M, seed=seed)))
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for out in pool.map(per_module, mods):
                checks.extend(out)
    else:
        for item in mods:
            checks.extend(per_module(item))
    okD, _ = reverse_iso_check(q, "D", seed=seed)
    okL, _ = reverse_iso_check(q, "lambda", seed=seed)
    checks.append(("reverse_iso_D", okD))
    checks.append(("reverse_iso_lambda", okL))
    return sorted(checks)


def _suite_periodicity(cat, q, seed, jobs):
    checks = []
    for name, M in cat.modules():
        got = detect_period(M, p_max=2, n_max=4, seed=seed)
        checks.append((f"period_le_2[{name}]", got is not None and got[1] <= 2))
    return sorted(checks)


def _suite_middle(cat, q, seed, jobs):
    checks = []
    fi = q.free_index
    for j, v in enumerate(q.vertices):
        if v.is_free:
            continue
        ar = middle_term(q, v.name, seed=seed)
        ti = q.vertex_index(ar.tau_name)
        checks.append((f"e_additive[{v.name}]",
                       ar.e_middle == v.e + q.vertices[ti].e))
        touches_free = q.arrows.get((fi, j), 0) or q.arrows.get((j, fi), 0)
        if not touches_free:
            checks.append((f"mu_additive[{v.name}]",
                           ar.mu_middle == v.mu + q.vertices[ti].mu))
    return sorted(checks)


def _suite_classify(cat, q, seed, jobs):
    checks = []
    for prop, value in (("periodic", None), ("ulrich", None), ("cx_equals", 1)):
        rep = component_classify(q, prop, value=value, seed=seed)
        label = prop if value is None else f"{prop}:{value}"
        checks.append((f"constant[{label}]", rep["all_constant"]))
    return sorted(checks)


_SUITES = {
    "symmetry": _suite_symmetry,
    "periodicity": _suite_periodicity,
    "middle": _suite_middle,
    "classify": _suite_classify,
}


def cmd_verify(args) -> int:
    cat = load_catalog(args.catalog, args.modulus)
    q = build_quiver(cat, seed=args.seed)
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    bad = []
    lines = []
    for sname in names:
        if sname not in _SUITES:
            raise UsageError(f"unknown suite {sname!r}; known: {', '.join(_SUITES)} or 'all'")
        for check, ok in _SUITES[sname](cat, q, args.seed, args.jobs):
            lines.append(f"{'pass' if ok else 'FAIL'}  {sname}:{check}")
            if not ok:
                bad.append(check)
    text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.out:
        sys.stdout.write(text)
    return 1 if bad else 0


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--modulus", type=int, default=None, help="override the coefficient prime")
    sp.add_argument("--degree-bound", type=int, default=None, dest="degree_bound")
    sp.add_argument("--hom-bound", "-H", type=int, default=12, dest="hom_bound")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "dot", "json"), default=None)
    sp.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mcmkit",
        description="exact computations with maximal Cohen-Macaulay modules",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        _add_common(sp)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("resolve", cmd_resolve, help="Betti table of a minimal resolution window")
    sp.add_argument("--module", required=True)
    sp = add("betti", cmd_resolve, help="alias of resolve")
    sp.add_argument("--module", required=True)
    sp = add("syzygy", cmd_syzygy, help="n-th syzygy module")
    sp.add_argument("--module", required=True)
    sp.add_argument("--n", type=int, default=1)
    sp = add("cosyzygy", cmd_cosyzygy, help="n-th cosyzygy module")
    sp.add_argument("--module", required=True)
    sp.add_argument("--n", type=int, default=1)
    for name, fn in (("dual", cmd_dual), ("transpose", cmd_transpose), ("link", cmd_link),
                     ("approx", cmd_approx)):
        sp = add(name, fn, help=f"{name} of a module")
        sp.add_argument("--module", required=True)
    sp = add("period", cmd_period, help="bounded periodicity detection")
    sp.add_argument("--module", required=True)
    sp.add_argument("--p-max", type=int, default=2, dest="p_max")
    sp.add_argument("--n-max", type=int, default=4, dest="n_max")
    sp = add("growth", cmd_growth, help="complexity/curvature growth report")
    sp.add_argument("--module", required=True)
    sp = add("invariants", cmd_invariants, help="mu, length, multiplicity, rank")
    sp.add_argument("--module", required=True)
    sp = add("mf-validate", cmd_mf_validate, help="check phi psi = f Id")
    sp.add_argument("--mf", required=True)
    sp = add("mf-extract", cmd_mf_extract, help="matrix factorization from a resolution tail")
    sp.add_argument("--module", required=True)
    sp = add("quiver", cmd_quiver, help="AR quiver of a shipped catalog")
    sp.add_argument("--catalog", required=True)
    sp = add("classify", cmd_classify, help="component constancy of a property")
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--property", required=True,
                    help="periodic | bounded_nonperiodic | ulrich | cx_equals:N | curv_leq:X")
    sp.add_argument("--p-max", type=int, default=2, dest="p_max")
    sp.add_argument("--n-max", type=int, default=4, dest="n_max")
    sp = add("ci-operators", cmd_ci_operators, help="cohomology operators on Ext(M, k)")
    sp.add_argument("--module", required=True)
    sp = add("support", cmd_support, help="support-variety annihilator window")
    sp.add_argument("--module", required=True)
    sp.add_argument("--tdeg-max", type=int, default=2, dest="tdeg_max")
    sp = add("verify", cmd_verify, help="run a verification suite over a catalog")
    sp.add_argument("--catalog", required=True)
    sp.add_argument("--suite", default="all",
                    help=f"one of: {', '.join(_SUITES)} or 'all'")
    sp = add("catalogs", lambda args: (emit_json({"catalogs": catalog_names()}, args), 0)[1],
             help="list shipped catalogs")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.format is None:
        args.format = "dot" if args.command == "quiver" else (
            "csv" if args.command in ("resolve", "betti") else "json")
    try:
        if args.hom_bound < 1 or args.jobs < 1 or (
                args.degree_bound is not None and args.degree_bound < 1):
            raise UsageError("bounds must be positive")
        return args.fn(args)
    except Inconclusive as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return 2
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except MCMError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
