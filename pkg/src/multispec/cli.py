"""Command-line front end: scenario loading, per-module subcommands, the
fixture regression runner, and text/json/latex rendering."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

import numpy as np

from .deformation import (deformation, point, rank_and_normalize,
                          classify_action, derive_monomials,
                          bundle_decomposition, ActionClass)
from .levels import build_levels, build_generalized_levels, canonical
from .linear import fr
from .monomials import pair, render_genset, sorted_pairs
from .multicone import (build_multicone, closure, project, normal_cone_probe,
                        contraction_stable_check)
from .polynomials import BlockPolynomial, BlockStructure, poly_zero
from .restriction import check_restriction
from .semigroup import run_pipeline
from .asymptotics import (structure_of, subsets_of_actions, index_set,
                          canonical_family, app_template, remainder_exponent,
                          check_map, PolyMapSpec, classify_two_manifolds,
                          verify_estimate)
from .fixtures import run_fixtures


class ScenarioError(ValueError):
    pass


def load_scenario(source: str):
    """Scenario JSON: the action matrix (rationals as strings), optional
    block sizes and vanishing sets, and the base-point zero pattern."""
    try:
        if os.path.exists(source):
            with open(source) as fh:
                data = json.load(fh)
        else:
            data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"cannot parse scenario JSON: {exc}") from exc
    try:
        rows = [[fr(x) for x in row] for row in data["A"]]
        d = deformation(rows,
                        block_dims=data.get("blocks"),
                        K_sets=data.get("K"),
                        complement_block=frozenset(data.get("complement", ())))
        zeros = set(data.get("zeros", ()))
        norms = {int(k): float(fr(v)) for k, v in data.get("norms", {}).items()}
        p = point(zero_blocks=zeros, norms=norms,
                  normalized=bool(data.get("normalized", True)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid scenario: {exc}") from exc
    return d, p, data


_TERM = re.compile(r"^\s*([+-]?\s*\d+(?:/\d+)?)?\s*\*?\s*(.*?)\s*$")


def parse_block_polynomial(text: str, struct: BlockStructure) -> BlockPolynomial:
    """Sums of monomials over block coordinates, e.g. "z1*z2 - 2/3*z1^3"."""
    text = text.replace("-", "+-").replace("++-", "+-")
    total = poly_zero(struct)
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            continue
        coeff = Fraction(1)
        if raw.startswith("-"):
            coeff = -coeff
            raw = raw[1:].strip()
        idx = [0] * struct.n
        for factor in re.split(r"\*", raw):
            factor = factor.strip()
            if not factor:
                continue
            m = re.fullmatch(r"z(\d+)(?:_(\d+))?(?:\^(\d+))?", factor)
            if m:
                block = int(m.group(1))
                offs = int(m.group(2) or 1) - 1
                power = int(m.group(3) or 1)
                coord = struct.coords_of(block).start + offs
                idx[coord] += power
            else:
                coeff *= Fraction(factor)
        total = total + BlockPolynomial.from_dict(struct, {tuple(idx): coeff})
    return total


def _emit(args, payload: dict, text_lines: list[str], latex_lines=None):
    fmt = args.format or os.environ.get("MULTISPEC_FORMAT", "text")
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "latex":
        for line in latex_lines or text_lines:
            print(line)
    else:
        for line in text_lines:
            print(line)


def _pipeline_payload(pl):
    return {
        "G": [p.json() for p in sorted_pairs(pl.G)],
        "F0_stages": [{"eliminated": j, "set": [q.json() for q in sorted_pairs(s)]}
                      for j, s in pl.F0_stages],
        "F_stages": [{"eliminated": k, "set": [q.json() for q in sorted_pairs(s)]}
                     for k, s in pl.F_stages],
        "Fq": [p.json() for p in sorted_pairs(pl.Fq)],
        "q": pl.q,
        "zero_cols": list(pl.zero_cols_L),
    }


def cmd_pipeline(args):
    d, p, _ = load_scenario(args.scenario)
    pl = run_pipeline(d, None, p)
    lines = [f"G     = {render_genset(pl.G)}"]
    for j, s in pl.F0_stages:
        lines.append(f"F0,{j} = {render_genset(s)}")
    for k, s in pl.F_stages:
        lines.append(f"F^{k}  = {render_genset(s)}")
    lines.append(f"Fq    = {render_genset(pl.Fq)}")
    _emit(args, _pipeline_payload(pl), lines)


def cmd_levels(args):
    d, p, _ = load_scenario(args.scenario)
    pl = run_pipeline(d, None, p)
    fam = build_levels(pl)
    lines = []
    for j in sorted(fam.rho_Lambda):
        lines.append(f"rho[{j}] = {canonical(fam.rho_Lambda[j])}"
                     f"   strict: {fam.strict[j]}")
    payload = fam.json()
    if args.generalized:
        ghat = build_generalized_levels(d, rank_and_normalize(d, p), p)
        for j in sorted(ghat.rho_Lambda):
            lines.append(f"rho^[{j}] = {canonical(ghat.rho_Lambda[j])}"
                         f"   strict: {ghat.strict[j]}")
        payload = {"rho": payload, "rho_hat": ghat.json()}
    _emit(args, payload, lines)


def cmd_multicone(args):
    d, p, _ = load_scenario(args.scenario)
    pl = run_pipeline(d, None, p)
    system = build_multicone(pl, p, check_equivalence=not args.no_check)
    lines = system.text()
    latex = [r"\left\{\begin{array}{l}"] + \
        [ln.replace("eps", r"\epsilon").replace("*", r"\,") + r" \\"
         for ln in lines] + [r"\end{array}\right\}"]
    _emit(args, system.json(), lines, latex)


def cmd_closure(args):
    d, p, _ = load_scenario(args.scenario)
    pl = run_pipeline(d, None, p)
    cl = closure(pl, rounds=args.rounds)
    lines = [ineq.text(strict=False) for ineq in cl.system.inequalities]
    _emit(args, cl.system.json(), lines)


def cmd_project(args):
    d, p, _ = load_scenario(args.scenario)
    pl = run_pipeline(d, None, p)
    system = build_multicone(pl, p, check_equivalence=False)
    for k in args.drop:
        system = project(system, k)
    _emit(args, system.json(), system.text())


def cmd_restrict(args):
    d, p, _ = load_scenario(args.scenario)
    beta = [fr(x) for x in args.beta.split(",")]
    verdict = check_restriction(d, p, beta)
    lines = [f"case: {verdict.case.value}",
             f"holds: {verdict.holds}"]
    for w in verdict.witnesses:
        lines.append(f"fails [{w.condition}]: {w.pair} pairs to {w.log_value}")
    if verdict.sufficient_nonneg_combination is not None:
        lines.append("non-negative row combination: "
                     f"{verdict.sufficient_nonneg_combination}")
    _emit(args, verdict.json(), lines)


class _GraphSet:
    """Point set given by graph equations target=polynomial, sampled by
    drawing the free coordinates log-uniformly."""

    def __init__(self, struct: BlockStructure, equations):
        self.struct = struct
        self.deps = {}
        for target, rhs in equations:
            self.deps[target] = rhs

    def sample(self, rng, scale):
        coords = {}
        for k in range(1, self.struct.m + 1):
            if k not in self.deps:
                coords[k] = float(np.exp(rng.uniform(np.log(scale * 1e-3),
                                                     np.log(scale))))
        values = [coords.get(self.struct.block_of(c), 0.0)
                  for c in range(self.struct.n)]
        for k, rhs in self.deps.items():
            coords[k] = rhs.evaluate(values)
        return coords

    def contains(self, z):
        values = [z.get(self.struct.block_of(c), 0.0)
                  for c in range(self.struct.n)]
        return all(abs(z[k] - rhs.evaluate(values)) <= 1e-9 * (1 + abs(z[k]))
                   for k, rhs in self.deps.items())


def cmd_probe(args):
    d, p, _ = load_scenario(args.scenario)
    struct = structure_of(d)
    equations = []
    for spec in args.zset:
        lhs, rhs = spec.split("=", 1)
        m = re.fullmatch(r"\s*z(\d+)\s*", lhs)
        if not m:
            raise ScenarioError("graph equations must have a bare block "
                                "coordinate on the left")
        equations.append((int(m.group(1)), parse_block_polynomial(rhs, struct)))
    pl = run_pipeline(d, None, p)
    zset = _GraphSet(struct, equations)
    result = normal_cone_probe(pl, p, zset, samples=args.samples,
                               seed=args.seed)
    payload = {"outcome": result.outcome.value, "eps": result.eps,
               "radius": result.radius,
               "hits": {str(k): v for k, v in result.hits.items()}}
    _emit(args, payload, [f"outcome: {result.outcome.value}",
                          f"hits per scale: {result.hits}"])


def cmd_expand(args):
    d, p, _ = load_scenario(args.scenario)
    r = rank_and_normalize(d, p)
    N = tuple(int(x) for x in args.N.split(","))
    lines = []
    payload = {"J_terms": []}
    for J in subsets_of_actions(d.ell):
        iset = index_set(d, r, J, N)
        sign = "+" if len(J) % 2 == 1 else "-"
        label = "{" + ",".join(str(j) for j in sorted(J)) + "}"
        lines.append(f"{sign} T_{label}: " +
                     "; ".join(iset.constraint_text(d, r.sigma_A)) +
                     f"   ({len(iset.members)} indices)")
        payload["J_terms"].append({"J": sorted(J), "sign": sign,
                                   "constraints": iset.constraint_text(d, r.sigma_A),
                                   "count": len(iset.members)})
    fam = build_levels(run_pipeline(d, r, p))
    rem = remainder_exponent(fam, N, r.sigma_A)
    lines.append(f"remainder exponent: {canonical(rem)}")
    payload["remainder"] = str(canonical(rem))
    _emit(args, payload, lines)


def cmd_map_check(args):
    with open(args.spec_file) as fh:
        data = json.load(fh)
    src = deformation([[fr(x) for x in row] for row in data["source"]["A"]],
                      block_dims=data["source"].get("blocks"))
    tgt = deformation([[fr(x) for x in row] for row in data["target"]["A"]],
                      block_dims=data["target"].get("blocks"))
    s_struct = structure_of(src)
    comps = tuple(parse_block_polynomial(c, s_struct)
                  for c in data["components"])
    res = check_map(PolyMapSpec(src, tgt, comps))
    if res.ok:
        lines = ["ok"] + [f"y{i + 1} = {t}" for i, t in enumerate(res.induced)]
        payload = {"ok": True, "induced": [str(t) for t in res.induced]}
    else:
        lines = [f"fail: {res.reason}", f"witness: {res.witness}"]
        payload = {"ok": False, "reason": res.reason,
                   "witness": list(res.witness or ())}
    _emit(args, payload, lines)


def cmd_classify2(args):
    rows = json.loads(args.matrix)
    case = classify_two_manifolds([[fr(x) for x in row] for row in rows])
    lines = [f"case: {case.label}",
             f"remainder: {case.remainder_text()}"]
    for key, txt in case.constraints.items():
        lines.append(f"A_{key}(N): " + "; ".join(txt))
    lines.extend(case.system.text())
    payload = {"case": case.label, "remainder": case.remainder_text(),
               "constraints": case.constraints,
               "system": case.system.json()}
    _emit(args, payload, lines)


def cmd_verify(args):
    d, p, _ = load_scenario(args.scenario)
    r = rank_and_normalize(d, p)
    struct = structure_of(d)
    f = parse_block_polynomial(args.function, struct)
    N = tuple(int(x) for x in args.N.split(","))
    rep = verify_estimate(d, r, p, f, N, samples=args.samples, seed=args.seed)
    lines = [f"C = {rep.C_fit:.6g}", f"C at eps/2 = {rep.C_half:.6g}",
             f"PASS: {rep.passed}"]
    payload = {"C": rep.C_fit, "C_half": rep.C_half, "passed": rep.passed,
               "samples": rep.samples}
    _emit(args, payload, lines)


def cmd_analyze(args):
    d, p, _ = load_scenario(args.scenario)
    r = rank_and_normalize(d, p)
    derived = derive_monomials(d, r)
    pl = run_pipeline(d, r, p)
    lines = [f"classification: {classify_action(d).value}",
             f"rank L = {r.L}, sigma = {r.sigma_A}",
             f"selected rows {list(r.sel_rows)}, columns {list(r.sel_cols)}"]
    for j in r.sel_rows:
        lines.append(f"phi_inv[{j}] = {derived.phi_inv[j]}")
    for k, psi in sorted(derived.psi.items()):
        lines.append(f"psi[{k}] = {psi}")
    if classify_action(d) in (ActionClass.TRANSITIVE, ActionClass.NORMAL):
        for s in bundle_decomposition(d):
            lines.append(f"block {s.block}: B = {sorted(s.B_k)}: {s.text}")
    lines.append(f"G  = {render_genset(pl.G)}")
    for j, s in pl.F0_stages:
        lines.append(f"F0,{j} = {render_genset(s)}")
    for k, s in pl.F_stages:
        lines.append(f"after eliminating block {k}: {render_genset(s)}")
    lines.append(f"Fq = {render_genset(pl.Fq)}")
    try:
        fam = build_levels(pl)
        for j in sorted(fam.rho_Lambda):
            lines.append(f"rho[{j}] = {canonical(fam.rho_Lambda[j])}   "
                         f"strict: {fam.strict[j]}")
        if args.generalized:
            ghat = build_generalized_levels(d, r, p)
            for j in sorted(ghat.rho_Lambda):
                lines.append(f"rho^[{j}] = {canonical(ghat.rho_Lambda[j])}   "
                             f"strict: {ghat.strict[j]}")
    except ValueError as exc:
        lines.append(f"levels unavailable: {exc}")
        fam = None
    system = build_multicone(pl, p, check_equivalence=False)
    lines.append("multicone:")
    lines.extend("  " + ln for ln in system.text())
    cl = closure(pl)
    lines.append("closure:")
    lines.extend("  " + ineq.text(strict=False)
                 for ineq in cl.system.inequalities)
    N = tuple(1 for _ in range(d.ell))
    for J in subsets_of_actions(d.ell):
        iset = index_set(d, r, J, tuple(2 for _ in range(d.ell)))
        label = "{" + ",".join(str(j) for j in sorted(J)) + "}"
        lines.append(f"A_{label}(2,..): " +
                     "; ".join(iset.constraint_text(d, r.sigma_A)))
    if fam is not None:
        rem = remainder_exponent(fam, N, r.sigma_A)
        lines.append(f"remainder exponent at unit orders: {canonical(rem)}")
    payload = {"scenario": d.json(),
               "classification": classify_action(d).value,
               "pipeline": _pipeline_payload(pl),
               "levels": fam.json() if fam else None,
               "multicone": system.json()}
    _emit(args, payload, lines)


def cmd_fixtures(args):
    results = run_fixtures(args.filter or "")
    if not results:
        print("warning: no fixtures match the filter")
        return 0
    failures = 0
    for name, check in results:
        status = "ok" if check.ok else "FAIL"
        detail = f"  ({check.detail})" if check.detail and not check.ok else ""
        print(f"[{status}] {name}: {check.label}{detail}")
    failures = sum(1 for _, c in results if not c.ok)
    print(f"{len(results)} checks, {failures} failures")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="multispec",
        description="Exact combinatorics of multi-normal deformations")
    ap.add_argument("--format", choices=["text", "json", "latex"],
                    default=None, help="output format (default: text or "
                    "MULTISPEC_FORMAT)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("analyze", cmd_analyze, help="full report for a scenario")
    p.add_argument("scenario")
    p.add_argument("--generalized", action="store_true",
                   help="include the permutation-minimised level family")

    p = add("pipeline", cmd_pipeline, help="generator set and stages")
    p.add_argument("scenario")

    p = add("levels", cmd_levels, help="level functions and strictness")
    p.add_argument("scenario")
    p.add_argument("--generalized", action="store_true")

    p = add("multicone", cmd_multicone, help="inequality system")
    p.add_argument("scenario")
    p.add_argument("--no-check", action="store_true",
                   help="skip the stage/semigroup equivalence check")

    p = add("closure", cmd_closure, help="closed inequality system")
    p.add_argument("scenario")
    p.add_argument("--rounds", type=int, default=1)

    p = add("project", cmd_project, help="project out blocks")
    p.add_argument("scenario")
    p.add_argument("--drop", type=int, nargs="+", required=True)

    p = add("restrict", cmd_restrict, help="added-row restriction verdict")
    p.add_argument("--matrix", dest="scenario", required=True)
    p.add_argument("--beta", required=True, help="comma-separated row")

    p = add("probe", cmd_probe, help="normal-cone sampling oracle")
    p.add_argument("scenario")
    p.add_argument("--zset", action="append", required=True,
                   help="graph equation like z3=z1*z2")
    p.add_argument("--samples", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)

    p = add("expand", cmd_expand, help="expansion template and remainder")
    p.add_argument("scenario")
    p.add_argument("--N", required=True, help="comma-separated orders")

    p = add("map-check", cmd_map_check, help="induced-map validation")
    p.add_argument("spec_file")

    p = add("classify2", cmd_classify2, help="two-manifold catalogue")
    p.add_argument("--matrix", required=True, help="JSON 2-row matrix")

    p = add("verify", cmd_verify, help="numeric remainder estimate")
    p.add_argument("scenario")
    p.add_argument("--function", required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)

    p = add("fixtures", cmd_fixtures, help="run the worked-example corpus")
    p.add_argument("--filter", default="")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        result = args.fn(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return int(result or 0)


if __name__ == "__main__":
    sys.exit(main())
