"""Level functions: max/min expression trees measuring per-action decay,
their restriction to the scale graph, strictness, and the permutation-
minimised generalised family."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .deformation import (DeformationData, PointPattern, RankData,
                          is_fixed_point, rank_and_normalize)
from .linear import rank
from .monomials import Monomial, ONE, Pair, Var, TAU, lam
from .semigroup import PipelineResult, run_pipeline

MONO, MAX, MIN, PROD, POW = "mono", "max", "min", "prod", "pow"
_FLIP = {MAX: MIN, MIN: MAX}


@dataclass(frozen=True)
class LevelExpr:
    kind: str
    mono: Monomial | None = None
    children: tuple["LevelExpr", ...] = ()
    exp: Fraction | None = None

    def sort_key(self):
        if self.kind == MONO:
            return (0, self.mono.sort_key())
        order = {MAX: 1, MIN: 2, PROD: 3, POW: 4}[self.kind]
        return (order, tuple(c.sort_key() for c in self.children),
                (self.exp.numerator, self.exp.denominator) if self.exp else ())

    def __str__(self) -> str:
        if self.kind == MONO:
            return str(self.mono)
        if self.kind in (MAX, MIN):
            return f"{self.kind}({', '.join(str(c) for c in self.children)})"
        if self.kind == PROD:
            return " * ".join(f"({c})" for c in self.children)
        return f"({self.children[0]})^({self.exp})"

    def json(self):
        if self.kind == MONO:
            return {"mono": self.mono.json()}
        if self.kind == POW:
            return {"pow": self.children[0].json(), "exp": str(self.exp)}
        return {self.kind: [c.json() for c in self.children]}


def lmono(m) -> LevelExpr:
    if isinstance(m, str):
        from .monomials import mono as parse
        m = parse(m)
    return LevelExpr(MONO, mono=m)


LEVEL_ONE = lmono(ONE)


def lmax(*es) -> LevelExpr:
    es = _spread(es)
    return es[0] if len(es) == 1 else LevelExpr(MAX, children=tuple(es))


def lmin(*es) -> LevelExpr:
    es = _spread(es)
    return es[0] if len(es) == 1 else LevelExpr(MIN, children=tuple(es))


def lprod(*es) -> LevelExpr:
    es = _spread(es)
    return es[0] if len(es) == 1 else LevelExpr(PROD, children=tuple(es))


def lpow(e, r) -> LevelExpr:
    return LevelExpr(POW, children=(_coerce(e),), exp=Fraction(r))


def _coerce(e) -> LevelExpr:
    return e if isinstance(e, LevelExpr) else lmono(e)


def _spread(es) -> list[LevelExpr]:
    if len(es) == 1 and isinstance(es[0], (list, tuple)):
        es = es[0]
    out = [_coerce(e) for e in es]
    if not out:
        raise ValueError("empty operand list")
    return out


def _combine(base: Monomial, node: LevelExpr, e: Fraction) -> LevelExpr:
    """base * node^e for a canonical max/min tree with monomial leaves."""
    if e == 0:
        return lmono(base)
    if node.kind == MONO:
        return lmono(base * (node.mono ** e))
    kind = node.kind if e > 0 else _FLIP[node.kind]
    return LevelExpr(kind, children=tuple(_combine(base, c, e)
                                          for c in node.children))


def canonical(e: LevelExpr) -> LevelExpr:
    """Flatten to alternating max/min nodes over monomial leaves.

    Products and powers distribute into the lattice nodes (non-monomial
    product factors in sorted order), nested same-kind nodes flatten,
    duplicates collapse, children sort.  Comparison of level expressions is
    structural equality of canonical forms.
    """
    if e.kind == MONO:
        return e
    if e.kind == POW:
        return canonical(_pow(canonical(e.children[0]), e.exp))
    if e.kind == PROD:
        mono_part = ONE
        nodes = []
        for c in e.children:
            c = canonical(c)
            if c.kind == MONO:
                mono_part = mono_part * c.mono
            else:
                nodes.append(c)
        if not nodes:
            return lmono(mono_part)
        nodes.sort(key=lambda n: n.sort_key())
        acc = _combine(mono_part, nodes[0], Fraction(1))
        for n in nodes[1:]:
            acc = _cross(acc, n)
        return canonical(acc)
    children = []
    for c in e.children:
        c = canonical(c)
        if c.kind == e.kind:
            children.extend(c.children)
        else:
            children.append(c)
    uniq = sorted(set(children), key=lambda c: c.sort_key())
    if len(uniq) == 1:
        return uniq[0]
    return LevelExpr(e.kind, children=tuple(uniq))


def _pow(c: LevelExpr, r: Fraction) -> LevelExpr:
    if r == 0:
        return LEVEL_ONE
    if c.kind == MONO:
        return lmono(c.mono ** r)
    kind = c.kind if r > 0 else _FLIP[c.kind]
    return LevelExpr(kind, children=tuple(_pow(ch, r) for ch in c.children))


def _cross(a: LevelExpr, b: LevelExpr) -> LevelExpr:
    """Product of two canonical lattice trees, distributing a over b."""
    if a.kind == MONO:
        return _combine(a.mono, b, Fraction(1))
    if b.kind == MONO:
        return _combine(b.mono, a, Fraction(1))
    return LevelExpr(a.kind, children=tuple(_cross(ch, b) for ch in a.children))


def level_eq(a: LevelExpr, b: LevelExpr) -> bool:
    return canonical(a) == canonical(b)


def subst_lambda(e: LevelExpr, j: int, replacement: LevelExpr) -> LevelExpr:
    """Substitute a parameter inside a monomial-leaf tree, branching the
    leaf when the replacement is itself a lattice node."""
    v = lam(j)
    if e.kind == MONO:
        exp = e.mono.exponent(v)
        if exp == 0:
            return e
        base = Monomial(tuple((w, x) for w, x in e.mono.exps if w != v))
        return _combine(base, replacement, exp)
    if e.kind in (MAX, MIN):
        return LevelExpr(e.kind, children=tuple(subst_lambda(c, j, replacement)
                                                for c in e.children))
    raise ValueError("substitution expects a lattice tree")


def sol_lambda(f, j: int) -> Monomial:
    """The parameter level solved from a negative-exponent monomial:
    lam_j * f^{1/|a|}, which no longer involves lam_j."""
    m = f.f if isinstance(f, Pair) else f
    a = m.exponent(lam(j))
    if a >= 0:
        raise ValueError("solving requires a negative parameter exponent")
    out = Monomial.from_dict({lam(j): 1}) * (m ** (Fraction(1) / -a))
    assert out.exponent(lam(j)) == 0
    return out


@dataclass(frozen=True)
class LevelFamily:
    rho_Lambda: dict[int, LevelExpr]     # per action, scale variables only
    rho_stages: dict[int, LevelExpr]     # pre-restriction, per leftover action
    strict: dict[int, bool]
    sel_cols: tuple[int, ...]
    elim_order: tuple[int, ...]

    def json(self):
        return {
            "rho_Lambda": {j: str(canonical(e)) for j, e in
                           sorted(self.rho_Lambda.items())},
            "strict": {j: s for j, s in sorted(self.strict.items())},
        }


def build_levels(pipeline: PipelineResult) -> LevelFamily:
    """Per-action levels: the leftover actions get the max of their solved
    scales stage by stage; restriction substitutes them back in elimination
    order (so scale factors cancel exactly as in the worked examples); the
    selected actions restrict their solved inverses."""
    d, r, p = pipeline.d, pipeline.r, pipeline.p
    if is_fixed_point(d, p):
        raise ValueError("level functions need a point outside fixed points")
    elim = pipeline.elim_order
    rho_raw: dict[int, LevelExpr] = {}
    for j in elim:
        stage = pipeline.stage_before_lambda(j)
        branches = sorted({sol_lambda(pr, j) for pr in stage
                           if pr.f.exponent(lam(j)) < 0},
                          key=lambda m: m.sort_key())
        rho_raw[j] = lmax([lmono(b) for b in branches]) if branches else LEVEL_ONE

    def restrict(e: LevelExpr) -> LevelExpr:
        for j in elim:
            e = subst_lambda(e, j, rho_raw[j])
        return canonical(e)

    rho_lambda: dict[int, LevelExpr] = {}
    for j in r.sel_rows:
        rho_lambda[j] = restrict(lmono(pipeline.derived.phi_inv[j]))
    for j in elim:
        rho_lambda[j] = restrict(rho_raw[j])

    for j, e in rho_lambda.items():
        for leaf in _leaves(e):
            bad = [v for v, _ in leaf.exps
                   if v.kind != TAU or v.index not in r.sel_cols]
            if bad:
                raise AssertionError(f"level for action {j} involves {bad}")

    family = LevelFamily(rho_lambda, rho_raw, {}, r.sel_cols, elim)
    strict = {j: is_strict(family, d, j) for j in range(1, d.ell + 1)}
    return LevelFamily(rho_lambda, rho_raw, strict, r.sel_cols, elim)


def _leaves(e: LevelExpr):
    if e.kind == MONO:
        yield e.mono
    else:
        for c in e.children:
            yield from _leaves(c)


def effective_exponent(e: LevelExpr, scaling) -> Fraction:
    """Exponent of t in e after scaling tau_k by t^{s_k}; as t -> 0+ a max
    is dominated by its smallest exponent and a min by its largest."""
    if e.kind == MONO:
        return sum((Fraction(scaling.get(v.index, 0)) * x
                    for v, x in e.mono.exps if v.kind == TAU), Fraction(0))
    vals = [effective_exponent(c, scaling) for c in e.children]
    if e.kind == MAX:
        return min(vals)
    if e.kind == MIN:
        return max(vals)
    if e.kind == PROD:
        return sum(vals, Fraction(0))
    return e.exp * vals[0]


def is_strict(family: LevelFamily, d: DeformationData, j: int) -> bool:
    """Generic-coefficient limit criterion: the level of action j decays
    along that action's own contraction orbit."""
    scaling = {k: d.entry(j, k) for k in range(1, d.m + 1)}
    return effective_exponent(family.rho_Lambda[j], scaling) > 0


def evaluate_level(e: LevelExpr, tau_values) -> float:
    """Numeric value at strictly positive scales."""
    if e.kind == MONO:
        assign = {Var(TAU, k): float(v) for k, v in tau_values.items()}
        return e.mono.evaluate(assign)
    vals = [evaluate_level(c, tau_values) for c in e.children]
    if e.kind == MAX:
        return max(vals)
    if e.kind == MIN:
        return min(vals)
    if e.kind == PROD:
        out = 1.0
        for v in vals:
            out *= v
        return out
    return vals[0] ** float(e.exp)


class PermutationBudgetExceeded(RuntimeError):
    pass


def build_generalized_levels(d: DeformationData, r: RankData, p: PointPattern,
                             max_perms: int = 5040) -> LevelFamily:
    """Minimum of the level families over all admissible action orderings.

    Orderings whose leading rows are linearly independent each give a
    family; duplicates collapse before the pointwise minimum.  Every action
    is strict with respect to the result, which is asserted.
    """
    total = 1
    for i in range(2, d.ell + 1):
        total *= i
    if total > max_perms:
        raise PermutationBudgetExceeded(
            f"{total} orderings exceed the budget of {max_perms}")

    families: list[LevelFamily] = []
    seen: set[tuple] = set()
    for theta in permutations(range(1, d.ell + 1)):
        lead = theta[:r.L]
        if rank([list(d.row(j)) for j in lead]) < r.L:
            continue
        rr = rank_and_normalize(d, p, fixed_rows=lead)
        pl = run_pipeline(d, rr, p, elim_order=tuple(j for j in theta
                                                     if j not in rr.sel_rows))
        fam = build_levels(pl)
        key = tuple(canonical(fam.rho_Lambda[j]) for j in range(1, d.ell + 1))
        if key in seen:
            continue
        seen.add(key)
        families.append(fam)
    if not families:
        raise ValueError("no admissible ordering: the rank data is inconsistent")

    rho_hat: dict[int, LevelExpr] = {}
    for j in range(1, d.ell + 1):
        branches = [fam.rho_Lambda[j] for fam in families]
        rho_hat[j] = canonical(lmin(branches))
    sel_cols = tuple(sorted({k for fam in families for k in fam.sel_cols}))
    family = LevelFamily(rho_hat, {}, {}, sel_cols, ())
    strict = {j: is_strict(family, d, j) for j in range(1, d.ell + 1)}
    if not all(strict.values()):
        raise AssertionError("an action is not strict for the generalized "
                             "family; this contradicts its construction")
    return LevelFamily(rho_hat, {}, strict, sel_cols, ())
