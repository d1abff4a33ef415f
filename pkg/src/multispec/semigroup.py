"""Generator sets, the elimination pipeline, and exact decision procedures
for semigroup membership, radical powers, and equivalence."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .deformation import (DeformationData, PointPattern, RankData, DerivedMonomials,
                          derive_monomials, rank_and_normalize, is_fixed_point,
                          classify_action, ActionClass, check_point)
from .linear import cone_feasible
from .monomials import (Monomial, Pair, Value, ZERO, UNIT_VALUE,
                        TAU, LAM, XI, tau, lam, xi, fraction_closure, genset)


def _balanced(e_pos: Fraction, e_neg: Fraction) -> tuple[int, int]:
    """Coprime naturals a, b with a*e_pos = b*|e_neg|."""
    ratio = -e_neg / e_pos
    return ratio.numerator, ratio.denominator


def apply_Lk(F, k: int) -> frozenset[Pair]:
    """One elimination step in a block-scale variable: keep exponent-zero
    pairs, zero the values of positive ones, and balance opposite signs."""
    v = tau(k)
    out: set[Pair] = set()
    pos, neg = [], []
    for p in F:
        e = p.f.exponent(v)
        if e == 0:
            out.add(p)
        elif e > 0:
            out.add(Pair(p.f, ZERO))
            pos.append((p, e))
        else:
            neg.append((p, e))
    for p, ep in pos:
        for q, eq in neg:
            a, b = _balanced(ep, eq)
            out.add((p ** a) * (q ** b))
    return frozenset(out)


def apply_Lj_lambda(F, j: int) -> frozenset[Pair]:
    """Like apply_Lk but in an action parameter: no value-zeroing branch,
    so the parameter is eliminated completely."""
    v = lam(j)
    out: set[Pair] = set()
    pos, neg = [], []
    for p in F:
        e = p.f.exponent(v)
        if e == 0:
            out.add(p)
        elif e > 0:
            pos.append((p, e))
        else:
            neg.append((p, e))
    for p, ep in pos:
        for q, eq in neg:
            a, b = _balanced(ep, eq)
            out.add((p ** a) * (q ** b))
    return frozenset(out)


def apply_Lk_modified(F, k: int) -> frozenset[Pair]:
    """The closure-flavoured variant with the extra inverse and quotient
    branches; agrees with apply_Lk on fraction-closed inputs."""
    v = tau(k)
    zero_e = [p for p in F if p.f.exponent(v) == 0]
    f0p = [p for p in F if p.v.is_zero and p.f.exponent(v) > 0]
    f0n = [p for p in F if p.v.is_zero and p.f.exponent(v) < 0]
    fxp = [p for p in F if not p.v.is_zero and p.f.exponent(v) > 0]
    fxn = [p for p in F if not p.v.is_zero and p.f.exponent(v) < 0]
    out: set[Pair] = set(zero_e)
    for p in f0p + fxp:
        out.add(Pair(p.f, ZERO))
    for p in fxn:
        out.add(Pair(p.f.inv(), ZERO))
    for p in f0p + fxp:
        for q in f0n + fxn:
            a, b = _balanced(p.f.exponent(v), q.f.exponent(v))
            out.add((p ** a) * (q ** b))
    for p in f0p + fxp:
        for q in fxp:
            a, b = _balanced(p.f.exponent(v), -q.f.exponent(v))
            out.add((p ** a) * (q.inv() ** b))
    for p in f0n + fxn:
        for q in fxn:
            a, b = _balanced(-p.f.exponent(v), q.f.exponent(v))
            out.add((p ** a) * (q.inv() ** b))
    return frozenset(out)


def apply_Lj_lambda_modified(F, j: int) -> frozenset[Pair]:
    v = lam(j)
    zero_e = [p for p in F if p.f.exponent(v) == 0]
    f0p = [p for p in F if p.v.is_zero and p.f.exponent(v) > 0]
    f0n = [p for p in F if p.v.is_zero and p.f.exponent(v) < 0]
    fxp = [p for p in F if not p.v.is_zero and p.f.exponent(v) > 0]
    fxn = [p for p in F if not p.v.is_zero and p.f.exponent(v) < 0]
    out: set[Pair] = set(zero_e)
    lam_j = Pair(Monomial.from_dict({v: 1}), ZERO)

    def lam_balance(p: Pair):
        e = abs(p.f.exponent(v))
        out.add((lam_j ** e.numerator) * (p ** e.denominator))

    for p in f0n + fxn:
        lam_balance(p)
    for p in fxp:
        lam_balance(p.inv())
    for p in f0p + fxp:
        for q in f0n + fxn:
            a, b = _balanced(p.f.exponent(v), q.f.exponent(v))
            out.add((p ** a) * (q ** b))
    for p in f0p + fxp:
        for q in fxp:
            a, b = _balanced(p.f.exponent(v), -q.f.exponent(v))
            out.add((p ** a) * (q.inv() ** b))
    for p in f0n + fxn:
        for q in fxn:
            a, b = _balanced(-p.f.exponent(v), q.f.exponent(v))
            out.add((p ** a) * (q.inv() ** b))
    return frozenset(out)


def norm_value(psi_k: Monomial, k: int, d: DeformationData, r: RankData,
               p: PointPattern) -> Value:
    """The value tag of a psi generator: its monomial with each scale
    replaced by the corresponding norm symbol, unit for normalized selected
    blocks and for zero-pattern selected blocks, zero if the block itself
    vanishes."""
    if k in p.zero_blocks:
        return ZERO
    sel = set(r.sel_cols)
    exps = {}
    for v, e in psi_k.exps:
        i = v.index
        if i in p.zero_blocks and i in sel:
            continue  # substituted by 1
        if p.normalized and i in sel and i not in p.zero_blocks:
            continue  # unit norm after normalization
        exps[xi(i)] = e
    return Value(Monomial.from_dict(exps))


def build_G(d: DeformationData, r: RankData, p: PointPattern,
            derived: DerivedMonomials | None = None) -> frozenset[Pair]:
    """The fraction-closed initial generator set: solved inverses with value
    zero, the psi quotients tagged with their norm values, and the leftover
    action parameters."""
    check_point(d, p)
    derived = derived or derive_monomials(d, r)
    pairs = [Pair(derived.phi_inv[j], ZERO) for j in r.sel_rows]
    for k, psi_k in derived.psi.items():
        pairs.append(Pair(psi_k, norm_value(psi_k, k, d, r, p)))
    for j in range(1, d.ell + 1):
        if j not in r.sel_rows:
            pairs.append(Pair(Monomial.from_dict({lam(j): 1}), ZERO))
    return fraction_closure(pairs)


def build_G_hat(d: DeformationData, r: RankData, p: PointPattern,
                derived: DerivedMonomials | None = None) -> frozenset[Pair]:
    """The graph variant: t_k over the full action monomial, tagged with the
    block norm symbol (zero on the zero pattern), plus every parameter."""
    check_point(d, p)
    derived = derived or derive_monomials(d, r)
    pairs = []
    for k in range(1, d.m + 1):
        f = Monomial.from_dict({tau(k): 1}) * derived.phi[k].inv()
        v = ZERO if k in p.zero_blocks else Value(Monomial.from_dict({xi(k): 1}))
        pairs.append(Pair(f, v))
    for j in range(1, d.ell + 1):
        pairs.append(Pair(Monomial.from_dict({lam(j): 1}), ZERO))
    return fraction_closure(pairs)


@dataclass(frozen=True)
class PipelineResult:
    d: DeformationData
    r: RankData
    p: PointPattern
    derived: DerivedMonomials
    G: frozenset[Pair]
    F0_stages: tuple[tuple[int, frozenset[Pair]], ...]  # (eliminated j, stage)
    F_stages: tuple[tuple[int, frozenset[Pair]], ...]   # (eliminated k, stage)
    Fq: frozenset[Pair]
    zero_cols_L: tuple[int, ...]
    elim_order: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.zero_cols_L)

    @property
    def F0(self) -> frozenset[Pair]:
        return self.F0_stages[-1][1] if self.F0_stages else self.G

    def stage_before_lambda(self, j: int) -> frozenset[Pair]:
        """The set the elimination of parameter j was applied to."""
        prev = self.G
        for jj, stage in self.F0_stages:
            if jj == j:
                return prev
            prev = stage
        raise KeyError(j)


def run_pipeline(d: DeformationData, r: RankData | None = None,
                 p: PointPattern | None = None,
                 elim_order: tuple[int, ...] | None = None) -> PipelineResult:
    p = p if p is not None else PointPattern(frozenset())
    r = r or rank_and_normalize(d, p)
    derived = derive_monomials(d, r)
    G = build_G(d, r, p, derived)

    unselected = tuple(j for j in range(1, d.ell + 1) if j not in r.sel_rows)
    if elim_order is None:
        elim_order = unselected
    elif tuple(sorted(elim_order)) != unselected:
        raise ValueError("elimination order must list the unselected rows")
    stage = G
    f0_stages = []
    for j in elim_order:
        stage = apply_Lj_lambda(stage, j)
        f0_stages.append((j, stage))
    if any(v.kind == LAM for pr in stage for v, _ in pr.f.exps):
        raise AssertionError("lambda variables survived the elimination")

    zero_cols = tuple(sorted(k for k in r.sel_cols if k in p.zero_blocks))
    f_stages = []
    for k in zero_cols:
        stage = apply_Lk(stage, k)
        f_stages.append((k, stage))
    fq = stage

    for pr in fq:
        for k in p.zero_blocks:
            e = pr.f.exponent(tau(k))
            if e < 0:
                raise AssertionError("negative zero-pattern exponent in F^q")
            if e > 0 and not pr.v.is_zero:
                raise AssertionError("nonzero value with positive zero-pattern "
                                     "exponent in F^q")

    # Shortcut cross-check: a non-degenerate action has no parameters left
    # to eliminate, and an empty zero pattern on the minor leaves G as is.
    if classify_action(d) in (ActionClass.NON_DEGENERATE, ActionClass.NORMAL) \
            and not zero_cols:
        if fq != G:
            raise AssertionError("shortcut failed: F^q should equal G for a "
                                 "non-degenerate action with no zero-pattern "
                                 "columns in the minor")

    return PipelineResult(d, r, p, derived, G, tuple(f0_stages), tuple(f_stages),
                          fq, zero_cols, elim_order)


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class MembershipResult:
    verdict: Verdict
    witness: tuple[tuple[Pair, int], ...] | None = None
    power: int | None = None

    def __bool__(self) -> bool:
        return self.verdict is Verdict.YES


def _exponent_vectors(pairs, extra: Monomial):
    all_vars = sorted({v for pr in pairs for v, _ in pr.f.exps}
                      | {v for v, _ in extra.exps}, key=lambda v: v.key())
    cols = [[pr.f.exponent(v) for v in all_vars] for pr in pairs]
    target = [extra.exponent(v) for v in all_vars]
    return cols, target


def _dfs(cols, target, budget, check_leaf, idx=0, partial=None):
    partial = partial or []
    if all(x == 0 for x in target):
        done = check_leaf(partial + [0] * (len(cols) - idx))
        if done:
            return done
    if idx == len(cols):
        return None
    if not cone_feasible(cols[idx:], target):
        return None
    # A zero column changes only the value tag; using it more than once is
    # never needed.
    cap = 1 if all(c == 0 for c in cols[idx]) else budget
    a = 0
    while a <= min(cap, budget):
        residual = [t - a * c for t, c in zip(target, cols[idx])]
        found = _dfs(cols, residual, budget - a, check_leaf, idx + 1, partial + [a])
        if found:
            return found
        a += 1
    return None


def mono_membership(f: Monomial, H, bound: int = 200) -> MembershipResult:
    """Is f a non-negative-integer combination of the monomials of H?

    Depth-first search over exponent vectors with exact rational-cone
    pruning; the first witness found is the lexicographically smallest.
    """
    ordered = sorted(H, key=lambda p: p.sort_key())
    cols, target = _exponent_vectors(ordered, f)
    if not cone_feasible(cols, target):
        return MembershipResult(Verdict.NO)

    def leaf(alpha):
        return tuple((p, a) for p, a in zip(ordered, alpha))

    found = _dfs(cols, target, bound, leaf)
    if found is not None:
        return MembershipResult(Verdict.YES, witness=found)
    return MembershipResult(Verdict.UNKNOWN)


def _value_of_combo(witness) -> Value:
    v = UNIT_VALUE
    for p, a in witness:
        v = v * (p.v ** a)
    return v


def radical_member(probe: Pair, H, max_N: int = 64, bound: int = 200,
                   zero_slack=()) -> MembershipResult:
    """Smallest N <= max_N with probe^N in the bracket of H, values included.

    No when even the rational cone relaxation is infeasible (then no power
    exists); Unknown when the caps run out.  zero_slack lists zero-pattern
    block indices: a zero-valued probe whose monomial is positive in one of
    them matches regardless of the combination's value, reflecting the
    value-zeroing branch of the generated semigroup.
    """
    ordered = sorted(H, key=lambda p: p.sort_key())
    cols, target1 = _exponent_vectors(ordered, probe.f)
    if not cone_feasible(cols, target1):
        return MembershipResult(Verdict.NO)
    slacked = probe.v.is_zero and any(probe.f.exponent(tau(k)) > 0
                                      for k in zero_slack)
    for n in range(1, max_N + 1):
        powered = probe ** n
        cols, target = _exponent_vectors(ordered, powered.f)

        def leaf(alpha, _target_v=powered.v):
            witness = tuple((p, a) for p, a in zip(ordered, alpha))
            if slacked or _value_of_combo(witness) == _target_v:
                return witness
            return None

        found = _dfs(cols, target, bound, leaf)
        if found is not None:
            return MembershipResult(Verdict.YES, witness=found, power=n)
    return MembershipResult(Verdict.UNKNOWN)


def eliminate_lambda(F) -> frozenset[Pair]:
    """Fraction-close, then eliminate every action parameter present,
    in increasing index order."""
    out = fraction_closure(F)
    js = sorted({v.index for pr in out for v, _ in pr.f.exps if v.kind == LAM})
    for j in js:
        out = apply_Lj_lambda(out, j)
    return out


def _semigroup_probes(free, zero_slack) -> list[Pair]:
    """Parameter-free pairs as elements of the generated semigroup: drop
    the ones that are undefined on the zero pattern and force the value of
    the ones the zero pattern annihilates."""
    probes = []
    for p in free:
        if any(p.f.exponent(tau(k)) < 0 for k in zero_slack):
            continue
        if not p.v.is_zero and any(p.f.exponent(tau(k)) > 0 for k in zero_slack):
            p = Pair(p.f, ZERO)
        probes.append(p)
    return sorted(set(probes), key=lambda p: p.sort_key())


def equivalent(A, B, max_N: int = 64, bound: int = 200, zero_slack=()) -> Verdict:
    """Mutual radical membership of the parameter-free parts of two
    generating sets; parameters are eliminated first, so the comparison is
    between the induced scale-only semigroups.  zero_slack carries the
    shared zero pattern restricted to the chosen minor columns."""
    slack = tuple(zero_slack)
    a_free = eliminate_lambda(A)
    b_free = eliminate_lambda(B)
    saw_unknown = False
    for probe in _semigroup_probes(a_free, slack):
        res = radical_member(probe, b_free, max_N, bound, zero_slack=slack)
        if res.verdict is Verdict.NO:
            return Verdict.NO
        if res.verdict is Verdict.UNKNOWN:
            saw_unknown = True
    for probe in _semigroup_probes(b_free, slack):
        res = radical_member(probe, a_free, max_N, bound, zero_slack=slack)
        if res.verdict is Verdict.NO:
            return Verdict.NO
        if res.verdict is Verdict.UNKNOWN:
            saw_unknown = True
    return Verdict.UNKNOWN if saw_unknown else Verdict.YES


class NotRepresentable(ValueError):
    pass


def value_of(f: Monomial, pipeline: PipelineResult) -> Value:
    """The unique value making (f, v) an element of the generated semigroup.

    Uses the unique exponent form over the solved inverses, the psi
    quotients, and the leftover parameters; integrality and the sign
    constraints decide representability exactly.
    """
    d, r, p = pipeline.d, pipeline.r, pipeline.p
    derived = pipeline.derived
    if f.has_kind(XI):
        raise NotRepresentable("norm symbols cannot appear in queries")

    alpha_unsel: dict[int, Fraction] = {}
    g = f
    for k, psi_k in derived.psi.items():
        e = f.exponent(tau(k))
        if e != 0:
            if e.denominator != 1:
                raise NotRepresentable(f"fractional power of block {k} quotient")
            if k in p.zero_blocks and e < 0:
                raise NotRepresentable(f"negative power of zero block {k}")
            alpha_unsel[k] = e
            g = g * (psi_k ** (-e))

    w = [g.exponent(tau(k)) for k in r.sel_cols]
    if any(g.exponent(tau(k)) != 0 for k in range(1, d.m + 1)
           if k not in r.sel_cols):
        raise NotRepresentable("unreduced scale variables outside the minor")
    minor = [[d.entry(j, k) for k in r.sel_cols] for j in r.sel_rows]
    alpha_sel = [sum(minor[jpos][kpos] * w[kpos] for kpos in range(r.L))
                 for jpos in range(r.L)]
    for a in alpha_sel:
        if a.denominator != 1 or a < 0:
            raise NotRepresentable("selected-inverse exponents must be "
                                   "non-negative integers")

    for j in r.sel_rows:
        if g.exponent(lam(j)) != 0:
            raise NotRepresentable("solved parameters cannot appear in queries")
    beta: dict[int, Fraction] = {}
    for j in range(1, d.ell + 1):
        if j in r.sel_rows:
            continue
        contrib = sum(alpha_sel[jpos] * derived.phi_inv[jj].exponent(lam(j))
                      for jpos, jj in enumerate(r.sel_rows))
        b = g.exponent(lam(j)) - contrib
        if b.denominator != 1 or b < 0:
            raise NotRepresentable("parameter exponents must be non-negative "
                                   "integers")
        beta[j] = b

    if any(a > 0 for a in alpha_sel) or any(b > 0 for b in beta.values()):
        return ZERO
    if any(f.exponent(tau(k)) > 0 for k in pipeline.zero_cols_L):
        return ZERO
    v = UNIT_VALUE
    for k, e in alpha_unsel.items():
        n_k = norm_value(derived.psi[k], k, d, r, p)
        if n_k.is_zero and e > 0:
            return ZERO
        v = v * (n_k ** e)
    return v
