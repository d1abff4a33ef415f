"""Multicone inequality systems, closures, projections, numeric membership,
contraction stability, and the sampling oracle for the normal cone."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

import numpy as np

from .monomials import Monomial, Pair, Value, tau, sorted_pairs
from .deformation import PointPattern
from .semigroup import (PipelineResult, Verdict, equivalent, fraction_closure,
                        _balanced)


@dataclass(frozen=True)
class BoundFactors:
    """A formal product of (value +/- eps)^a factors bounding a monomial."""

    factors: tuple[tuple[Value, Fraction], ...]

    def upper(self, eps: float, xi_norms) -> float:
        out = 1.0
        for v, a in self.factors:
            out *= (v.evaluate(xi_norms) + eps) ** float(a)
        return out

    def lower(self, eps: float, xi_norms, clamp: bool = False) -> float:
        out = 1.0
        for v, a in self.factors:
            base = v.evaluate(xi_norms) - eps
            if base <= 0:
                if clamp:
                    return 0.0
                return -math.inf
            out *= base ** float(a)
        return out

    def describe(self, eps_symbol: str = "eps") -> str:
        parts = []
        for v, a in self.factors:
            core = f"{eps_symbol}" if v.is_zero else f"({v}+{eps_symbol})"
            if a == 1:
                parts.append(core)
            else:
                exp = str(a) if a.denominator == 1 else f"({a})"
                parts.append(f"{core}^{exp}")
        return "*".join(parts) if parts else "1"


def _single(v: Value) -> BoundFactors:
    return BoundFactors(((v, Fraction(1)),))


def _value_pow(v: Value, n: int) -> Value:
    return v ** n


def _merge(a: BoundFactors, na: Fraction, b: BoundFactors, nb: Fraction) -> BoundFactors:
    acc: dict[Value, Fraction] = {}
    for bf, n in ((a, na), (b, nb)):
        for v, e in bf.factors:
            acc[v] = acc.get(v, Fraction(0)) + e * n
    return BoundFactors(tuple(sorted(((v, e) for v, e in acc.items() if e != 0),
                                     key=lambda t: t[0].sort_key())))


@dataclass(frozen=True)
class Inequality:
    f: Monomial
    bound: BoundFactors
    value: Value  # the nominal centre (product of factor values)

    def split(self) -> tuple[Monomial, Monomial]:
        num = Monomial(tuple((v, e) for v, e in self.f.exps if e > 0))
        den = Monomial(tuple((v, -e) for v, e in self.f.exps if e < 0))
        return num, den

    def eval_parts(self, norms) -> tuple[float, float]:
        """Numerator and denominator of f at non-negative block norms."""
        num, den = self.split()
        nv = dv = 1.0
        for v, e in num.exps:
            nv *= float(norms.get(v.index, 1.0)) ** float(e)
        for v, e in den.exps:
            dv *= float(norms.get(v.index, 1.0)) ** float(e)
        return nv, dv

    def eval_f(self, norms) -> float:
        nv, dv = self.eval_parts(norms)
        if dv == 0.0:
            return math.inf if nv > 0 else math.nan
        return nv / dv

    def text(self, eps_symbol: str = "eps", strict: bool = True) -> str:
        num, den = self.split()
        lt = "<" if strict else "<="
        den_txt = "" if den.is_one else f"*{_norm_text(den)}"
        rhs = self.bound.describe(eps_symbol) + den_txt
        if self.value.is_zero:
            return f"{_norm_text(num)} {lt} {rhs}"
        lower = f"({self.value}-{eps_symbol})" + den_txt
        return f"{lower} {lt} {_norm_text(num)} {lt} {rhs}"


def _norm_text(m: Monomial) -> str:
    if m.is_one:
        return "1"
    parts = []
    for v, e in m.exps:
        base = f"|z{v.index}|"
        parts.append(base if e == 1 else f"{base}^{e}" if e.denominator == 1
                     else f"{base}^({e})")
    return "*".join(parts)


class SystemKind(Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class MulticoneSystem:
    """The region where each generator monomial stays eps-close to its value,
    intersected with directional cones on the nonzero blocks."""

    inequalities: tuple[Inequality, ...]
    zero_blocks: frozenset[int]
    blocks: tuple[int, ...]
    block_dims: dict[int, int]
    norms: dict[int, float]
    action_rows: tuple[tuple[Fraction, ...], ...]
    one_sided: bool
    has_x0: bool
    kind: SystemKind = SystemKind.OPEN

    def member(self, norms, eps, cone_ok=None, x0_norm: float | None = None) -> bool:
        """All inequalities hold at the given block norms (max-norm per
        block); zero norms are only legal on the zero pattern.

        eps is a single number, or a mapping from inequality position to a
        (minus, plus) pair with an optional "x0" entry for the base bound.
        """
        if cone_ok is not None and not all(cone_ok.get(k, True)
                                           for k in self.blocks
                                           if k not in self.zero_blocks):
            return False
        open_kind = self.kind is SystemKind.OPEN
        per_pair = None
        if isinstance(eps, (int, float)):
            eps0 = float(eps)
        else:
            per_pair = dict(eps)
            bounds = [b for key, pair_ in per_pair.items() if key != "x0"
                      for b in pair_]
            eps0 = float(per_pair.get("x0", max(bounds)))
        for k in self.blocks:
            val = float(norms.get(k, 0.0))
            if val < 0 or (open_kind and val == 0.0 and k not in self.zero_blocks):
                return False
        if self.has_x0 and x0_norm is not None and not _cmp(x0_norm, eps0, self.kind):
            return False
        for pos, ineq in enumerate(self.inequalities):
            if per_pair is None:
                e_minus = e_plus = float(eps)
            else:
                e_minus, e_plus = (float(x) for x in per_pair[pos])
            # Denominator-cleared comparison: valid at vanishing norms too.
            nv, dv = ineq.eval_parts(norms)
            hi = ineq.bound.upper(e_plus, self.norms)
            lo = ineq.bound.lower(e_minus, self.norms, clamp=not open_kind)
            if open_kind:
                if not (lo * dv < nv < hi * dv):
                    return False
            else:
                if not (lo * dv <= nv <= hi * dv):
                    return False
        return True

    def text(self, eps_symbol: str = "eps") -> list[str]:
        lines = []
        for k in self.blocks:
            if k not in self.zero_blocks:
                lines.append(f"z{k} in W{k}")
        if self.has_x0:
            lines.append(f"|z0| < {eps_symbol}")
        strict = self.kind is SystemKind.OPEN
        for ineq in self.inequalities:
            lines.append(ineq.text(eps_symbol, strict=strict))
        return lines

    def json(self) -> dict:
        return {
            "inequalities": [
                {"monomial": i.f.json(), "value": i.value.json(),
                 "bound": i.bound.describe()} for i in self.inequalities],
            "zero_blocks": sorted(self.zero_blocks),
            "cones": [k for k in self.blocks if k not in self.zero_blocks],
            "kind": self.kind.value,
        }


def _cmp(a, b, kind: SystemKind) -> bool:
    return a < b if kind is SystemKind.OPEN else a <= b


def build_multicone(pipeline: PipelineResult, p: PointPattern | None = None,
                    eps_mode: str = "single",
                    check_equivalence: bool = True) -> MulticoneSystem:
    """Inequality system over the pipeline's final stage.

    The one-sided rendering is available exactly when the stage is
    fraction-closed; the generated-semigroup equivalence precondition is
    checked unless explicitly skipped.
    """
    if eps_mode != "single":
        raise ValueError("only the single-eps family is built here; pass "
                         "per-pair bounds to member() for the general family")
    p = p or pipeline.p
    if check_equivalence:
        verdict = equivalent(pipeline.Fq, pipeline.G,
                             zero_slack=pipeline.zero_cols_L)
        if verdict is not Verdict.YES:
            raise ValueError(f"stage/semigroup equivalence check came back "
                             f"{verdict.value}")
    ineqs = tuple(Inequality(pr.f, _single(pr.v), pr.v)
                  for pr in sorted_pairs(pipeline.Fq))
    one_sided = fraction_closure(pipeline.Fq) == pipeline.Fq
    d = pipeline.d
    return MulticoneSystem(
        inequalities=ineqs,
        zero_blocks=frozenset(p.zero_blocks),
        blocks=tuple(range(1, d.m + 1)),
        block_dims={k: d.block_dims[k - 1] for k in range(1, d.m + 1)},
        norms=dict(p.norms),
        action_rows=d.A,
        one_sided=one_sided,
        has_x0=bool(d.complement_block),
    )


class ClosureCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ClosureEntry:
    pair: Pair
    factors: tuple[tuple[Pair, int], ...]


@dataclass(frozen=True)
class ClosureSystem:
    entries: tuple[ClosureEntry, ...]
    system: MulticoneSystem

    @property
    def K(self) -> frozenset[Pair]:
        return frozenset(e.pair for e in self.entries)

    def member(self, norms, eps: float) -> bool:
        return self.system.member(norms, eps)


def closure(pipeline: PipelineResult, rounds: int | None = 1,
            cap: int = 10000) -> ClosureSystem:
    """Close the final stage under the balanced-product operation and emit
    the denominator-cleared non-strict system describing the closure.

    A single round (products of stage pairs) is the default; rounds=None
    iterates to a fixpoint under the element cap, which need not terminate
    for systems with opposite-sign cycles.
    """
    base = [ClosureEntry(pr, ((pr, 1),)) for pr in sorted_pairs(pipeline.Fq)]
    entries = {e.pair: e for e in base}
    sel = pipeline.r.sel_cols

    def products(pool_a, pool_b):
        new = []
        for ea in pool_a:
            for eb in pool_b:
                for k in sel:
                    ef, eg = ea.pair.f.exponent(tau(k)), eb.pair.f.exponent(tau(k))
                    if ef > 0 and eg < 0:
                        a, b = _balanced(ef, eg)
                        prod = (ea.pair ** a) * (eb.pair ** b)
                        if prod not in entries:
                            fac: dict[Pair, int] = {}
                            for q, n in ea.factors:
                                fac[q] = fac.get(q, 0) + n * a
                            for q, n in eb.factors:
                                fac[q] = fac.get(q, 0) + n * b
                            new.append(ClosureEntry(
                                prod, tuple(sorted(fac.items(),
                                                   key=lambda t: t[0].sort_key()))))
        return new

    frontier = base
    round_no = 0
    while frontier:
        if rounds is not None and round_no >= rounds:
            break
        fresh = []
        for e in products(frontier, base) + products(base, frontier):
            if e.pair not in entries:
                entries[e.pair] = e
                fresh.append(e)
                if len(entries) > cap:
                    raise ClosureCapExceeded(
                        f"closure exceeded {cap} elements; the balanced "
                        "products do not stabilise")
        frontier = fresh
        round_no += 1

    ordered = tuple(sorted(entries.values(), key=lambda e: e.pair.sort_key()))
    ineqs = tuple(Inequality(e.pair.f,
                             BoundFactors(tuple((q.v, Fraction(n))
                                                for q, n in e.factors)),
                             e.pair.v)
                  for e in ordered)
    sys0 = build_multicone(pipeline, check_equivalence=False)
    closed = replace(sys0, inequalities=ineqs, kind=SystemKind.CLOSED)
    return ClosureSystem(ordered, closed)


def project(system: MulticoneSystem, k: int, k_in_JZ: bool | None = None) -> MulticoneSystem:
    """Eliminate one block from a one-sided system.

    When the dropped norm can vanish, rows not involving it survive
    unchanged and positive rows drop; otherwise opposite-sign rows pair
    into balanced products with multiplied bounds.
    """
    if not system.one_sided:
        raise ValueError("projection needs a fraction-closed one-sided system")
    if k_in_JZ is None:
        k_in_JZ = k in system.zero_blocks
    v = tau(k)
    keep, pos, neg = [], [], []
    for ineq in system.inequalities:
        e = ineq.f.exponent(v)
        if e == 0:
            keep.append(ineq)
        elif e > 0:
            pos.append((ineq, e))
        else:
            neg.append((ineq, e))
    if k_in_JZ:
        if neg:
            raise ValueError("negative exponents on a vanishing block")
        new = keep
    else:
        new = list(keep)
        for gneg, en in neg:
            for gpos, ep in pos:
                # coprime a, b with a*|e_neg| = b*e_pos
                ratio = ep / -en
                a, b = ratio.numerator, ratio.denominator
                f = (gneg.f ** a) * (gpos.f ** b)
                bound = _merge(gneg.bound, Fraction(a), gpos.bound, Fraction(b))
                value = _value_pow(gneg.value, a) * _value_pow(gpos.value, b)
                new.append(Inequality(f, bound, value))
    return MulticoneSystem(
        inequalities=tuple(sorted(set(new), key=lambda i: i.f.sort_key())),
        zero_blocks=system.zero_blocks - {k},
        blocks=tuple(b for b in system.blocks if b != k),
        block_dims={b: d for b, d in system.block_dims.items() if b != k},
        norms={b: n for b, n in system.norms.items() if b != k},
        action_rows=system.action_rows,
        one_sided=True,
        has_x0=system.has_x0,
        kind=system.kind,
    )


def member(system: MulticoneSystem, norms, eps: float, cone_ok=None,
           x0_norm: float | None = None) -> bool:
    return system.member(norms, eps, cone_ok=cone_ok, x0_norm=x0_norm)


def sample_members(system: MulticoneSystem, n: int, eps: float,
                   rng: np.random.Generator, margin: float = 0.05,
                   max_tries: int | None = None) -> list[dict[int, float]]:
    """Rejection-sample member points via the contraction parametrisation.

    Base norms follow the stored block norms (tiny log-uniform values on the
    zero pattern), pushed through random contractions with log-uniform
    parameters below eps and a multiplicative jitter; candidates are
    accepted when they satisfy the system at a slightly shrunken eps, so the
    samples sit strictly inside."""
    ell = len(system.action_rows)
    out: list[dict[int, float]] = []
    tries = 0
    max_tries = max_tries or 200 * n
    shrunk = eps * (1.0 - margin)
    while len(out) < n and tries < max_tries:
        tries += 1
        lam_vec = np.exp(rng.uniform(np.log(eps * 1e-3), np.log(eps * 0.9), ell))
        jitter = rng.uniform(0.9, 1.1, len(system.blocks))
        norms = {}
        for pos, k in enumerate(system.blocks):
            base = system.norms.get(k, 1.0)
            if k in system.zero_blocks:
                base = float(np.exp(rng.uniform(np.log(1e-6), np.log(0.5))))
            scale = 1.0
            for j in range(ell):
                scale *= float(lam_vec[j]) ** float(system.action_rows[j][k - 1])
            norms[k] = base * scale * float(jitter[pos])
        if system.member(norms, shrunk):
            out.append(norms)
    return out


@dataclass(frozen=True)
class ContractionReport:
    sampled: int
    checked: int
    violations: int
    failures: list


def contraction_stable_check(system: MulticoneSystem, samples: int,
                             rng_seed: int, eps: float = 0.1) -> ContractionReport:
    """Member points stay members under every contraction of the actions."""
    rng = np.random.default_rng(rng_seed)
    pts = sample_members(system, samples, eps, rng)
    ell = len(system.action_rows)
    failures = []
    checked = 0
    for norms in pts:
        lam_vec = rng.uniform(0.05, 1.0, ell)
        moved = {}
        for k in system.blocks:
            scale = 1.0
            for j in range(ell):
                scale *= float(lam_vec[j]) ** float(system.action_rows[j][k - 1])
            moved[k] = norms[k] * scale
        checked += 1
        if not system.member(moved, eps):
            failures.append((norms, tuple(lam_vec)))
    return ContractionReport(len(pts), checked, len(failures), failures)


class ProbeOutcome(Enum):
    IN_CONE = "in-cone"
    NOT_IN_CONE = "not-in-cone"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProbeResult:
    outcome: ProbeOutcome
    eps: float | None = None
    radius: float | None = None
    hits: dict = field(default_factory=dict)


def normal_cone_probe(pipeline: PipelineResult, p: PointPattern, Z,
                      eps_schedule=(0.5, 0.2, 0.1, 0.05),
                      ball_schedule=None, samples: int = 4000,
                      seed: int = 0, directions=None,
                      aperture: float = 0.5) -> ProbeResult:
    """Numerical oracle for the normal-cone membership characterisation.

    Z provides `sample(rng, scale)` a candidate generator and `contains`
    a predicate; membership of the base point in the cone of Z is probed
    by intersecting sampled Z points with multicones at shrinking scales.
    Not a decision procedure: a clean miss at one scale reports not-in-cone,
    hits at every scale report in-cone, anything else is inconclusive.
    """
    system = build_multicone(pipeline, p, check_equivalence=False)
    rng = np.random.default_rng(seed)
    if ball_schedule is None:
        ball_schedule = tuple(4.0 * e for e in eps_schedule)
    directions = directions or {}
    hits = {}
    for eps, radius in zip(eps_schedule, ball_schedule):
        found = 0
        for _ in range(samples):
            z = Z.sample(rng, eps)
            if z is None or not Z.contains(z):
                continue
            norms = {k: float(np.max(np.abs(np.atleast_1d(v))))
                     for k, v in z.items()}
            if any(norms[k] > radius for k in norms):
                continue
            cone_ok = {}
            for k, direction in directions.items():
                vec = np.atleast_1d(np.asarray(z[k], dtype=float))
                dvec = np.atleast_1d(np.asarray(direction, dtype=float))
                nv, nd = np.linalg.norm(vec), np.linalg.norm(dvec)
                if nv == 0 or nd == 0:
                    cone_ok[k] = k in system.zero_blocks
                    continue
                cosang = float(np.dot(vec, dvec) / (nv * nd))
                cone_ok[k] = math.acos(max(-1.0, min(1.0, cosang))) <= aperture
            if system.member(norms, eps, cone_ok=cone_ok):
                found += 1
                break
        hits[eps] = found
    if all(v > 0 for v in hits.values()):
        return ProbeResult(ProbeOutcome.IN_CONE, hits=hits)
    for (eps, radius) in zip(eps_schedule, ball_schedule):
        if hits[eps] == 0:
            if all(hits[e] == 0 for e in eps_schedule if e <= eps):
                return ProbeResult(ProbeOutcome.NOT_IN_CONE, eps=eps,
                                   radius=radius, hits=hits)
    return ProbeResult(ProbeOutcome.INCONCLUSIVE, hits=hits)
