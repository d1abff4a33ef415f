"""Expansion index sets, inclusion-exclusion templates, remainder
exponents, coefficient-family consistency, induced maps, the numerical
estimate harness, and the two-manifold catalogue."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .deformation import (DeformationData, PointPattern, RankData,
                          rank_and_normalize, classify_action, ActionClass)
from .levels import (LevelExpr, LevelFamily, LEVEL_ONE, lprod, lpow,
                     canonical, evaluate_level, build_levels)
from .linear import rank, mat
from .monomials import Monomial, tau
from .multicone import MulticoneSystem, build_multicone, sample_members
from .polynomials import (BlockStructure, BlockPolynomial, poly_zero,
                          poly_monomial, factorial_multi)
from .semigroup import run_pipeline


def structure_of(d: DeformationData) -> BlockStructure:
    return BlockStructure(tuple(d.block_dims))


def subsets_of_actions(ell: int):
    """All nonempty subsets of the action indices (duplicates untouched)."""
    if ell > 8:
        raise ValueError("inclusion-exclusion over more than 8 actions is "
                         "not supported; reduce duplicated actions first")
    idx = range(1, ell + 1)
    return [frozenset(c) for r in range(1, ell + 1)
            for c in combinations(idx, r)]


def weight_vector(d: DeformationData, struct: BlockStructure, idx,
                  sigma: Fraction) -> tuple[Fraction, ...]:
    """Per-action scaled weight of a monomial: sigma * sum_k a_jk |idx^(k)|."""
    lengths = struct.block_lengths(idx)
    return tuple(sigma * sum(d.entry(j, k) * lengths[k - 1]
                             for k in range(1, d.m + 1))
                 for j in range(1, d.ell + 1))


@dataclass(frozen=True)
class IndexSet:
    J: frozenset[int]
    N: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    def constraint_text(self, d: DeformationData, sigma: Fraction) -> list[str]:
        out = []
        for j in sorted(self.J):
            parts = [
                (f"|a{k}|" if d.entry(j, k) == 1 else f"{d.entry(j, k)}*|a{k}|")
                for k in range(1, d.m + 1) if d.entry(j, k) != 0]
            rhs = f"n{j}" if sigma == 1 else f"n{j}/{sigma}"
            out.append(" + ".join(parts) + f" < {rhs}")
        return out


def index_set(d: DeformationData, r: RankData, J, N) -> IndexSet:
    """Block multi-indices supported on the union of the acting blocks whose
    scaled weights fall strictly below the per-action orders."""
    J = frozenset(J)
    if not J:
        raise ValueError("the action subset must be nonempty")
    N = tuple(int(n) for n in N)
    struct = structure_of(d)
    sigma = r.sigma_A
    K_J = set()
    for j in J:
        K_J |= set(d.k_set(j))
    coords = [c for c in range(struct.n) if struct.block_of(c) in K_J]

    def below(idx) -> bool:
        w = weight_vector(d, struct, tuple(idx), sigma)
        return all(w[j - 1] < N[j - 1] for j in J)

    members: list[tuple[int, ...]] = []

    def rec(pos: int, idx: list[int]):
        if pos == len(coords):
            members.append(tuple(idx))
            return
        c = coords[pos]
        v = 0
        while True:
            nxt = idx[:]
            nxt[c] = v
            if not below(nxt):
                break
            rec(pos + 1, nxt)
            v += 1

    if any(n > 0 for n in N):
        start = [0] * struct.n
        if below(start):
            rec(0, start)
    return IndexSet(J, N, tuple(sorted(members)))


CoefficientFamily = dict  # frozenset[int] -> dict[idx -> BlockPolynomial]


def canonical_family(f: BlockPolynomial, d: DeformationData) -> CoefficientFamily:
    """The derivative family: coefficient = matching derivative restricted
    to the vanishing locus of the acting blocks."""
    struct = f.struct
    fam: CoefficientFamily = {}
    for J in subsets_of_actions(d.ell):
        K_J = set()
        for j in J:
            K_J |= set(d.k_set(j))
        coords = [c for c in range(struct.n) if struct.block_of(c) in K_J]
        entries: dict[tuple[int, ...], BlockPolynomial] = {}
        for idx, _ in f.terms:
            alpha = tuple(idx[c] if c in coords else 0 for c in range(struct.n))
            if alpha in entries:
                continue
            entries[alpha] = f.diff_multi(alpha).restrict_zero(K_J)
        fam[J] = entries
    return fam


def family_at(fam: CoefficientFamily, struct: BlockStructure, J, alpha) -> BlockPolynomial:
    return fam.get(frozenset(J), {}).get(tuple(alpha), poly_zero(struct))


def t_poly(d: DeformationData, r: RankData, J, N,
           fam: CoefficientFamily, struct: BlockStructure) -> BlockPolynomial:
    """One truncated block-Taylor polynomial assembled from the family."""
    iset = index_set(d, r, J, N)
    out = poly_zero(struct)
    for alpha in iset.members:
        coeff = family_at(fam, struct, J, alpha)
        if coeff.is_zero:
            continue
        out = out + (coeff * poly_monomial(struct, alpha,
                                           Fraction(1, factorial_multi(alpha))))
    return out


def app_template(d: DeformationData, r: RankData, N,
                 F: CoefficientFamily) -> BlockPolynomial:
    """Inclusion-exclusion over all nonempty action subsets; duplicated
    actions contribute duplicated terms, exactly as the formula says."""
    struct = structure_of(d)
    out = poly_zero(struct)
    for J in subsets_of_actions(d.ell):
        sign = 1 if len(J) % 2 == 1 else -1
        out = out + t_poly(d, r, J, N, F, struct).scale(sign)
    return out


def taylor_oracle(d: DeformationData, r: RankData, J, N,
                  f: BlockPolynomial) -> BlockPolynomial:
    """Independent route to the truncated polynomial: push the action into
    the argument and read off parameter weights; a monomial survives when
    every acting weight stays below its order."""
    J = frozenset(J)
    N = tuple(int(n) for n in N)
    struct = f.struct
    sigma = r.sigma_A
    d_terms = {}
    for idx, c in f.terms:
        w = weight_vector(d, struct, idx, sigma)
        for j in J:
            if w[j - 1].denominator != 1:
                raise AssertionError("scaled weights must be integers")
        if all(w[j - 1] < N[j - 1] for j in J):
            d_terms[idx] = c
    return BlockPolynomial.from_dict(struct, d_terms)


def remainder_exponent(family: LevelFamily, N, sigma: Fraction) -> LevelExpr:
    """Product of per-action levels raised to order over scale; collapses to
    a plain monomial when every level is one."""
    N = tuple(N)
    factors = []
    for j, e in sorted(family.rho_Lambda.items()):
        n_j = Fraction(N[j - 1])
        if n_j == 0:
            continue
        factors.append(lpow(e, n_j / sigma))
    if not factors:
        return LEVEL_ONE
    return canonical(lprod(factors))


def derivative_shift(d: DeformationData, r: RankData, N, k: int) -> tuple[int, ...]:
    """Orders after differentiating in a coordinate of block k."""
    if not 1 <= k <= d.m:
        raise ValueError(f"block index {k} out of range")
    N = tuple(int(n) for n in N)
    shift = [r.sigma_A * d.entry(j, k) for j in range(1, d.ell + 1)]
    if any(s.denominator != 1 for s in shift):
        raise AssertionError("scaled column must be integral")
    return tuple(n + int(s) for n, s in zip(N, shift))


def family_shift(fam: CoefficientFamily, d: DeformationData,
                 struct: BlockStructure, coord: int) -> CoefficientFamily:
    """Re-index the family under one coordinate derivative: differentiate
    coefficients when the block is inactive for the subset, shift the index
    down when it is active."""
    k = struct.block_of(coord)
    out: CoefficientFamily = {}
    for J, entries in fam.items():
        K_J = set()
        for j in J:
            K_J |= set(d.k_set(j))
        if k not in K_J:
            out[J] = {alpha: poly.diff(coord)
                      for alpha, poly in entries.items()}
        else:
            new_entries = {}
            for alpha, poly in entries.items():
                if alpha[coord] >= 1:
                    shifted = list(alpha)
                    shifted[coord] -= 1
                    new_entries[tuple(shifted)] = poly
            out[J] = new_entries
    return out


def derivative_identity_holds(d: DeformationData, r: RankData,
                              f: BlockPolynomial, N, coord: int) -> bool:
    """d/dz_i of the template at shifted orders equals the template of the
    shifted family at the original orders."""
    k = f.struct.block_of(coord)
    n_plus = derivative_shift(d, r, N, k)
    fam = canonical_family(f, d)
    lhs = app_template(d, r, n_plus, fam).diff(coord)
    fam_shifted = family_shift(fam, d, f.struct, coord)
    rhs = app_template(d, r, N, fam_shifted)
    return lhs.terms == rhs.terms


@dataclass(frozen=True)
class ConsistencyReport:
    holds: bool
    mismatches: tuple[str, ...]


def consistency_C1(family: CoefficientFamily, d: DeformationData,
                   struct: BlockStructure | None = None) -> ConsistencyReport:
    """Families attached to subsets with the same vanishing locus must agree;
    for polynomial data the recursive condition reduces to the restriction/
    differentiation compatibility across nested subsets, checked too."""
    struct = struct or structure_of(d)
    mismatches = []
    subsets = subsets_of_actions(d.ell)

    def kset(J):
        out = set()
        for j in J:
            out |= set(d.k_set(j))
        return frozenset(out)

    for i, J in enumerate(subsets):
        for Jp in subsets[i + 1:]:
            if kset(J) != kset(Jp):
                continue
            keys = set(family.get(J, {})) | set(family.get(Jp, {}))
            for alpha in keys:
                if family_at(family, struct, J, alpha).terms != \
                        family_at(family, struct, Jp, alpha).terms:
                    mismatches.append(
                        f"J={sorted(J)} vs J'={sorted(Jp)} at alpha={alpha}")

    # Restriction/differentiation compatibility (polynomial route).
    for J in subsets:
        for R in subsets:
            if not (J < R):
                continue
            kj, kr = kset(J), kset(R)
            j_coords = [c for c in range(struct.n) if struct.block_of(c) in kj]
            keys = set(family.get(R, {}))
            for alpha, poly in family.get(J, {}).items():
                # any gamma = alpha + beta with beta outside the J-blocks
                for gamma in keys:
                    if all(gamma[c] == alpha[c] for c in j_coords) and all(
                            struct.block_of(c) in kr for c in range(struct.n)
                            if gamma[c] != alpha[c]):
                        beta = tuple(g - a for g, a in zip(gamma, alpha))
                        if any(b < 0 for b in beta):
                            continue
                        expected = poly.diff_multi(beta).restrict_zero(kr)
                        got = family_at(family, struct, R, gamma)
                        if expected.terms != got.terms:
                            mismatches.append(
                                f"J={sorted(J)} -> R={sorted(R)} at "
                                f"gamma={gamma}")
    return ConsistencyReport(not mismatches, tuple(sorted(set(mismatches))))


@dataclass(frozen=True)
class PolyMapSpec:
    source: DeformationData
    target: DeformationData
    components: tuple[BlockPolynomial, ...]  # one per target coordinate

    def target_struct(self) -> BlockStructure:
        return structure_of(self.target)


@dataclass(frozen=True)
class MapCheck:
    ok: bool
    induced: tuple[BlockPolynomial, ...] | None
    reason: str | None = None
    witness: tuple | None = None


def check_map(spec: PolyMapSpec) -> MapCheck:
    """Validate a polynomial map between deformations and extract the
    induced zero-section map: only grading-homogeneous terms survive.

    Fails when a component fails to vanish on the image constraint or a
    monomial's source weights drop below the target column.
    """
    src, tgt = spec.source, spec.target
    if src.ell != tgt.ell:
        return MapCheck(False, None, "action counts differ")
    s_struct = structure_of(src)
    t_struct = structure_of(tgt)
    if len(spec.components) != t_struct.n:
        return MapCheck(False, None, "one component per target coordinate "
                                     "is required")
    # f(M_j) inside N_j: components of acted target blocks vanish when the
    # source's acted blocks vanish.
    for j in range(1, src.ell + 1):
        for coord in range(t_struct.n):
            k = t_struct.block_of(coord)
            if k in tgt.k_set(j):
                rest = spec.components[coord].restrict_zero(src.k_set(j))
                if not rest.is_zero:
                    return MapCheck(
                        False, None,
                        f"component {coord} does not map manifold {j} "
                        f"into its target", witness=(j, coord))
    induced = []
    for coord in range(t_struct.n):
        k = t_struct.block_of(coord)
        col = [tgt.entry(j, k) for j in range(1, tgt.ell + 1)]
        kept = {}
        for idx, c in spec.components[coord].terms:
            w = weight_vector(src, s_struct, idx, Fraction(1))
            if any(wj < cj for wj, cj in zip(w, col)):
                return MapCheck(
                    False, None,
                    f"monomial {dict(enumerate(idx))} of component {coord} "
                    f"has weight below the target column on some action",
                    witness=(coord, idx,
                             next(j + 1 for j, (wj, cj) in
                                  enumerate(zip(w, col)) if wj < cj)))
            if all(wj == cj for wj, cj in zip(w, col)):
                kept[idx] = c
        induced.append(BlockPolynomial.from_dict(s_struct, kept))
    return MapCheck(True, tuple(induced))


@dataclass(frozen=True)
class EstimateReport:
    C_fit: float
    C_half: float
    samples: int
    passed: bool
    max_violation: float


def verify_estimate(d: DeformationData, r: RankData, p: PointPattern,
                    f: BlockPolynomial, N, system: MulticoneSystem | None = None,
                    samples: int = 2000, eps: float = 0.1,
                    seed: int = 0) -> EstimateReport:
    """Fit the constant in the remainder bound by sampling and re-fit on the
    halved scale; the estimate passes when the constant does not grow by
    more than a factor of two."""
    pipeline = run_pipeline(d, r, p)
    family = build_levels(pipeline)
    fam = canonical_family(f, d)
    app = app_template(d, r, N, fam)
    diffp = f - app
    system = system or build_multicone(pipeline, p, check_equivalence=False)
    rng = np.random.default_rng(seed)

    def fit(scale: float, n: int) -> float:
        pts = sample_members(system, n, scale, rng)
        if len(pts) < max(1, n // 4):
            raise RuntimeError(
                f"sampling starvation: {len(pts)} of {n} requested points at "
                f"scale {scale}")
        worst = 0.0
        for norms in pts:
            coords = _coords_from_norms(d, norms)
            val = abs(diffp.evaluate(coords))
            rem = 1.0
            for j, e in family.rho_Lambda.items():
                nj = float(N[j - 1])
                if nj:
                    rem *= evaluate_level(e, norms) ** (nj / float(r.sigma_A))
            if rem == 0.0:
                continue
            worst = max(worst, val / rem)
        return worst

    c_full = fit(eps, samples)
    c_half = fit(eps / 2.0, samples)
    passed = c_half <= 2.0 * c_full + 1e-12
    return EstimateReport(c_full, c_half, samples, passed,
                          max_violation=max(0.0, c_half - 2.0 * c_full))


def _coords_from_norms(d: DeformationData, norms) -> list[float]:
    struct = structure_of(d)
    coords = [0.0] * struct.n
    for k in range(1, d.m + 1):
        for c in struct.coords_of(k):
            coords[c] = float(norms.get(k, 0.0))
    return coords


@dataclass(frozen=True)
class FlatnessReport:
    flat: bool
    witness: tuple | None = None


def flatness_check(f: BlockPolynomial, d: DeformationData,
                   degrees: int = 6) -> FlatnessReport:
    """Developability to the zero total family.

    For polynomials the canonical coefficients decide it exactly: any
    nonzero coefficient witnesses a failing order, and an all-zero family
    forces the zero polynomial.
    """
    fam = canonical_family(f, d)
    for J in sorted(fam, key=lambda s: (len(s), sorted(s))):
        for alpha, poly in sorted(fam[J].items()):
            if not poly.is_zero and sum(alpha) <= degrees:
                return FlatnessReport(False, witness=(tuple(sorted(J)), alpha))
    return FlatnessReport(f.is_zero, None if f.is_zero else ((), None))


@dataclass(frozen=True)
class TwoManifoldCase:
    label: str
    m: int
    nonzero: int
    subcase: str | None
    system: MulticoneSystem
    constraints: dict[str, list[str]]
    family: LevelFamily
    sigma: Fraction

    def remainder_at(self, N) -> LevelExpr:
        return remainder_exponent(self.family, N, self.sigma)

    def remainder_text(self) -> str:
        """Exponent of each block norm as a linear form in the orders."""
        parts = []
        for k in sorted({v.index for e in self.family.rho_Lambda.values()
                         for m_ in _level_monos(e) for v, _ in m_.exps}):
            coeffs = []
            for j, e in sorted(self.family.rho_Lambda.items()):
                monos = _level_monos(e)
                exp = monos[0].exponent(tau(k)) if len(monos) == 1 else None
                if exp is None:
                    return "(not a single monomial; see remainder_at)"
                if exp:
                    c = exp / self.sigma
                    coeffs.append(f"n{j}" if c == 1 else f"({c})*n{j}")
            if coeffs:
                parts.append(f"|z{k}|^({' + '.join(coeffs)})")
        return "*".join(parts) if parts else "1"


def _level_monos(e: LevelExpr) -> list[Monomial]:
    c = canonical(e)
    if c.kind == "mono":
        return [c.mono]
    out = []
    for ch in c.children:
        out.extend(_level_monos(ch))
    return out


def classify_two_manifolds(rows) -> TwoManifoldCase:
    """Match a normalized 2-row action matrix against the catalogue of
    two-manifold expansions with at most three blocks."""
    a = mat(rows)
    if len(a) != 2:
        raise ValueError("the catalogue covers exactly two actions")
    m = len(a[0])
    if m not in (2, 3):
        raise ValueError("the catalogue covers two or three blocks")
    if rank(a) < 2:
        raise ValueError("degenerate action: reduces to the one-manifold case")
    if any(all(a[j][k] == 0 for j in range(2)) for k in range(m)):
        raise ValueError("a zero column reduces to fewer blocks")
    if not (a[0][0] == 1 and a[1][1] == 1):
        raise ValueError("normalize the matrix first: unit diagonal via row "
                         "scaling and column order")
    if 1 - a[0][1] * a[1][0] <= 0:
        raise ValueError("normalize the matrix first: the leading minor "
                         "determinant must be positive")
    b, c = a[0][1], a[1][0]
    nonzero = sum(1 for row in a for x in row if x != 0)
    subcase = None
    if m == 2:
        label = f"m=2,N={nonzero}"
    else:
        e, rr = a[0][2], a[1][2]
        if nonzero == 3:
            if e == 0 or rr != 0 or b != 0 or c != 0:
                # catalogue form carries the extra entry in the first row
                if rr != 0 and e == 0 and b == 0 and c == 0:
                    raise ValueError("swap the two actions to reach the "
                                     "catalogue form")
                if e == 0:
                    raise ValueError("out of catalogue: reduces to m = 2")
            if e == 1:
                raise ValueError("the third block duplicates the first: "
                                 "reduces to m = 2")
            label = "m=3,N=3"
        elif nonzero == 4:
            if e != 0 and rr == 0:
                if e == 1:
                    raise ValueError("the third block duplicates the first: "
                                     "reduces to m = 2")
                subcase = "a"
            elif e == 0 and rr != 0:
                subcase = "b"
            else:
                raise ValueError("out of catalogue: reduces to m = 2")
            label = f"m=3,N=4{subcase}"
        elif nonzero == 5:
            if c != 0:
                raise ValueError("out of catalogue form for N = 5")
            if b * rr == e:
                raise ValueError("proportional third block: reduces to m = 2")
            label = "m=3,N=5"
        else:
            if b * rr == e or c * e == rr:
                raise ValueError("proportional third block: reduces to m = 2")
            label = "m=3,N=6"

    d = DeformationData(2, m, tuple(tuple(row) for row in a),
                        tuple([1] * m), None, frozenset())
    p = PointPattern(frozenset())
    r = rank_and_normalize(d, p)
    pipeline = run_pipeline(d, r, p)
    system = build_multicone(pipeline, p, check_equivalence=False)
    family = build_levels(pipeline)
    n_symbolic = ("n1", "n2")
    constraints = {}
    for J in subsets_of_actions(2):
        key = "{" + ",".join(str(j) for j in sorted(J)) + "}"
        txt = []
        for j in sorted(J):
            parts = [(f"|a{k}|" if d.entry(j, k) == 1
                      else f"{d.entry(j, k)}*|a{k}|")
                     for k in range(1, m + 1) if d.entry(j, k) != 0]
            rhs = n_symbolic[j - 1] + ("" if r.sigma_A == 1
                                       else f"/{r.sigma_A}")
            txt.append(" + ".join(parts) + " < " + rhs)
        constraints[key] = txt
    return TwoManifoldCase(label, m, nonzero, subcase, system, constraints,
                           family, r.sigma_A)
