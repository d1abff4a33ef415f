"""The action matrix, its validation/classification, block coordinates,
derived monomials, base-point zero patterns, and the fixed-point test."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .linear import mat, rank, inverse, sigma_for
from .monomials import Monomial, Var, LAM, tau, lam, xi


class ActionClass(Enum):
    DEGENERATE = "degenerate"
    NON_DEGENERATE = "non-degenerate"
    TRANSITIVE = "transitive"
    NORMAL = "normal"


class IdentityActionError(ValueError):
    """A zero row would make that action the identity; callers must drop it."""


@dataclass(frozen=True)
class DeformationData:
    """An ell x m matrix of non-negative rationals defining the actions.

    Row j scales block k by lambda_j^{a_jk}; K_sets[j] lists the blocks that
    vanish on the j-th manifold and must equal the support of row j.
    """

    ell: int
    m: int
    A: tuple[tuple[Fraction, ...], ...]
    block_dims: tuple[int, ...]
    K_sets: tuple[frozenset[int], ...] | None = None
    complement_block: frozenset[int] = frozenset()

    def row(self, j: int) -> tuple[Fraction, ...]:
        return self.A[j - 1]

    def entry(self, j: int, k: int) -> Fraction:
        return self.A[j - 1][k - 1]

    def column(self, k: int) -> tuple[Fraction, ...]:
        return tuple(self.A[j][k - 1] for j in range(self.ell))

    def support(self, j: int) -> frozenset[int]:
        return frozenset(k for k in range(1, self.m + 1) if self.entry(j, k) != 0)

    def k_set(self, j: int) -> frozenset[int]:
        return self.K_sets[j - 1] if self.K_sets else self.support(j)

    def json(self) -> dict:
        out = {
            "ell": self.ell,
            "m": self.m,
            "A": [[str(x) for x in row] for row in self.A],
            "blocks": list(self.block_dims),
        }
        if self.K_sets:
            out["K"] = [sorted(s) for s in self.K_sets]
        return out


def deformation(rows, block_dims=None, K_sets=None,
                complement_block=frozenset()) -> DeformationData:
    a = mat(rows)
    ell = len(a)
    if ell == 0:
        raise ValueError("need at least one action row")
    m = len(a[0])
    if any(len(row) != m for row in a):
        raise ValueError("ragged action matrix")
    if any(x < 0 for row in a for x in row):
        raise ValueError("action exponents must be non-negative")
    for j, row in enumerate(a, start=1):
        if all(x == 0 for x in row):
            raise IdentityActionError(
                f"row {j} is zero, so that action is the identity; "
                "remove the redundant deformation parameter first")
    seen = {}
    for j, row in enumerate(a, start=1):
        key = tuple(row)
        if key in seen:
            warnings.warn(
                f"rows {seen[key]} and {j} coincide; duplicated actions are "
                "allowed in the local model but can be eliminated",
                stacklevel=2)
        else:
            seen[key] = j
    dims = tuple(block_dims) if block_dims else tuple([1] * m)
    if len(dims) != m or any(d < 1 for d in dims):
        raise ValueError("block_dims must list a positive size per block")
    ks = None
    if K_sets is not None:
        ks = tuple(frozenset(s) for s in K_sets)
        if len(ks) != ell:
            raise ValueError("need one K set per action")
        for j in range(1, ell + 1):
            support = frozenset(k for k in range(1, m + 1) if a[j - 1][k - 1] != 0)
            if ks[j - 1] != support:
                raise ValueError(
                    f"fixed-point condition violated on row {j}: nonzero "
                    f"entries {sorted(support)} must match K set {sorted(ks[j - 1])}")
    return DeformationData(ell, m, tuple(tuple(row) for row in a), dims, ks,
                           frozenset(complement_block))


def build_from_index_family(I_sets) -> DeformationData:
    """Blocks = equivalence classes of coordinates sharing the same manifold
    membership pattern; the matrix is the 0/1 incidence of classes in sets."""
    sets = [frozenset(s) for s in I_sets]
    if not sets:
        raise ValueError("need at least one index set")
    union = sorted(set().union(*sets))
    if not union:
        raise ValueError("the index sets are all empty")
    universe = set().union(*sets)
    classes: dict[tuple[bool, ...], list[int]] = {}
    for i in union:
        pattern = tuple(i in s for s in sets)
        classes.setdefault(pattern, []).append(i)
    ordered = sorted(classes.values(), key=min)
    rows = [[Fraction(int(set(cls) <= s)) for cls in ordered] for s in sets]
    dims = [len(cls) for cls in ordered]
    ks = [frozenset(k + 1 for k, cls in enumerate(ordered) if set(cls) <= s)
          for s in sets]
    top = max(universe)
    complement = frozenset(i for i in range(1, top + 1) if i not in universe)
    return deformation(rows, block_dims=dims, K_sets=ks, complement_block=complement)


@dataclass(frozen=True)
class PointPattern:
    """Zero pattern of a base point: which block directions vanish.

    norms give |xi^(k)| for the nonzero blocks (used numerically and, when
    not normalized, symbolically via the norm symbols); normalized means
    the selected nonzero blocks are rescaled to unit norm.
    """

    zero_blocks: frozenset[int]
    norms: dict[int, float] = field(default_factory=dict)
    normalized: bool = True

    def is_zero(self, k: int) -> bool:
        return k in self.zero_blocks

    def norm(self, k: int) -> float:
        return float(self.norms.get(k, 1.0))


def point(zero_blocks=(), norms=None, normalized=True) -> PointPattern:
    return PointPattern(frozenset(zero_blocks), dict(norms or {}), normalized)


def check_point(d: DeformationData, p: PointPattern) -> None:
    for k in range(1, d.m + 1):
        if all(x == 0 for x in d.column(k)) and k not in p.zero_blocks:
            raise ValueError(
                f"block {k} has a zero column, so its direction must vanish")
    for k in p.zero_blocks:
        if not 1 <= k <= d.m:
            raise ValueError(f"zero block {k} out of range")


def classify_action(d: DeformationData) -> ActionClass:
    r = rank(mat(d.A))
    if r == d.ell == d.m:
        return ActionClass.NORMAL
    if r == d.ell < d.m:
        return ActionClass.NON_DEGENERATE
    if r == d.m < d.ell:
        return ActionClass.TRANSITIVE
    return ActionClass.DEGENERATE


def is_fixed_point(d: DeformationData, p: PointPattern) -> bool:
    check_point(d, p)
    live = [k for k in range(1, d.m + 1) if k not in p.zero_blocks]
    restricted = [[d.entry(j, k) for k in live] for j in range(1, d.ell + 1)]
    return rank(restricted) < rank(mat(d.A))


@dataclass(frozen=True)
class RankData:
    """Rank, the chosen invertible minor, and the integrality scale.

    sel_rows/sel_cols list the L rows and columns of the minor in increasing
    order; row_perm/col_perm are full permutations (selected first, rest in
    increasing order) so the minor sits top-left after relabelling.
    """

    L: int
    sel_rows: tuple[int, ...]
    sel_cols: tuple[int, ...]
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    sigma_A: Fraction

    @property
    def needs_permutation(self) -> bool:
        return self.row_perm != tuple(range(1, len(self.row_perm) + 1)) or \
            self.col_perm != tuple(range(1, len(self.col_perm) + 1))


def _minor_invertible(d: DeformationData, rows, cols) -> bool:
    sub = [[d.entry(j, k) for k in cols] for j in rows]
    return rank(sub) == len(rows)


def rank_and_normalize(d: DeformationData, p: PointPattern,
                       row_priority: tuple[int, ...] | None = None,
                       avoid_zero_blocks: bool = False,
                       fixed_rows: tuple[int, ...] | None = None) -> RankData:
    """Choose an invertible L x L minor deterministically.

    Columns: the lexicographically smallest L-subset giving an invertible
    minor.  With avoid_zero_blocks (possible exactly when the point is not
    fixed) the subset is additionally restricted to nonzero directions, so
    the zero-pattern eliminations become vacuous.  Rows: the first subset
    in priority order (default: increasing index) making the minor
    invertible.
    """
    check_point(d, p)
    L = rank(mat(d.A))

    order = list(row_priority) if row_priority else list(range(1, d.ell + 1))
    if sorted(order) != list(range(1, d.ell + 1)):
        raise ValueError("row priority must be a permutation of the rows")

    def pick_rows(cols) -> tuple[int, ...] | None:
        if fixed_rows is not None:
            return fixed_rows if _minor_invertible(d, fixed_rows, cols) else None
        for rows in combinations(order, L):
            if _minor_invertible(d, rows, cols):
                return rows
        return None

    if fixed_rows is not None and len(fixed_rows) != L:
        raise ValueError("fixed_rows must select exactly rank-many rows")

    if avoid_zero_blocks:
        candidates = [k for k in range(1, d.m + 1) if k not in p.zero_blocks]
    else:
        candidates = list(range(1, d.m + 1))
    chosen = None
    for cols in combinations(candidates, L):
        rows = pick_rows(cols)
        if rows is not None:
            chosen = (rows, cols)
            break
    if chosen is None:
        if avoid_zero_blocks:
            if is_fixed_point(d, p):
                raise ValueError(
                    "the point is fixed, so no minor avoids its zero pattern")
            raise RuntimeError(
                "no invertible minor avoids the zero pattern although the "
                "point is not fixed; inconsistent rank data")
        raise RuntimeError("matrix has no invertible minor of its own rank")

    rows, cols = chosen
    row_perm = tuple(list(rows) + [j for j in order if j not in rows])
    col_perm = tuple(list(cols) + [k for k in range(1, d.m + 1) if k not in cols])
    return RankData(L, tuple(rows), tuple(cols), row_perm, col_perm, sigma_for(d.A))


@dataclass(frozen=True)
class DerivedMonomials:
    """phi_k (in lambda), the solved phi_j^{-1} (in tau', lambda''), and the
    lambda-free quotients psi_k, all over original labels."""

    phi: dict[int, Monomial]
    phi_inv: dict[int, Monomial]
    psi: dict[int, Monomial]
    sel_rows: tuple[int, ...]
    sel_cols: tuple[int, ...]


def derive_monomials(d: DeformationData, r: RankData) -> DerivedMonomials:
    phi = {k: Monomial.from_dict({lam(j): d.entry(j, k) for j in range(1, d.ell + 1)})
           for k in range(1, d.m + 1)}

    sel_rows, sel_cols = r.sel_rows, r.sel_cols
    minor = [[d.entry(j, k) for k in sel_cols] for j in sel_rows]
    minor_inv = inverse(minor)  # raises if the contract is violated
    unsel_rows = [j for j in range(1, d.ell + 1) if j not in sel_rows]
    lower = [[d.entry(j, k) for k in sel_cols] for j in unsel_rows]

    phi_inv: dict[int, Monomial] = {}
    for jpos, j in enumerate(sel_rows):
        exps: dict[Var, Fraction] = {}
        for kpos, k in enumerate(sel_cols):
            exps[tau(k)] = minor_inv[kpos][jpos]
        for ipos, i in enumerate(unsel_rows):
            coeff = -sum(lower[ipos][kpos] * minor_inv[kpos][jpos]
                         for kpos in range(r.L))
            exps[lam(i)] = coeff
        phi_inv[j] = Monomial.from_dict(exps)

    # Round trip (2.9): substituting phi^{-1} into phi_k returns tau_k.
    for kpos, k in enumerate(sel_cols):
        acc = Monomial.from_dict({lam(i): d.entry(i, k) for i in unsel_rows})
        for j in sel_rows:
            acc = acc * (phi_inv[j] ** d.entry(j, k))
        if acc != Monomial.from_dict({tau(k): 1}):
            raise AssertionError("round-trip identity failed; singular data")

    psi: dict[int, Monomial] = {}
    for k in range(1, d.m + 1):
        if k in sel_cols:
            continue
        top = [d.entry(j, k) for j in sel_rows]
        alpha = [sum(minor_inv[i][jpos] * top[jpos] for jpos in range(r.L))
                 for i in range(r.L)]
        # Columns outside the minor must be combinations of the selected ones.
        for ipos, i in enumerate(unsel_rows):
            if d.entry(i, k) != sum(lower[ipos][kpos] * alpha[kpos]
                                    for kpos in range(r.L)):
                raise AssertionError(
                    f"column {k} is not spanned by the selected columns")
        exps = {tau(k): Fraction(1)}
        for kpos, kk in enumerate(sel_cols):
            exps[tau(kk)] = exps.get(tau(kk), Fraction(0)) - alpha[kpos]
        mono_k = Monomial.from_dict(exps)
        if mono_k.has_kind(LAM):
            raise AssertionError("psi acquired a lambda variable")
        psi[k] = mono_k

    return DerivedMonomials(phi, phi_inv, psi, sel_rows, sel_cols)


@dataclass(frozen=True)
class BundleSummand:
    block: int
    B_k: frozenset[int]
    ambient: str       # N_k as text
    text: str          # full quotient description


def _manifold_name(j: int) -> str:
    return f"M{j}"


def bundle_decomposition(d: DeformationData) -> list[BundleSummand]:
    """Per block: the acting set B_k and the quotient-bundle description.

    Only transitive-type actions carry this vector-bundle structure; other
    inputs are rejected (the clean-but-not-transverse two-plane family is
    the standard counterexample).
    """
    cls = classify_action(d)
    if cls not in (ActionClass.TRANSITIVE, ActionClass.NORMAL):
        raise ValueError(
            "no vector-bundle structure guaranteed: the action is "
            f"{cls.value}, not transitive (cf. the clean two-plane family "
            "where the zero section is not a bundle)")
    all_rows = frozenset(range(1, d.ell + 1))
    out = []
    for k in range(1, d.m + 1):
        bk = frozenset(j for j in all_rows if d.entry(j, k) != 0)
        if bk == all_rows:
            ambient = "X"
            ambient_zero: frozenset[int] = frozenset()
        else:
            names = [_manifold_name(j) for j in sorted(all_rows - bk)]
            ambient = " ∩ ".join(names)
            ambient_zero = frozenset().union(*(d.k_set(j) for j in all_rows - bk))
        full_union = frozenset().union(*(d.k_set(j) for j in all_rows))
        terms = []
        for j in sorted(bk):
            inter_zero = d.k_set(j) | ambient_zero
            if inter_zero == full_union:
                continue  # the term collapses to TM and is absorbed
            piece = _manifold_name(j) if ambient == "X" else \
                f"({_manifold_name(j)} ∩ {ambient})"
            terms.append(f"T{piece}×M")
        if terms:
            text = f"T{ambient}×M / ({' + '.join(terms)} + TM)"
        else:
            text = f"T_M {ambient}"
        out.append(BundleSummand(k, bk, ambient, text))
    return out
