"""Positive semidefiniteness of Hermitian forms over the ordered ring R[[l]].

The decision is a conjugate-symmetric LDL* elimination over truncated
series. Each step pivots on an entry of minimal valuation; a diagonal pivot
with a negative leading coefficient, or an off-diagonal entry below every
diagonal valuation, is a direction of negative length. Negative directions
and null directions are carried back to the original coordinates by
back-substitution through the multipliers, so every witness and every
kernel vector is checked against the input matrix itself.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from dq_workbench.algebra import linalg
from dq_workbench.algebra.functional import GramForm, hermitian_defect
from dq_workbench.algebra.scalar import ONE, Scalar
from dq_workbench.algebra.series import TruncatedSeries, series_cmp
from dq_workbench.algebra.constants import Ordering

logger = logging.getLogger(__name__)


class PsdError(Exception):
    """"""


MatrixLike = Union[GramForm, np.ndarray]
Vector = list  # list of TruncatedSeries


class PsdStatus(Enum):
    psd = "psd-up-to-order-N"
    indefinite = "indefinite"


# ===============================================================================
#     Matrix helpers
# ===============================================================================


def as_matrix(G: MatrixLike) -> np.ndarray:
    entries = G.entries if isinstance(G, GramForm) else G
    if not isinstance(entries, np.ndarray) or entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise PsdError(f"expected a square matrix of series, got {type(entries).__name__}")
    return entries


def _order_of(entries: np.ndarray, default: int = 0) -> int:
    return entries[0, 0].order if entries.size else default


def is_hermitian(G: MatrixLike) -> bool:
    return hermitian_defect(as_matrix(G)) is None


def mat_vec(G: MatrixLike, v: Sequence[TruncatedSeries]) -> Vector:
    """Exact G v"""
    entries = as_matrix(G)
    m = entries.shape[0]
    if len(v) != m:
        raise PsdError(f"dimension mismatch: {m}x{m} matrix and vector of length {len(v)}")
    if not m:
        return []
    return list(entries.dot(linalg.column(v)))


def inner(u: Sequence[TruncatedSeries], w: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """sum_i conj(u_i) w_i"""
    if not len(u):
        return TruncatedSeries.zeros(0)
    return linalg.conj_vector(u).dot(linalg.column(w))


def quadratic_form(G: MatrixLike, v: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Exact v* G v

    Raises:
        PsdError: dimension mismatch
    """
    entries = as_matrix(G)
    if len(v) != entries.shape[0]:
        raise PsdError(
            f"dimension mismatch: {entries.shape[0]}x{entries.shape[0]} form and vector of length {len(v)}"
        )
    if not len(v):
        return TruncatedSeries.zeros(0)
    return inner(v, mat_vec(entries, v))


def cauchy_schwarz_holds(G: MatrixLike) -> bool:
    """|G_ij|^2 <= G_ii G_jj in the lexicographic order, for all pairs"""
    entries = as_matrix(G)
    m = entries.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            lhs = entries[i, j].abs2()
            rhs = entries[i, i] * entries[j, j]
            if series_cmp(lhs, rhs) == Ordering.greater:
                logger.debug(f"PSD: Cauchy-Schwarz fails at ({i}, {j})")
                return False
    return True


def _divide(x: TruncatedSeries, d: TruncatedSeries, v: int) -> TruncatedSeries:
    """x / d for d of valuation v and x of valuation >= v; the top v
    coefficients of the quotient are not determined by the truncation"""
    return x.shift_down(v) * d.shift_down(v).inverse()


# ===============================================================================
#     Layered decomposition
# ===============================================================================


@dataclass
class PivotStep:
    """One elimination step: pivot index, its valuation (layer), the diagonal
    series and the multipliers l_i = S_ik / d of the still active indices"""

    index: int
    valuation: int
    diagonal: TruncatedSeries
    multipliers: dict = field(default_factory=dict)


@dataclass
class LayeredDecomposition:
    """G = sum_k d_k L_k L_k* with unit lower L_k, up to l^order"""

    size: int
    order: int
    steps: list = field(default_factory=list)
    null_indices: list = field(default_factory=list)

    @property
    def pivots(self) -> list[int]:
        return [s.index for s in self.steps]

    @property
    def valuations(self) -> list[int]:
        return [s.valuation for s in self.steps]

    def layers(self) -> dict[int, list[int]]:
        """Pivot indices grouped by their valuation"""
        out = {}
        for s in self.steps:
            out.setdefault(s.valuation, []).append(s.index)
        return out

    def column(self, step: PivotStep) -> Vector:
        col = [TruncatedSeries.zeros(self.order) for _ in range(self.size)]
        col[step.index] = TruncatedSeries.constant(ONE, self.order)
        for i, l in step.multipliers.items():
            col[i] = l
        return col

    def reassemble(self) -> np.ndarray:
        out = linalg.zeros(self.size, self.size, self.order)
        for s in self.steps:
            col = self.column(s)
            scaled = linalg.column([x * s.diagonal for x in col])
            out = out + np.outer(scaled, linalg.conj_vector(col))
        return out

    def lift(self, x: dict) -> Vector:
        """Back-substitute a direction x on the remaining indices to the
        original coordinates: v_k = -sum_i conj(l_i) v_i, latest step first"""
        v = [TruncatedSeries.zeros(self.order) for _ in range(self.size)]
        for i, value in x.items():
            v[i] = value
        for s in reversed(self.steps):
            acc = TruncatedSeries.zeros(self.order)
            for i, l in s.multipliers.items():
                if v[i]:
                    acc = acc + l.conj() * v[i]
            v[s.index] = -acc
        return v


@dataclass
class PsdVerdict:
    """Result of `psd_decide`

    status: psd up to the order, or indefinite

    decomposition: the elimination (complete when psd, up to the failing
    step otherwise)

    witness, value: when indefinite, a vector with lex-negative v* G v
    """

    status: PsdStatus
    order: int
    decomposition: LayeredDecomposition
    witness: Union[Vector, None] = None
    value: Union[TruncatedSeries, None] = None

    @property
    def is_psd(self) -> bool:
        return self.status == PsdStatus.psd

    def label(self) -> str:
        if self.is_psd:
            return f"psd-up-to-order-{self.order}"
        return self.status.value


def normalize_vector(v: Vector) -> Vector:
    """Divide by the first entry that is a unit series"""
    unit = next((x for x in v if x.is_unit()), None)
    if unit is None:
        return v
    inv = unit.inverse()
    return [x * inv for x in v]


def _min_valuation(S: np.ndarray, active: list[int]) -> Union[int, None]:
    vals = [
        S[i, j].valuation() for i in active for j in active if S[i, j].valuation() is not None
    ]
    return min(vals, default=None)


def psd_decide(G: MatrixLike) -> PsdVerdict:
    """Decide whether the Hermitian form G is positive semidefinite up to its
    truncation order

    Raises:
        PsdError: G is not Hermitian
    """
    entries = as_matrix(G)
    m = entries.shape[0]
    order = _order_of(entries)
    defect = hermitian_defect(entries)
    if defect is not None:
        raise PsdError(f"form is not Hermitian at entry {defect}")

    S = entries.copy()
    active = list(range(m))
    dec = LayeredDecomposition(m, order)

    while active:
        v = _min_valuation(S, active)
        if v is None:
            break
        diag = [k for k in active if S[k, k].valuation() == v]
        if diag:
            k = diag[0]
            d = S[k, k]
            if d.leading().sign() < 0:
                logger.debug(f"PSD: negative pivot {k} at layer {v}")
                return _indefinite(entries, dec, {k: TruncatedSeries.constant(ONE, order)}, order)
        else:
            i, j = next((i, j) for i in active for j in active if i < j and S[i, j].valuation() == v)
            g = S[i, j].leading()
            # l1 norm instead of |g|: u stays a Gaussian rational and Re(u g) < 0
            u = -(g.conj() / (abs(g.re) + abs(g.im)))
            logger.debug(f"PSD: off-diagonal entry ({i}, {j}) below the diagonal at layer {v}")
            x = {
                i: TruncatedSeries.constant(ONE, order),
                j: TruncatedSeries.constant(u, order),
            }
            return _indefinite(entries, dec, x, order)

        step = PivotStep(k, v, d)
        rest = [i for i in active if i != k]
        for i in rest:
            if S[i, k]:
                step.multipliers[i] = _divide(S[i, k], d, v)
        for i, l in step.multipliers.items():
            for j in rest:
                if S[k, j]:
                    S[i, j] = S[i, j] - l * S[k, j]
        dec.steps.append(step)
        active = rest
        logger.debug(f"PSD: pivot {k} at layer {v}, diagonal {d}")

    dec.null_indices = list(active)
    return PsdVerdict(PsdStatus.psd, order, dec)


def _indefinite(
    entries: np.ndarray, dec: LayeredDecomposition, x: dict, order: int
) -> PsdVerdict:
    witness = normalize_vector(dec.lift(x))
    value = quadratic_form(entries, witness)
    if value.sign() >= 0:
        raise PsdError(f"internal: witness {witness} does not evaluate negative ({value})")
    return PsdVerdict(PsdStatus.indefinite, order, dec, witness, value)


# ===============================================================================
#     Kernel
# ===============================================================================


@dataclass
class KernelBasis:
    """Canonical basis of {v : G v = 0 mod l^(order+1)}

    vectors: reduced echelon basis, each vector has a 1 at its pivot column

    pivots: the pivot columns

    dimensions: kernel dimension at each truncation r <= order

    stable_from: first r from which the dimension no longer changes
    """

    vectors: list
    pivots: list
    dimensions: list
    stable_from: int
    order: int

    @property
    def dim(self) -> int:
        return len(self.vectors)


def echelon_reduce(
    vectors: list[Vector], skip_dependent: bool = False
) -> tuple[list[Vector], list[int]]:
    """Reduced echelon form: pivot = first unit entry, normalised to 1 and
    cleared from all other vectors; the basis is sorted by pivot column

    With `skip_dependent`, vectors reducing to zero are dropped (rank of
    scalar vectors at order 0).
    """
    basis, pivots = [], []
    for vec in vectors:
        vec = list(vec)
        for b, p in zip(basis, pivots):
            if vec[p]:
                c = vec[p]
                vec = [x - c * y for x, y in zip(vec, b)]
        p = next((k for k, x in enumerate(vec) if x.is_unit()), None)
        if p is None and skip_dependent and not any(vec):
            continue
        if p is None:
            raise PsdError("internal: null vector without a unit entry")
        inv = vec[p].inverse()
        vec = [x * inv for x in vec]
        for idx, b in enumerate(basis):
            if b[p]:
                c = b[p]
                basis[idx] = [x - c * y for x, y in zip(b, vec)]
        basis.append(vec)
        pivots.append(p)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [basis[k] for k in order], [pivots[k] for k in order]


def kernel_extract(G: MatrixLike, verdict: PsdVerdict = None) -> KernelBasis:
    """Kernel of a form that is psd up to its order

    Raises:
        PsdError: G is indefinite, or a computed vector fails G v = 0
    """
    entries = as_matrix(G)
    verdict = psd_decide(entries) if verdict is None else verdict
    if not verdict.is_psd:
        raise PsdError(f"kernel requested for an indefinite form (witness value {verdict.value})")
    dec = verdict.decomposition
    order, m = dec.order, dec.size
    raw = [dec.lift({r: TruncatedSeries.constant(ONE, order)}) for r in dec.null_indices]
    vectors, pivots = echelon_reduce(raw)
    for vec in vectors:
        if any(mat_vec(entries, vec)):
            raise PsdError(f"internal: kernel vector {vec} is not annihilated")
    dims = [m - sum(1 for s in dec.steps if s.valuation <= r) for r in range(order + 1)]
    stable = next(r for r in range(order + 1) if all(x == dims[-1] for x in dims[r:]))
    logger.debug(f"PSD: kernel of dimension {len(vectors)}, dimensions per order {dims}")
    return KernelBasis(vectors, pivots, dims, stable, order)


def scalar_vector(v: Sequence[Scalar], order: int) -> Vector:
    return [TruncatedSeries.constant(Scalar.coerce(x), order) for x in v]
