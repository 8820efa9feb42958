"""Universal differential calculus on a finite set.

An n-form is a function on (n+1)-tuples of points vanishing whenever two
adjacent points coincide.  The product concatenates argument tuples over
a shared endpoint; the differential is the alternating sum over omitted
arguments.  On a bundle, horizontality is decided by exact spans.
"""

from __future__ import annotations

from .bundle import BundleSpec
from .funcs import Func, guard_table_size, indices
from .linalg import SubspaceBasis, rank_and_kernel, span_basis
from .report import CheckResult, Report
from .scalars import ONE, ZERO, Scalar

__all__ = [
    "Form",
    "validate_form",
    "concat_product",
    "differential",
    "lift_base_form",
    "canonical_map_forms",
    "restricted_canonical_matrix",
    "horizontal_basis",
    "is_horizontal",
    "is_strongly_horizontal",
    "check_exactness",
    "offdiag_pairs",
]


class Form:
    """A degree-n form: exact values on (n+1)-tuples, zero on adjacent repeats."""

    __slots__ = ("size", "degree", "values")

    def __init__(self, size: int, degree: int, values: list[Scalar]):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        entries = size ** (degree + 1)
        guard_table_size(entries)
        if len(values) != entries:
            raise ValueError(
                f"got {len(values)} values for a degree-{degree} form on {size} points"
            )
        self.size = size
        self.degree = degree
        self.values = values

    @classmethod
    def zero(cls, size: int, degree: int) -> Form:
        guard_table_size(size ** (degree + 1))
        return cls(size, degree, [ZERO] * size ** (degree + 1))

    @classmethod
    def from_func(cls, f: Func) -> Form:
        if len(f.shape) != 1:
            raise ValueError(f"degree-0 forms come from one-index tables, got {f.shape}")
        return cls(f.shape[0], 0, list(f.values))

    @classmethod
    def build(cls, size: int, degree: int, fn) -> Form:
        guard_table_size(size ** (degree + 1))
        shape = (size,) * (degree + 1)
        return cls(size, degree, [fn(idx) for idx in indices(shape)])

    def shape(self) -> tuple[int, ...]:
        return (self.size,) * (self.degree + 1)

    def flat_index(self, idx: tuple[int, ...]) -> int:
        flat = 0
        for i in idx:
            flat = flat * self.size + i
        return flat

    def value_at(self, *idx: int) -> Scalar:
        if len(idx) != self.degree + 1:
            raise ValueError(f"need {self.degree + 1} points, got {len(idx)}")
        return self.values[self.flat_index(idx)]

    def to_func(self) -> Func:
        return Func(self.shape(), list(self.values))

    def __add__(self, other: Form) -> Form:
        self._check_match(other)
        return Form(self.size, self.degree, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: Form) -> Form:
        self._check_match(other)
        return Form(self.size, self.degree, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> Form:
        return Form(self.size, self.degree, [-a for a in self.values])

    def scale(self, s: Scalar) -> Form:
        return Form(self.size, self.degree, [s * a for a in self.values])

    def is_zero(self) -> bool:
        return not any(self.values)

    def __eq__(self, other):
        return (
            isinstance(other, Form)
            and self.size == other.size
            and self.degree == other.degree
            and self.values == other.values
        )

    def _check_match(self, other: Form) -> None:
        if self.size != other.size or self.degree != other.degree:
            raise ValueError(
                f"form mismatch: degree {self.degree} on {self.size} points"
                f" vs degree {other.degree} on {other.size}"
            )

    def __repr__(self):
        return f"Form(size={self.size}, degree={self.degree})"


def validate_form(f: Form) -> Report:
    """Check vanishing on adjacent repeated points."""
    report = Report()
    witness = None
    if f.degree > 0:
        for idx in indices(f.shape()):
            if any(idx[j] == idx[j + 1] for j in range(f.degree)):
                if f.values[f.flat_index(idx)]:
                    witness = idx
                    break
    report.add(CheckResult("form.adjacent_vanishing", witness is None, witness))
    return report


def concat_product(f: Form, g: Form) -> Form:
    """(f g)(p_0..p_{n+m}) = f(p_0..p_n) g(p_n..p_{n+m})."""
    if f.size != g.size:
        raise ValueError(f"forms live on different sets: {f.size} vs {g.size}")
    n, m = f.degree, g.degree
    size = f.size
    guard_table_size(size ** (n + m + 1))

    def fn(idx):
        a = f.values[f.flat_index(idx[: n + 1])]
        if not a:
            return ZERO
        b = g.values[g.flat_index(idx[n:])]
        if not b:
            return ZERO
        return a * b

    return Form.build(size, n + m, fn)


def differential(f: Form) -> Form:
    """Alternating sum over one omitted argument; raises degree by one."""
    size = f.size
    guard_table_size(size ** (f.degree + 2))

    def fn(idx):
        acc = ZERO
        sign = 1
        for j in range(len(idx)):
            v = f.values[f.flat_index(idx[:j] + idx[j + 1 :])]
            if v:
                acc = acc + v if sign > 0 else acc - v
            sign = -sign
        return acc

    return Form.build(size, f.degree + 1, fn)


def lift_base_form(b: BundleSpec, base_form: Form) -> Form:
    """Pull a form on the base back along the orbit projection."""
    if base_form.size != b.base.size:
        raise ValueError(
            f"base form lives on {base_form.size} points, base has {b.base.size}"
        )
    proj = b.base.projection
    return Form.build(
        b.total_size,
        base_form.degree,
        lambda idx: base_form.values[base_form.flat_index(tuple(proj[p] for p in idx))],
    )


def canonical_map_forms(b: BundleSpec, f1: Form) -> Func:
    """Restrict the canonical map to 1-forms: (p, a) -> f1(p, p acted by a).

    The image vanishes at the group identity, landing in the counit kernel.
    """
    if f1.degree != 1 or f1.size != b.total_size:
        raise ValueError("expected a 1-form on the total space")
    act = b.action.table
    n, m = b.total_size, b.group.order
    return Func(
        (n, m),
        [f1.value_at(p, act[p][a]) for p in range(n) for a in range(m)],
    )


def offdiag_pairs(n: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(n) for q in range(n) if p != q]


def form1_vector(f1: Form) -> list[Scalar]:
    """Flatten a 1-form to its full size*size coordinate vector."""
    return list(f1.values)


def restricted_canonical_matrix(b: BundleSpec) -> tuple[list[list[Scalar]], list[tuple[int, int]]]:
    """Matrix of the canonical map on 1-forms, in map form.

    Rows: (p, a) with a != identity.  Columns: off-diagonal pairs (the
    indicator basis of 1-forms).  Returns (matrix, column pairs).
    """
    g = b.group
    if g.identity is None:
        raise ValueError("group has no identity")
    n, m = b.total_size, g.order
    pairs = offdiag_pairs(n)
    col_of = {pq: k for k, pq in enumerate(pairs)}
    guard_table_size(n * (m - 1) * len(pairs))
    rows = []
    for p in range(n):
        for a in range(m):
            if a == g.identity:
                continue
            row = [ZERO] * len(pairs)
            q = b.act(p, a)
            if q != p:
                row[col_of[(p, q)]] = ONE
            rows.append(row)
    return rows, pairs


def horizontal_basis(b: BundleSpec) -> SubspaceBasis:
    """Span of products (function) * lifted base 1-form * (function).

    On indicator bases the products reduce to indicators of cross-orbit
    pairs, so those are the generators.
    """
    n = b.total_size
    proj = b.base.projection
    vectors = []
    for p in range(n):
        for q in range(n):
            if proj[p] != proj[q]:
                v = [ZERO] * (n * n)
                v[p * n + q] = ONE
                vectors.append(v)
    return span_basis(vectors, n * n)


def is_horizontal(b: BundleSpec, f1: Form) -> bool:
    if f1.degree != 1 or f1.size != b.total_size:
        raise ValueError("expected a 1-form on the total space")
    return horizontal_basis(b).contains(form1_vector(f1))


def is_strongly_horizontal(b: BundleSpec, f: Form) -> bool:
    """Membership in (lifted base forms) * (functions on the total space)."""
    if f.size != b.total_size:
        raise ValueError("form does not live on the total space")
    if f.degree == 0:
        return True
    n, deg = b.total_size, f.degree
    proj = b.base.projection
    ambient = n ** (deg + 1)
    guard_table_size(ambient)
    base_shape = (b.base.size,) * (deg + 1)
    vectors = []
    for xs in indices(base_shape):
        if any(xs[j] == xs[j + 1] for j in range(deg)):
            continue
        for q in range(n):
            if proj[q] != xs[-1]:
                continue
            v = [ZERO] * ambient
            hit = False
            for flat, idx in enumerate(indices((n,) * (deg + 1))):
                if idx[-1] == q and all(proj[p] == x for p, x in zip(idx, xs)):
                    v[flat] = ONE
                    hit = True
            if hit:
                vectors.append(v)
    return span_basis(vectors, ambient).contains(list(f.values))


def check_exactness(b: BundleSpec) -> Report:
    """Horizontal forms, the canonical map on 1-forms, and its kernel.

    Verifies the 1-form sequence: the restricted canonical map surjects
    onto (total space) x (counit kernel), and its kernel is exactly the
    span of cross-orbit indicators.
    """
    from .bundle import check_freeness

    report = Report()
    free = check_freeness(b)
    if not free.passed:
        w = free.first_failure()
        report.add(
            CheckResult(
                "exactness.freeness_required",
                False,
                w.witness,
                data={"reason": "action is not free"},
            )
        )
        return report

    n, m = b.total_size, b.group.order
    matrix, pairs = restricted_canonical_matrix(b)
    rank, kernel = rank_and_kernel(matrix, ncols=len(pairs))
    dim_omega1 = len(pairs)
    target_dim = n * (m - 1)
    report.add(
        CheckResult(
            "exactness.surjectivity",
            rank == target_dim,
            data={"rank": rank, "target_dim": target_dim, "dim_omega1": dim_omega1},
        )
    )

    # embed kernel vectors (off-diagonal coordinates) into full pair space
    full_kernel_vectors = []
    for v in kernel.vectors:
        full = [ZERO] * (n * n)
        for (p, q), val in zip(pairs, v):
            full[p * n + q] = val
        full_kernel_vectors.append(full)
    flat_of = {pq: pq[0] * n + pq[1] for pq in pairs}
    kernel_full = SubspaceBasis(
        n * n, full_kernel_vectors, [flat_of[pairs[c]] for c in kernel.pivots]
    )
    hor = horizontal_basis(b)
    report.add(
        CheckResult(
            "exactness.kernel_equals_horizontal",
            kernel_full.equals(hor),
            data={"kernel_dim": kernel_full.dim, "horizontal_dim": hor.dim},
        )
    )
    return report
