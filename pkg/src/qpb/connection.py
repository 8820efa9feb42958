"""Connections on a trivialized bundle: splittings, connection one-forms,
potentials, transition maps, and curvature.

A connection is a right-splitting of the canonical map on universal
one-forms; equivalently a form-valued map on the group algebra whose
density satisfies four pointwise invariants.  Potentials describe a
connection relative to the trivial one; transition maps give the
classical case.  Curvature is computed along independent routes that
must agree exactly.
"""

from __future__ import annotations

from .bundle import BundleSpec
from .calculus import Form, canonical_map_forms, differential, offdiag_pairs
from .funcs import Func, guard_table_size, indices
from .groups import FiniteGroup
from .gauge import GaugeMap
from .linalg import identity_matrix, mat_mul
from .report import CheckResult, Report
from .scalars import ONE, ZERO, Scalar

__all__ = [
    "Splitting",
    "ConnectionForm",
    "Potential",
    "BasePotential",
    "TransitionMap",
    "FormValuedMap",
    "tilde_coaction",
    "prime_coaction",
    "validate_splitting",
    "vertical_projection",
    "theta_from_splitting",
    "splitting_from_theta",
    "validate_connection_form",
    "trivial_connection",
    "validate_potential",
    "validate_base_potential",
    "validate_transition",
    "is_cocycle",
    "lift_base_potential",
    "potential_from_transition",
    "connection_from_potential",
    "classical_connection",
    "star_delta",
    "curvature",
    "curvature_from_potential",
    "curvature_classical",
    "gauge_transform_base_potential",
    "gauge_transform_potential",
    "gauge_transform_transition",
]


# ---------------------------------------------------------------------------
# coactions entering the covariance conditions


def tilde_coaction(b: BundleSpec, a_table: Func) -> Func:
    """Coaction on (total space) x (group): (p, c, b) -> A(p acted by b, b^-1 c b)."""
    n, m = b.total_size, b.group.order
    if a_table.shape != (n, m):
        raise ValueError(f"expected shape {(n, m)}, got {a_table.shape}")
    g = b.group
    return Func.build(
        (n, m, m),
        lambda i: a_table.value_at(b.act(i[0], i[2]), g.conj(i[1], i[2])),
    )


def prime_coaction(b: BundleSpec, f1: Form) -> Func:
    """Diagonal coaction on one-forms: (p, q, a) -> F(p acted by a, q acted by a)."""
    if f1.degree != 1 or f1.size != b.total_size:
        raise ValueError("expected a 1-form on the total space")
    n, m = b.total_size, b.group.order
    return Func.build(
        (n, n, m),
        lambda i: f1.value_at(b.act(i[0], i[2]), b.act(i[1], i[2])),
    )


# ---------------------------------------------------------------------------
# splittings of the canonical map on one-forms


class Splitting:
    """Right inverse of the canonical map, as a matrix on indicator bases.

    Columns are indexed by (point, group element != identity); the column
    holds the image one-form over off-diagonal pairs.
    """

    def __init__(self, b: BundleSpec, matrix: list[list[Scalar]]):
        g = b.group
        if g.identity is None:
            raise ValueError("group has no identity")
        self.bundle = b
        self.pairs = offdiag_pairs(b.total_size)
        self.cols = [
            (p, a)
            for p in range(b.total_size)
            for a in range(g.order)
            if a != g.identity
        ]
        if len(matrix) != len(self.pairs) or any(
            len(row) != len(self.cols) for row in matrix
        ):
            raise ValueError(
                f"splitting matrix must be {len(self.pairs)} x {len(self.cols)}"
            )
        self.matrix = [list(row) for row in matrix]
        self._col_of = {pa: k for k, pa in enumerate(self.cols)}
        self._row_of = {pq: k for k, pq in enumerate(self.pairs)}

    @classmethod
    def from_columns(cls, b: BundleSpec, column_fn) -> Splitting:
        """column_fn(p, a) returns the image 1-form as a Form."""
        g = b.group
        pairs = offdiag_pairs(b.total_size)
        cols = [
            (p, a)
            for p in range(b.total_size)
            for a in range(g.order)
            if a != g.identity
        ]
        columns = []
        for p, a in cols:
            f1 = column_fn(p, a)
            columns.append([f1.value_at(*pq) for pq in pairs])
        matrix = [[columns[k][r] for k in range(len(cols))] for r in range(len(pairs))]
        return cls(b, matrix)

    def column_form(self, p: int, a: int) -> Form:
        k = self._col_of[(p, a)]
        n = self.bundle.total_size
        values = [ZERO] * (n * n)
        for r, (p0, q0) in enumerate(self.pairs):
            values[p0 * n + q0] = self.matrix[r][k]
        return Form(n, 1, values)

    def apply(self, a_table: Func) -> Form:
        """Apply to an element of (total space) x (counit kernel)."""
        b = self.bundle
        n, m = b.total_size, b.group.order
        if a_table.shape != (n, m):
            raise ValueError(f"expected shape {(n, m)}, got {a_table.shape}")
        e = b.group.identity
        for p in range(n):
            if a_table.value_at(p, e):
                raise ValueError(
                    f"input does not vanish at the group identity (point {p})"
                )
        values = [ZERO] * (n * n)
        for k, (p, a) in enumerate(self.cols):
            coeff = a_table.value_at(p, a)
            if not coeff:
                continue
            for r, (p0, q0) in enumerate(self.pairs):
                entry = self.matrix[r][k]
                if entry:
                    idx = p0 * n + q0
                    values[idx] = values[idx] + coeff * entry
        return Form(n, 1, values)

    def __eq__(self, other):
        return (
            isinstance(other, Splitting)
            and self.bundle.total_size == other.bundle.total_size
            and self.matrix == other.matrix
        )


def validate_splitting(sigma: Splitting, b: BundleSpec) -> Report:
    """Section property, left module property, right covariance."""
    from .calculus import restricted_canonical_matrix

    report = Report()
    g = b.group
    n, m = b.total_size, g.order

    canon, _pairs = restricted_canonical_matrix(b)
    product = mat_mul(canon, sigma.matrix)
    section_ok = product == identity_matrix(len(sigma.cols))
    section_witness = None
    if not section_ok:
        for r in range(len(sigma.cols)):
            for c in range(len(sigma.cols)):
                expected = ONE if r == c else ZERO
                if product[r][c] != expected:
                    section_witness = sigma.cols[r] + sigma.cols[c]
                    break
            if section_witness:
                break
    report.add(CheckResult("splitting.section", section_ok, section_witness))

    module_witness = None
    for k, (p1, a) in enumerate(sigma.cols):
        for r, (p0, q0) in enumerate(sigma.pairs):
            if sigma.matrix[r][k] and p0 != p1:
                module_witness = (p0, p1, a)
                break
        if module_witness:
            break
    report.add(CheckResult("splitting.module", module_witness is None, module_witness))

    cov_witness = None
    for p1, a1 in sigma.cols:
        lhs_base = sigma.column_form(p1, a1)
        for bb in range(m):
            # translated source basis vector: indicator moves along the action
            p2 = b.act(p1, g.inv(bb))
            a2 = g.conj(a1, g.inv(bb))
            lhs = sigma.column_form(p2, a2)
            ok = True
            for p in range(n):
                pb = b.act(p, bb)
                for q in range(n):
                    if lhs.value_at(p, q) != lhs_base.value_at(pb, b.act(q, bb)):
                        cov_witness = (p1, a1, bb)
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if cov_witness:
            break
    report.add(CheckResult("splitting.covariance", cov_witness is None, cov_witness))
    return report


def vertical_projection(f1: Form, sigma: Splitting, b: BundleSpec) -> Form:
    """Project a one-form onto its vertical part through the splitting."""
    return sigma.apply(canonical_map_forms(b, f1))


# ---------------------------------------------------------------------------
# connection one-forms and their densities


class _Density3:
    """Shared storage for densities indexed by (point, point, group element)."""

    __slots__ = ("group", "size", "density")

    def __init__(self, group: FiniteGroup, size: int, density: list[Scalar]):
        m = group.order
        guard_table_size(size * size * m)
        if len(density) != size * size * m:
            raise ValueError(
                f"density has {len(density)} entries, expected {size * size * m}"
            )
        self.group = group
        self.size = size
        self.density = density

    @classmethod
    def build(cls, group: FiniteGroup, size: int, fn):
        m = group.order
        return cls(
            group,
            size,
            [
                fn(p, q, c)
                for p in range(size)
                for q in range(size)
                for c in range(m)
            ],
        )

    def value_at(self, p: int, q: int, c: int) -> Scalar:
        m = self.group.order
        return self.density[(p * self.size + q) * m + c]

    def apply(self, alpha: Func) -> Form:
        """The associated form-valued map evaluated on a group-algebra element."""
        m = self.group.order
        if alpha.shape != (m,):
            raise ValueError(f"expected a group table, got shape {alpha.shape}")
        n = self.size
        values = []
        for pq in range(n * n):
            acc = ZERO
            base = pq * m
            for c in range(m):
                d = self.density[base + c]
                v = alpha.values[c]
                if d and v:
                    acc = acc + d * v
            values.append(acc)
        return Form(n, 1, values)

    def as_form_valued(self) -> FormValuedMap:
        return FormValuedMap(self.group, self.size, 1, list(self.density))

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.group == other.group
            and self.size == other.size
            and self.density == other.density
        )


class ConnectionForm(_Density3):
    """Form-valued map on the group algebra cutting out a connection."""

    def __repr__(self):
        return f"ConnectionForm(size={self.size}, group_order={self.group.order})"


class Potential(_Density3):
    """The part of a connection relative to the trivial one, over the total space."""

    def __repr__(self):
        return f"Potential(size={self.size}, group_order={self.group.order})"


class BasePotential:
    """A potential with base-point arguments: density on B x B x G."""

    __slots__ = ("group", "base_size", "density")

    def __init__(self, group: FiniteGroup, base_size: int, density: list[Scalar]):
        m = group.order
        if len(density) != base_size * base_size * m:
            raise ValueError(
                f"density has {len(density)} entries, expected {base_size * base_size * m}"
            )
        self.group = group
        self.base_size = base_size
        self.density = density

    @classmethod
    def build(cls, group: FiniteGroup, base_size: int, fn):
        m = group.order
        return cls(
            group,
            base_size,
            [
                fn(x, y, c)
                for x in range(base_size)
                for y in range(base_size)
                for c in range(m)
            ],
        )

    def value_at(self, x: int, y: int, c: int) -> Scalar:
        m = self.group.order
        return self.density[(x * self.base_size + y) * m + c]

    def as_form_valued(self) -> FormValuedMap:
        return FormValuedMap(self.group, self.base_size, 1, list(self.density))

    def __eq__(self, other):
        return (
            isinstance(other, BasePotential)
            and self.group == other.group
            and self.base_size == other.base_size
            and self.density == other.density
        )

    def __repr__(self):
        return f"BasePotential(base_size={self.base_size}, group_order={self.group.order})"


class TransitionMap:
    """A group element for every ordered pair of base points."""

    def __init__(self, group: FiniteGroup, table: list[list[int]]):
        nb = len(table)
        for x, row in enumerate(table):
            if len(row) != nb:
                raise ValueError(f"transition row {x} has length {len(row)}, expected {nb}")
            for y, v in enumerate(row):
                if not isinstance(v, int) or not 0 <= v < group.order:
                    raise ValueError(
                        f"transition entry out of range at ({x}, {y}): {v!r}"
                    )
        self.group = group
        self.base_size = nb
        self.table = [list(row) for row in table]

    def value(self, x: int, y: int) -> int:
        return self.table[x][y]

    def __eq__(self, other):
        return (
            isinstance(other, TransitionMap)
            and self.group == other.group
            and self.table == other.table
        )

    def __repr__(self):
        return f"TransitionMap(base_size={self.base_size})"


def validate_connection_form(theta: ConnectionForm, b: BundleSpec) -> Report:
    """The four density invariants of a connection one-form."""
    report = Report()
    g = b.group
    n, m = theta.size, g.order
    if n != b.total_size or g != b.group:
        raise ValueError("connection form does not match the bundle")
    e = g.identity

    diag_witness = next(
        (
            (p, c)
            for p in range(n)
            for c in range(m)
            if theta.value_at(p, p, c)
        ),
        None,
    )
    report.add(
        CheckResult("connection.vanishing_on_diagonal", diag_witness is None, diag_witness)
    )

    norm_witness = None
    for p in range(n):
        for q in range(n):
            acc = ZERO
            for c in range(m):
                acc = acc + theta.value_at(p, q, c)
            if acc:
                norm_witness = (p, q)
                break
        if norm_witness:
            break
    report.add(
        CheckResult("connection.unit_normalization", norm_witness is None, norm_witness)
    )

    split_witness = next(
        (
            (p, a, c)
            for p in range(n)
            for a in range(m)
            for c in range(m)
            if theta.value_at(p, b.act(p, a), c)
            != (ONE if a == c else ZERO) - (ONE if c == e else ZERO)
        ),
        None,
    )
    report.add(
        CheckResult("connection.splitting_property", split_witness is None, split_witness)
    )

    cov_witness = None
    for p in range(n):
        for q in range(n):
            for bb in range(m):
                pb, qb = b.act(p, bb), b.act(q, bb)
                inv_b = g.inv(bb)
                for c in range(m):
                    # translate both points, conjugate the group argument
                    if theta.value_at(pb, qb, c) != theta.value_at(
                        p, q, g.conj(c, inv_b)
                    ):
                        cov_witness = (p, q, bb, c)
                        break
                if cov_witness:
                    break
            if cov_witness:
                break
        if cov_witness:
            break
    report.add(CheckResult("connection.ad_covariance", cov_witness is None, cov_witness))
    return report


def theta_from_splitting(sigma: Splitting, b: BundleSpec) -> ConnectionForm:
    """Assemble the density from splitting columns; reject invalid splittings."""
    check = validate_splitting(sigma, b)
    if not check.passed:
        w = check.first_failure()
        raise ValueError(f"splitting rejected: {w.describe()}")
    g = b.group
    n, m = b.total_size, g.order
    e = g.identity
    density = [ZERO] * (n * n * m)
    for k, (p0, a) in enumerate(sigma.cols):
        for r, (p, q) in enumerate(sigma.pairs):
            v = sigma.matrix[r][k]
            if v:
                density[(p * n + q) * m + a] = density[(p * n + q) * m + a] + v
    # the identity slice balances the unit normalization
    for pq in range(n * n):
        acc = ZERO
        for c in range(m):
            if c != e:
                acc = acc + density[pq * m + c]
        density[pq * m + e] = -acc
    return ConnectionForm(g, n, density)


def splitting_from_theta(theta: ConnectionForm, b: BundleSpec) -> Splitting:
    """Columns localize the density at the first point argument."""
    check = validate_connection_form(theta, b)
    if not check.passed:
        w = check.first_failure()
        raise ValueError(f"connection form rejected: {w.describe()}")
    n = b.total_size

    def column(p0: int, a: int) -> Form:
        values = [ZERO] * (n * n)
        for q in range(n):
            if q != p0:
                values[p0 * n + q] = theta.value_at(p0, q, a)
        return Form(n, 1, values)

    return Splitting.from_columns(b, column)


def trivial_connection(b: BundleSpec) -> ConnectionForm:
    """Connection of a trivialized bundle, via the convolution route."""
    phi_fv, phi_inv_fv = _phi_form_valued(b)
    theta_fv = star_delta(phi_inv_fv, phi_fv.d_slicewise())
    return ConnectionForm(b.group, b.total_size, theta_fv.density)


# ---------------------------------------------------------------------------
# potentials and transition maps


def validate_potential(gamma: Potential, b: BundleSpec) -> Report:
    """Unit normalization, vanishing on orbit pairs, translation invariance."""
    report = Report()
    g = b.group
    n, m = gamma.size, g.order
    if n != b.total_size or g != b.group:
        raise ValueError("potential does not match the bundle")

    norm_witness = None
    for p in range(n):
        for q in range(n):
            acc = ZERO
            for c in range(m):
                acc = acc + gamma.value_at(p, q, c)
            if acc:
                norm_witness = (p, q)
                break
        if norm_witness:
            break
    report.add(
        CheckResult("potential.unit_normalization", norm_witness is None, norm_witness)
    )

    orbit_witness = next(
        (
            (p, a, c)
            for p in range(n)
            for a in range(m)
            for c in range(m)
            if gamma.value_at(p, b.act(p, a), c)
        ),
        None,
    )
    report.add(
        CheckResult("potential.vanishing_on_orbit_pairs", orbit_witness is None, orbit_witness)
    )

    inv_witness = next(
        (
            (p, q, a, c)
            for p in range(n)
            for q in range(n)
            for a in range(m)
            for c in range(m)
            if gamma.value_at(b.act(p, a), b.act(q, a), c) != gamma.value_at(p, q, c)
        ),
        None,
    )
    report.add(
        CheckResult("potential.translation_invariance", inv_witness is None, inv_witness)
    )
    return report


def validate_base_potential(gh: BasePotential) -> Report:
    """Diagonal vanishing and unit normalization on the base."""
    report = Report()
    nb, m = gh.base_size, gh.group.order
    diag_witness = next(
        ((x, c) for x in range(nb) for c in range(m) if gh.value_at(x, x, c)),
        None,
    )
    report.add(
        CheckResult("base_potential.vanishing_on_diagonal", diag_witness is None, diag_witness)
    )
    norm_witness = None
    for x in range(nb):
        for y in range(nb):
            acc = ZERO
            for c in range(m):
                acc = acc + gh.value_at(x, y, c)
            if acc:
                norm_witness = (x, y)
                break
        if norm_witness:
            break
    report.add(
        CheckResult("base_potential.unit_normalization", norm_witness is None, norm_witness)
    )
    return report


def validate_transition(tm: TransitionMap) -> Report:
    """Diagonal entries must be the group identity."""
    report = Report()
    e = tm.group.identity
    witness = next(
        ((x,) for x in range(tm.base_size) if e is None or tm.table[x][x] != e), None
    )
    report.add(CheckResult("transition.diagonal_identity", witness is None, witness))
    return report


def is_cocycle(tm: TransitionMap) -> tuple[bool, tuple | None]:
    """Whether the two-step composition collapses to the one-step table."""
    g = tm.group
    nb = tm.base_size
    witness = next(
        (
            (x, y, z)
            for x in range(nb)
            for y in range(nb)
            for z in range(nb)
            if g.table[tm.table[x][y]][tm.table[y][z]] != tm.table[x][z]
        ),
        None,
    )
    return witness is None, witness


def lift_base_potential(gh: BasePotential, b: BundleSpec) -> Potential:
    """Pull the density back along the orbit projection in both points."""
    check = validate_base_potential(gh)
    if not check.passed:
        w = check.first_failure()
        raise ValueError(f"base potential rejected: {w.describe()}")
    if gh.base_size != b.base.size or gh.group != b.group:
        raise ValueError("base potential does not match the bundle")
    proj = b.base.projection
    return Potential.build(
        b.group,
        b.total_size,
        lambda p, q, c: gh.value_at(proj[p], proj[q], c),
    )


def potential_from_transition(tm: TransitionMap) -> BasePotential:
    """Delta density of the transition table, with the unit part removed."""
    check = validate_transition(tm)
    if not check.passed:
        w = check.first_failure()
        raise ValueError(f"transition map rejected: {w.describe()}")
    g = tm.group
    e = g.identity
    return BasePotential.build(
        g,
        tm.base_size,
        lambda x, y, c: (ONE if tm.table[x][y] == c else ZERO)
        - (ONE if c == e else ZERO),
    )


def connection_from_potential(gamma: Potential, b: BundleSpec) -> ConnectionForm:
    """Trivial connection plus the potential conjugated into the bundle frame."""
    check = validate_potential(gamma, b)
    if not check.passed:
        w = check.first_failure()
        raise ValueError(f"potential rejected: {w.describe()}")
    phi_fv, phi_inv_fv = _phi_form_valued(b)
    theta_fv = star_delta(phi_inv_fv, phi_fv.d_slicewise()) + star_delta(
        star_delta(phi_inv_fv, gamma.as_form_valued()), phi_fv
    )
    return ConnectionForm(b.group, b.total_size, theta_fv.density)


def classical_connection(tm: TransitionMap, b: BundleSpec) -> ConnectionForm:
    """Connection of a transition table: group words in the closed form."""
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    if tm.base_size != b.base.size or tm.group != b.group:
        raise ValueError("transition map does not match the bundle")
    check = validate_transition(tm)
    if not check.passed:
        w = check.first_failure()
        raise ValueError(f"transition map rejected: {w.describe()}")
    g = b.group
    e = g.identity
    proj = b.base.projection
    phi = b.phi

    def fn(p, q, c):
        word = g.table[g.table[g.inv(phi[p])][tm.table[proj[p]][proj[q]]]][phi[q]]
        return (ONE if word == c else ZERO) - (ONE if c == e else ZERO)

    return ConnectionForm.build(g, b.total_size, fn)


def strong_connection_direct(gh: BasePotential, b: BundleSpec) -> ConnectionForm:
    """Trivial connection plus the base potential read through the frame.

    Closed form of connection_from_potential applied to the lift of gh;
    the two routes must agree and the runner checks that they do.
    """
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    if gh.base_size != b.base.size or gh.group != b.group:
        raise ValueError("base potential does not match the bundle")
    g = b.group
    e = g.identity
    proj = b.base.projection
    phi = b.phi

    def fn(p, q, c):
        flat = ONE if g.table[g.inv(phi[p])][phi[q]] == c else ZERO
        if c == e:
            flat = flat - ONE
        word = g.table[g.table[phi[p]][c]][g.inv(phi[q])]
        return flat + gh.value_at(proj[p], proj[q], word)

    return ConnectionForm.build(g, b.total_size, fn)


# ---------------------------------------------------------------------------
# form-valued maps and curvature


class FormValuedMap:
    """A map from the group algebra into forms of a fixed degree,
    stored as a density over (points tuple) x (group element)."""

    __slots__ = ("group", "size", "degree", "density")

    def __init__(self, group: FiniteGroup, size: int, degree: int, density: list[Scalar]):
        m = group.order
        entries = size ** (degree + 1) * m
        guard_table_size(entries)
        if len(density) != entries:
            raise ValueError(
                f"density has {len(density)} entries, expected {entries}"
            )
        self.group = group
        self.size = size
        self.degree = degree
        self.density = density

    @classmethod
    def build(cls, group: FiniteGroup, size: int, degree: int, fn) -> FormValuedMap:
        m = group.order
        guard_table_size(size ** (degree + 1) * m)
        density = [
            fn(idx, c)
            for idx in indices((size,) * (degree + 1))
            for c in range(m)
        ]
        return cls(group, size, degree, density)

    @classmethod
    def from_point_table(cls, group: FiniteGroup, table: list[int]) -> FormValuedMap:
        """Degree-0 delta density of a point -> group table."""
        m = group.order
        density = [
            ONE if table[p] == c else ZERO for p in range(len(table)) for c in range(m)
        ]
        return cls(group, len(table), 0, density)

    def value_at(self, idx: tuple[int, ...], c: int) -> Scalar:
        flat = 0
        for i in idx:
            flat = flat * self.size + i
        return self.density[flat * self.group.order + c]

    def slice_form(self, c: int) -> Form:
        m = self.group.order
        return Form(self.size, self.degree, self.density[c::m])

    def apply(self, alpha: Func) -> Form:
        m = self.group.order
        if alpha.shape != (m,):
            raise ValueError(f"expected a group table, got shape {alpha.shape}")
        npts = self.size ** (self.degree + 1)
        values = []
        for t in range(npts):
            acc = ZERO
            base = t * m
            for c in range(m):
                d = self.density[base + c]
                v = alpha.values[c]
                if d and v:
                    acc = acc + d * v
            values.append(acc)
        return Form(self.size, self.degree, values)

    def d_slicewise(self) -> FormValuedMap:
        """Apply the universal differential to every group slice."""
        m = self.group.order
        slices = [differential(self.slice_form(c)) for c in range(m)]
        npts = self.size ** (self.degree + 2)
        density = [slices[c].values[t] for t in range(npts) for c in range(m)]
        return FormValuedMap(self.group, self.size, self.degree + 1, density)

    def __add__(self, other: FormValuedMap) -> FormValuedMap:
        self._check_match(other)
        return FormValuedMap(
            self.group,
            self.size,
            self.degree,
            [a + b for a, b in zip(self.density, other.density)],
        )

    def __sub__(self, other: FormValuedMap) -> FormValuedMap:
        self._check_match(other)
        return FormValuedMap(
            self.group,
            self.size,
            self.degree,
            [a - b for a, b in zip(self.density, other.density)],
        )

    def is_zero(self) -> bool:
        return not any(self.density)

    def __eq__(self, other):
        return (
            isinstance(other, FormValuedMap)
            and self.group == other.group
            and self.size == other.size
            and self.degree == other.degree
            and self.density == other.density
        )

    def _check_match(self, other: FormValuedMap) -> None:
        if (
            self.group != other.group
            or self.size != other.size
            or self.degree != other.degree
        ):
            raise ValueError("form-valued maps do not match")

    def __repr__(self):
        return (
            f"FormValuedMap(size={self.size}, degree={self.degree},"
            f" group_order={self.group.order})"
        )


def star_delta(a_map: FormValuedMap, c_map: FormValuedMap) -> FormValuedMap:
    """Convolution against the coproduct, concatenating the form parts.

    Degrees add; the two point tuples share their junction point.
    """
    if a_map.group != c_map.group or a_map.size != c_map.size:
        raise ValueError("form-valued maps live on different spaces")
    g = a_map.group
    m = g.order
    size = a_map.size
    na, nc = a_map.degree, c_map.degree
    out_degree = na + nc
    guard_table_size(size ** (out_degree + 1) * m)
    out = [ZERO] * (size ** (out_degree + 1) * m)
    mul = g.table
    a_pts = size ** (na + 1)
    c_tail = size**nc

    for ta in range(a_pts):
        abase = ta * m
        junction = ta % size
        for tc_rest in range(c_tail):
            tc = junction * c_tail + tc_rest
            cbase = tc * m
            obase = (ta * c_tail + tc_rest) * m
            for aa in range(m):
                va = a_map.density[abase + aa]
                if not va:
                    continue
                row = mul[aa]
                for cc in range(m):
                    vc = c_map.density[cbase + cc]
                    if vc:
                        k = obase + row[cc]
                        out[k] = out[k] + va * vc
    return FormValuedMap(g, size, out_degree, out)


def curvature(theta: ConnectionForm) -> FormValuedMap:
    """Differential of the connection plus its convolution square."""
    fv = theta.as_form_valued()
    return fv.d_slicewise() + star_delta(fv, fv)


def curvature_from_potential(gamma: Potential, b: BundleSpec) -> FormValuedMap:
    """Conjugate the potential's differential and square into the bundle frame."""
    phi_fv, phi_inv_fv = _phi_form_valued(b)
    gfv = gamma.as_form_valued()
    inner = gfv.d_slicewise() + star_delta(gfv, gfv)
    return star_delta(star_delta(phi_inv_fv, inner), phi_fv)


def curvature_classical(tm: TransitionMap, b: BundleSpec) -> FormValuedMap:
    """Closed form for transition-map connections: two-step word vs one-step."""
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    if tm.base_size != b.base.size or tm.group != b.group:
        raise ValueError("transition map does not match the bundle")
    g = b.group
    proj = b.base.projection
    phi = b.phi

    def fn(idx, c):
        p, q, r = idx
        x, y, z = proj[p], proj[q], proj[r]
        two = g.table[g.table[g.inv(phi[p])][g.table[tm.table[x][y]][tm.table[y][z]]]][
            phi[r]
        ]
        one = g.table[g.table[g.inv(phi[p])][tm.table[x][z]]][phi[r]]
        return (ONE if two == c else ZERO) - (ONE if one == c else ZERO)

    return FormValuedMap.build(g, b.total_size, 2, fn)


# ---------------------------------------------------------------------------
# gauge transformations of potentials


def gauge_transform_base_potential(gh: BasePotential, tau: GaugeMap) -> BasePotential:
    """Transform by a gauge map, via the density formula and the
    convolution formula; the two routes must agree."""
    g = gh.group
    if tau.group != g or tau.base_size != gh.base_size:
        raise ValueError("gauge map does not match the potential")
    e = g.identity
    t = tau.table

    def fn(x, y, c):
        shifted = g.table[g.table[t[x]][c]][g.inv(t[y])]
        out = gh.value_at(x, y, shifted)
        out = out + (ONE if g.table[g.inv(t[x])][t[y]] == c else ZERO)
        return out - (ONE if c == e else ZERO)

    direct = BasePotential.build(g, gh.base_size, fn)

    tau_fv = FormValuedMap.from_point_table(g, t)
    tau_inv_fv = FormValuedMap.from_point_table(g, [g.inv(a) for a in t])
    abstract = star_delta(tau_inv_fv, tau_fv.d_slicewise()) + star_delta(
        star_delta(tau_inv_fv, gh.as_form_valued()), tau_fv
    )
    if abstract.density != direct.density:
        raise RuntimeError("gauge transformation routes disagree")
    return direct


def gauge_transform_potential(gamma: Potential, b: BundleSpec, tau: GaugeMap) -> Potential:
    """Same transformation with the gauge map pulled up to the total space."""
    g = gamma.group
    if tau.group != g or tau.base_size != b.base.size or gamma.size != b.total_size:
        raise ValueError("gauge map does not match the bundle")
    e = g.identity
    proj = b.base.projection
    lifted = [tau.table[proj[p]] for p in range(b.total_size)]

    def fn(p, q, c):
        shifted = g.table[g.table[lifted[p]][c]][g.inv(lifted[q])]
        out = gamma.value_at(p, q, shifted)
        out = out + (ONE if g.table[g.inv(lifted[p])][lifted[q]] == c else ZERO)
        return out - (ONE if c == e else ZERO)

    direct = Potential.build(g, b.total_size, fn)

    tau_fv = FormValuedMap.from_point_table(g, lifted)
    tau_inv_fv = FormValuedMap.from_point_table(g, [g.inv(a) for a in lifted])
    abstract = star_delta(tau_inv_fv, tau_fv.d_slicewise()) + star_delta(
        star_delta(tau_inv_fv, gamma.as_form_valued()), tau_fv
    )
    if abstract.density != direct.density:
        raise RuntimeError("gauge transformation routes disagree")
    return direct


def gauge_transform_transition(tm: TransitionMap, tau: GaugeMap) -> TransitionMap:
    """Conjugate the transition table by the gauge values at its endpoints."""
    g = tm.group
    if tau.group != g or tau.base_size != tm.base_size:
        raise ValueError("gauge map does not match the transition map")
    t = tau.table
    return TransitionMap(
        g,
        [
            [g.table[g.table[g.inv(t[x])][tm.table[x][y]]][t[y]] for y in range(tm.base_size)]
            for x in range(tm.base_size)
        ],
    )


def _phi_form_valued(b: BundleSpec) -> tuple[FormValuedMap, FormValuedMap]:
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    g = b.group
    phi_fv = FormValuedMap.from_point_table(g, b.phi)
    phi_inv_fv = FormValuedMap.from_point_table(g, [g.inv(a) for a in b.phi])
    return phi_fv, phi_inv_fv
