"""Finite total spaces carrying a free group action: the bundle layer.

The total space is {0, ..., N-1} with a right action of a finite group;
the base is the orbit set.  The coaction dualizes the action, the
canonical map decides freeness by an exact rank, and trivializations
(when present) give the product picture and the convolution algebra of
maps from the group function algebra into the total-space algebra.
"""

from __future__ import annotations

from .funcs import Func, guard_table_size, indices
from .groups import FiniteGroup, RightAction, validate_action
from .linalg import SubspaceBasis, rank_of
from .report import CheckResult, Report
from .scalars import ONE, ZERO, Scalar

__all__ = [
    "BaseSpace",
    "BundleSpec",
    "HPMap",
    "make_product",
    "coaction",
    "check_comodule_algebra",
    "canonical_map",
    "check_freeness",
    "invariants_basis",
    "inject_base",
    "validate_trivialization",
    "synthesize_trivialization",
    "psi_apply",
    "psi_inverse",
    "star",
    "conv_unit",
    "phi_hom",
    "conv_inverse",
]


class BaseSpace:
    """Orbit space of the action: orbits ordered by their minimal point."""

    def __init__(self, action: RightAction):
        n = action.total_size
        seen = [False] * n
        orbits: list[list[int]] = []
        for p in range(n):
            if seen[p]:
                continue
            orbit = sorted({action.table[p][a] for a in range(action.group.order)})
            for q in orbit:
                seen[q] = True
            orbits.append(orbit)
        self.orbits = orbits
        self.size = len(orbits)
        self.reps = [orbit[0] for orbit in orbits]
        self.projection = [0] * n
        for x, orbit in enumerate(orbits):
            for q in orbit:
                self.projection[q] = x


class BundleSpec:
    """A right action plus an optional trivialization table phi: P -> G."""

    def __init__(
        self,
        group: FiniteGroup,
        action: RightAction,
        phi: list[int] | None = None,
        name: str | None = None,
    ):
        if action.group is not group and action.group != group:
            raise ValueError("action group differs from the given group")
        if phi is not None:
            if len(phi) != action.total_size:
                raise ValueError(
                    f"phi has {len(phi)} entries for {action.total_size} points"
                )
            for p, a in enumerate(phi):
                if not isinstance(a, int) or not 0 <= a < group.order:
                    raise ValueError(f"phi entry out of range at point {p}: {a!r}")
        self.group = group
        self.action = action
        self.total_size = action.total_size
        self.phi = list(phi) if phi is not None else None
        self.name = name
        self.base = BaseSpace(action)

    def act(self, p: int, a: int) -> int:
        return self.action.table[p][a]

    def with_phi(self, phi: list[int]) -> BundleSpec:
        return BundleSpec(self.group, self.action, phi, self.name)

    def __repr__(self):
        return (
            f"BundleSpec(total_size={self.total_size}, group_order={self.group.order},"
            f" base_size={self.base.size}, trivialized={self.phi is not None})"
        )


def make_product(base_size: int, group: FiniteGroup) -> BundleSpec:
    """The product bundle B x G with right translation and canonical phi."""
    if base_size < 1:
        raise ValueError("base size must be positive")
    m = group.order
    table = [
        [x * m + group.table[a][b] for b in range(m)]
        for x in range(base_size)
        for a in range(m)
    ]
    action = RightAction(group, table)
    phi = [a for _x in range(base_size) for a in range(m)]
    return BundleSpec(group, action, phi)


def coaction(b: BundleSpec, f: Func) -> Func:
    """[coaction(f)](p, a) = f(p acted by a), a table on P x G."""
    _check_total(b, f)
    act = b.action.table
    vals = f.values
    n, m = b.total_size, b.group.order
    return Func((n, m), [vals[act[p][a]] for p in range(n) for a in range(m)])


def check_comodule_algebra(b: BundleSpec) -> Report:
    """Coassociativity, counit, multiplicativity, unit on the indicator basis."""
    report = Report()
    g = b.group
    n, m = b.total_size, g.order
    e = g.identity
    if e is None:
        report.add(CheckResult("comodule.coassociativity", False, data={"reason": "group has no identity"}))
        return report

    coassoc_witness = None
    for q in range(n):
        f = Func.indicator((n,), (q,))
        t = coaction(b, f)
        lhs = Func.build((n, m, m), lambda i: t.value_at(b.act(i[0], i[1]), i[2]))
        rhs = Func.build((n, m, m), lambda i: t.value_at(i[0], g.table[i[1]][i[2]]))
        if lhs != rhs:
            coassoc_witness = next(
                i for i in indices((n, m, m))
                if lhs.value_at(*i) != rhs.value_at(*i)
            )
            break
    report.add(CheckResult("comodule.coassociativity", coassoc_witness is None, coassoc_witness))

    counit_witness = None
    for q in range(n):
        f = Func.indicator((n,), (q,))
        t = coaction(b, f)
        restricted = Func((n,), [t.value_at(p, e) for p in range(n)])
        if restricted != f:
            counit_witness = next(
                (p,) for p in range(n) if restricted.value_at(p) != f.value_at(p)
            )
            break
    report.add(CheckResult("comodule.counit", counit_witness is None, counit_witness))

    mult_witness = None
    for q in range(n):
        fq = Func.indicator((n,), (q,))
        tq = coaction(b, fq)
        for r in range(n):
            fr = Func.indicator((n,), (r,))
            lhs = coaction(b, fq * fr)
            rhs = tq * coaction(b, fr)
            if lhs != rhs:
                mult_witness = next(
                    i for i in indices((n, m))
                    if lhs.value_at(*i) != rhs.value_at(*i)
                )
                break
        if mult_witness:
            break
    report.add(CheckResult("comodule.multiplicativity", mult_witness is None, mult_witness))

    unit_ok = coaction(b, Func.ones((n,))) == Func.ones((n, m))
    report.add(CheckResult("comodule.unit", unit_ok))
    return report


def canonical_map(b: BundleSpec, big_f: Func) -> Func:
    """Send F on P x P to (p, a) -> F(p, p acted by a)."""
    if big_f.shape != (b.total_size, b.total_size):
        raise ValueError(
            f"expected a table on P x P, got shape {big_f.shape}"
        )
    act = b.action.table
    n, m = b.total_size, b.group.order
    return Func(
        (n, m),
        [big_f.value_at(p, act[p][a]) for p in range(n) for a in range(m)],
    )


def _canonical_matrix(b: BundleSpec) -> list[list[Scalar]]:
    # map form: rows indexed by (p, a), columns by source pairs (p0, q0)
    n, m = b.total_size, b.group.order
    guard_table_size(n * m * n * n)
    act = b.action.table
    rows = []
    for p in range(n):
        for a in range(m):
            row = [ZERO] * (n * n)
            row[p * n + act[p][a]] = ONE
            rows.append(row)
    return rows


def check_freeness(b: BundleSpec) -> Report:
    """Freeness two ways: fixed-point scan and rank of the canonical map."""
    report = Report()
    g = b.group
    n, m = b.total_size, g.order
    e = g.identity
    direct_witness = None
    if e is None:
        direct_witness = ()
    else:
        direct_witness = next(
            (
                (p, a)
                for p in range(n)
                for a in range(m)
                if a != e and b.act(p, a) == p
            ),
            None,
        )
    report.add(CheckResult("freeness.direct", direct_witness is None, direct_witness))

    rank = rank_of(_canonical_matrix(b))
    expected = n * m
    report.add(
        CheckResult(
            "freeness.rank",
            rank == expected,
            data={"rank": rank, "expected_rank": expected, "source_dim": n * n, "target_dim": n * m},
        )
    )
    return report


def invariants_basis(b: BundleSpec) -> SubspaceBasis:
    """Coaction-invariant functions: the span of orbit indicators."""
    n = b.total_size
    vectors = []
    for orbit in b.base.orbits:
        v = [ZERO] * n
        for q in orbit:
            v[q] = ONE
        vectors.append(v)
    # orbits partition the points, so the rows are already reduced
    return SubspaceBasis(n, vectors, list(b.base.reps))


def inject_base(b: BundleSpec, h: Func) -> Func:
    """Pull a function on the base back to the total space along the projection."""
    if h.shape != (b.base.size,):
        raise ValueError(f"expected a table on the base of size {b.base.size}, got {h.shape}")
    proj = b.base.projection
    return Func((b.total_size,), [h.values[proj[p]] for p in range(b.total_size)])


def validate_trivialization(b: BundleSpec) -> Report:
    """Equivariance of phi and orbit-constancy of the induced section."""
    report = Report()
    if b.phi is None:
        report.add(CheckResult("trivialization.present", False, data={"reason": "no phi table"}))
        return report
    report.add(CheckResult("trivialization.present", True))
    g = b.group
    if g.identity is None or g.inv_table is None:
        report.add(
            CheckResult(
                "trivialization.equivariance",
                False,
                data={"reason": "group lacks identity or inverses"},
            )
        )
        return report
    phi = b.phi
    equiv_witness = next(
        (
            (p, a)
            for p in range(b.total_size)
            for a in range(g.order)
            if phi[b.act(p, a)] != g.table[phi[p]][a]
        ),
        None,
    )
    report.add(CheckResult("trivialization.equivariance", equiv_witness is None, equiv_witness))

    section_witness = None
    section = []
    for orbit in b.base.orbits:
        s_values = {b.act(p, g.inv(phi[p])) for p in orbit}
        if len(s_values) != 1:
            ps = sorted(orbit)
            section_witness = (ps[0], ps[1] if len(ps) > 1 else ps[0])
        section.append(min(s_values))
    report.add(
        CheckResult(
            "trivialization.section",
            section_witness is None,
            section_witness,
            data={"section": section},
        )
    )
    return report


def section_table(b: BundleSpec) -> list[int]:
    """s(x) = p acted by phi(p)^-1, for any p over x; needs a valid phi."""
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    g = b.group
    return [b.act(rep, g.inv(b.phi[rep])) for rep in b.base.reps]


def synthesize_trivialization(b: BundleSpec) -> list[int]:
    """Build phi from the minimal-point section; the action must be free."""
    g = b.group
    e = g.identity
    if e is None:
        raise ValueError("group has no identity")
    free = check_freeness(b)
    if not free.passed:
        w = free.first_failure()
        raise ValueError(f"action is not free ({w.describe()})")
    phi = [0] * b.total_size
    for orbit, rep in zip(b.base.orbits, b.base.reps):
        for p in orbit:
            hits = [a for a in range(g.order) if b.act(rep, a) == p]
            if len(hits) != 1:
                raise ValueError(f"point {p} is not reached exactly once from {rep}")
            phi[p] = hits[0]
    return phi


def psi_apply(b: BundleSpec, f_times: Func) -> Func:
    """Turn a table on B x G into one on P via (pi, phi)."""
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    if f_times.shape != (b.base.size, b.group.order):
        raise ValueError(
            f"expected a table on B x G of shape {(b.base.size, b.group.order)}, got {f_times.shape}"
        )
    proj = b.base.projection
    return Func(
        (b.total_size,),
        [f_times.value_at(proj[p], b.phi[p]) for p in range(b.total_size)],
    )


def psi_inverse(b: BundleSpec, f: Func) -> Func:
    """Turn a table on P into one on B x G via the section."""
    _check_total(b, f)
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    sec = section_table(b)
    return Func(
        (b.base.size, b.group.order),
        [
            f.values[b.act(sec[x], a)]
            for x in range(b.base.size)
            for a in range(b.group.order)
        ],
    )


class HPMap:
    """A linear map from the group function algebra into the total-space
    algebra, stored as its density: value(p, a) weighting alpha(a)."""

    __slots__ = ("group", "total_size", "density")

    def __init__(self, group: FiniteGroup, total_size: int, density: list[Scalar]):
        if len(density) != total_size * group.order:
            raise ValueError(
                f"density has {len(density)} entries, expected {total_size * group.order}"
            )
        self.group = group
        self.total_size = total_size
        self.density = density

    @classmethod
    def build(cls, group: FiniteGroup, total_size: int, fn) -> HPMap:
        m = group.order
        return cls(
            group,
            total_size,
            [fn(p, a) for p in range(total_size) for a in range(m)],
        )

    def value_at(self, p: int, a: int) -> Scalar:
        return self.density[p * self.group.order + a]

    def apply(self, alpha: Func) -> Func:
        if alpha.shape != (self.group.order,):
            raise ValueError(f"expected a group table, got shape {alpha.shape}")
        m = self.group.order
        out = []
        for p in range(self.total_size):
            acc = ZERO
            base = p * m
            for a in range(m):
                d = self.density[base + a]
                v = alpha.values[a]
                if d and v:
                    acc = acc + d * v
            out.append(acc)
        return Func((self.total_size,), out)

    def __eq__(self, other):
        return (
            isinstance(other, HPMap)
            and self.group == other.group
            and self.total_size == other.total_size
            and self.density == other.density
        )

    def __repr__(self):
        return f"HPMap(total_size={self.total_size}, group_order={self.group.order})"


def conv_unit(group: FiniteGroup, total_size: int) -> HPMap:
    """Unit of convolution: the counit followed by the unit, density d(e, a)."""
    e = group.identity
    if e is None:
        raise ValueError("group has no identity")
    return HPMap.build(group, total_size, lambda p, a: ONE if a == e else ZERO)


def star(u: HPMap, v: HPMap) -> HPMap:
    """Convolution: multiply after applying both factors to the coproduct."""
    if u.group != v.group or u.total_size != v.total_size:
        raise ValueError("convolution factors live on different bundles")
    g = u.group
    m = g.order
    out = [ZERO] * (u.total_size * m)
    for p in range(u.total_size):
        base = p * m
        for a in range(m):
            ua = u.density[base + a]
            if not ua:
                continue
            row = g.table[a]
            for bb in range(m):
                vb = v.density[base + bb]
                if vb:
                    c = row[bb]
                    out[base + c] = out[base + c] + ua * vb
    return HPMap(g, u.total_size, out)


def phi_hom(b: BundleSpec) -> HPMap:
    """The trivialization as a map of algebras: density d(phi(p), a)."""
    if b.phi is None:
        raise ValueError("bundle has no trivialization")
    return HPMap.build(
        b.group, b.total_size, lambda p, a: ONE if b.phi[p] == a else ZERO
    )


def conv_inverse(h: HPMap) -> HPMap:
    """Convolution inverse of an algebra map: precompose with inversion.

    Only densities that are delta tables (one unit entry per point) come
    from algebra maps; anything else is rejected.
    """
    g = h.group
    m = g.order
    if g.inv_table is None:
        raise ValueError("group has no inverses")
    w = []
    for p in range(h.total_size):
        row = h.density[p * m : (p + 1) * m]
        hits = [a for a in range(m) if row[a]]
        if len(hits) != 1 or row[hits[0]] != ONE:
            raise ValueError(
                f"density row {p} is not a delta table; convolution inverse undefined"
            )
        w.append(hits[0])
    return HPMap.build(
        g, h.total_size, lambda p, a: ONE if g.inv_table[w[p]] == a else ZERO
    )


def _check_total(b: BundleSpec, f: Func) -> None:
    if f.shape != (b.total_size,):
        raise ValueError(
            f"expected a table on the total space of size {b.total_size}, got shape {f.shape}"
        )
