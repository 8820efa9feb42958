"""Suite orchestration over a parsed document.

Suites run in a fixed order so an early structural failure is never
masked by a later algebraic one.  Every connection is canonicalized to
a connection-form density once and cross-checked against the closed
form for its kind; gauge suites pair each gauge map with each
non-theta connection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .bundle import (
    BundleSpec,
    check_comodule_algebra,
    check_freeness,
    conv_inverse,
    conv_unit,
    phi_hom,
    psi_apply,
    psi_inverse,
    star,
    synthesize_trivialization,
    validate_trivialization,
)
from .calculus import check_exactness, validate_form
from .connection import (
    ConnectionForm,
    classical_connection,
    connection_from_potential,
    curvature,
    curvature_classical,
    curvature_from_potential,
    gauge_transform_base_potential,
    gauge_transform_potential,
    gauge_transform_transition,
    is_cocycle,
    lift_base_potential,
    potential_from_transition,
    splitting_from_theta,
    strong_connection_direct,
    theta_from_splitting,
    validate_base_potential,
    validate_connection_form,
    validate_potential,
    validate_splitting,
    validate_transition,
)
from .document import ConnectionDecl, SpecDocument
from .funcs import Func
from .gauge import tau_extract, validate_automorphism, xi_from_tau
from .groups import validate_action, validate_group
from .report import CheckResult
from .scalars import ONE, ZERO, Scalar

__all__ = ["RunReport", "ConfigError", "run_checks", "emit_report", "curvature_payload"]

BASE_SUITES = ("group", "action", "comodule", "freeness", "exactness", "trivialization")


class ConfigError(ValueError):
    """A bad suite request or unusable invocation, as opposed to a failed check."""


@dataclass
class RunReport:
    tool_version: str
    input_digest: str
    document_name: str | None
    suites: list[str]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1

    def first_failure(self) -> CheckResult | None:
        return next((c for c in self.checks if not c.passed), None)


class _Context:
    """Working state shared by the suites of one run."""

    def __init__(self, doc: SpecDocument):
        self.doc = doc
        self.bundle: BundleSpec = doc.bundle
        self.synthesized_phi: list[int] | None = None
        self.synthesis_error: str | None = None
        if self.bundle.phi is None:
            try:
                phi = synthesize_trivialization(self.bundle)
            except ValueError as exc:
                self.synthesis_error = str(exc)
            else:
                self.synthesized_phi = phi
                self.bundle = self.bundle.with_phi(phi)
        self._theta: dict[str, tuple[ConnectionForm | None, str | None]] = {}

    @property
    def framed(self) -> bool:
        return self.bundle.phi is not None

    def theta_for(self, decl: ConnectionDecl) -> tuple[ConnectionForm | None, str | None]:
        if decl.name not in self._theta:
            self._theta[decl.name] = self._build_theta(decl)
        return self._theta[decl.name]

    def _build_theta(self, decl: ConnectionDecl) -> tuple[ConnectionForm | None, str | None]:
        try:
            if decl.kind == "theta":
                return decl.payload, None
            if not self.framed:
                return None, "bundle has no trivialization and none could be synthesized"
            if decl.kind == "gamma":
                return connection_from_potential(decl.payload, self.bundle), None
            if decl.kind == "gamma_hat":
                lifted = lift_base_potential(decl.payload, self.bundle)
                return connection_from_potential(lifted, self.bundle), None
            return classical_connection(decl.payload, self.bundle), None
        except ValueError as exc:
            return None, str(exc)


def run_checks(
    doc: SpecDocument, suites: list[str] | None = None, tool_version: str = "0"
) -> RunReport:
    ctx = _Context(doc)
    if suites is None:
        selected = _default_suites(ctx)
    else:
        selected = _resolve_suites(ctx, suites)
    report = RunReport(tool_version, doc.digest, doc.name, selected)
    for suite in selected:
        report.checks.extend(_run_suite(ctx, suite))
    return report


def _default_suites(ctx: _Context) -> list[str]:
    out = ["group", "action", "comodule", "freeness", "exactness"]
    if ctx.doc.bundle.phi is not None or ctx.synthesized_phi is not None:
        out.append("trivialization")
    for c in ctx.doc.connections:
        out.append(f"connection:{c.name}")
        out.append(f"curvature:{c.name}")
    for gd in ctx.doc.gauges:
        for c in ctx.doc.connections:
            if c.kind != "theta":
                out.append(f"gauge:{gd.name}:{c.name}")
    return out


def _resolve_suites(ctx: _Context, requested: list[str]) -> list[str]:
    doc = ctx.doc
    order: dict[str, int] = {}
    for name in BASE_SUITES:
        order[name] = len(order)
    for c in doc.connections:
        order[f"connection:{c.name}"] = len(order)
        order[f"curvature:{c.name}"] = len(order)
    for gd in doc.gauges:
        for c in doc.connections:
            order[f"gauge:{gd.name}:{c.name}"] = len(order)

    seen: set[str] = set()
    for name in requested:
        if name not in order:
            raise ConfigError(_explain_unknown_suite(doc, name))
        if name.startswith("gauge:"):
            cname = name.split(":", 2)[2]
            decl = doc.connection(cname)
            if decl is not None and decl.kind == "theta":
                raise ConfigError(
                    f"gauge suites need a gamma, gamma_hat, or classical connection;"
                    f" {cname!r} has kind theta"
                )
        seen.add(name)
    return sorted(seen, key=order.__getitem__)


def _explain_unknown_suite(doc: SpecDocument, name: str) -> str:
    parts = name.split(":")
    if parts[0] in ("connection", "curvature") and len(parts) == 2:
        return f"no connection named {parts[1]!r} in the document"
    if parts[0] == "gauge" and len(parts) == 3:
        if doc.gauge(parts[1]) is None:
            return f"no gauge named {parts[1]!r} in the document"
        return f"no connection named {parts[2]!r} in the document"
    return f"unknown suite {name!r}"


def _run_suite(ctx: _Context, suite: str) -> list[CheckResult]:
    if suite == "group":
        return validate_group(ctx.doc.group).checks
    if suite == "action":
        return validate_action(ctx.doc.bundle.action).checks
    if suite == "comodule":
        return check_comodule_algebra(ctx.bundle).checks
    if suite == "freeness":
        return check_freeness(ctx.bundle).checks
    if suite == "exactness":
        return check_exactness(ctx.bundle).checks
    if suite == "trivialization":
        return _suite_trivialization(ctx)
    head, _, rest = suite.partition(":")
    if head == "connection":
        return _suite_connection(ctx, ctx.doc.connection(rest))
    if head == "curvature":
        return _suite_curvature(ctx, ctx.doc.connection(rest))
    gname, _, cname = rest.partition(":")
    return _suite_gauge(ctx, ctx.doc.gauge(gname), ctx.doc.connection(cname), suite)


def _renamed(checks: list[CheckResult], suite: str, prefix_map: dict | None = None) -> list[CheckResult]:
    out = []
    for c in checks:
        head, _, tail = c.name.partition(".")
        if prefix_map and head in prefix_map:
            head = prefix_map[head]
        out.append(CheckResult(f"{suite}.{head}.{tail}", c.passed, c.witness, c.data))
    return out


def _suite_trivialization(ctx: _Context) -> list[CheckResult]:
    out: list[CheckResult] = []
    if ctx.doc.bundle.phi is None:
        if ctx.synthesized_phi is None:
            out.append(
                CheckResult(
                    "trivialization.synthesized",
                    False,
                    data={"reason": ctx.synthesis_error},
                )
            )
            return out
        out.append(
            CheckResult(
                "trivialization.synthesized", True, data={"phi": list(ctx.synthesized_phi)}
            )
        )
    rep = validate_trivialization(ctx.bundle)
    out.extend(rep.checks)
    if not rep.passed:
        return out

    b = ctx.bundle
    nb, m, n = b.base.size, b.group.order, b.total_size
    basis_bg = [Func.indicator((nb, m), (x, a)) for x in range(nb) for a in range(m)]
    left = next(
        (
            (x, a)
            for x in range(nb)
            for a in range(m)
            if psi_inverse(b, psi_apply(b, basis_bg[x * m + a])) != basis_bg[x * m + a]
        ),
        None,
    )
    out.append(CheckResult("trivialization.psi_left_inverse", left is None, left))

    right = next(
        (
            (p,)
            for p in range(n)
            if psi_apply(b, psi_inverse(b, Func.indicator((n,), (p,))))
            != Func.indicator((n,), (p,))
        ),
        None,
    )
    out.append(CheckResult("trivialization.psi_right_inverse", right is None, right))

    images = [psi_apply(b, h) for h in basis_bg]
    mult = next(
        (
            (i, j)
            for i in range(len(basis_bg))
            for j in range(len(basis_bg))
            if psi_apply(b, basis_bg[i] * basis_bg[j]) != images[i] * images[j]
        ),
        None,
    )
    out.append(CheckResult("trivialization.psi_multiplicative", mult is None, mult))

    try:
        ph = phi_hom(b)
        ph_inv = conv_inverse(ph)
        unit = conv_unit(b.group, n)
        ok = star(ph, ph_inv) == unit and star(ph_inv, ph) == unit
        out.append(CheckResult("trivialization.conv_inverse", ok))
    except ValueError as exc:
        out.append(CheckResult("trivialization.conv_inverse", False, data={"reason": str(exc)}))
    return out


def _conjugated_potential_form(gamma, b: BundleSpec) -> ConnectionForm:
    # closed form of the convolution route, evaluated pointwise
    g = b.group
    e = g.identity
    phi = b.phi

    def fn(p, q, c):
        flat = ONE if g.table[g.inv(phi[p])][phi[q]] == c else ZERO
        if c == e:
            flat = flat - ONE
        word = g.table[g.table[phi[p]][c]][g.inv(phi[q])]
        return flat + gamma.value_at(p, q, word)

    return ConnectionForm.build(g, b.total_size, fn)


def _suite_connection(ctx: _Context, decl: ConnectionDecl) -> list[CheckResult]:
    suite = f"connection:{decl.name}"
    out: list[CheckResult] = []
    b = ctx.bundle

    ok_inputs = True
    if decl.kind == "classical":
        rep = validate_transition(decl.payload)
        out.extend(_renamed(rep.checks, suite))
        ok_inputs = rep.passed
        if ok_inputs:
            gh = potential_from_transition(decl.payload)
            rep2 = validate_base_potential(gh)
            out.extend(_renamed(rep2.checks, suite, {"base_potential": "derived_potential"}))
            ok_inputs = rep2.passed
    elif decl.kind == "gamma_hat":
        rep = validate_base_potential(decl.payload)
        out.extend(_renamed(rep.checks, suite))
        ok_inputs = rep.passed
        if ok_inputs and ctx.framed:
            lifted = lift_base_potential(decl.payload, b)
            rep2 = validate_potential(lifted, b)
            out.extend(_renamed(rep2.checks, suite, {"potential": "lifted_potential"}))
            ok_inputs = rep2.passed
    elif decl.kind == "gamma":
        rep = validate_potential(decl.payload, b)
        out.extend(_renamed(rep.checks, suite))
        ok_inputs = rep.passed

    if decl.kind != "theta" and not ctx.framed:
        out.append(
            CheckResult(
                f"{suite}.frame_available",
                False,
                data={"reason": "bundle has no trivialization and none could be synthesized"},
            )
        )
        return out
    if not ok_inputs:
        return out

    theta, reason = ctx.theta_for(decl)
    if theta is None:
        out.append(CheckResult(f"{suite}.canonicalized", False, data={"reason": reason}))
        return out

    if decl.kind == "gamma":
        direct = _conjugated_potential_form(decl.payload, b)
        out.append(CheckResult(f"{suite}.route_agreement", direct.density == theta.density))
    elif decl.kind == "gamma_hat":
        direct = strong_connection_direct(decl.payload, b)
        out.append(
            CheckResult(f"{suite}.strong_route_agreement", direct.density == theta.density)
        )
    elif decl.kind == "classical":
        gh = potential_from_transition(decl.payload)
        via_potential = connection_from_potential(lift_base_potential(gh, b), b)
        out.append(
            CheckResult(
                f"{suite}.classical_route_agreement",
                via_potential.density == theta.density,
            )
        )

    rep = validate_connection_form(theta, b)
    out.extend(_renamed(rep.checks, suite, {"connection": "form"}))
    if rep.passed:
        try:
            sp = splitting_from_theta(theta, b)
            out.extend(_renamed(validate_splitting(sp, b).checks, suite))
            back = theta_from_splitting(sp, b)
            out.append(
                CheckResult(f"{suite}.splitting_roundtrip", back.density == theta.density)
            )
        except ValueError as exc:
            out.append(
                CheckResult(f"{suite}.splitting_roundtrip", False, data={"reason": str(exc)})
            )
    return out


def _suite_curvature(ctx: _Context, decl: ConnectionDecl) -> list[CheckResult]:
    suite = f"curvature:{decl.name}"
    out: list[CheckResult] = []
    b = ctx.bundle
    theta, reason = ctx.theta_for(decl)
    if theta is None:
        out.append(CheckResult(f"{suite}.canonicalized", False, data={"reason": reason}))
        return out

    f = curvature(theta)
    wit = None
    for c in range(b.group.order):
        repf = validate_form(f.slice_form(c))
        if not repf.passed:
            bad = repf.first_failure()
            wit = (c,) + (bad.witness or ())
            break
    out.append(CheckResult(f"{suite}.form_validity", wit is None, wit))

    try:
        if decl.kind == "gamma":
            other = curvature_from_potential(decl.payload, b)
            out.append(CheckResult(f"{suite}.route_agreement", f == other))
        elif decl.kind == "gamma_hat":
            other = curvature_from_potential(lift_base_potential(decl.payload, b), b)
            out.append(CheckResult(f"{suite}.route_agreement", f == other))
        elif decl.kind == "classical":
            tm = decl.payload
            lifted = lift_base_potential(potential_from_transition(tm), b)
            other = curvature_from_potential(lifted, b)
            out.append(CheckResult(f"{suite}.route_agreement", f == other))
            out.append(
                CheckResult(f"{suite}.classical_agreement", f == curvature_classical(tm, b))
            )
            cocycle, cw = is_cocycle(tm)
            flat = f.is_zero()
            out.append(
                CheckResult(
                    f"{suite}.flat_iff_cocycle",
                    cocycle == flat,
                    None if cocycle == flat else cw,
                    data={"cocycle": cocycle, "flat": flat},
                )
            )
    except ValueError as exc:
        out.append(CheckResult(f"{suite}.route_agreement", False, data={"reason": str(exc)}))
        return out

    out.append(CheckResult(f"{suite}.computed", True, data={"nonzero": not f.is_zero()}))
    return out


def _suite_gauge(ctx: _Context, gdecl, cdecl: ConnectionDecl, suite: str) -> list[CheckResult]:
    out: list[CheckResult] = []
    b = ctx.bundle
    tau = gdecl.gauge
    g = tau.group
    if g.identity is None or g.inv_table is None:
        out.append(
            CheckResult(
                f"{suite}.automorphism_roundtrip",
                False,
                data={"reason": "group lacks identity or inverses"},
            )
        )
        return out

    xi = xi_from_tau(tau)
    out.extend(_renamed(validate_automorphism(xi).checks, suite))
    try:
        out.append(CheckResult(f"{suite}.automorphism_roundtrip", tau_extract(xi) == tau))
    except ValueError as exc:
        out.append(
            CheckResult(f"{suite}.automorphism_roundtrip", False, data={"reason": str(exc)})
        )

    transformed_tm = None
    try:
        if cdecl.kind == "gamma":
            transformed = gauge_transform_potential(cdecl.payload, b, tau)
            val = validate_potential(transformed, b)
        elif cdecl.kind == "gamma_hat":
            transformed = gauge_transform_base_potential(cdecl.payload, tau)
            val = validate_base_potential(transformed)
        else:
            transformed_tm = gauge_transform_transition(cdecl.payload, tau)
            val = validate_transition(transformed_tm)
            transformed = gauge_transform_base_potential(
                potential_from_transition(cdecl.payload), tau
            )
        out.append(CheckResult(f"{suite}.transform_routes", True))
    except (ValueError, RuntimeError) as exc:
        out.append(CheckResult(f"{suite}.transform_routes", False, data={"reason": str(exc)}))
        return out

    bad = val.first_failure()
    out.append(
        CheckResult(
            f"{suite}.transformed_validity",
            val.passed,
            None if bad is None else bad.witness,
        )
    )
    if cdecl.kind == "classical":
        agree = potential_from_transition(transformed_tm) == transformed
        out.append(CheckResult(f"{suite}.classical_agreement", agree))
    return out


# ---------------------------------------------------------------------------
# report emission


def _jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, (Scalar, Fraction)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


def emit_report(report: RunReport, fmt: str = "text") -> str:
    if fmt == "text":
        lines = [
            f"qpb {report.tool_version}"
            f"  document={report.document_name or '(unnamed)'}"
            f"  digest={report.input_digest[:12]}"
        ]
        lines.extend(c.describe() for c in report.checks)
        if report.passed:
            lines.append(f"ALL CHECKS PASSED ({len(report.checks)} checks)")
        else:
            failed = sum(1 for c in report.checks if not c.passed)
            ff = report.first_failure()
            tail = f" witness={ff.witness}" if ff.witness is not None else ""
            lines.append(
                f"FAILED ({failed} of {len(report.checks)} checks):"
                f" first failure {ff.name}{tail}"
            )
        return "\n".join(lines) + "\n"
    if fmt != "json":
        raise ConfigError(f"unknown format {fmt!r}")

    failed = sum(1 for c in report.checks if not c.passed)
    ff = report.first_failure()
    payload = {
        "format_version": 1,
        "tool": "qpb",
        "tool_version": report.tool_version,
        "input_digest": report.input_digest,
        "document_name": report.document_name,
        "suites": list(report.suites),
        "checks": [
            {
                "name": c.name,
                "status": "pass" if c.passed else "fail",
                "witness": _jsonable(c.witness),
                "data": _jsonable(c.data),
            }
            for c in report.checks
        ],
        "summary": {
            "total": len(report.checks),
            "failed": failed,
            "first_failure": None if ff is None else ff.name,
        },
        "exit_status": report.exit_status,
    }
    return json.dumps(payload, indent=2) + "\n"


def curvature_payload(doc: SpecDocument, connection_name: str, tool_version: str = "0") -> dict:
    """Sparse curvature table of one connection, as a JSON-ready dict."""
    decl = doc.connection(connection_name)
    if decl is None:
        raise ConfigError(f"no connection named {connection_name!r} in the document")
    ctx = _Context(doc)
    theta, reason = ctx.theta_for(decl)
    if theta is None:
        raise ValueError(reason)
    f = curvature(theta)
    n, m = f.size, f.group.order
    entries = []
    for flat, v in enumerate(f.density):
        if v:
            t, c = divmod(flat, m)
            t, r = divmod(t, n)
            p, q = divmod(t, n)
            entries.append({"index": [p, q, r, c], "value": str(v)})
    return {
        "format_version": 1,
        "tool": "qpb",
        "tool_version": tool_version,
        "input_digest": doc.digest,
        "document_name": doc.name,
        "connection": decl.name,
        "kind": decl.kind,
        "degree": 2,
        "total_size": n,
        "group_order": m,
        "entries": entries,
    }
