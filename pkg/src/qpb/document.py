"""Specification documents: the JSON file format of the command line tool.

Parsing is total: any input yields either a validated SpecDocument or a
SpecError carrying the path of the first problem.  Densities accept
integers or exact literals like "-1/2" and "1/3+2/5i"; floats are
rejected.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .bundle import BundleSpec, make_product
from .connection import BasePotential, ConnectionForm, Potential, TransitionMap
from .gauge import GaugeMap
from .groups import FiniteGroup, RightAction
from .scalars import Scalar, parse_scalar

__all__ = ["SpecDocument", "ConnectionDecl", "GaugeDecl", "SpecError", "parse_spec"]

CONNECTION_KINDS = ("theta", "gamma", "gamma_hat", "classical")


class SpecError(ValueError):
    """A document problem with the path of its first occurrence."""

    def __init__(self, message: str, path: str = ""):
        self.message = message
        self.path = path
        super().__init__(f"{message} at {path}" if path else message)


@dataclass
class ConnectionDecl:
    name: str
    kind: str
    payload: ConnectionForm | Potential | BasePotential | TransitionMap


@dataclass
class GaugeDecl:
    name: str
    gauge: GaugeMap


@dataclass
class SpecDocument:
    name: str | None
    group: FiniteGroup
    bundle: BundleSpec
    connections: list[ConnectionDecl] = field(default_factory=list)
    gauges: list[GaugeDecl] = field(default_factory=list)
    digest: str = ""

    def connection(self, name: str) -> ConnectionDecl | None:
        return next((c for c in self.connections if c.name == name), None)

    def gauge(self, name: str) -> GaugeDecl | None:
        return next((g for g in self.gauges if g.name == name), None)


def parse_spec(text: str) -> SpecDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise SpecError("document must be a JSON object")

    known = {
        "format_version",
        "name",
        "group",
        "action",
        "product_bundle",
        "trivialization",
        "connections",
        "gauges",
    }
    for key in raw:
        if key not in known:
            raise SpecError("unknown key", key)

    version = raw.get("format_version")
    if version != 1:
        raise SpecError(f"unsupported format_version {version!r}", "format_version")

    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecError("name must be a string", "name")

    group = _parse_group(raw)
    bundle = _parse_bundle(raw, group)
    connections = _parse_connections(raw, group, bundle)
    gauges = _parse_gauges(raw, group, bundle)

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return SpecDocument(name, group, bundle, connections, gauges, digest)


def _parse_group(raw: dict) -> FiniteGroup:
    spec = raw.get("group")
    if not isinstance(spec, dict):
        raise SpecError("missing or malformed group object", "group")
    mul = spec.get("mul")
    if not isinstance(mul, list) or not mul:
        raise SpecError("group needs a non-empty mul table", "group.mul")
    order = len(mul)
    for i, row in enumerate(mul):
        if not isinstance(row, list) or len(row) != order:
            raise SpecError(f"mul row must have {order} entries", f"group.mul[{i}]")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < order:
                raise SpecError("index out of range", f"group.mul[{i}][{j}]")
    labels = spec.get("labels")
    if labels is not None:
        if (
            not isinstance(labels, list)
            or len(labels) != order
            or not all(isinstance(s, str) for s in labels)
        ):
            raise SpecError(f"labels must be {order} strings", "group.labels")
    extra = set(spec) - {"mul", "labels", "order"}
    if extra:
        raise SpecError("unknown key", f"group.{sorted(extra)[0]}")
    declared = spec.get("order")
    if declared is not None and declared != order:
        raise SpecError(f"declared order {declared} but mul table has {order} rows", "group.order")
    return FiniteGroup([list(r) for r in mul], labels)


def _parse_bundle(raw: dict, group: FiniteGroup) -> BundleSpec:
    action_spec = raw.get("action")
    product_spec = raw.get("product_bundle")
    if (action_spec is None) == (product_spec is None):
        raise SpecError("exactly one of action or product_bundle is required")

    if product_spec is not None:
        if not isinstance(product_spec, dict):
            raise SpecError("product_bundle must be an object", "product_bundle")
        base_size = product_spec.get("base_size")
        if not isinstance(base_size, int) or isinstance(base_size, bool) or base_size < 1:
            raise SpecError("base_size must be a positive integer", "product_bundle.base_size")
        extra = set(product_spec) - {"base_size"}
        if extra:
            raise SpecError("unknown key", f"product_bundle.{sorted(extra)[0]}")
        bundle = make_product(base_size, group)
    else:
        if not isinstance(action_spec, dict):
            raise SpecError("action must be an object", "action")
        act = action_spec.get("act")
        if not isinstance(act, list) or not act:
            raise SpecError("action needs a non-empty act table", "action.act")
        n = len(act)
        for p, row in enumerate(act):
            if not isinstance(row, list) or len(row) != group.order:
                raise SpecError(
                    f"act row must have {group.order} entries", f"action[{p}]"
                )
            for a, q in enumerate(row):
                if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < n:
                    raise SpecError("index out of range", f"action[{p}][{a}]")
        declared = action_spec.get("total_size")
        if declared is not None and declared != n:
            raise SpecError(
                f"declared total_size {declared} but act table has {n} rows",
                "action.total_size",
            )
        extra = set(action_spec) - {"act", "total_size"}
        if extra:
            raise SpecError("unknown key", f"action.{sorted(extra)[0]}")
        bundle = BundleSpec(group, RightAction(group, [list(r) for r in act]))

    triv = raw.get("trivialization")
    if triv is not None:
        if not isinstance(triv, dict):
            raise SpecError("trivialization must be an object", "trivialization")
        phi = triv.get("phi")
        if not isinstance(phi, list) or len(phi) != bundle.total_size:
            raise SpecError(
                f"phi must list {bundle.total_size} group indices", "trivialization.phi"
            )
        for p, a in enumerate(phi):
            if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < group.order:
                raise SpecError("index out of range", f"trivialization.phi[{p}]")
        extra = set(triv) - {"phi"}
        if extra:
            raise SpecError("unknown key", f"trivialization.{sorted(extra)[0]}")
        bundle = bundle.with_phi(list(phi))

    bundle.name = raw.get("name")
    return bundle


def _parse_scalar_entry(v, path: str) -> Scalar:
    if isinstance(v, bool):
        raise SpecError("non-rational scalar literal", path)
    if isinstance(v, int):
        return Scalar(v)
    if isinstance(v, str):
        try:
            return parse_scalar(v)
        except ValueError as exc:
            raise SpecError(f"non-rational scalar literal ({exc})", path) from exc
    raise SpecError("non-rational scalar literal", path)


def _parse_density(spec: dict, path: str, size: int, order: int) -> list[Scalar]:
    density = spec.get("density")
    if not isinstance(density, list) or len(density) != size:
        raise SpecError(f"density must have {size} rows", f"{path}.density")
    flat: list[Scalar] = []
    for i, plane in enumerate(density):
        if not isinstance(plane, list) or len(plane) != size:
            raise SpecError(f"density row must have {size} entries", f"{path}.density[{i}]")
        for j, cell in enumerate(plane):
            if not isinstance(cell, list) or len(cell) != order:
                raise SpecError(
                    f"density cell must have {order} entries", f"{path}.density[{i}][{j}]"
                )
            for k, v in enumerate(cell):
                flat.append(_parse_scalar_entry(v, f"{path}.density[{i}][{j}][{k}]"))
    return flat


def _parse_connections(raw: dict, group: FiniteGroup, bundle: BundleSpec) -> list[ConnectionDecl]:
    specs = raw.get("connections")
    if specs is None:
        return []
    if not isinstance(specs, list):
        raise SpecError("connections must be a list", "connections")
    out: list[ConnectionDecl] = []
    seen: set[str] = set()
    for k, spec in enumerate(specs):
        path = f"connections[{k}]"
        if not isinstance(spec, dict):
            raise SpecError("connection must be an object", path)
        cname = spec.get("name")
        if not isinstance(cname, str) or not cname:
            raise SpecError("connection needs a name", f"{path}.name")
        if cname in seen:
            raise SpecError(f"duplicate name {cname!r}", f"{path}.name")
        seen.add(cname)
        kind = spec.get("kind")
        if kind not in CONNECTION_KINDS:
            raise SpecError(
                f"kind must be one of {', '.join(CONNECTION_KINDS)}", f"{path}.kind"
            )
        extra = set(spec) - {"name", "kind", "density", "transition"}
        if extra:
            raise SpecError("unknown key", f"{path}.{sorted(extra)[0]}")

        if kind == "classical":
            table = spec.get("transition")
            nb = bundle.base.size
            if not isinstance(table, list) or len(table) != nb:
                raise SpecError(f"transition must have {nb} rows", f"{path}.transition")
            for x, row in enumerate(table):
                if not isinstance(row, list) or len(row) != nb:
                    raise SpecError(
                        f"transition row must have {nb} entries", f"{path}.transition[{x}]"
                    )
                for y, v in enumerate(row):
                    if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < group.order:
                        raise SpecError("index out of range", f"{path}.transition[{x}][{y}]")
            payload: ConnectionForm | Potential | BasePotential | TransitionMap
            payload = TransitionMap(group, [list(r) for r in table])
        elif kind == "gamma_hat":
            flat = _parse_density(spec, path, bundle.base.size, group.order)
            payload = BasePotential(group, bundle.base.size, flat)
        elif kind == "gamma":
            flat = _parse_density(spec, path, bundle.total_size, group.order)
            payload = Potential(group, bundle.total_size, flat)
        else:
            flat = _parse_density(spec, path, bundle.total_size, group.order)
            payload = ConnectionForm(group, bundle.total_size, flat)
        out.append(ConnectionDecl(cname, kind, payload))
    return out


def _parse_gauges(raw: dict, group: FiniteGroup, bundle: BundleSpec) -> list[GaugeDecl]:
    specs = raw.get("gauges")
    if specs is None:
        return []
    if not isinstance(specs, list):
        raise SpecError("gauges must be a list", "gauges")
    out: list[GaugeDecl] = []
    seen: set[str] = set()
    for k, spec in enumerate(specs):
        path = f"gauges[{k}]"
        if not isinstance(spec, dict):
            raise SpecError("gauge must be an object", path)
        gname = spec.get("name")
        if not isinstance(gname, str) or not gname:
            raise SpecError("gauge needs a name", f"{path}.name")
        if gname in seen:
            raise SpecError(f"duplicate name {gname!r}", f"{path}.name")
        seen.add(gname)
        table = spec.get("tau_hat")
        nb = bundle.base.size
        if not isinstance(table, list) or len(table) != nb:
            raise SpecError(f"tau_hat must list {nb} group indices", f"{path}.tau_hat")
        for x, v in enumerate(table):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < group.order:
                raise SpecError("index out of range", f"{path}.tau_hat[{x}]")
        extra = set(spec) - {"name", "tau_hat"}
        if extra:
            raise SpecError("unknown key", f"{path}.{sorted(extra)[0]}")
        out.append(GaugeDecl(gname, GaugeMap(group, list(table))))
    return out
