"""JSON wire formats: instances, families, certificates, and report payloads.

Subsets travel as comma-joined element labels in ground-set order, with the
empty string for the empty set. All emitters build dicts in a fixed key
order so reports are byte-identical across runs.
"""

from __future__ import annotations

import json

from .core import ConnectivitySystem, GroundSet
from .decomposition import BranchDecomposition, LinearOrdering, WidthResult
from .errors import InputError, MalformedTree
from .families import FamilyFlags, SetFamily, Verdict
from .orders import AuditReport, Chain


def load_instance(path: str, seed: int = 0) -> ConnectivitySystem:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"instance file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None
    return instance_from_dict(data, seed=seed)


def instance_from_dict(data: dict, seed: int = 0) -> ConnectivitySystem:
    if not isinstance(data, dict) or "ground_set" not in data or "function" not in data:
        raise InputError("instance JSON needs 'ground_set' and 'function' keys")
    labels = data["ground_set"]
    fn = data["function"]
    kind = fn.get("type")
    if kind == "table":
        ground = GroundSet(tuple(labels))
        table = {}
        for key, val in fn.get("values", {}).items():
            try:
                mask = ground.mask_from_key(key)
            except KeyError as exc:
                raise InputError(str(exc)) from None
            table[mask] = val
        return ConnectivitySystem.from_table(labels, table, seed=seed)
    if kind == "graph_edge_cut":
        return ConnectivitySystem.from_edge_cut(labels, fn["vertices"], fn["edges"], seed=seed)
    if kind == "graph_vertex_cut":
        return ConnectivitySystem.from_vertex_cut(labels, fn["vertices"], fn["edges"], seed=seed)
    raise InputError(f"unknown function type {kind!r}")


def load_family(path: str, sys: ConnectivitySystem, k: int | None = None) -> SetFamily:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"family file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None
    return family_from_dict(data, sys, k=k)


def family_from_dict(data: dict, sys: ConnectivitySystem, k: int | None = None) -> SetFamily:
    if not isinstance(data, dict) or "sets" not in data:
        raise InputError("family JSON needs a 'sets' key")
    bound = k if k is not None else data.get("k")
    if bound is None:
        raise InputError("family JSON needs a 'k' bound (or pass -k)")
    members = []
    for entry in data["sets"]:
        try:
            if isinstance(entry, str):
                members.append(sys.ground.mask_from_key(entry))
            else:
                members.append(sys.ground.mask_of(entry))
        except KeyError as exc:
            raise InputError(str(exc)) from None
    return SetFamily(frozenset(members), int(bound), sys.n)


def subset_key(sys: ConnectivitySystem, mask: int) -> str:
    return sys.ground.subset_key(mask)


def family_to_json(sys: ConnectivitySystem, fam: SetFamily) -> dict:
    return {"k": fam.k, "sets": [subset_key(sys, m) for m in fam.sorted_members()]}


def verdict_to_json(sys: ConnectivitySystem, verdict: Verdict) -> dict:
    out = {
        "holds": verdict.holds,
        "violated_axiom": verdict.violated_axiom,
        "witnesses": [subset_key(sys, w) for w in verdict.witnesses],
    }
    if verdict.derived:
        out["derived"] = {key: verdict.derived[key] for key in sorted(verdict.derived)}
    return out


def flags_to_json(flags: FamilyFlags) -> dict:
    return {
        "principal": flags.principal,
        "non_principal": flags.non_principal,
        "uniform": flags.uniform,
    }


def branch_to_json(sys: ConnectivitySystem, d: BranchDecomposition) -> dict:
    n = d.n
    if n == 1:
        return {"type": "branch", "parents": [None], "leaves": {"0": sys.ground.labels[d.leaf_elements[0]]}}
    adj: dict[int, list[int]] = {}
    for u, v in d.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    root = max(adj)  # last internal node for n >= 3, leaf 1 for n == 2
    parents: list[int | None] = [None] * (2 * n - 2 if n >= 3 else 2)
    seen = {root}
    stack = [root]
    while stack:
        node = stack.pop()
        for other in sorted(adj[node]):
            if other not in seen:
                seen.add(other)
                parents[other] = node
                stack.append(other)
    leaves = {str(i): sys.ground.labels[d.leaf_elements[i]] for i in range(n)}
    return {"type": "branch", "parents": parents, "leaves": leaves}


def branch_from_json(sys: ConnectivitySystem, data: dict) -> BranchDecomposition:
    parents = data.get("parents")
    leaves = data.get("leaves", {})
    if parents is None:
        raise InputError("branch certificate needs a 'parents' array")
    n = sys.n
    edges = []
    for node, parent in enumerate(parents):
        if parent is not None:
            edges.append((min(node, parent), max(node, parent)))
    elements = []
    for i in range(n):
        label = leaves.get(str(i))
        if label is None:
            raise MalformedTree(f"missing leaf label for node {i}")
        elements.append(sys.ground.index(label))
    return BranchDecomposition(n, tuple(edges), tuple(elements))


def linear_to_json(sys: ConnectivitySystem, ordering: LinearOrdering) -> dict:
    return {"type": "linear", "order": [sys.ground.labels[e] for e in ordering.order]}


def linear_from_json(sys: ConnectivitySystem, data: dict) -> LinearOrdering:
    order = data.get("order")
    if order is None:
        raise InputError("linear certificate needs an 'order' array")
    return LinearOrdering(tuple(sys.ground.index(label) for label in order))


def certificate_to_json(sys: ConnectivitySystem, cert) -> dict:
    if isinstance(cert, BranchDecomposition):
        return branch_to_json(sys, cert)
    if isinstance(cert, LinearOrdering):
        return linear_to_json(sys, cert)
    raise TypeError(f"not a certificate: {cert!r}")


def certificate_from_json(sys: ConnectivitySystem, data: dict):
    kind = data.get("type")
    if kind == "branch":
        return branch_from_json(sys, data)
    if kind == "linear":
        return linear_from_json(sys, data)
    raise InputError(f"unknown certificate type {kind!r}")


def width_result_to_json(
    sys: ConnectivitySystem, result: WidthResult, include_certificate: bool
) -> dict:
    out = {"width": result.width}
    if include_certificate:
        out["certificate"] = certificate_to_json(sys, result.certificate)
    return out


def _witness_item_to_json(sys: ConnectivitySystem, item):
    if isinstance(item, int):
        return subset_key(sys, item)
    if isinstance(item, frozenset):
        return [_witness_item_to_json(sys, x) for x in sorted(item)]
    if isinstance(item, (tuple, list)):
        return [_witness_item_to_json(sys, x) for x in item]
    return item


def audit_report_to_json(sys: ConnectivitySystem, report: AuditReport) -> dict:
    return {
        "theorem": report.theorem_id,
        "instance": report.instance,
        "status": report.status,
        "witness": [_witness_item_to_json(sys, item) for item in report.witness],
        "detail": report.detail,
    }


def duality_to_json(sys: ConnectivitySystem, verdict) -> dict:
    out = {
        "kind": verdict.kind,
        "k": verdict.k,
        "width": verdict.width,
        "width_side": verdict.width_side,
        "obstruction_side": verdict.obstruction_side,
        "consistent": verdict.consistent,
    }
    if verdict.counterexample is not None:
        ce = verdict.counterexample
        if isinstance(ce, SetFamily):
            out["counterexample"] = family_to_json(sys, ce)
        else:
            out["counterexample"] = certificate_to_json(sys, ce)
    return out


def chain_to_json(sys: ConnectivitySystem, chain: Chain) -> dict:
    return {"k": chain.k, "sets": [subset_key(sys, m) for m in chain.sets]}


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
