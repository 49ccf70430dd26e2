"""JSON and DOT serialization.

Transition systems: {"sigma": [...], "states": [...],
  "actions": [{"id": str, "label": str}],
  "transitions": [{"from": str, "actions": [str, ...], "to": str}]}.

Precubical sets: {"sigma": [...], "dim_bound": n, "cells": {"0": [{"id"}],
  "1": [{"id", "label", "d": {"i,alpha": id}}], "2": [.., "s": {"i": id}]}}.

Maps carry their endpoints: {"type": "hdts_map", "domain": .., "codomain":
  .., "state_map": {..}, "action_map": {..}} and {"type": "precub_map",
  "domain": .., "codomain": .., "cell_map": {"0": {..}, ..}}.

Structured ids are rendered to strings on dump; loading therefore yields
string-id systems, and loading is canonicalizing and idempotent.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .core import (HdtsMap, Id, Transition, WeakHdts, idkey, make_hdts,
                   make_map, tr)
from .precub import (LsPrecubSet, PrecubMap, make_precub, make_precub_map)


def _render_id(v: Id) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return "(" + ",".join(_render_id(x) for x in v) + ")"


def _render_table(ids) -> dict:
    """Injective rendering of a set of ids to strings."""
    table: dict = {}
    seen: dict[str, int] = {}
    for v in sorted(ids, key=idkey):
        name = _render_id(v)
        if name in seen:
            seen[name] += 1
            name = f"{name}#{seen[name]}"
        else:
            seen[name] = 0
        table[v] = name
    return table


def hdts_to_data(x: WeakHdts) -> dict:
    st = _render_table(x.states)
    ac = _render_table(x.action_ids)
    return {
        "sigma": list(x.sigma),
        "states": [st[s] for s in x.states],
        "actions": [{"id": ac[a], "label": lab} for a, lab in x.actions],
        "transitions": [{"from": st[t.source],
                         "actions": [ac[a] for a in t.actions],
                         "to": st[t.target]} for t in x.transitions],
    }


def hdts_from_data(data: Mapping) -> WeakHdts:
    actions = [(a["id"], a["label"]) for a in data.get("actions", ())]
    transitions = [tr(t["from"], t["actions"], t["to"])
                   for t in data.get("transitions", ())]
    return make_hdts(data["sigma"], data.get("states", ()), actions,
                     transitions)


def precub_to_data(k: LsPrecubSet) -> dict:
    tables = [_render_table(k.cells_at(n)) for n in range(k.dim + 1)]
    cells: dict[str, list] = {}
    for n in range(k.dim + 1):
        level = []
        for x in k.cells_at(n):
            entry: dict[str, Any] = {"id": tables[n][x]}
            if n >= 1:
                entry["label"] = list(k.word(n, x))
                entry["d"] = {f"{i},{alpha}": tables[n - 1][k.d(n, i, alpha, x)]
                              for i in range(1, n + 1) for alpha in (0, 1)}
            if n >= 2:
                entry["s"] = {str(i): tables[n][k.s(n, i, x)]
                              for i in range(1, n)}
            level.append(entry)
        cells[str(n)] = level
    return {"sigma": list(k.sigma), "dim_bound": k.dim, "cells": cells}


def precub_from_data(data: Mapping) -> LsPrecubSet:
    dim = data["dim_bound"]
    cells: dict[int, list] = {}
    labels: dict = {}
    faces: dict = {}
    syms: dict = {}
    for key, level in data.get("cells", {}).items():
        n = int(key)
        cells[n] = [entry["id"] for entry in level]
        for entry in level:
            x = entry["id"]
            if n >= 1:
                labels[(n, x)] = tuple(entry["label"])
                for dkey, y in entry["d"].items():
                    i, alpha = (int(p) for p in dkey.split(","))
                    faces[(n, i, alpha, x)] = y
            for skey, y in entry.get("s", {}).items():
                syms[(n, int(skey), x)] = y
    return make_precub(data["sigma"], dim, cells, labels, faces, syms)


def map_to_data(f: HdtsMap | PrecubMap) -> dict:
    if isinstance(f, HdtsMap):
        dom_st = _render_table(f.dom.states)
        dom_ac = _render_table(f.dom.action_ids)
        cod_st = _render_table(f.cod.states)
        cod_ac = _render_table(f.cod.action_ids)
        return {
            "type": "hdts_map",
            "domain": hdts_to_data(f.dom),
            "codomain": hdts_to_data(f.cod),
            "state_map": {dom_st[s]: cod_st[v] for s, v in f.smap},
            "action_map": {dom_ac[a]: cod_ac[v] for a, v in f.amap},
        }
    dom_tables = [_render_table(f.dom.cells_at(n))
                  for n in range(f.dom.dim + 1)]
    cod_tables = [_render_table(f.cod.cells_at(n))
                  for n in range(f.cod.dim + 1)]
    cmap: dict[str, dict] = {}
    for n in range(f.dom.dim + 1):
        cmap[str(n)] = {dom_tables[n][x]: cod_tables[n][f.on_cell(n, x)]
                        for x in f.dom.cells_at(n)}
    return {"type": "precub_map", "domain": precub_to_data(f.dom),
            "codomain": precub_to_data(f.cod), "cell_map": cmap}


def map_from_data(data: Mapping) -> HdtsMap | PrecubMap:
    if data.get("type") == "precub_map" or "cell_map" in data:
        dom = precub_from_data(data["domain"])
        cod = precub_from_data(data["codomain"])
        cmap = {(int(n), x): y for n, level in data["cell_map"].items()
                for x, y in level.items()}
        return make_precub_map(dom, cod, cmap)
    dom = hdts_from_data(data["domain"])
    cod = hdts_from_data(data["codomain"])
    return make_map(dom, cod, dict(data["state_map"]),
                    dict(data["action_map"]))


def detect_kind(data: Mapping) -> str:
    if "cell_map" in data or data.get("type") == "precub_map":
        return "precub_map"
    if "state_map" in data or data.get("type") == "hdts_map":
        return "hdts_map"
    if "cells" in data or "dim_bound" in data:
        return "precub"
    return "hdts"


def load_any(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    kind = detect_kind(data)
    if kind == "hdts":
        return hdts_from_data(data)
    if kind == "precub":
        return precub_from_data(data)
    return map_from_data(data)


def dump_json(obj, path: str | None = None) -> str:
    if isinstance(obj, WeakHdts):
        data = hdts_to_data(obj)
    elif isinstance(obj, LsPrecubSet):
        data = precub_to_data(obj)
    elif isinstance(obj, (HdtsMap, PrecubMap)):
        data = map_to_data(obj)
    else:
        data = obj
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def render_witness(w) -> Any:
    """JSON-friendly rendering of verdict witnesses."""
    if w is None:
        return None
    if isinstance(w, Transition):
        return {"from": _render_id(w.source),
                "actions": [_render_id(a) for a in w.actions],
                "to": _render_id(w.target)}
    if isinstance(w, (list, tuple)):
        return [render_witness(v) for v in w]
    if isinstance(w, (str, int)):
        return w
    return repr(w)


# ---------------------------------------------------------------------------
# DOT export of the 1-skeleton
# ---------------------------------------------------------------------------

def export_dot(obj: WeakHdts | LsPrecubSet, path: str | None = None) -> str:
    """Deterministic DOT of the 1-skeleton: states as nodes, 1-transitions
    (or 1-cells) as labelled edges, in canonical order."""
    lines = ["digraph g {", "  rankdir=LR;"]
    if isinstance(obj, WeakHdts):
        table = _render_table(obj.states)
        for s in obj.states:
            lines.append(f'  "{table[s]}";')
        edges = sorted(((table[t.source], table[t.target],
                         obj.label[t.actions[0]])
                        for t in obj.transitions_of_arity(1)))
        for src, dst, lab in edges:
            lines.append(f'  "{src}" -> "{dst}" [label="{lab}"];')
    else:
        table = _render_table(obj.cells_at(0))
        for v in obj.cells_at(0):
            lines.append(f'  "{table[v]}";')
        edges = sorted(((table[obj.d(1, 1, 0, e)], table[obj.d(1, 1, 1, e)],
                         obj.word(1, e)[0]) for e in obj.cells_at(1)))
        for src, dst, lab in edges:
            lines.append(f'  "{src}" -> "{dst}" [label="{lab}"];')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
