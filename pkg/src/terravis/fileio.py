"""Instance and map file formats (JSON, shortest-round-trip floats).

Serialization is deterministic: sorted keys and repr-based float formatting,
so identical inputs produce byte-identical files and values survive the
round trip exactly.
"""

from __future__ import annotations

import json
from typing import Any, Optional, Tuple

from .errors import ParseError
from .geometry import Terrain, ViewpointSet, make_viewpoints, validate_terrain
from .intervals import IntervalMap


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def instance_to_text(terrain: Terrain, viewpoints: ViewpointSet,
                     metadata: Optional[dict] = None) -> str:
    payload: dict = {
        "vertices": [[x, y] for x, y in terrain.vertices],
        "viewpoints": list(viewpoints),
    }
    if metadata:
        payload["metadata"] = metadata
    return _dump(payload)


def write_instance(path: str, terrain: Terrain, viewpoints: ViewpointSet,
                   metadata: Optional[dict] = None) -> None:
    with open(path, "w") as fh:
        fh.write(instance_to_text(terrain, viewpoints, metadata))


def read_instance(path: str) -> Tuple[Terrain, ViewpointSet, dict]:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read instance file {path}: {exc}") from exc
    if not isinstance(payload, dict) or "vertices" not in payload \
            or "viewpoints" not in payload:
        raise ParseError(f"{path}: instance file needs 'vertices' and 'viewpoints'")
    try:
        vertices = [(float(v[0]), float(v[1])) for v in payload["vertices"]]
        vp = [int(i) for i in payload["viewpoints"]]
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{path}: malformed vertices or viewpoints") from exc
    terrain = validate_terrain(vertices)
    return terrain, make_viewpoints(terrain, vp), payload.get("metadata", {})


def _label_payload(kind: str, label: Any) -> dict:
    if kind == "vis":
        return {"visible": bool(label)}
    if kind in ("colvis", "kvorvis"):
        return {"viewpoints": sorted(label)}
    return {"owner": label}


def map_to_text(imap: IntervalMap, kind: str, instance_ref: str,
                metric: str = "euclidean", mode: str = "both",
                k: Optional[int] = None) -> str:
    payload = {
        "instance": instance_ref,
        "map": kind,
        "metric": metric,
        "mode": mode,
        "k": k,
        "intervals": [
            dict(interval=[left.x, right.x], **_label_payload(kind, label))
            for left, right, label in imap.intervals()
        ],
    }
    return _dump(payload)


def write_map(path: str, imap: IntervalMap, kind: str, instance_ref: str,
              metric: str = "euclidean", mode: str = "both",
              k: Optional[int] = None) -> None:
    with open(path, "w") as fh:
        fh.write(map_to_text(imap, kind, instance_ref, metric, mode, k))


def read_map(path: str) -> dict:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read map file {path}: {exc}") from exc
    for field in ("instance", "map", "metric", "mode", "intervals"):
        if not isinstance(payload, dict) or field not in payload:
            raise ParseError(f"{path}: map file missing field {field!r}")
    return payload


def map_labels_from_payload(payload: dict) -> list:
    """(x_left, x_right, label) triples from a parsed map file."""
    kind = payload["map"]
    out = []
    try:
        for item in payload["intervals"]:
            xl, xr = float(item["interval"][0]), float(item["interval"][1])
            if kind == "vis":
                label: Any = bool(item["visible"])
            elif kind in ("colvis", "kvorvis"):
                label = frozenset(int(v) for v in item["viewpoints"])
            else:
                label = item["owner"]
                label = None if label is None else int(label)
            out.append((xl, xr, label))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed interval entry: {exc}") from exc
    return out
