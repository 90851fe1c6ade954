"""Scene synthesis and export.

Every allocated cell becomes one box module; a room is the set of modules
sharing its key.  Exports are byte-deterministic: scene-json with sorted
keys, OBJ with fixed vertex/face ordering.
"""

from __future__ import annotations

import json

from .model import SceneModel, SceneModule, UnsupportedFormat

SCENE_SCHEMA_VERSION = 1


def synthesize_scene(floors, unallocated, params, metadata: dict) -> SceneModel:
    modules = []
    for floor in floors:
        z = floor.index * params.floor_height
        for placement in floor.allocated:
            for cell in placement.cells:
                xs = [c[0] for c in cell.corners]
                ys = [c[1] for c in cell.corners]
                modules.append(SceneModule(
                    origin=(min(xs), min(ys), z),
                    size=(max(xs) - min(xs), max(ys) - min(ys), params.floor_height),
                    room=placement.room.key,
                    department=placement.room.department,
                    floor=floor.index,
                ))
    floor_summaries = [
        {
            "index": f.index,
            "usable_area": round(f.usable_area, 3),
            "capacity": f.capacity,
            "allocated_modules": f.allocated_modules,
        }
        for f in floors
    ]
    leftover = [
        {
            "room": r.key,
            "department": r.department,
            "unit_area": round(r.unit_area, 3),
            "priority": r.priority,
            "modules": r.modules,
        }
        for r in unallocated
    ]
    return SceneModel(floors=floor_summaries, modules=modules,
                      unallocated=leftover, metadata=dict(metadata))


def scene_to_jsonable(scene: SceneModel) -> dict:
    return {
        "schema_version": SCENE_SCHEMA_VERSION,
        "floors": scene.floors,
        "modules": [
            {
                "origin": [round(v, 3) for v in m.origin],
                "size": [round(v, 3) for v in m.size],
                "room": m.room,
                "department": m.department,
                "floor": m.floor,
            }
            for m in scene.modules
        ],
        "unallocated": scene.unallocated,
        "metadata": scene.metadata,
    }


def scene_from_jsonable(doc: dict) -> SceneModel:
    if doc.get("schema_version") != SCENE_SCHEMA_VERSION:
        raise UnsupportedFormat(
            f"unsupported scene schema version {doc.get('schema_version')!r}")
    modules = [
        SceneModule(
            origin=tuple(m["origin"]),
            size=tuple(m["size"]),
            room=m["room"],
            department=m["department"],
            floor=m["floor"],
        )
        for m in doc["modules"]
    ]
    return SceneModel(floors=doc["floors"], modules=modules,
                      unallocated=doc["unallocated"], metadata=doc["metadata"])


def _obj_bytes(scene: SceneModel) -> bytes:
    lines = ["# modular massing model, millimeter units"]
    # box face template over vertex offsets 1..8 (min corner first, then
    # +x, +y, +xy, and the same four lifted by +z)
    faces = (
        (1, 3, 4), (1, 4, 2),  # bottom
        (5, 6, 8), (5, 8, 7),  # top
        (1, 2, 6), (1, 6, 5),  # front
        (3, 7, 8), (3, 8, 4),  # back
        (1, 5, 7), (1, 7, 3),  # left
        (2, 4, 8), (2, 8, 6),  # right
    )
    base = 0
    current_room = None
    for m in scene.modules:
        if m.room != current_room:
            lines.append(f"g {m.room.replace(' ', '_')}")
            current_room = m.room
        x, y, z = m.origin
        w, d, h = m.size
        for dz in (0, h):
            for dy in (0, d):
                for dx in (0, w):
                    lines.append(f"v {x + dx:.3f} {y + dy:.3f} {z + dz:.3f}")
        for a, b, c in faces:
            lines.append(f"f {base + a} {base + b} {base + c}")
        base += 8
    return ("\n".join(lines) + "\n").encode()


def export_scene(scene: SceneModel, format: str = "scene-json") -> bytes:
    if format == "scene-json":
        doc = scene_to_jsonable(scene)
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()
    if format == "obj":
        return _obj_bytes(scene)
    raise UnsupportedFormat(f"unknown export format {format!r}")
