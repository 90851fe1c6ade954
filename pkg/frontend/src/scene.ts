/** Scene-json to three.js graph: one box per module, colored by
 * department. Pure scene-graph construction so it is testable headless;
 * the renderer and controls live in main.ts. */

import * as THREE from "three";
import { ScenePayload } from "./api";

export const SUPPORTED_SCHEMA_VERSION = 1;
const MM = 0.001; // scene units are meters, payload units millimeters

export class SchemaMismatch extends Error {
  constructor(readonly got: number) {
    super(`unsupported scene schema version ${got}`);
  }
}

/** Stable department color: hash the name onto the hue wheel. */
export function departmentColor(department: string): THREE.Color {
  let hash = 2166136261;
  for (let i = 0; i < department.length; i++) {
    hash = (hash ^ department.charCodeAt(i)) * 16777619;
    hash >>>= 0;
  }
  const hue = (hash % 360) / 360;
  return new THREE.Color().setHSL(hue, 0.55, 0.55);
}

export interface SceneGraph {
  group: THREE.Group;
  moduleCount: number;
  floors: number[];
  departments: Map<string, THREE.Color>;
}

export function buildSceneGraph(payload: ScenePayload): SceneGraph {
  if (payload.schema_version !== SUPPORTED_SCHEMA_VERSION) {
    throw new SchemaMismatch(payload.schema_version);
  }
  const group = new THREE.Group();
  const departments = new Map<string, THREE.Color>();
  const floors = new Set<number>();
  const materials = new Map<string, THREE.MeshLambertMaterial>();
  for (const module of payload.modules) {
    let material = materials.get(module.department);
    if (!material) {
      const color = departmentColor(module.department);
      departments.set(module.department, color);
      material = new THREE.MeshLambertMaterial({ color });
      materials.set(module.department, material);
    }
    const [w, d, h] = module.size;
    const geometry = new THREE.BoxGeometry(w * MM, h * MM, d * MM);
    const mesh = new THREE.Mesh(geometry, material);
    const [x, y, z] = module.origin;
    // payload origin is the min corner; three positions the box center.
    // y-up in the viewer, z-up in the payload.
    mesh.position.set((x + w / 2) * MM, (z + h / 2) * MM, (y + d / 2) * MM);
    mesh.userData = {
      room: module.room,
      department: module.department,
      floor: module.floor,
    };
    group.add(mesh);
    floors.add(module.floor);
  }
  return {
    group,
    moduleCount: payload.modules.length,
    floors: [...floors].sort((a, b) => a - b),
    departments,
  };
}

/** Show only one floor, or all floors when `floor` is null. */
export function isolateFloor(graph: SceneGraph, floor: number | null): void {
  for (const child of graph.group.children) {
    child.visible = floor === null || child.userData.floor === floor;
  }
}

export function visibleModuleCount(graph: SceneGraph): number {
  return graph.group.children.filter((c) => c.visible).length;
}
