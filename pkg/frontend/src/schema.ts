/** Structural validation of storyboard JSON before anything renders.
 *
 * parseDocument either returns a fully checked document or throws a
 * SchemaError naming the offending path, so a bad file can never leave
 * the viewer half-populated.
 */

import type { ComponentDoc, StoryboardDoc } from "./types.js";

export const SCHEMA_VERSION = "1";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

function fail(path: string, want: string): never {
  throw new SchemaError(`${path}: expected ${want}`);
}

function asObject(value: unknown, path: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(path, "an object");
  }
  return value as Record<string, unknown>;
}

function asArray(value: unknown, path: string): unknown[] {
  if (!Array.isArray(value)) fail(path, "an array");
  return value;
}

function asString(value: unknown, path: string): string {
  if (typeof value !== "string") fail(path, "a string");
  return value;
}

function asNumber(value: unknown, path: string): number {
  if (typeof value !== "number" || Number.isNaN(value)) fail(path, "a number");
  return value;
}

function asBoolean(value: unknown, path: string): boolean {
  if (typeof value !== "boolean") fail(path, "a boolean");
  return value;
}

function asStringMap(value: unknown, path: string): Record<string, string> {
  const obj = asObject(value, path);
  for (const [key, entry] of Object.entries(obj)) {
    asString(entry, `${path}.${key}`);
  }
  return obj as Record<string, string>;
}

function checkComponent(value: unknown, path: string): ComponentDoc {
  const comp = asObject(value, path);
  asString(comp["node_id"], `${path}.node_id`);
  asString(comp["node_type"], `${path}.node_type`);
  asBoolean(comp["clickable"], `${path}.clickable`);
  const bounds = asArray(comp["bounds"], `${path}.bounds`);
  if (bounds.length !== 4) fail(`${path}.bounds`, "four numbers");
  bounds.forEach((v, i) => asNumber(v, `${path}.bounds[${i}]`));
  asString(comp["label"], `${path}.label`);
  return comp as unknown as ComponentDoc;
}

export function parseDocument(text: string): StoryboardDoc {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`not a JSON document: ${(err as Error).message}`);
  }
  const doc = asObject(raw, "document");

  const version = doc["schema_version"];
  if (version !== SCHEMA_VERSION) {
    throw new SchemaError(`unsupported schema_version: ${JSON.stringify(version ?? null)}`);
  }

  const app = asObject(doc["app"], "app");
  asString(app["package_id"], "app.package_id");
  asNumber(app["revision"], "app.revision");

  const activityCode = asStringMap(doc["activity_code"], "activity_code");
  const names = new Set(Object.keys(activityCode));
  const layoutCode = asStringMap(doc["layout_code"], "layout_code");
  for (const name of names) {
    if (!(name in layoutCode)) fail(`layout_code.${name}`, "layout text for every activity");
  }

  const atg = asObject(doc["atg"], "atg");
  asNumber(atg["dropped_fragment_edges"], "atg.dropped_fragment_edges");
  asArray(atg["diagnostics"], "atg.diagnostics").forEach((d, i) =>
    asString(d, `atg.diagnostics[${i}]`)
  );
  asArray(atg["pairs"], "atg.pairs").forEach((entry, i) => {
    const pair = asObject(entry, `atg.pairs[${i}]`);
    for (const key of ["source", "target", "origin", "via"]) {
      asString(pair[key], `atg.pairs[${i}].${key}`);
    }
  });

  const pages = asObject(doc["pages"], "pages");
  for (const [name, value] of Object.entries(pages)) {
    const path = `pages.${name}`;
    if (!names.has(name)) fail(path, "a declared activity as key");
    const page = asObject(value, path);
    asString(page["activity"], `${path}.activity`);
    const width = asNumber(page["width"], `${path}.width`);
    const height = asNumber(page["height"], `${path}.height`);
    const raster = asArray(page["raster"], `${path}.raster`);
    if (raster.length !== width * height) {
      fail(`${path}.raster`, `${width * height} cells`);
    }
    raster.forEach((cell, i) => {
      const v = asNumber(cell, `${path}.raster[${i}]`);
      if (!Number.isInteger(v) || v < 0 || v > 15) fail(`${path}.raster[${i}]`, "a palette index");
    });
    asArray(page["components"], `${path}.components`).forEach((c, i) =>
      checkComponent(c, `${path}.components[${i}]`)
    );
  }

  const componentMap = asObject(doc["components"], "components");
  for (const [name, rows] of Object.entries(componentMap)) {
    asArray(rows, `components.${name}`).forEach((c, i) =>
      checkComponent(c, `components.${name}[${i}]`)
    );
  }

  const calls = asObject(doc["call_hierarchy"], "call_hierarchy");
  for (const [name, edges] of Object.entries(calls)) {
    asArray(edges, `call_hierarchy.${name}`).forEach((edge, i) => {
      const pair = asArray(edge, `call_hierarchy.${name}[${i}]`);
      if (pair.length !== 2) fail(`call_hierarchy.${name}[${i}]`, "a caller/callee pair");
      pair.forEach((m, j) => asString(m, `call_hierarchy.${name}[${i}][${j}]`));
    });
  }

  const metrics = asObject(doc["metrics"], "metrics");
  asNumber(metrics["transition_pairs"], "metrics.transition_pairs");
  asNumber(metrics["activity_coverage"], "metrics.activity_coverage");
  if (metrics["launch_ratio"] !== null) {
    asNumber(metrics["launch_ratio"], "metrics.launch_ratio");
  }

  const outcomes = asObject(doc["outcomes"], "outcomes");
  for (const [name, value] of Object.entries(outcomes)) {
    const outcome = asObject(value, `outcomes.${name}`);
    asString(outcome["status"], `outcomes.${name}.status`);
    if (outcome["cause"] !== null) asString(outcome["cause"], `outcomes.${name}.cause`);
  }

  asObject(doc["icc"], "icc");
  const timings = asObject(doc["timings"], "timings");
  for (const [key, value] of Object.entries(timings)) {
    asNumber(value, `timings.${key}`);
  }

  return doc as unknown as StoryboardDoc;
}
