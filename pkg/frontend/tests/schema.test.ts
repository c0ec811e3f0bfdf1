import { describe, expect, it } from "vitest";

import { SchemaError, parseDocument } from "../src/schema.js";
import { fixtureText } from "./helpers.js";

const GOOD = fixtureText("vespucci-mini.storyboard.json");

function tampered(mutate: (doc: any) => void): string {
  const doc = JSON.parse(GOOD);
  mutate(doc);
  return JSON.stringify(doc);
}

describe("parseDocument", () => {
  it("accepts a well-formed document", () => {
    const doc = parseDocument(GOOD);
    expect(Object.keys(doc.activity_code)).toHaveLength(4);
    expect(doc.app.package_id).toBe("org.vespucci.mini");
    expect(doc.atg.pairs).toHaveLength(2);
  });

  it("rejects a foreign schema version", () => {
    const bad = fixtureText("bad-schema.storyboard.json");
    expect(() => parseDocument(bad)).toThrowError(SchemaError);
    expect(() => parseDocument(bad)).toThrowError(/schema_version/);
  });

  it("rejects text that is not JSON", () => {
    expect(() => parseDocument("{oops")).toThrowError(/not a JSON document/);
  });

  it("rejects a missing schema version outright", () => {
    expect(() => parseDocument(tampered((d) => delete d.schema_version))).toThrowError(
      /schema_version/
    );
  });

  it("requires layout code for every activity", () => {
    const bad = tampered((d) => delete d.layout_code.Main);
    expect(() => parseDocument(bad)).toThrowError(/layout_code\.Main/);
  });

  it("rejects a raster that disagrees with its grid size", () => {
    const bad = tampered((d) => d.pages.Main.raster.pop());
    expect(() => parseDocument(bad)).toThrowError(/pages\.Main\.raster/);
  });

  it("rejects out-of-palette raster cells", () => {
    const bad = tampered((d) => (d.pages.Main.raster[0] = 16));
    expect(() => parseDocument(bad)).toThrowError(/palette index/);
  });

  it("rejects malformed transition pairs", () => {
    const bad = tampered((d) => (d.atg.pairs[0].source = 7));
    expect(() => parseDocument(bad)).toThrowError(/atg\.pairs\[0\]\.source/);
  });

  it("rejects pages keyed by unknown activities", () => {
    const bad = tampered((d) => {
      d.pages.Ghost = d.pages.Main;
    });
    expect(() => parseDocument(bad)).toThrowError(/pages\.Ghost/);
  });

  it("accepts a null launch ratio", () => {
    const doc = parseDocument(tampered((d) => (d.metrics.launch_ratio = null)));
    expect(doc.metrics.launch_ratio).toBeNull();
  });
});
