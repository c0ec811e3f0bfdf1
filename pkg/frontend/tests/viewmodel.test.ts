import { describe, expect, it } from "vitest";

import { parseDocument } from "../src/schema.js";
import {
  activityNames,
  callRows,
  componentRows,
  graphData,
  layoutCodeOf,
  loadDocument,
  selectActivity,
  setPane,
  statusOf,
  stepSelection,
} from "../src/viewmodel.js";
import { fixtureText } from "./helpers.js";

const vespucci = parseDocument(fixtureText("vespucci-mini.storyboard.json"));
const clickOnly = parseDocument(fixtureText("click-only-mini.storyboard.json"));
const ratio = parseDocument(fixtureText("ratio-mini.storyboard.json"));

describe("loadDocument", () => {
  it("starts on the graph pane with a real selection", () => {
    const state = loadDocument(vespucci);
    expect(state.activePane).toBe("Graph");
    expect(activityNames(vespucci)).toContain(state.selected);
  });
});

describe("graphData", () => {
  it("lays out one node per activity and one edge per pair", () => {
    const { nodes, edges } = graphData(vespucci);
    expect(nodes).toHaveLength(4);
    expect(edges).toHaveLength(2);
    expect(nodes.every((n) => n.page !== null)).toBe(true);
    expect(nodes.every((n) => n.status === "Launched")).toBe(true);
    expect(edges.every((e) => !e.dashed && e.origin === "Static")).toBe(true);
  });

  it("marks dynamic edges as dashed", () => {
    const { nodes, edges } = graphData(clickOnly);
    expect(nodes).toHaveLength(2);
    expect(edges).toEqual([
      {
        source: "Main",
        target: "HiddenDetail",
        origin: "Dynamic",
        via: "Component:btn_secret",
        dashed: true,
        selfLoop: false,
      },
    ]);
  });

  it("gives crashed activities a placeholder instead of a page", () => {
    const { nodes } = graphData(ratio);
    expect(nodes).toHaveLength(10);
    const crashed = nodes.filter((n) => n.status === "Crashed");
    expect(crashed.length).toBe(2);
    expect(crashed.every((n) => n.page === null)).toBe(true);
    expect(statusOf(ratio, "LegacyPay")).toBe("Crashed");
  });

  it("positions every node inside the canvas", () => {
    for (const doc of [vespucci, ratio]) {
      for (const node of graphData(doc).nodes) {
        expect(node.x).toBeGreaterThan(0);
        expect(node.y).toBeGreaterThan(0);
        expect(node.x).toBeLessThan(1000);
        expect(node.y).toBeLessThan(680);
      }
    }
  });
});

describe("selection", () => {
  it("selects only known activities", () => {
    const state = loadDocument(vespucci);
    expect(selectActivity(state, "PrefEditor").selected).toBe("PrefEditor");
    expect(() => selectActivity(state, "Ghost")).toThrowError(/unknown activity/);
  });

  it("steps through activities with wraparound", () => {
    const names = activityNames(vespucci);
    let state = loadDocument(vespucci);
    for (let i = 0; i < names.length; i++) {
      expect(state.selected).toBe(names[i]);
      state = stepSelection(state, 1);
    }
    expect(state.selected).toBe(names[0]);
    expect(stepSelection(state, -1).selected).toBe(names[names.length - 1]);
  });

  it("tracks the active pane", () => {
    const state = setPane(loadDocument(vespucci), "Components");
    expect(state.activePane).toBe("Components");
  });
});

describe("pane data", () => {
  it("shows component label and size attributes", () => {
    const rows = componentRows(vespucci, "Main");
    expect(rows.length).toBeGreaterThan(0);
    expect(rows.map((r) => r.id)).toContain("PrefsFragment:btn_prefs");
    for (const row of rows) {
      expect(row.size).toMatch(/^\d+×\d+$/);
      expect(typeof row.label).toBe("string");
      expect(typeof row.clickable).toBe("boolean");
    }
  });

  it("provides code and call slices for every activity", () => {
    for (const name of activityNames(vespucci)) {
      expect(layoutCodeOf(vespucci, name).startsWith("layout ")).toBe(true);
      expect(vespucci.activity_code[name]).toContain(`unit ${name} `);
      expect(Array.isArray(callRows(vespucci, name))).toBe(true);
    }
  });
});

describe("read-only contract", () => {
  it("never mutates the loaded document", () => {
    const before = JSON.stringify(vespucci);
    const state = loadDocument(vespucci);
    graphData(vespucci);
    componentRows(vespucci, "Main");
    callRows(vespucci, "Main");
    stepSelection(selectActivity(state, "PrefEditor"), 1);
    expect(JSON.stringify(vespucci)).toBe(before);
  });
});
