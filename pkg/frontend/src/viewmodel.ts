/** Pure view logic: selection state and derived pane data.
 *
 * Everything here reads the loaded document and returns fresh values;
 * no function mutates the document or the previous state.
 */

import type { PageDoc, StoryboardDoc } from "./types.js";

export const PANES = [
  "Graph",
  "LayoutCode",
  "ActivityCode",
  "Components",
  "CallHierarchy",
] as const;

export type Pane = (typeof PANES)[number];

export interface ViewState {
  doc: StoryboardDoc;
  selected: string;
  activePane: Pane;
}

export interface GraphNode {
  name: string;
  x: number;
  y: number;
  status: string | null;
  cause: string | null;
  page: PageDoc | null;
  isActivity: boolean;
}

export interface GraphEdge {
  source: string;
  target: string;
  origin: string;
  via: string;
  dashed: boolean;
  selfLoop: boolean;
}

export interface ComponentRow {
  id: string;
  type: string;
  label: string;
  size: string;
  clickable: boolean;
}

export const CANVAS_W = 1000;
export const CANVAS_H = 680;

export function activityNames(doc: StoryboardDoc): string[] {
  return Object.keys(doc.activity_code);
}

export function loadDocument(doc: StoryboardDoc): ViewState {
  const names = activityNames(doc);
  if (names.length === 0) throw new RangeError("document declares no activities");
  return { doc, selected: names[0], activePane: "Graph" };
}

export function selectActivity(state: ViewState, activity: string): ViewState {
  if (!(activity in state.doc.activity_code)) {
    throw new RangeError(`unknown activity: ${activity}`);
  }
  return { ...state, selected: activity };
}

export function setPane(state: ViewState, pane: Pane): ViewState {
  return { ...state, activePane: pane };
}

export function statusOf(doc: StoryboardDoc, name: string): string | null {
  const outcome = doc.outcomes[name];
  return outcome ? outcome.status : null;
}

export function graphData(doc: StoryboardDoc): { nodes: GraphNode[]; edges: GraphEdge[] } {
  const names = activityNames(doc);
  const known = new Set(names);
  const extras: string[] = [];
  for (const pair of doc.atg.pairs) {
    for (const endpoint of [pair.source, pair.target]) {
      if (!known.has(endpoint) && !extras.includes(endpoint)) extras.push(endpoint);
    }
  }
  const all = [...names, ...extras];
  const cx = CANVAS_W / 2;
  const cy = CANVAS_H / 2;
  const rx = CANVAS_W * 0.37;
  const ry = CANVAS_H * 0.33;
  const nodes = all.map((name, i) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / all.length;
    const outcome = doc.outcomes[name];
    return {
      name,
      x: Math.round(cx + rx * Math.cos(angle)),
      y: Math.round(cy + ry * Math.sin(angle)),
      status: outcome ? outcome.status : null,
      cause: outcome ? outcome.cause : null,
      page: doc.pages[name] ?? null,
      isActivity: known.has(name),
    };
  });
  const edges = doc.atg.pairs.map((pair) => ({
    source: pair.source,
    target: pair.target,
    origin: pair.origin,
    via: pair.via,
    dashed: pair.origin === "Dynamic",
    selfLoop: pair.source === pair.target,
  }));
  return { nodes, edges };
}

export function componentRows(doc: StoryboardDoc, activity: string): ComponentRow[] {
  const rows = doc.components[activity] ?? [];
  return rows.map((c) => ({
    id: c.node_id,
    type: c.node_type,
    label: c.label,
    size: `${c.bounds[2]}×${c.bounds[3]}`,
    clickable: c.clickable,
  }));
}

export function callRows(doc: StoryboardDoc, activity: string): [string, string][] {
  return doc.call_hierarchy[activity] ?? [];
}

export function layoutCodeOf(doc: StoryboardDoc, activity: string): string {
  return doc.layout_code[activity] ?? "";
}

export function activityCodeOf(doc: StoryboardDoc, activity: string): string {
  return doc.activity_code[activity] ?? "";
}

/** The next/previous activity in graph order, for keyboard navigation. */
export function stepSelection(state: ViewState, delta: 1 | -1): ViewState {
  const names = activityNames(state.doc);
  const index = names.indexOf(state.selected);
  const next = names[(index + delta + names.length) % names.length];
  return selectActivity(state, next);
}
