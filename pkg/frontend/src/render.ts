/** DOM layer: mounts the viewer shell and paints state into it.
 *
 * All markup is derived from the loaded document; a schema failure
 * clears every pane and shows the banner instead of a partial render.
 */

import { parseDocument } from "./schema.js";
import { rasterRects } from "./palette.js";
import {
  CANVAS_H,
  CANVAS_W,
  PANES,
  Pane,
  ViewState,
  activityCodeOf,
  callRows,
  componentRows,
  graphData,
  layoutCodeOf,
  loadDocument,
  selectActivity,
  setPane,
  stepSelection,
} from "./viewmodel.js";

const THUMB_W = 54;
const THUMB_H = 96;

const BADGE_COLORS: Record<string, string> = {
  Launched: "#2e7d32",
  Crashed: "#c62828",
  Unreachable: "#e65100",
};
const BADGE_STATIC = "#616161";

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function badgeColor(status: string | null): string {
  return status === null ? BADGE_STATIC : BADGE_COLORS[status] ?? BADGE_STATIC;
}

function badgeLetter(status: string | null): string {
  return status === null ? "S" : status.charAt(0);
}

const SHELL = `
<header class="bar">
  <strong>storyboard viewer</strong>
  <label class="pick">open storyboard JSON
    <input type="file" id="file-input" accept=".json,application/json">
  </label>
  <span id="meta"></span>
</header>
<div id="banner" hidden></div>
<nav id="tabs"></nav>
<main class="grid">
  <section id="pane-Graph" class="pane">
    <h2>Transition graph</h2>
    <div id="graph" tabindex="0"></div>
    <div class="legend">
      <svg width="330" height="22" aria-hidden="true">
        <line x1="4" y1="11" x2="40" y2="11" class="edge"></line>
        <text x="46" y="15">static</text>
        <line x1="92" y1="11" x2="128" y2="11" class="edge dashed"></line>
        <text x="134" y="15">dynamic</text>
        <circle cx="204" cy="11" r="7" fill="#2e7d32"></circle>
        <text x="215" y="15">launched</text>
        <circle cx="286" cy="11" r="7" fill="#c62828"></circle>
        <text x="297" y="15">crashed</text>
      </svg>
    </div>
  </section>
  <section id="pane-LayoutCode" class="pane">
    <h2>Layout code: <span class="which"></span></h2>
    <pre id="layout-code"></pre>
  </section>
  <section id="pane-ActivityCode" class="pane">
    <h2>Activity code: <span class="which"></span></h2>
    <pre id="activity-code"></pre>
  </section>
  <section id="pane-Components" class="pane">
    <h2>Components: <span class="which"></span></h2>
    <table id="components-table">
      <thead>
        <tr><th>id</th><th>type</th><th>label</th><th>size</th><th>clickable</th></tr>
      </thead>
      <tbody></tbody>
    </table>
  </section>
  <section id="pane-CallHierarchy" class="pane">
    <h2>Call hierarchy: <span class="which"></span></h2>
    <ul id="call-list"></ul>
  </section>
</main>
`;

export class Viewer {
  private root: HTMLElement;
  private state: ViewState | null = null;

  constructor(root: HTMLElement) {
    this.root = root;
    root.innerHTML = SHELL;
    this.renderTabs();
    const graph = this.el("#graph");
    graph.addEventListener("keydown", (event) => {
      const key = (event as KeyboardEvent).key;
      if (key === "ArrowRight") this.step(1);
      if (key === "ArrowLeft") this.step(-1);
    });
  }

  get current(): ViewState | null {
    return this.state;
  }

  loadText(text: string): void {
    let next: ViewState;
    try {
      next = loadDocument(parseDocument(text));
    } catch (err) {
      this.state = null;
      this.clear();
      this.showBanner((err as Error).message);
      return;
    }
    this.state = next;
    this.hideBanner();
    this.renderAll();
  }

  select(activity: string): void {
    if (this.state === null) return;
    this.state = selectActivity(this.state, activity);
    this.renderDetails();
    this.markSelection();
  }

  step(delta: 1 | -1): void {
    if (this.state === null) return;
    this.state = stepSelection(this.state, delta);
    this.renderDetails();
    this.markSelection();
  }

  activatePane(pane: Pane): void {
    if (this.state !== null) this.state = setPane(this.state, pane);
    for (const name of PANES) {
      this.el(`#pane-${name}`).classList.toggle("active", name === pane);
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("#tabs button")) {
      button.classList.toggle("active", button.dataset.pane === pane);
    }
  }

  private el<T extends HTMLElement = HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (found === null) throw new Error(`viewer shell is missing ${selector}`);
    return found;
  }

  private renderTabs(): void {
    const tabs = this.el("#tabs");
    tabs.innerHTML = PANES.map(
      (pane) => `<button type="button" data-pane="${pane}">${pane}</button>`
    ).join("");
    for (const button of tabs.querySelectorAll<HTMLButtonElement>("button")) {
      button.addEventListener("click", () => this.activatePane(button.dataset.pane as Pane));
    }
    this.activatePane("Graph");
  }

  private showBanner(message: string): void {
    const banner = this.el("#banner");
    banner.textContent = `cannot load storyboard: ${message}`;
    banner.hidden = false;
  }

  private hideBanner(): void {
    const banner = this.el("#banner");
    banner.textContent = "";
    banner.hidden = true;
  }

  private clear(): void {
    this.el("#graph").innerHTML = "";
    this.el("#meta").textContent = "";
    this.el("#layout-code").textContent = "";
    this.el("#activity-code").textContent = "";
    this.el("#components-table tbody").innerHTML = "";
    this.el("#call-list").innerHTML = "";
    for (const which of this.root.querySelectorAll(".which")) which.textContent = "";
  }

  private renderAll(): void {
    this.renderMeta();
    this.renderGraph();
    this.renderDetails();
    this.markSelection();
  }

  private renderMeta(): void {
    if (this.state === null) return;
    const doc = this.state.doc;
    const m = doc.metrics;
    const bits = [
      `${doc.app.package_id} rev ${doc.app.revision}`,
      `${m.transition_pairs} pairs`,
      `coverage ${(m.activity_coverage * 100).toFixed(0)}%`,
    ];
    if (m.launch_ratio !== null) bits.push(`launch ratio ${(m.launch_ratio * 100).toFixed(0)}%`);
    this.el("#meta").textContent = bits.join(" · ");
  }

  private renderGraph(): void {
    if (this.state === null) return;
    const { nodes, edges } = graphData(this.state.doc);
    const byName = new Map(nodes.map((n) => [n.name, n]));
    const parts: string[] = [];
    parts.push(
      `<svg viewBox="0 0 ${CANVAS_W} ${CANVAS_H}" xmlns="http://www.w3.org/2000/svg">`,
      `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7"` +
        ` markerHeight="7" orient="auto-start-reverse">` +
        `<path d="M 0 0 L 10 5 L 0 10 z" fill="#455a64"/></marker></defs>`
    );
    for (const edge of edges) {
      const a = byName.get(edge.source);
      const b = byName.get(edge.target);
      if (a === undefined || b === undefined) continue;
      const cls = edge.dashed ? "edge dashed" : "edge";
      const title = `<title>${escapeXml(
        `${edge.source} to ${edge.target} [${edge.origin},${edge.via}]`
      )}</title>`;
      if (edge.selfLoop) {
        const x = a.x;
        const y = a.y - THUMB_H / 2;
        parts.push(
          `<path class="${cls}" marker-end="url(#arrow)" fill="none" ` +
            `d="M ${x - 14} ${y} C ${x - 34} ${y - 46}, ${x + 34} ${y - 46}, ${x + 14} ${y - 4}">` +
            `${title}</path>`
        );
        continue;
      }
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const length = Math.hypot(dx, dy) || 1;
      const trimA = 58 / length;
      const trimB = 64 / length;
      const x1 = a.x + dx * trimA;
      const y1 = a.y + dy * trimA;
      const x2 = b.x - dx * trimB;
      const y2 = b.y - dy * trimB;
      parts.push(
        `<line class="${cls}" marker-end="url(#arrow)" x1="${x1.toFixed(1)}" y1="${y1.toFixed(
          1
        )}" x2="${x2.toFixed(1)}" y2="${y2.toFixed(1)}">${title}</line>`
      );
    }
    for (const node of nodes) {
      const left = node.x - THUMB_W / 2;
      const top = node.y - THUMB_H / 2;
      const name = escapeXml(node.name);
      const inner =
        node.page === null
          ? `<rect x="${left}" y="${top}" width="${THUMB_W}" height="${THUMB_H}"` +
            ` fill="#eceff1"/><text class="placeholder" x="${node.x}" y="${node.y}"` +
            ` text-anchor="middle">no page</text>`
          : `<svg x="${left}" y="${top}" width="${THUMB_W}" height="${THUMB_H}"` +
            ` viewBox="0 0 ${node.page.width} ${node.page.height}"` +
            ` shape-rendering="crispEdges">` +
            rasterRects(node.page.raster, node.page.width, node.page.height) +
            `</svg>`;
      const badgeTitle = node.status === null ? "static analysis only" : node.status;
      parts.push(
        `<g class="node" data-activity="${name}" data-selectable="${node.isActivity}">` +
          `<title>${name}${node.cause ? escapeXml(` (${node.cause})`) : ""}</title>` +
          inner +
          `<rect class="frame" x="${left}" y="${top}" width="${THUMB_W}"` +
          ` height="${THUMB_H}" fill="none"/>` +
          `<circle class="badge" cx="${left + THUMB_W}" cy="${top}" r="9"` +
          ` fill="${badgeColor(node.status)}"><title>${escapeXml(badgeTitle)}</title></circle>` +
          `<text class="badge-letter" x="${left + THUMB_W}" y="${top + 4}"` +
          ` text-anchor="middle">${badgeLetter(node.status)}</text>` +
          `<text class="name" x="${node.x}" y="${top + THUMB_H + 16}"` +
          ` text-anchor="middle">${name}</text>` +
          `</g>`
      );
    }
    parts.push("</svg>");
    const graph = this.el("#graph");
    graph.innerHTML = parts.join("");
    for (const g of graph.querySelectorAll<SVGGElement>("g.node")) {
      g.addEventListener("click", () => {
        if (g.dataset.selectable === "true") this.select(g.dataset.activity ?? "");
      });
    }
  }

  private renderDetails(): void {
    if (this.state === null) return;
    const { doc, selected } = this.state;
    for (const which of this.root.querySelectorAll(".which")) which.textContent = selected;
    this.el("#layout-code").textContent = layoutCodeOf(doc, selected);
    this.el("#activity-code").textContent = activityCodeOf(doc, selected);

    const tbody = this.el("#components-table tbody");
    tbody.innerHTML = "";
    for (const row of componentRows(doc, selected)) {
      const tr = document.createElement("tr");
      for (const cell of [row.id, row.type, row.label, row.size, row.clickable ? "yes" : ""]) {
        const td = document.createElement("td");
        td.textContent = cell;
        tr.appendChild(td);
      }
      tbody.appendChild(tr);
    }

    const list = this.el("#call-list");
    list.innerHTML = "";
    const edges = callRows(doc, selected);
    if (edges.length === 0) {
      const li = document.createElement("li");
      li.className = "empty";
      li.textContent = "(no outgoing calls)";
      list.appendChild(li);
    }
    for (const [caller, callee] of edges) {
      const li = document.createElement("li");
      li.textContent = `${caller} → ${callee}`;
      list.appendChild(li);
    }
  }

  private markSelection(): void {
    if (this.state === null) return;
    for (const g of this.root.querySelectorAll<SVGGElement>("g.node")) {
      g.classList.toggle("selected", g.dataset.activity === this.state.selected);
    }
  }
}

export function mountViewer(root: HTMLElement): Viewer {
  return new Viewer(root);
}
