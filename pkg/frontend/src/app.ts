/** Boot: mount the viewer and wire file picking plus drag-and-drop. */

import { mountViewer } from "./render.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");
const viewer = mountViewer(root);

const input = root.querySelector<HTMLInputElement>("#file-input");
input?.addEventListener("change", () => {
  const file = input.files?.[0];
  if (file) void file.text().then((text) => viewer.loadText(text));
});

document.addEventListener("dragover", (event) => event.preventDefault());
document.addEventListener("drop", (event) => {
  event.preventDefault();
  const file = event.dataTransfer?.files?.[0];
  if (file) void file.text().then((text) => viewer.loadText(text));
});
