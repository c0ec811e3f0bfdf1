/** The 16-color page palette, index-for-index with the extractor's. */
export const PALETTE: ReadonlyArray<readonly [number, number, number]> = [
  [255, 255, 255],
  [32, 32, 32],
  [232, 232, 232],
  [74, 144, 217],
  [46, 204, 113],
  [230, 126, 34],
  [236, 240, 241],
  [255, 249, 196],
  [155, 89, 182],
  [231, 76, 60],
  [26, 188, 156],
  [52, 73, 94],
  [245, 215, 110],
  [210, 180, 222],
  [163, 228, 215],
  [127, 140, 141],
];

export function cssColor(index: number): string {
  const rgb = PALETTE[index];
  if (rgb === undefined) throw new RangeError(`palette index out of range: ${index}`);
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

/** Raster cells to <rect> markup, one rect per same-color row run.
 *
 * The document's raster is the single source of pixels: nothing is
 * re-rendered, the runs just restate it as SVG.
 */
export function rasterRects(raster: readonly number[], width: number, height: number): string {
  if (raster.length !== width * height) {
    throw new RangeError(`raster has ${raster.length} cells, grid needs ${width * height}`);
  }
  const parts: string[] = [`<rect width="${width}" height="${height}" fill="${cssColor(0)}"/>`];
  for (let y = 0; y < height; y++) {
    let x = 0;
    while (x < width) {
      const color = raster[y * width + x];
      let run = 1;
      while (x + run < width && raster[y * width + x + run] === color) run++;
      if (color !== 0) {
        parts.push(
          `<rect x="${x}" y="${y}" width="${run}" height="1" fill="${cssColor(color)}"/>`
        );
      }
      x += run;
    }
  }
  return parts.join("");
}

export function rasterToSvg(raster: readonly number[], width: number, height: number): string {
  const body = rasterRects(raster, width, height);
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}"` +
    ` shape-rendering="crispEdges">${body}</svg>`
  );
}
