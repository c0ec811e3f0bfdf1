import { describe, expect, it } from "vitest";

import { PALETTE, cssColor, rasterRects, rasterToSvg } from "../src/palette.js";

describe("palette", () => {
  it("has sixteen colors anchored by white and the accent blue", () => {
    expect(PALETTE).toHaveLength(16);
    expect(cssColor(0)).toBe("rgb(255,255,255)");
    expect(cssColor(3)).toBe("rgb(74,144,217)");
  });

  it("rejects out-of-range indices", () => {
    expect(() => cssColor(16)).toThrowError(RangeError);
  });
});

describe("rasterRects", () => {
  it("emits one rect per same-color run, skipping the background", () => {
    const markup = rasterRects([0, 3, 4, 4], 2, 2);
    expect(markup).toContain('<rect width="2" height="2" fill="rgb(255,255,255)"/>');
    expect(markup).toContain('<rect x="1" y="0" width="1" height="1" fill="rgb(74,144,217)"/>');
    expect(markup).toContain('<rect x="0" y="1" width="2" height="1" fill="rgb(46,204,113)"/>');
    expect(markup.match(/<rect/g)).toHaveLength(3);
  });

  it("rejects a raster that does not fill the grid", () => {
    expect(() => rasterRects([0, 1, 2], 2, 2)).toThrowError(RangeError);
  });

  it("rejects cells outside the palette", () => {
    expect(() => rasterRects([16], 1, 1)).toThrowError(RangeError);
  });
});

describe("rasterToSvg", () => {
  it("wraps the runs in a standalone svg with the grid viewBox", () => {
    const svg = rasterToSvg([0, 3, 4, 4], 2, 2);
    expect(svg).toMatch(/^<svg /);
    expect(svg).toContain('viewBox="0 0 2 2"');
    expect(svg).toContain("rgb(46,204,113)");
  });
});
