import { describe, expect, it } from "vitest";

import { colorFor } from "../src/color.js";

describe("activity colors", () => {
  it("is pure and stable across calls", () => {
    expect(colorFor("Create Fine")).toBe(colorFor("Create Fine"));
    expect(colorFor("")).toBe(colorFor(""));
  });

  it("is total over arbitrary names and yields valid hsl", () => {
    for (const name of ["a", "Send Fine", "äöü", "x".repeat(500), "🙂"]) {
      expect(colorFor(name)).toMatch(/^hsl\(\d{1,3}, \d{2}%, \d{2}%\)$/);
    }
  });

  it("spreads distinct names across distinct colors (mostly)", () => {
    const names = Array.from({ length: 26 }, (_, i) => String.fromCharCode(65 + i));
    const colors = new Set(names.map(colorFor));
    expect(colors.size).toBeGreaterThan(20);
  });
});
