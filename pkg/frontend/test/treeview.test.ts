import { describe, expect, it } from "vitest";

import { renderTreeSvg } from "../src/treeview.js";
import { TreeJson } from "../src/types.js";

const TREE: TreeJson = {
  kind: "sequence",
  children: [
    { kind: "activity", label: "Create Fine", children: [] },
    { kind: "xor", children: [
      { kind: "activity", label: "Send Fine", children: [] },
      { kind: "tau", children: [] },
    ] },
    { kind: "loop", children: [
      { kind: "activity", label: "Payment", children: [] },
      { kind: "tau", children: [] },
    ] },
    { kind: "and", children: [
      { kind: "activity", label: "x", children: [] },
      { kind: "activity", label: "y", children: [] },
    ] },
  ],
};

describe("tree svg", () => {
  it("shows operators by symbol and leaves by label", () => {
    const svg = renderTreeSvg(TREE, null);
    expect(svg).toContain("→"); // sequence
    expect(svg).toContain("×"); // xor
    expect(svg).toContain("↺"); // loop
    expect(svg).toContain("∧"); // and
    expect(svg).toContain("Create Fine");
    expect(svg).toContain(">τ<"); // tau rendered distinctly
    expect(svg).toContain('class="node leaf tau');
  });

  it("tags every node with its path", () => {
    const svg = renderTreeSvg(TREE, null);
    for (const key of ['""', '"0"', '"1"', '"1.0"', '"1.1"', '"2.0"', '"3.1"']) {
      expect(svg).toContain(`data-path=${key}`);
    }
  });

  it("marks exactly the selected node", () => {
    const svg = renderTreeSvg(TREE, [1, 0]);
    const selected = [...svg.matchAll(/class="node[^"]*selected"/g)];
    expect(selected).toHaveLength(1);
    expect(svg).toMatch(/class="node leaf activity selected" data-path="1\.0"/);
  });

  it("renders the empty state without a tree", () => {
    expect(renderTreeSvg(null, null)).toContain("No model yet");
  });

  it("escapes activity labels in svg text", () => {
    const svg = renderTreeSvg(
      { kind: "activity", label: "a<b>&c", children: [] }, null);
    expect(svg).toContain("a&lt;b&gt;&amp;c");
  });
});
