import { describe, expect, it } from "vitest";

import { Entity, EntityClass, findEntities } from "../src/matcher.js";

const DICT = new Map<string, EntityClass>([
  ["Rio", "LOC"],
  ["Rio de Janeiro", "LOC"],
  ["São João", "LOC"],
]);

function spans(entities: Entity[]): Array<[number, number]> {
  return entities.map((e) => [e.start, e.end]);
}

describe("findEntities", () => {
  it("requires word-aligned boundaries", () => {
    expect(spans(findEntities("xRios Rio Riote", DICT))).toEqual([[6, 9]]);
  });

  it("treats punctuation as a boundary", () => {
    expect(spans(findEntities("(Rio), Rio.", DICT))).toEqual([
      [1, 4],
      [7, 10],
    ]);
  });

  it("prefers the longest name at a position", () => {
    const got = findEntities("Rio de Janeiro", DICT);
    expect(got).toEqual([{ start: 0, end: 14, class: "LOC" }]);
  });

  it("resumes the scan after each hit", () => {
    expect(spans(findEntities("Rio e Rio", DICT))).toEqual([
      [0, 3],
      [6, 9],
    ]);
  });

  it("counts offsets in scalar values, not UTF-16 units", () => {
    // the first two characters are astral-plane letters (surrogate pairs
    // in UTF-16), so unit-based offsets would be off by two
    const text = "\u{1D518}\u{1D51E} Rio";
    expect(findEntities(text, DICT)).toEqual([{ start: 3, end: 6, class: "LOC" }]);
  });

  it("matches non-ASCII names exactly", () => {
    const text = "rumo a São João hoje";
    expect(findEntities(text, DICT)).toEqual([{ start: 7, end: 15, class: "LOC" }]);
  });

  it("returns nothing for empty text or empty dictionary", () => {
    expect(findEntities("", DICT)).toEqual([]);
    expect(findEntities("Rio", new Map())).toEqual([]);
  });

  it("anchors at text edges", () => {
    expect(spans(findEntities("Rio", DICT))).toEqual([[0, 3]]);
  });
});
