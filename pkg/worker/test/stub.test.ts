import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { defaultDictionary, loadDictionary } from "../src/stub.js";

function dictFile(body: string): string {
  const dir = mkdtempSync(join(tmpdir(), "aux-dict-"));
  const path = join(dir, "dict.tsv");
  writeFileSync(path, body, "utf-8");
  return path;
}

describe("defaultDictionary", () => {
  it("ships the fixture names", () => {
    const dict = defaultDictionary();
    expect(dict.get("Copacabana")).toBe("LOC");
    expect(dict.get("São João")).toBe("LOC");
  });
});

describe("loadDictionary", () => {
  it("parses tab-separated entries, skipping comments and blanks", () => {
    const path = dictFile("# header\n\nNiterói\tLOC\nAna Lima\tPER\n");
    const dict = loadDictionary(path);
    expect(dict.get("Niterói")).toBe("LOC");
    expect(dict.get("Ana Lima")).toBe("PER");
    expect(dict.size).toBe(2);
  });

  it("rejects unknown classes with the line number", () => {
    const path = dictFile("Niterói\tCITY\n");
    expect(() => loadDictionary(path)).toThrow(/:1:/);
  });

  it("rejects entries without a tab", () => {
    const path = dictFile("Niterói LOC\n");
    expect(() => loadDictionary(path)).toThrow(/name<TAB>/);
  });
});
