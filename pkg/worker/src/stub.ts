/** Deterministic dictionary backend for tests and offline runs. */

import { readFileSync } from "node:fs";

import type { EntityClass } from "./matcher.js";

const CLASSES = new Set<string>(["PER", "ORG", "LOC"]);

export function defaultDictionary(): Map<string, EntityClass> {
  return new Map<string, EntityClass>([
    ["Copacabana", "LOC"],
    ["São João", "LOC"],
    ["Ipanema", "LOC"],
  ]);
}

/** One entry per line: name<TAB>class. Blank lines and # comments skipped. */
export function loadDictionary(path: string): Map<string, EntityClass> {
  const names = new Map<string, EntityClass>();
  const body = readFileSync(path, "utf-8");
  body.split("\n").forEach((line, index) => {
    const trimmed = line.trim();
    if (!trimmed || trimmed.startsWith("#")) return;
    const at = trimmed.lastIndexOf("\t");
    const name = at < 0 ? "" : trimmed.slice(0, at).trim();
    const cls = at < 0 ? "" : trimmed.slice(at + 1).trim();
    if (!name || !CLASSES.has(cls)) {
      throw new Error(`${path}:${index + 1}: expected "name<TAB>PER|ORG|LOC"`);
    }
    names.set(name, cls as EntityClass);
  });
  return names;
}
