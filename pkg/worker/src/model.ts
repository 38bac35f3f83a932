/**
 * Off-the-shelf model backend.
 *
 * compromise proposes entity surface forms; the shared matcher then locates
 * them in the original text, which keeps the reported offsets in Unicode
 * scalar values and word-aligned regardless of how the model normalizes
 * whitespace internally.
 */

import nlp from "compromise";

import { Entity, EntityClass, findEntities } from "./matcher.js";

function surfaces(view: { json(): { text: string }[] }): string[] {
  return view.json().map((match) => match.text.trim()).filter((t) => t.length > 0);
}

export function tagWithModel(text: string): Entity[] {
  if (!text) return [];
  const doc = nlp(text);
  const names = new Map<string, EntityClass>();
  for (const name of surfaces(doc.organizations())) names.set(name, "ORG");
  for (const name of surfaces(doc.places())) names.set(name, "LOC");
  // people last: on a class clash for the same surface form, PER wins
  for (const name of surfaces(doc.people())) names.set(name, "PER");
  return findEntities(text, names);
}
