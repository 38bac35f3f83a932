/**
 * JSON-lines stdio loop.
 *
 * Startup emits the single line {"ready": true}. Every request line
 * {"id": <int>, "text": <string>} gets exactly one response line
 * {"id": <same int>, "entities": [...]}. A line that cannot be parsed or
 * validated gets {"id": null, "error": "..."} and the loop continues.
 */

import * as readline from "node:readline";
import type { Readable, Writable } from "node:stream";

import type { Entity } from "./matcher.js";

export type Tagger = (text: string) => Entity[];

export function serve(
  tag: Tagger,
  input: Readable = process.stdin,
  output: Writable = process.stdout,
): Promise<void> {
  output.write(JSON.stringify({ ready: true }) + "\n");
  const lines = readline.createInterface({ input, terminal: false });
  lines.on("line", (line) => {
    if (!line.trim()) return;
    output.write(handle(tag, line) + "\n");
  });
  return new Promise((resolve) => lines.on("close", resolve));
}

function handle(tag: Tagger, line: string): string {
  try {
    const message: unknown = JSON.parse(line);
    if (typeof message !== "object" || message === null || Array.isArray(message)) {
      throw new Error("request is not an object");
    }
    const { id, text } = message as { id?: unknown; text?: unknown };
    if (!Number.isInteger(id)) throw new Error("id must be an integer");
    if (typeof text !== "string") throw new Error("text must be a string");
    return JSON.stringify({ id, entities: tag(text) });
  } catch (error) {
    const reason = error instanceof Error ? error.message : String(error);
    return JSON.stringify({ id: null, error: reason });
  }
}
