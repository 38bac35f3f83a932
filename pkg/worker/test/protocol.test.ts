import { ChildProcessWithoutNullStreams, spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import * as readline from "node:readline";
import { PassThrough } from "node:stream";
import { fileURLToPath } from "node:url";

import { afterEach, describe, expect, it } from "vitest";

import { findEntities } from "../src/matcher.js";
import { serve } from "../src/protocol.js";
import { defaultDictionary } from "../src/stub.js";

const MAIN = fileURLToPath(new URL("../dist/main.js", import.meta.url));

class Worker {
  child: ChildProcessWithoutNullStreams;
  stderr = "";
  private buffered: string[] = [];
  private waiters: Array<(line: string) => void> = [];

  constructor(args: string[] = []) {
    this.child = spawn(process.execPath, [MAIN, ...args]);
    this.child.stderr.on("data", (chunk) => (this.stderr += chunk));
    const lines = readline.createInterface({ input: this.child.stdout });
    lines.on("line", (line) => {
      const waiter = this.waiters.shift();
      if (waiter) waiter(line);
      else this.buffered.push(line);
    });
  }

  next(timeoutMs = 10_000): Promise<string> {
    const line = this.buffered.shift();
    if (line !== undefined) return Promise.resolve(line);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(
        () => reject(new Error(`no output after ${timeoutMs}ms; stderr: ${this.stderr}`)),
        timeoutMs,
      );
      this.waiters.push((got) => {
        clearTimeout(timer);
        resolve(got);
      });
    });
  }

  send(payload: unknown): void {
    this.child.stdin.write(JSON.stringify(payload) + "\n");
  }

  sendRaw(line: string): void {
    this.child.stdin.write(line);
  }

  exit(): Promise<number | null> {
    this.child.stdin.end();
    return new Promise((resolve) => this.child.on("exit", resolve));
  }
}

let worker: Worker | null = null;

afterEach(async () => {
  if (worker) {
    await worker.exit();
    worker = null;
  }
});

async function ready(w: Worker): Promise<void> {
  expect(JSON.parse(await w.next())).toEqual({ ready: true });
}

describe("stub worker over stdio", () => {
  it("announces readiness exactly once, before anything else", async () => {
    worker = new Worker();
    await ready(worker);
    worker.send({ id: 1, text: "nada" });
    const reply = JSON.parse(await worker.next());
    expect(reply).toEqual({ id: 1, entities: [] });
    // drain the session: no second ready line anywhere
    const code = await worker.exit();
    expect(code).toBe(0);
    worker = null;
  });

  it("answers 1000 pipelined requests with bijective ids", async () => {
    worker = new Worker();
    await ready(worker);
    const batch: string[] = [];
    for (let id = 1; id <= 1000; id++) {
      const text = id % 3 === 0 ? `visita a Copacabana n${id}` : `texto ${id}`;
      batch.push(JSON.stringify({ id, text }));
    }
    worker.sendRaw(batch.join("\n") + "\n");
    const seen = new Set<number>();
    for (let i = 0; i < 1000; i++) {
      const reply = JSON.parse(await worker.next());
      expect(Number.isInteger(reply.id)).toBe(true);
      expect(Array.isArray(reply.entities)).toBe(true);
      expect(seen.has(reply.id)).toBe(false);
      seen.add(reply.id);
      if (reply.id % 3 === 0) {
        expect(reply.entities).toEqual([
          { start: 9, end: 19, class: "LOC" },
        ]);
      } else {
        expect(reply.entities).toEqual([]);
      }
    }
    expect(seen.size).toBe(1000);
    for (let id = 1; id <= 1000; id++) expect(seen.has(id)).toBe(true);
  });

  it("reports Unicode-scalar offsets on non-ASCII text", async () => {
    worker = new Worker();
    await ready(worker);
    worker.send({ id: 7, text: "rumo a São João hoje" });
    const reply = JSON.parse(await worker.next());
    expect(reply).toEqual({
      id: 7,
      entities: [{ start: 7, end: 15, class: "LOC" }],
    });
  });

  it("rejects malformed lines with a null id and keeps serving", async () => {
    worker = new Worker();
    await ready(worker);
    worker.sendRaw("{broken json\n");
    expect(JSON.parse(await worker.next()).id).toBeNull();
    worker.send({ id: "x", text: "a" });
    expect(JSON.parse(await worker.next()).id).toBeNull();
    worker.send({ id: 2 });
    expect(JSON.parse(await worker.next()).id).toBeNull();
    worker.send({ id: 3, text: "em Ipanema" });
    const reply = JSON.parse(await worker.next());
    expect(reply.id).toBe(3);
    expect(reply.entities).toEqual([{ start: 3, end: 10, class: "LOC" }]);
  });

  it("honors --dict", async () => {
    const dir = mkdtempSync(join(tmpdir(), "aux-dict-"));
    const dict = join(dir, "dict.tsv");
    writeFileSync(dict, "Niterói\tLOC\n", "utf-8");
    worker = new Worker(["--dict", dict]);
    await ready(worker);
    worker.send({ id: 1, text: "em Niterói e Copacabana" });
    const reply = JSON.parse(await worker.next());
    expect(reply.entities).toEqual([{ start: 3, end: 10, class: "LOC" }]);
  });

  it("exits nonzero on an unknown backend", async () => {
    worker = new Worker(["--backend", "llm"]);
    const code = await worker.exit();
    expect(code).toBe(1);
    expect(worker.stderr).toContain("unknown backend");
    worker = null;
  });
});

describe("model worker", () => {
  it("locates model entities at valid scalar offsets", async () => {
    worker = new Worker(["--backend", "model"]);
    await ready(worker);
    const text = "John Smith went to Rio de Janeiro.";
    worker.send({ id: 1, text });
    const reply = JSON.parse(await worker.next());
    expect(reply.id).toBe(1);
    const got = reply.entities as Array<{ start: number; end: number; class: string }>;
    const slices = got.map((e) => [Array.from(text).slice(e.start, e.end).join(""), e.class]);
    expect(slices).toContainEqual(["John Smith", "PER"]);
    for (const entity of got) {
      expect(entity.start).toBeGreaterThanOrEqual(0);
      expect(entity.end).toBeGreaterThan(entity.start);
      expect(entity.end).toBeLessThanOrEqual(Array.from(text).length);
      expect(["PER", "ORG", "LOC"]).toContain(entity.class);
    }
  });
});

describe("serve on in-process streams", () => {
  it("writes one response line per request line", async () => {
    const input = new PassThrough();
    const output = new PassThrough();
    const chunks: Buffer[] = [];
    output.on("data", (chunk) => chunks.push(chunk));
    const dict = defaultDictionary();
    const done = serve((text) => findEntities(text, dict), input, output);
    input.write('{"id": 1, "text": "oi"}\n\n{"id": 2, "text": "Copacabana"}\n');
    input.end();
    await done;
    const lines = Buffer.concat(chunks).toString("utf-8").trim().split("\n");
    expect(lines.map((l) => JSON.parse(l))).toEqual([
      { ready: true },
      { id: 1, entities: [] },
      { id: 2, entities: [{ start: 0, end: 10, class: "LOC" }] },
    ]);
  });
});
