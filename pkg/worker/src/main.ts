#!/usr/bin/env node
/** CLI entry: --backend stub|model, --dict <path> for the stub. */

import { parseArgs } from "node:util";

import { findEntities, compilePatterns } from "./matcher.js";
import { serve, Tagger } from "./protocol.js";
import { defaultDictionary, loadDictionary } from "./stub.js";

async function pickTagger(backend: string, dict?: string): Promise<Tagger> {
  if (backend === "stub") {
    const patterns = compilePatterns(dict ? loadDictionary(dict) : defaultDictionary());
    return (text) => findEntities(text, patterns);
  }
  if (backend === "model") {
    if (dict) throw new Error("--dict only applies to the stub backend");
    const { tagWithModel } = await import("./model.js");
    return tagWithModel;
  }
  throw new Error(`unknown backend: ${backend} (expected stub or model)`);
}

async function main(): Promise<void> {
  const { values } = parseArgs({
    options: {
      backend: { type: "string", default: "stub" },
      dict: { type: "string" },
    },
  });
  const tag = await pickTagger(values.backend as string, values.dict as string | undefined);
  await serve(tag);
}

main().catch((error: unknown) => {
  const reason = error instanceof Error ? error.message : String(error);
  process.stderr.write(`aux-ner-worker: ${reason}\n`);
  process.exit(1);
});
