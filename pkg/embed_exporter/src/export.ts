import { createHash } from "node:crypto";
import { readFileSync, writeFileSync } from "node:fs";
import { z } from "zod";

import { embedText, resolveModel } from "./embedder.js";
import { encodeEmb1, sidecarLines } from "./emb1.js";

const Record = z.object({ id: z.string(), text: z.string() });

export class InputError extends Error {}

export interface ExportManifest {
  model_name: string;
  dim: number;
  count: number;
  normalized: boolean;
  input_hash: string;
}

export function parseInput(raw: string): { id: string; text: string }[] {
  const records: { id: string; text: string }[] = [];
  const seen = new Set<string>();
  const lines = raw.split("\n").filter((line) => line.trim() !== "");
  for (const [n, line] of lines.entries()) {
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch {
      throw new InputError(`line ${n + 1}: not valid JSON`);
    }
    const check = Record.safeParse(parsed);
    if (!check.success) {
      throw new InputError(`line ${n + 1}: expected {"id", "text"} with string values`);
    }
    if (seen.has(check.data.id)) {
      throw new InputError(`line ${n + 1}: duplicate id "${check.data.id}"`);
    }
    seen.add(check.data.id);
    records.push(check.data);
  }
  return records;
}

export function exportEmbeddings(
  inPath: string,
  modelName: string,
  outPath: string
): ExportManifest {
  const raw = readFileSync(inPath);
  const records = parseInput(raw.toString("utf8"));
  const model = resolveModel(modelName);

  const rows = records.map((rec) => embedText(rec.text, model.dim));
  const manifest: ExportManifest = {
    model_name: model.name,
    dim: model.dim,
    count: rows.length,
    normalized: true,
    input_hash: createHash("sha256").update(raw).digest("hex"),
  };

  const base = outPath.replace(/\.bin$/, "");
  writeFileSync(outPath, encodeEmb1(rows, model.dim));
  writeFileSync(base + ".ids.jsonl", sidecarLines(records.map((r) => r.id)));
  writeFileSync(base + ".manifest.json", JSON.stringify(manifest, null, 2) + "\n");
  return manifest;
}
