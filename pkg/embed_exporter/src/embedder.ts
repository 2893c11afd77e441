import { createHash } from "node:crypto";

// Deterministic hashed sentence embedder. Unigram and bigram counts are
// feature-hashed into `dim` signed buckets, log-damped, then L2-normalized.
// Runs fully offline, so exports are reproducible across machines.

const MODEL_PATTERN = /^hashed-(\d+)$/;

export class ModelError extends Error {}

export function resolveModel(name: string): { name: string; dim: number } {
  const m = MODEL_PATTERN.exec(name);
  if (!m) {
    throw new ModelError(
      `cannot load model "${name}": expected a name like hashed-384`
    );
  }
  const dim = parseInt(m[1], 10);
  if (dim < 8) {
    throw new ModelError(`model dim ${dim} is too small (need >= 8)`);
  }
  return { name, dim };
}

function tokenize(text: string): string[] {
  return text.toLowerCase().match(/[a-z0-9]+/g) ?? [];
}

function features(text: string): string[] {
  const tokens = tokenize(text);
  const out = [...tokens];
  for (let i = 0; i + 1 < tokens.length; i++) {
    out.push(tokens[i] + " " + tokens[i + 1]);
  }
  return out;
}

// bucket index from the first 4 hash bytes, sign from the fifth
function hashFeature(feature: string, dim: number): { index: number; sign: number } {
  const digest = createHash("blake2b512").update(feature, "utf8").digest();
  const index = digest.readUInt32LE(0) % dim;
  const sign = digest[4] & 1 ? 1 : -1;
  return { index, sign };
}

export function embedText(text: string, dim: number): Float32Array {
  const counts = new Float64Array(dim);
  for (const feature of features(text)) {
    const { index, sign } = hashFeature(feature, dim);
    counts[index] += sign;
  }
  const damped = new Float64Array(dim);
  for (let i = 0; i < dim; i++) {
    const c = counts[i];
    damped[i] = Math.sign(c) * Math.log1p(Math.abs(c));
  }
  let norm = 0;
  for (let i = 0; i < dim; i++) norm += damped[i] * damped[i];
  norm = Math.sqrt(norm);
  const row = new Float32Array(dim);
  if (norm === 0) {
    // degenerate text (no tokens): fall back to a fixed unit basis vector
    row[0] = 1;
    return row;
  }
  for (let i = 0; i < dim; i++) row[i] = damped[i] / norm;
  return row;
}
