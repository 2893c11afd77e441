// EMB1 binary layout: 4 magic bytes "EMB1", u32 LE row count, u32 LE dim,
// then count*dim little-endian float32 values row-major. Row ids live in a
// JSON-lines sidecar of {"row": int, "id": string}.

const MAGIC = "EMB1";
const HEADER_BYTES = 12;

export class FormatError extends Error {}

export function encodeEmb1(rows: Float32Array[], dim: number): Buffer {
  const header = Buffer.alloc(HEADER_BYTES);
  header.write(MAGIC, 0, "ascii");
  header.writeUInt32LE(rows.length, 4);
  header.writeUInt32LE(dim, 8);
  const payload = Buffer.alloc(rows.length * dim * 4);
  rows.forEach((row, r) => {
    if (row.length !== dim) {
      throw new FormatError(`row ${r} has dim ${row.length}, expected ${dim}`);
    }
    for (let i = 0; i < dim; i++) {
      payload.writeFloatLE(row[i], (r * dim + i) * 4);
    }
  });
  return Buffer.concat([header, payload]);
}

export function decodeEmb1(data: Buffer): { dim: number; rows: Float32Array[] } {
  if (data.length < HEADER_BYTES || data.toString("ascii", 0, 4) !== MAGIC) {
    throw new FormatError("not an EMB1 file");
  }
  const count = data.readUInt32LE(4);
  const dim = data.readUInt32LE(8);
  if (data.length !== HEADER_BYTES + count * dim * 4) {
    throw new FormatError(
      `payload is ${data.length - HEADER_BYTES} bytes, header implies ${count * dim * 4}`
    );
  }
  const rows: Float32Array[] = [];
  for (let r = 0; r < count; r++) {
    const row = new Float32Array(dim);
    for (let i = 0; i < dim; i++) {
      row[i] = data.readFloatLE(HEADER_BYTES + (r * dim + i) * 4);
    }
    rows.push(row);
  }
  return { dim, rows };
}

export function sidecarLines(ids: string[]): string {
  return ids.map((id, row) => JSON.stringify({ row, id })).join("\n") + (ids.length ? "\n" : "");
}
