/**
 * PGM decoding for the browser. Decode only: the pixels shown on screen
 * are exactly the bytes the service sent, expanded to RGBA for canvas.
 */

export interface PgmImage {
  width: number;
  height: number;
  /** Row-major grayscale bytes, length width * height. */
  pixels: Uint8Array;
}

export class PgmError extends Error {}

const WHITESPACE = new Set([0x20, 0x09, 0x0a, 0x0d, 0x0b, 0x0c]);

/** Reads magic, dimensions and maxval, skipping comments, returning the
 * offset of the first raster byte. */
function parseHeader(bytes: Uint8Array): {
  magic: string;
  width: number;
  height: number;
  maxval: number;
  offset: number;
} {
  let pos = 0;

  function skipSeparators(): void {
    for (;;) {
      while (pos < bytes.length && WHITESPACE.has(bytes[pos]!)) pos++;
      if (pos < bytes.length && bytes[pos] === 0x23 /* '#' */) {
        while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      } else {
        return;
      }
    }
  }

  function token(): string {
    skipSeparators();
    const start = pos;
    while (pos < bytes.length && !WHITESPACE.has(bytes[pos]!)) pos++;
    if (pos === start) throw new PgmError("unexpected end of header");
    let out = "";
    for (let i = start; i < pos; i++) out += String.fromCharCode(bytes[i]!);
    return out;
  }

  const magic = token();
  if (magic !== "P5" && magic !== "P2") {
    throw new PgmError(`not a PGM file (magic ${JSON.stringify(magic)})`);
  }
  const fields = [token(), token(), token()].map((t) => {
    if (!/^[0-9]+$/.test(t)) throw new PgmError(`bad header number ${JSON.stringify(t)}`);
    return parseInt(t, 10);
  });
  const [width, height, maxval] = fields as [number, number, number];
  if (width < 1 || height < 1) throw new PgmError("degenerate dimensions");
  if (maxval < 1 || maxval > 255) {
    throw new PgmError(`unsupported maxval ${maxval} (need 1..255)`);
  }
  // Exactly one whitespace byte separates the header from a P5 raster.
  if (magic === "P5") {
    if (pos >= bytes.length || !WHITESPACE.has(bytes[pos]!)) {
      throw new PgmError("missing separator before raster");
    }
    pos++;
  }
  return { magic, width, height, maxval, offset: pos };
}

export function decodePgm(bytes: Uint8Array): PgmImage {
  const { magic, width, height, maxval, offset } = parseHeader(bytes);
  const count = width * height;
  const pixels = new Uint8Array(count);

  if (magic === "P5") {
    if (bytes.length - offset < count) {
      throw new PgmError(
        `raster truncated: need ${count} bytes, have ${bytes.length - offset}`,
      );
    }
    pixels.set(bytes.subarray(offset, offset + count));
  } else {
    let pos = offset;
    for (let i = 0; i < count; i++) {
      while (pos < bytes.length && WHITESPACE.has(bytes[pos]!)) pos++;
      const start = pos;
      while (pos < bytes.length && !WHITESPACE.has(bytes[pos]!)) pos++;
      if (pos === start) {
        throw new PgmError(`raster truncated: need ${count} values, have ${i}`);
      }
      let value = 0;
      for (let j = start; j < pos; j++) {
        const d = bytes[j]! - 0x30;
        if (d < 0 || d > 9) throw new PgmError("non-numeric raster value");
        value = value * 10 + d;
      }
      if (value > maxval) throw new PgmError(`raster value ${value} exceeds maxval`);
      pixels[i] = value;
    }
  }

  for (let i = 0; i < count; i++) {
    if (pixels[i]! > maxval) {
      throw new PgmError(`raster value ${pixels[i]} exceeds maxval ${maxval}`);
    }
  }
  return { width, height, pixels };
}

/** Gray byte g becomes opaque (g, g, g, 255); suitable for ImageData. */
export function toRgba(img: PgmImage): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(new ArrayBuffer(img.width * img.height * 4));
  for (let i = 0; i < img.pixels.length; i++) {
    const g = img.pixels[i]!;
    const o = i * 4;
    out[o] = g;
    out[o + 1] = g;
    out[o + 2] = g;
    out[o + 3] = 255;
  }
  return out;
}
