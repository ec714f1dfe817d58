// Density color ramp: deep blue (no agents) to yellow (highest
// concentration), linear in RGB with half-up channel rounding.

export const RAMP_LOW: [number, number, number] = [0, 0, 139];
export const RAMP_HIGH: [number, number, number] = [255, 255, 0];

export function rampColor(count: number, max: number): [number, number, number] {
  const t = max > 0 ? count / max : 0;
  const channel = (lo: number, hi: number) => Math.floor(lo + (hi - lo) * t + 0.5);
  return [
    channel(RAMP_LOW[0], RAMP_HIGH[0]),
    channel(RAMP_LOW[1], RAMP_HIGH[1]),
    channel(RAMP_LOW[2], RAMP_HIGH[2]),
  ];
}

/** RGBA bytes for an ImageData of the density grid (row 0 = world y=0). */
export function densityImageBytes(
  counts: number[][],
  cols: number,
  rows: number,
): Uint8ClampedArray<ArrayBuffer> {
  let max = 0;
  for (const row of counts) for (const v of row) max = Math.max(max, v);
  const bytes = new Uint8ClampedArray(cols * rows * 4);
  for (let r = 0; r < rows; r += 1) {
    const row = counts[r]!;
    for (let c = 0; c < cols; c += 1) {
      const [red, green, blue] = rampColor(row[c]!, max);
      const at = (r * cols + c) * 4;
      bytes[at] = red;
      bytes[at + 1] = green;
      bytes[at + 2] = blue;
      bytes[at + 3] = 200; // slightly translucent so the scene shows through
    }
  }
  return bytes;
}
