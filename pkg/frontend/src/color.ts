/** Stable activity colors: same name, same color, across reloads. */

// FNV-1a; tiny, deterministic, good spread for short strings.
function hash(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h >>> 0;
}

export function colorFor(activity: string): string {
  const h = hash(activity);
  const hue = h % 360;
  const sat = 52 + (Math.floor(h / 360) % 3) * 9; // 52, 61 or 70
  const light = 38 + (Math.floor(h / 1080) % 3) * 6; // 38, 44 or 50
  return `hsl(${hue}, ${sat}%, ${light}%)`;
}
