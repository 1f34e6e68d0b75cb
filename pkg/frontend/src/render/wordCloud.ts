/** Word cloud with font size proportional to the term's topic weight.
 * Terms are placed heaviest-first on an archimedean spiral with collision
 * rejection against already-placed boxes; the jitter comes from a fixed
 * seed, so a given cloud always lays out the same way. */
import { escapeHtml, seededRandom } from "./util";

const WIDTH = 420;
const HEIGHT = 260;
const CLOUD_SEED = 0xc10d;

interface Box {
  x: number;
  y: number;
  w: number;
  h: number;
}

// gap > the 0.1px coordinate rounding, so emitted boxes stay disjoint too
const GAP = 2;

function collides(box: Box, placed: Box[]): boolean {
  return placed.some(
    (other) =>
      Math.abs(box.x - other.x) * 2 < box.w + other.w + GAP &&
      Math.abs(box.y - other.y) * 2 < box.h + other.h + GAP,
  );
}

export function renderWordCloud(wordCloud: [string, number][]): string {
  if (!wordCloud.length) return `<svg class="word-cloud" viewBox="0 0 ${WIDTH} ${HEIGHT}"></svg>`;
  const max = wordCloud[0][1];
  const min = wordCloud[wordCloud.length - 1][1];
  const span = max - min || 1;
  const random = seededRandom(CLOUD_SEED);
  const placed: Box[] = [];
  const texts: string[] = [];

  for (const [term, weight] of wordCloud) {
    // cap the size so no single term outgrows the canvas
    const fit = (WIDTH * 0.8) / (term.length * 0.62);
    const size = Math.min(11 + 26 * ((weight - min) / span), Math.max(fit, 11));
    const box: Box = { x: 0, y: 0, w: term.length * size * 0.62, h: size * 1.15 };
    let angle = random() * 2 * Math.PI;
    let radius = 0;
    for (let step = 0; step < 4000; step += 1) {
      box.x = radius * Math.cos(angle);
      box.y = radius * Math.sin(angle) * (HEIGHT / WIDTH);
      const inBounds =
        Math.abs(box.x) + box.w / 2 < WIDTH / 2 &&
        Math.abs(box.y) + box.h / 2 < HEIGHT / 2;
      // prefer in-canvas spots; never accept a collision
      if (!collides(box, placed) && (inBounds || radius > WIDTH)) break;
      angle += 0.35;
      radius += 0.9;
    }
    placed.push({ ...box });
    texts.push(
      `<text class="cloud-term" x="${(WIDTH / 2 + box.x).toFixed(1)}" ` +
        `y="${(HEIGHT / 2 + box.y).toFixed(1)}" font-size="${size.toFixed(1)}" ` +
        `text-anchor="middle" dominant-baseline="middle">${escapeHtml(term)}</text>`,
    );
  }
  return `<svg class="word-cloud" viewBox="0 0 ${WIDTH} ${HEIGHT}">${texts.join("")}</svg>`;
}
