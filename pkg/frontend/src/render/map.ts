/** SVG bubble-map rendering: area-true circles at the bundle's coordinates,
 * cluster-coloured, with outlines, optional selection ring and search
 * highlights. Pure projection of (map, options) onto markup. */
import type { BubbleMap } from "../types";
import { clusterColor, escapeHtml } from "./util";

export interface MapOptions {
  selected?: string | null;            // topic key "level-index"
  highlights?: Map<string, number>;    // topic key -> intensity (0, 1]
  labelMinRadius?: number;
}

export function renderBubbleMap(map: BubbleMap, options: MapOptions = {}): string {
  const [bx, by, bound] = map.bounding_circle;
  const pad = bound > 0 ? bound * 0.06 : 1;
  const view = `${bx - bound - pad} ${by - bound - pad} ${2 * (bound + pad)} ${2 * (bound + pad)}`;
  const labelMin = options.labelMinRadius ?? 18;

  const parts: string[] = [
    `<svg class="bubble-map" viewBox="${view}" preserveAspectRatio="xMidYMid meet">`,
  ];
  for (const [cluster, ring] of Object.entries(map.cluster_outlines)) {
    const points = ring.map(([x, y]) => `${x},${y}`).join(" ");
    const color = clusterColor(Number(cluster));
    parts.push(
      `<polygon class="outline" points="${points}" fill="${color}" stroke="${color}"/>`,
    );
  }
  for (const b of map.bubbles) {
    const key = `${b.level}-${b.index}`;
    const classes = ["bubble"];
    if (options.selected === key) classes.push("selected");
    const intensity = options.highlights?.get(key) ?? 0;
    if (intensity > 0) classes.push("hit");
    parts.push(
      `<circle class="${classes.join(" ")}" data-topic="${key}" cx="${b.x}" cy="${b.y}" ` +
        `r="${b.r}" fill="${clusterColor(b.cluster)}"` +
        (intensity > 0 ? ` style="--hit:${intensity.toFixed(3)}"` : "") +
        `><title>${escapeHtml(b.label)}</title></circle>`,
    );
  }
  for (const b of map.bubbles) {
    if (b.r < labelMin) continue;
    const size = Math.max(Math.min(b.r / 4, 16), 7);
    const words = b.label.split("-");
    const lines = words
      .map(
        (word, i) =>
          `<tspan x="${b.x}" dy="${i === 0 ? -((words.length - 1) / 2) * size * 1.1 : size * 1.1}">` +
          `${escapeHtml(word)}</tspan>`,
      )
      .join("");
    parts.push(
      `<text class="bubble-label" data-topic="${b.level}-${b.index}" x="${b.x}" y="${b.y}" ` +
        `font-size="${size}" text-anchor="middle" dominant-baseline="middle">${lines}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
