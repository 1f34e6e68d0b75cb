/** Area + line chart over a topic's trend series (one point per date bin). */
import type { Trend } from "../types";
import { escapeHtml } from "./util";

const WIDTH = 420;
const HEIGHT = 150;
const MARGIN = { left: 8, right: 8, top: 10, bottom: 22 };

export function renderTrendChart(trend: Trend): string {
  if (!trend.points.length) {
    return `<div class="trend-empty">no dated documents in this topic</div>`;
  }
  const days = trend.points.map(([iso]) => Date.parse(iso));
  const weights = trend.points.map(([, w]) => w);
  const tMin = days[0];
  const tMax = days[days.length - 1];
  const span = tMax - tMin || 1;
  const maxWeight = Math.max(...weights) || 1;
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

  const px = (t: number) => MARGIN.left + ((t - tMin) / span) * plotW;
  const py = (w: number) => MARGIN.top + plotH - (w / maxWeight) * plotH;

  const coords = trend.points.map(([iso, w], i) => `${px(days[i]).toFixed(1)},${py(w).toFixed(1)}`);
  const line = coords.join(" ");
  const baseline = (MARGIN.top + plotH).toFixed(1);
  const area =
    `${MARGIN.left},${baseline} ${line} ` +
    `${px(tMax).toFixed(1)},${baseline}`;

  const first = trend.points[0][0];
  const last = trend.points[trend.points.length - 1][0];
  return (
    `<svg class="trend-chart" viewBox="0 0 ${WIDTH} ${HEIGHT}">` +
    `<polygon class="trend-area" points="${area}"/>` +
    `<polyline class="trend-line" points="${line}" fill="none" data-points="${trend.points.length}"/>` +
    `<text class="axis" x="${MARGIN.left}" y="${HEIGHT - 6}">${escapeHtml(first)}</text>` +
    `<text class="axis" x="${WIDTH - MARGIN.right}" y="${HEIGHT - 6}" text-anchor="end">${escapeHtml(last)}</text>` +
    `<text class="axis" x="${MARGIN.left}" y="${MARGIN.top + 4}">peak ${maxWeight.toPrecision(3)} / ${trend.binning}</text>` +
    `</svg>`
  );
}
