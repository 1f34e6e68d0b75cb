/** The side panel for a selected topic: sub-map (for main topics), word
 * cloud, trend chart and the top-document drill-down list. */
import type { AtlasBundle, TopicRecord } from "../types";
import { topicKey } from "../types";
import { renderBubbleMap, type MapOptions } from "./map";
import { renderTrendChart } from "./trendChart";
import { escapeHtml, formatWeight } from "./util";
import { renderWordCloud } from "./wordCloud";

function renderDocList(record: TopicRecord): string {
  if (!record.top_docs.length) return `<p class="doc-empty">no documents</p>`;
  const rows = record.top_docs
    .map(([id, title, date, weight]) => {
      const bar = Math.round(100 * weight / record.top_docs[0][3]);
      return (
        `<li class="doc" data-doc="${escapeHtml(id)}">` +
        `<span class="doc-weight" style="--w:${bar}%">${formatWeight(weight)}</span>` +
        `<span class="doc-title">${escapeHtml(title)}</span>` +
        `<span class="doc-date">${date ?? ""}</span></li>`
      );
    })
    .join("");
  return `<ol class="doc-list">${rows}</ol>`;
}

export function renderTopicPanel(
  bundle: AtlasBundle,
  main: number,
  sub: number | null,
  highlights?: Map<string, number>,
): string {
  const mainRecord = bundle.topics[topicKey("main", main)];
  const detailKey = sub !== null ? topicKey("sub", sub) : topicKey("main", main);
  const detail = bundle.topics[detailKey];
  const subMap = bundle.sub_maps[String(main)];

  const mapOptions: MapOptions = { selected: sub !== null ? detailKey : null, highlights };
  const subMapHtml = subMap
    ? renderBubbleMap(subMap, mapOptions)
    : `<p class="doc-empty">no sub-topics assigned</p>`;

  return (
    `<section class="panel" data-main="${main}">` +
    `<header><h2>${escapeHtml(mainRecord.label)}</h2>` +
    `<button class="close" data-action="close" title="back to overview">&times;</button></header>` +
    `<div class="panel-section sub-map"><h3>sub-topics</h3>${subMapHtml}</div>` +
    `<div class="panel-section"><h3>${escapeHtml(detail.label)} &mdash; word cloud</h3>` +
    `${renderWordCloud(detail.word_cloud)}</div>` +
    `<div class="panel-section"><h3>trend</h3>${renderTrendChart(detail.trend)}</div>` +
    `<div class="panel-section"><h3>top documents</h3>${renderDocList(detail)}</div>` +
    `</section>`
  );
}
