/** Ranked search-result list; clicking a row navigates to the topic. */
import type { AtlasBundle } from "../types";
import { topicKey } from "../types";
import type { SearchResult } from "../search";
import { escapeHtml, formatWeight } from "./util";

export function renderSearchResults(bundle: AtlasBundle, results: SearchResult[], query: string): string {
  if (!query.trim()) return "";
  if (!results.length) return `<p class="search-empty">no topics match</p>`;
  const rows = results
    .slice(0, 12)
    .map((r) => {
      const key = topicKey(r.level, r.index);
      const record = bundle.topics[key];
      return (
        `<li class="result" data-topic="${key}">` +
        `<span class="result-level">${r.level}</span>` +
        `<span class="result-label">${escapeHtml(record.label)}</span>` +
        `<span class="result-score">${formatWeight(r.score)}</span></li>`
      );
    })
    .join("");
  return `<ol class="search-results">${rows}</ol>`;
}
