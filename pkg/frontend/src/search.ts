/** Client-side search over the bundle's term index.
 *
 * Queries run through the same normalisation as the corpus text (the bundle
 * carries the stop words and lemma entries), and a topic's score is the sum
 * of its index weights over the query lemmas. Ties order main topics before
 * sub topics, then by index.
 */
import type { AtlasBundle, TopicLevel } from "./types";

export interface SearchResult {
  level: TopicLevel;
  index: number;
  score: number;
}

const LETTER_RUNS = /\p{L}+/gu;

export function normalizeQuery(bundle: AtlasBundle, query: string): string[] {
  const norm = bundle.search_norm;
  const stop = new Set(norm.stopwords);
  const out: string[] = [];
  for (const raw of query.normalize("NFC").toLowerCase().match(LETTER_RUNS) ?? []) {
    if (raw.length < norm.min_token_len) continue;
    const lemma = norm.lemmas[raw] ?? raw;
    if (stop.has(lemma)) continue;
    out.push(lemma);
  }
  return out;
}

export function searchTopics(bundle: AtlasBundle, query: string): SearchResult[] {
  const scores = new Map<string, SearchResult>();
  for (const lemma of normalizeQuery(bundle, query)) {
    for (const [level, index, weight] of bundle.search_index[lemma] ?? []) {
      const key = `${level}-${index}`;
      const entry = scores.get(key) ?? { level, index, score: 0 };
      entry.score += weight;
      scores.set(key, entry);
    }
  }
  const levelOrder = { main: 0, sub: 1 };
  return [...scores.values()].sort(
    (a, b) =>
      b.score - a.score ||
      levelOrder[a.level] - levelOrder[b.level] ||
      a.index - b.index,
  );
}

/** Per-topic highlight intensity in (0, 1], proportional to the score. */
export function highlightIntensities(results: SearchResult[]): Map<string, number> {
  const out = new Map<string, number>();
  if (!results.length) return out;
  const top = results[0].score;
  for (const r of results) out.set(`${r.level}-${r.index}`, r.score / top);
  return out;
}
