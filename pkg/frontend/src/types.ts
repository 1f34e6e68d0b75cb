/** Shapes of the atlas.json bundle (schema 1.0). */

export type TopicLevel = "main" | "sub";

export interface Bubble {
  level: TopicLevel;
  index: number;
  x: number;
  y: number;
  r: number;
  cluster: number;
  label: string;
}

export interface BubbleMap {
  bubbles: Bubble[];
  cluster_outlines: Record<string, [number, number][]>;
  bounding_circle: [number, number, number];
}

export interface Trend {
  binning: "day" | "week" | "month";
  points: [string, number][];
  excluded_dates: string[];
}

export interface TopicRecord {
  level: TopicLevel;
  index: number;
  parent: number | null;
  label: string;
  word_cloud: [string, number][];
  trend: Trend;
  top_docs: [string, string, string | null, number][];
}

export interface SearchNorm {
  min_token_len: number;
  stopwords: string[];
  lemmas: Record<string, string>;
}

export interface AtlasBundle {
  schema_version: string;
  corpus_meta: {
    source_label: string;
    doc_count: number;
    date_range: [string | null, string | null];
  };
  main_map: BubbleMap;
  sub_maps: Record<string, BubbleMap>;
  topics: Record<string, TopicRecord>;
  search_index: Record<string, [TopicLevel, number, number][]>;
  search_norm: SearchNorm;
}

export const SUPPORTED_SCHEMA = "1.0";

export function topicKey(level: TopicLevel, index: number): string {
  return `${level}-${index}`;
}

/** Sub-topic indices assigned to one main topic, ascending. */
export function subTopicsOf(bundle: AtlasBundle, main: number): number[] {
  const subs: number[] = [];
  for (const record of Object.values(bundle.topics)) {
    if (record.level === "sub" && record.parent === main) subs.push(record.index);
  }
  return subs.sort((a, b) => a - b);
}
