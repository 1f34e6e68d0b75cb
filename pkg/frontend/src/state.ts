/** View state and its address-fragment encoding.
 *
 * The whole navigable state is (main, sub, query); it round-trips through
 * `#/main/<id>/sub/<id>?q=<query>` so every view is linkable.
 */
import type { AtlasBundle } from "./types";
import { topicKey } from "./types";

export interface ViewState {
  main: number | null;
  sub: number | null;
  query: string;
}

export const EMPTY_STATE: ViewState = { main: null, sub: null, query: "" };

export function formatRoute(state: ViewState): string {
  let path = "#/";
  if (state.main !== null) {
    path += `main/${state.main}`;
    if (state.sub !== null) path += `/sub/${state.sub}`;
  }
  if (state.query) path += `?q=${encodeURIComponent(state.query)}`;
  return path;
}

export function parseRoute(hash: string): ViewState {
  let fragment = hash.startsWith("#") ? hash.slice(1) : hash;
  let query = "";
  const qAt = fragment.indexOf("?");
  if (qAt >= 0) {
    const params = new URLSearchParams(fragment.slice(qAt + 1));
    query = params.get("q") ?? "";
    fragment = fragment.slice(0, qAt);
  }
  const match = /^\/?(?:main\/(\d+)(?:\/sub\/(\d+))?)?\/?$/.exec(fragment);
  if (!match) return { ...EMPTY_STATE, query };
  return {
    main: match[1] !== undefined ? Number(match[1]) : null,
    sub: match[2] !== undefined ? Number(match[2]) : null,
    query,
  };
}

/** Clamp a state to the bundle: unknown topics are dropped and a selected
 * sub-topic must belong to the selected main topic. */
export function normalizeState(bundle: AtlasBundle, state: ViewState): ViewState {
  let { main, sub, query } = state;
  if (main !== null && !(topicKey("main", main) in bundle.topics)) main = null;
  if (sub !== null && !(topicKey("sub", sub) in bundle.topics)) sub = null;
  if (sub !== null && main === null) sub = null;
  if (sub !== null && main !== null) {
    if (bundle.topics[topicKey("sub", sub)].parent !== main) sub = null;
  }
  return { main, sub, query };
}

export function selectMain(state: ViewState, main: number): ViewState {
  if (state.main === main) return state;
  return { ...state, main, sub: null };
}

export function selectSub(bundle: AtlasBundle, state: ViewState, sub: number): ViewState {
  const parent = bundle.topics[topicKey("sub", sub)]?.parent;
  if (parent === null || parent === undefined) return state;
  return { ...state, main: parent, sub };
}

export function setQuery(state: ViewState, query: string): ViewState {
  return { ...state, query };
}
