/** Bootstraps the atlas browser: fetch the bundle named by ?bundle=, keep
 * the address fragment as the single source of navigation truth, and
 * re-project the views on every change. The bundle itself is never mutated. */
import { highlightIntensities, searchTopics } from "./search";
import {
  EMPTY_STATE,
  formatRoute,
  normalizeState,
  parseRoute,
  selectMain,
  selectSub,
  setQuery,
  type ViewState,
} from "./state";
import { renderBubbleMap } from "./render/map";
import { renderTopicPanel } from "./render/panel";
import { renderSearchResults } from "./render/searchBox";
import { escapeHtml } from "./render/util";
import { SUPPORTED_SCHEMA, topicKey, type AtlasBundle, type TopicLevel } from "./types";

export function renderErrorBanner(message: string): string {
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}

/** Full page projection of (bundle, state); exported for tests. */
export function renderApp(bundle: AtlasBundle, state: ViewState): string {
  const results = state.query ? searchTopics(bundle, state.query) : [];
  const highlights = highlightIntensities(results);
  const meta = bundle.corpus_meta;
  const parts = [
    `<header class="top">` +
      `<h1>${escapeHtml(meta.source_label)}</h1>` +
      `<span class="meta">${meta.doc_count} documents` +
      (meta.date_range[0] ? `, ${meta.date_range[0]} to ${meta.date_range[1]}` : "") +
      `</span>` +
      `<input id="search" type="search" placeholder="search topics, e.g. social distancing" ` +
      `value="${escapeHtml(state.query)}"/>` +
      `</header>`,
    `<div class="search-pane">${renderSearchResults(bundle, results, state.query)}</div>`,
    `<main class="${state.main !== null ? "with-panel" : ""}">`,
    `<div class="main-map">${renderBubbleMap(bundle.main_map, {
      selected: state.main !== null ? topicKey("main", state.main) : null,
      highlights,
    })}</div>`,
  ];
  if (state.main !== null) {
    parts.push(renderTopicPanel(bundle, state.main, state.sub, highlights));
  }
  parts.push(`</main>`);
  return parts.join("");
}

async function loadBundle(): Promise<AtlasBundle> {
  const params = new URLSearchParams(window.location.search);
  const url = params.get("bundle") ?? "atlas.json";
  const response = await fetch(url);
  if (!response.ok) throw new Error(`could not load ${url}: HTTP ${response.status}`);
  return (await response.json()) as AtlasBundle;
}

export function start(root: HTMLElement): void {
  root.innerHTML = `<div class="banner">loading atlas&hellip;</div>`;

  loadBundle()
    .then((bundle) => {
      if (bundle.schema_version !== SUPPORTED_SCHEMA) {
        root.innerHTML = renderErrorBanner(
          `unsupported bundle: schema_version ${JSON.stringify(bundle.schema_version)}, ` +
            `this viewer needs ${SUPPORTED_SCHEMA}`,
        );
        return;
      }

      const currentState = (): ViewState =>
        normalizeState(bundle, parseRoute(window.location.hash));

      const navigate = (state: ViewState) => {
        window.location.hash = formatRoute(normalizeState(bundle, state));
        render(); // hashchange re-renders too; projections are idempotent
      };

      const render = () => {
        root.innerHTML = renderApp(bundle, currentState());
        const input = root.querySelector<HTMLInputElement>("#search");
        input?.addEventListener("change", () => navigate(setQuery(currentState(), input.value)));
        input?.addEventListener("keyup", (event) => {
          if ((event as KeyboardEvent).key === "Enter") {
            navigate(setQuery(currentState(), input.value));
          }
        });
      };

      root.addEventListener("click", (event) => {
        const target = (event.target as Element).closest("[data-topic],[data-action]");
        if (!target) return;
        if (target.getAttribute("data-action") === "close") {
          navigate({ ...currentState(), main: null, sub: null });
          return;
        }
        const [level, index] = (target.getAttribute("data-topic") ?? "").split("-");
        const state = currentState();
        if (level === "main") navigate(selectMain(state, Number(index)));
        else if (level === "sub") navigate(selectSub(bundle, state, Number(index)));
      });
      window.addEventListener("hashchange", render);
      render();
    })
    .catch((error) => {
      root.innerHTML = renderErrorBanner(String(error));
    });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start(document.getElementById("app") as HTMLElement);
}
