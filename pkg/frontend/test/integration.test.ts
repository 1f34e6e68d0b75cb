/** Full-app behavior against the committed fixture bundle. */
import { beforeEach, describe, expect, it, vi } from "vitest";

import bundleJson from "./atlas.fixture.json";
import { renderApp, renderErrorBanner, start } from "../src/app";
import { searchTopics } from "../src/search";
import { formatRoute, parseRoute } from "../src/state";
import type { AtlasBundle } from "../src/types";
import { subTopicsOf, topicKey } from "../src/types";

const bundle = bundleJson as unknown as AtlasBundle;
const K_MAIN = 6;

function stubFetch(payload: unknown, ok = true) {
  vi.stubGlobal(
    "fetch",
    vi.fn(async () => ({
      ok,
      status: ok ? 200 : 404,
      json: async () => payload,
    })),
  );
}

async function mountApp(): Promise<HTMLElement> {
  const root = document.createElement("div");
  document.body.appendChild(root);
  start(root);
  await vi.waitFor(() => {
    if (!root.querySelector(".bubble-map") && !root.querySelector(".banner.error")) {
      throw new Error("app not ready");
    }
  });
  return root;
}

beforeEach(() => {
  document.body.innerHTML = "";
  window.location.hash = "";
  vi.unstubAllGlobals();
});

describe("loading", () => {
  it("renders exactly one bubble per main topic", async () => {
    stubFetch(bundle);
    const root = await mountApp();
    expect(root.querySelectorAll(".main-map circle.bubble").length).toBe(K_MAIN);
  });

  it("shows an error banner with schema details on version mismatch", async () => {
    stubFetch({ ...bundle, schema_version: "9.9" });
    const root = await mountApp();
    const banner = root.querySelector(".banner.error");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("9.9");
    expect(banner!.textContent).toContain("1.0");
  });

  it("shows an error banner when the bundle cannot be fetched", async () => {
    stubFetch({}, false);
    const root = await mountApp();
    expect(root.querySelector(".banner.error")!.textContent).toContain("HTTP 404");
  });
});

describe("navigation", () => {
  it("clicking a main topic opens its sub-map with the assigned sub-topic count", async () => {
    stubFetch(bundle);
    const root = await mountApp();
    expect(root.querySelector(".panel")).toBeNull();

    const bubble = root.querySelector<SVGElement>(
      '.main-map circle.bubble[data-topic="main-2"]',
    )!;
    bubble.dispatchEvent(new MouseEvent("click", { bubbles: true }));

    const panel = root.querySelector(".panel")!;
    expect(panel.getAttribute("data-main")).toBe("2");
    const subBubbles = panel.querySelectorAll(".sub-map circle.bubble");
    expect(subBubbles.length).toBe(subTopicsOf(bundle, 2).length);
    expect(window.location.hash).toBe("#/main/2");
  });

  it("clicking a sub-topic bubble selects it within its parent", async () => {
    stubFetch(bundle);
    const root = await mountApp();
    root
      .querySelector('.main-map circle.bubble[data-topic="main-2"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const sub = subTopicsOf(bundle, 2)[0];
    root
      .querySelector(`.sub-map circle.bubble[data-topic="sub-${sub}"]`)!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(window.location.hash).toBe(`#/main/2/sub/${sub}`);
    const selected = root.querySelector(".sub-map circle.bubble.selected")!;
    expect(selected.getAttribute("data-topic")).toBe(`sub-${sub}`);
  });

  it("the close button returns to the overview", async () => {
    stubFetch(bundle);
    const root = await mountApp();
    root
      .querySelector('.main-map circle.bubble[data-topic="main-1"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    root
      .querySelector('[data-action="close"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(root.querySelector(".panel")).toBeNull();
    expect(window.location.hash).toBe("#/");
  });

  it("a deep link restores the full view state", async () => {
    const sub = subTopicsOf(bundle, 2)[0];
    window.location.hash = `#/main/2/sub/${sub}?q=virus`;
    stubFetch(bundle);
    const root = await mountApp();
    expect(root.querySelector(".panel")!.getAttribute("data-main")).toBe("2");
    expect(root.querySelector<HTMLInputElement>("#search")!.value).toBe("virus");
  });

  it("a deep link violating the assignment is normalized away", async () => {
    const foreign = subTopicsOf(bundle, 1)[0];
    window.location.hash = `#/main/2/sub/${foreign}`;
    stubFetch(bundle);
    const root = await mountApp();
    const panel = root.querySelector(".panel")!;
    expect(panel.getAttribute("data-main")).toBe("2");
    expect(panel.querySelector("circle.bubble.selected")).toBeNull();
  });
});

describe("search box", () => {
  it("highlights matching bubbles and ranks the fixture topic's top term first", async () => {
    // pick the fixture's strongest sub-topic term: top word of sub-16's cloud
    const record = bundle.topics["sub-16"];
    const term = record.word_cloud[0][0];
    const expectedTop = searchTopics(bundle, term)[0];

    stubFetch(bundle);
    const root = await mountApp();
    const input = root.querySelector<HTMLInputElement>("#search")!;
    input.value = term;
    input.dispatchEvent(new Event("change", { bubbles: true }));

    const rows = [...root.querySelectorAll(".search-results .result")];
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0].getAttribute("data-topic")).toBe(
      topicKey(expectedTop.level, expectedTop.index),
    );
    const hits = [...root.querySelectorAll("circle.bubble.hit")].map((c) =>
      c.getAttribute("data-topic"),
    );
    const indexed = bundle.search_index[term].map(([lvl, idx]) => topicKey(lvl, idx));
    for (const key of hits) expect(indexed).toContain(key!);
    // the main map highlights exactly the indexed main topics
    const mainHits = [...root.querySelectorAll(".main-map circle.bubble.hit")].map((c) =>
      c.getAttribute("data-topic"),
    );
    expect(new Set(mainHits)).toEqual(
      new Set(indexed.filter((k) => k.startsWith("main-"))),
    );
    expect(window.location.hash).toContain(`q=${term}`);

    // navigating to the top result keeps the query and highlights its bubble
    rows[0].dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const key = topicKey(expectedTop.level, expectedTop.index);
    const bubble = root.querySelector(`circle.bubble[data-topic="${key}"]`)!;
    expect(bubble.classList.contains("hit")).toBe(true);
    expect(bubble.getAttribute("style")).toContain("--hit:1.000");
  });

  it("clicking a search result navigates to that topic's panel", async () => {
    stubFetch(bundle);
    const root = await mountApp();
    const input = root.querySelector<HTMLInputElement>("#search")!;
    input.value = "distancing";
    input.dispatchEvent(new Event("change", { bubbles: true }));
    const first = root.querySelector(".search-results .result")!;
    const key = first.getAttribute("data-topic")!;
    first.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    const [level, index] = key.split("-");
    const record = bundle.topics[key];
    const expectedMain = level === "main" ? Number(index) : record.parent;
    expect(root.querySelector(".panel")!.getAttribute("data-main")).toBe(
      String(expectedMain),
    );
  });
});

describe("purity and fragment round-trip", () => {
  it("rendering does not mutate the bundle", () => {
    const before = JSON.stringify(bundle);
    renderApp(bundle, { main: 2, sub: subTopicsOf(bundle, 2)[0], query: "virus" });
    expect(JSON.stringify(bundle)).toBe(before);
  });

  it("renderApp is deterministic for a given state", () => {
    const state = { main: 1, sub: null, query: "vaccine" };
    expect(renderApp(bundle, state)).toBe(renderApp(bundle, state));
  });

  it("every reachable state round-trips through the fragment", () => {
    const states: { main: number | null; sub: number | null; query: string }[] = [
      { main: null, sub: null, query: "" },
    ];
    for (let main = 0; main < K_MAIN; main += 1) {
      states.push({ main, sub: null, query: "" });
      states.push({ main, sub: null, query: "social distancing" });
      for (const sub of subTopicsOf(bundle, main)) {
        states.push({ main, sub, query: "" });
        states.push({ main, sub, query: "virus test" });
      }
    }
    for (const state of states) {
      expect(parseRoute(formatRoute(state))).toEqual(state);
    }
  });

  it("error banner escapes markup", () => {
    expect(renderErrorBanner("<script>boom</script>")).not.toContain("<script>");
  });
});
