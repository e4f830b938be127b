/** Read-only analysis tabs: ranking, MVP selection, consensus plan. */

import { ApiError } from "../api";
import { clear, el, fmt } from "../dom";
import type { AppStore } from "../state";
import type { ConsensusResult, MvpResult, PrioritizeResult } from "../types";

export async function renderRanking(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  if (!store.snapshot) return;
  const response = await store.api.analyze<PrioritizeResult>("prioritize");
  const table = el("table", { class: "grid", "data-testid": "ranking-table" });
  table.append(el("tr", {}, [el("th", {}, ["requirement"]), el("th", {}, ["utility"]),
                             el("th", {}, ["priority"])]));
  for (const rid of response.result.order) {
    table.append(el("tr", { "data-rank-row": rid }, [
      el("td", {}, [rid]),
      el("td", { class: "utility" }, [fmt(response.result.overall[rid]!, 4)]),
      el("td", { class: "priority" }, [String(response.result.priority[rid]!)]),
    ]));
  }
  root.append(table);
}

export async function renderMvp(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  if (!store.snapshot) return;
  let result: MvpResult;
  try {
    result = (await store.api.analyze<MvpResult>("mvp")).result;
  } catch (err) {
    if (err instanceof ApiError) {
      root.append(el("p", { class: "empty" }, [err.message]));
      return;
    }
    throw err;
  }
  const table = el("table", { class: "grid", "data-testid": "mvp-table" });
  table.append(el("tr", {}, [el("th", {}, ["requirement"]), el("th", {}, ["utility"]),
                             el("th", {}, ["time"]), el("th", {}, ["selected"])]));
  for (const rid of Object.keys(result.utilities).sort()) {
    const selected = result.selected.includes(rid);
    const row = el("tr", {}, [
      el("td", {}, [rid]),
      el("td", {}, [fmt(result.utilities[rid]!, 4)]),
      el("td", {}, [String(result.times[rid]!)]),
      el("td", {}, [selected ? "yes" : ""]),
    ]);
    if (selected) row.classList.add("selected");
    table.append(row);
  }
  root.append(table, el("p", { class: "note" }, [
    `total utility ${fmt(result.total_utility, 4)}, ` +
    `time ${result.total_time} of ${result.maxtime}`,
  ]));
}

export async function renderConsensus(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  if (!store.snapshot) return;
  let result: ConsensusResult;
  try {
    result = (await store.api.analyze<ConsensusResult>("consensus")).result;
  } catch (err) {
    if (err instanceof ApiError) {
      root.append(el("p", { class: "empty" }, [err.message]));
      return;
    }
    throw err;
  }
  const table = el("table", { class: "grid", "data-testid": "consensus-table" });
  table.append(el("tr", {}, [el("th", {}, ["requirement"]), el("th", {}, ["release"])]));
  for (const [rid, release] of Object.entries(result.plan)) {
    table.append(el("tr", {}, [el("td", {}, [rid]), el("td", {}, [String(release)])]));
  }
  const changes = Object.entries(result.change_counts)
    .map(([sid, n]) => `${sid}: ${n}`)
    .join(", ");
  root.append(table, el("p", { class: "note" }, [`changes per stakeholder: ${changes}`]));
}
