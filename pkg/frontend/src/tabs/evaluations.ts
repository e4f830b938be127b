/** Editable stakeholder x requirement grid per dimension. Missing cells render
 * as "?". Committing a cell PATCHes the service, then re-runs prioritize so
 * the ranking panel always shows engine-computed numbers. */

import { clear, el, fmt } from "../dom";
import type { AppStore } from "../state";
import type { CompleteResult, PrioritizeResult } from "../types";

export async function renderEvaluations(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  const project = store.snapshot?.project;
  if (!project) return;
  if (project.dimensions.length === 0) {
    root.append(el("p", { class: "empty" }, ["no interest dimensions in this project"]));
    return;
  }

  const rankingPanel = el("div", { class: "ranking-panel", "data-testid": "ranking-panel" });
  const grids = el("div");
  for (const dimension of project.dimensions) {
    grids.append(renderDimensionGrid(dimension.name, root, store, rankingPanel));
  }
  root.append(grids, el("h3", {}, ["Ranking"]), rankingPanel);
  await refreshRanking(store, rankingPanel);
}

function renderDimensionGrid(
  dimension: string,
  root: HTMLElement,
  store: AppStore,
  rankingPanel: HTMLElement,
): HTMLElement {
  const project = store.snapshot!.project;
  const byReq = project.evaluations[dimension] ?? {};
  const table = el("table", { class: "grid", "data-dimension": dimension });
  const header = el("tr", {}, [el("th", {}, [dimension])]);
  for (const s of project.stakeholders) header.append(el("th", {}, [s.id]));
  table.append(header);

  for (const r of project.requirements) {
    const row = el("tr", {}, [el("th", {}, [r.id])]);
    for (const s of project.stakeholders) {
      const rating = byReq[r.id]?.[s.id];
      const input = el("input", {
        class: "cell",
        value: rating === undefined ? "" : String(rating),
        placeholder: "?",
        "data-cell": `${dimension}:${r.id}:${s.id}`,
      });
      if (rating === undefined) input.classList.add("missing");
      input.addEventListener("change", () =>
        commitCell(input, dimension, r.id, s.id, store, rankingPanel),
      );
      row.append(el("td", {}, [input]));
    }
    table.append(row);
  }

  const completeButton = el("button", { "data-action": `complete:${dimension}` }, [
    "complete matrix",
  ]);
  completeButton.addEventListener("click", async () => {
    const response = await store.api.analyze<CompleteResult>("complete", { dimension });
    fillPredictions(table, response.result);
  });
  return el("div", { class: "dimension-block" }, [table, completeButton]);
}

async function commitCell(
  input: HTMLInputElement,
  dimension: string,
  requirement: string,
  stakeholder: string,
  store: AppStore,
  rankingPanel: HTMLElement,
): Promise<void> {
  const rating = Number(input.value);
  if (input.value.trim() === "" || !Number.isFinite(rating) || rating < 0 || rating > 10) {
    input.classList.add("invalid");
    input.title = "ratings are numbers from 0 to 10";
    return;
  }
  input.classList.remove("invalid", "missing");
  const accepted = await store.patch({
    evaluation: { stakeholder, requirement, dimension, rating },
  });
  if (accepted) await refreshRanking(store, rankingPanel);
}

async function refreshRanking(store: AppStore, panel: HTMLElement): Promise<void> {
  const response = await store.api.analyze<PrioritizeResult>("prioritize");
  clear(panel);
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
  panel.append(table);
}

function fillPredictions(table: HTMLElement, result: CompleteResult): void {
  const observed = new Set(result.observed.map(([r, s]) => `${r}:${s}`));
  for (const input of table.querySelectorAll<HTMLInputElement>("input.cell")) {
    const [, rid, sid] = input.dataset.cell!.split(":");
    if (observed.has(`${rid}:${sid}`)) continue;
    input.value = fmt(result.matrix[rid!]![sid!]!, 3);
    input.classList.remove("missing");
    input.classList.add("predicted");
    input.title = "predicted by matrix completion (not an observed rating)";
  }
}
