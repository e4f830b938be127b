/** Stakeholder-requirement similarity heatmap; the strongest recommendation
 * per requirement is highlighted, further recommended validators are marked. */

import { clear, el, fmt } from "../dom";
import type { AppStore } from "../state";
import type { AssignResult } from "../types";

export async function renderAssignments(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  const project = store.snapshot?.project;
  if (!project) return;
  const response = await store.api.analyze<AssignResult>("assign");
  const { similarity, recommendations } = response.result;

  const table = el("table", { class: "grid heatmap", "data-testid": "similarity-table" });
  const header = el("tr", {}, [el("th", {}, [""])]);
  for (const s of project.stakeholders) header.append(el("th", {}, [s.id]));
  table.append(header);

  for (const r of project.requirements) {
    const row = el("tr", {}, [el("th", {}, [r.id])]);
    const picks = recommendations[r.id] ?? [];
    const top = picks[0]?.stakeholder;
    const picked = new Set(picks.map((p) => p.stakeholder));
    for (const s of project.stakeholders) {
      const score = similarity[r.id]?.[s.id] ?? 0;
      const cell = el("td", { "data-sim": `${r.id}:${s.id}` }, [fmt(score)]);
      cell.style.background = heat(score);
      if (s.id === top) cell.classList.add("top-pick");
      else if (picked.has(s.id)) cell.classList.add("pick");
      row.append(cell);
    }
    table.append(row);
  }
  root.append(table, el("p", { class: "note" }, [
    "highlight = best validator for the requirement; similarity ranges 0 to 2",
  ]));
}

function heat(score: number): string {
  const strength = Math.min(score / 2, 1);
  return `rgba(46, 133, 85, ${(strength * 0.5).toFixed(3)})`;
}
