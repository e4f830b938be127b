/** Conflict console: minimal conflict cards with stakeholder attribution and
 * what-if toggles. Disabling a preference locally re-queries the service with
 * an exclude list; when nothing conflicts any more the current satisfying plan
 * is rendered alongside. */

import { clear, el } from "../dom";
import type { AppStore } from "../state";
import type { ConflictsResult, DiagnoseResult, PlanResult } from "../types";

export async function renderConflicts(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  const project = store.snapshot?.project;
  if (!project) return;
  if (project.preferences.constraints.length === 0) {
    root.append(el("p", { class: "empty" }, ["no release preferences defined"]));
    return;
  }

  const cards = el("div", { class: "conflict-cards", "data-testid": "conflict-cards" });
  const diagnosisPanel = el("div", { class: "diagnosis", "data-testid": "diagnosis-panel" });
  const planPanel = el("div", { class: "plan", "data-testid": "plan-panel" });
  root.append(
    el("h3", {}, ["Open conflicts"]), cards,
    el("h3", {}, ["Suggested repair"]), diagnosisPanel,
    el("h3", {}, ["Release plan"]), planPanel,
  );
  await refresh(store, cards, diagnosisPanel, planPanel);
}

async function refresh(
  store: AppStore,
  cards: HTMLElement,
  diagnosisPanel: HTMLElement,
  planPanel: HTMLElement,
): Promise<void> {
  const exclude = store.excludeList();
  const [conflicts, diagnose, plan] = await Promise.all([
    store.api.analyze<ConflictsResult>("conflicts", { exclude }),
    store.api.analyze<DiagnoseResult>("diagnose", { exclude }),
    store.api.analyze<PlanResult>("plan", { exclude }),
  ]);
  renderCards(store, cards, diagnosisPanel, planPanel, conflicts.result);
  renderDiagnosis(diagnosisPanel, diagnose.result);
  renderPlan(planPanel, plan.result);
}

function renderCards(
  store: AppStore,
  cards: HTMLElement,
  diagnosisPanel: HTMLElement,
  planPanel: HTMLElement,
  result: ConflictsResult,
): void {
  clear(cards);
  if (result.count === 0) {
    cards.append(el("p", { class: "empty", "data-testid": "no-conflicts" }, ["no conflicts"]));
    return;
  }
  result.conflicts.forEach((conflict, index) => {
    const card = el("div", { class: "card", "data-conflict": String(index + 1) });
    card.append(el("h4", {}, [`conflict ${index + 1}`]));
    for (const member of conflict.constraints) {
      const row = el("label", { class: "constraint" });
      const toggle = el("input", { type: "checkbox" });
      const pref = {
        stakeholder: member.stakeholder ?? "",
        requirement: member.requirement ?? "",
      };
      toggle.checked = store.isDisabled(pref);
      toggle.setAttribute("data-toggle", `${pref.stakeholder}:${pref.requirement}`);
      toggle.addEventListener("change", async () => {
        store.setDisabled(pref, toggle.checked);
        await refresh(store, cards, diagnosisPanel, planPanel);
      });
      row.append(
        toggle,
        el("span", { class: "owner" }, [member.stakeholder ?? "hard"]),
        el("span", { class: "text" }, [member.text]),
      );
      card.append(row);
    }
    cards.append(card);
  });
}

function renderDiagnosis(panel: HTMLElement, result: DiagnoseResult): void {
  clear(panel);
  if (result.consistent) {
    panel.append(el("p", { class: "empty" }, ["preferences are consistent"]));
    return;
  }
  const list = el("ul");
  for (const member of result.diagnosis) {
    list.append(el("li", {}, [`${member.text} (retract to restore consistency)`]));
  }
  panel.append(list);
}

function renderPlan(panel: HTMLElement, result: PlanResult): void {
  clear(panel);
  if (result.status === "UNSAT") {
    panel.append(el("p", { class: "error" }, ["UNSAT: dependencies conflict on their own"]));
    return;
  }
  const note =
    result.status === "SAT"
      ? "satisfies all dependencies and remaining preferences"
      : "preferences inconsistent; dependency-only plan shown";
  const table = el("table", { class: "grid", "data-testid": "plan-table" });
  table.append(el("tr", {}, [el("th", {}, ["requirement"]), el("th", {}, ["release"])]));
  for (const [rid, release] of Object.entries(result.assignment ?? {})) {
    table.append(el("tr", {}, [el("td", {}, [rid]), el("td", {}, [String(release)])]));
  }
  panel.append(table, el("p", { class: "note", "data-testid": "plan-note" }, [note]));
}
