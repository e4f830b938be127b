/** Release preference editing: a wish grid (stakeholder x requirement release
 * numbers) and the list of relational preferences with their owners. */

import { clear, el } from "../dom";
import type { AppStore } from "../state";

export async function renderPreferences(root: HTMLElement, store: AppStore): Promise<void> {
  clear(root);
  const project = store.snapshot?.project;
  if (!project) return;
  const horizon = project.release_horizon;

  root.append(el("h3", {}, [`Release wishes (1..${horizon})`]));
  const assignments = project.preferences.assignments;
  const table = el("table", { class: "grid", "data-testid": "wish-grid" });
  const header = el("tr", {}, [el("th", {}, [""])]);
  for (const r of project.requirements) header.append(el("th", {}, [r.id]));
  table.append(header);
  for (const s of project.stakeholders) {
    const row = el("tr", {}, [el("th", {}, [s.id])]);
    for (const r of project.requirements) {
      const wish = assignments[s.id]?.[r.id];
      const input = el("input", {
        class: "cell",
        value: wish === undefined ? "" : String(wish),
        placeholder: "?",
        "data-wish": `${s.id}:${r.id}`,
      });
      input.addEventListener("change", async () => {
        const release = Number(input.value);
        if (!Number.isInteger(release) || release < 1 || release > horizon) {
          input.classList.add("invalid");
          input.title = `releases run 1..${horizon}`;
          return;
        }
        input.classList.remove("invalid");
        await store.patch({ stakeholder: s.id, assignments: { [r.id]: release } });
      });
      row.append(el("td", {}, [input]));
    }
    table.append(row);
  }
  root.append(table);

  root.append(el("h3", {}, ["Typed preferences"]));
  const constraints = project.preferences.constraints;
  if (constraints.length === 0) {
    root.append(el("p", { class: "empty" }, ["none defined"]));
    return;
  }
  const list = el("ul", { class: "pref-list", "data-testid": "pref-list" });
  for (const c of constraints) {
    list.append(el("li", {}, [
      el("span", { class: "owner" }, [c.stakeholder]),
      ` ${c.requirement}.rel ${c.op} ${c.value}`,
    ]));
  }
  root.append(list);
}
