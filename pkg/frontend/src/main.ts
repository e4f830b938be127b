/** Application shell: tab bar, project loading, service-unreachable banner.
 * Every displayed number is traceable to a service response. */

import { ApiClient, ServiceUnreachable } from "./api";
import { clear, el } from "./dom";
import { AppStore } from "./state";
import type { ProjectFile } from "./types";
import { renderAssignments } from "./tabs/assignments";
import { renderConflicts } from "./tabs/conflicts";
import { renderEvaluations } from "./tabs/evaluations";
import { renderPreferences } from "./tabs/preferences";
import { renderConsensus, renderMvp, renderRanking } from "./tabs/simple";

export interface Tab {
  id: string;
  label: string;
  render(root: HTMLElement, store: AppStore): Promise<void>;
}

export const TABS: Tab[] = [
  { id: "evaluations", label: "Evaluations", render: renderEvaluations },
  { id: "preferences", label: "Preferences", render: renderPreferences },
  { id: "ranking", label: "Ranking", render: renderRanking },
  { id: "mvp", label: "MVP", render: renderMvp },
  { id: "consensus", label: "Consensus", render: renderConsensus },
  { id: "conflicts", label: "Conflicts", render: renderConflicts },
  { id: "assignments", label: "Assignments", render: renderAssignments },
];

export class App {
  readonly store: AppStore;
  activeTab = "evaluations";
  private content!: HTMLElement;
  private banner!: HTMLElement;
  private status!: HTMLElement;

  constructor(readonly root: HTMLElement, client: ApiClient) {
    this.store = new AppStore(client);
  }

  async start(): Promise<void> {
    this.build();
    this.store.on("snapshot", () => {
      this.updateStatus();
      void this.renderActive();
    });
    this.store.on("conflict-discarded", () => {
      this.flash("your edit was discarded: the project changed; showing the fresh state");
    });
    try {
      await this.store.refresh();
    } catch (err) {
      if (err instanceof ServiceUnreachable) this.showUnreachable();
      else throw err;
    }
  }

  private build(): void {
    clear(this.root);
    this.banner = el("div", { class: "banner hidden", "data-testid": "banner" });
    this.status = el("div", { class: "status", "data-testid": "status" });
    const nav = el("nav", { class: "tabs" });
    for (const tab of TABS) {
      const button = el("button", { "data-tab": tab.id }, [tab.label]);
      button.addEventListener("click", () => {
        this.activeTab = tab.id;
        void this.renderActive();
      });
      nav.append(button);
    }
    const upload = el("input", { type: "file", accept: ".json", "data-testid": "upload" });
    upload.addEventListener("change", async () => {
      const file = upload.files?.[0];
      if (!file) return;
      const doc = JSON.parse(await file.text()) as ProjectFile;
      await this.store.uploadProject(doc);
    });
    this.content = el("main", { class: "content", "data-testid": "content" });
    this.root.append(
      el("header", {}, [el("h1", {}, ["reqplan"]), this.status, upload]),
      this.banner, nav, this.content,
    );
  }

  async renderActive(): Promise<void> {
    const tab = TABS.find((t) => t.id === this.activeTab)!;
    for (const button of this.root.querySelectorAll("nav.tabs button")) {
      button.classList.toggle("active", button.getAttribute("data-tab") === tab.id);
    }
    if (!this.store.snapshot) {
      clear(this.content);
      this.content.append(el("p", { class: "empty" }, [
        "no project loaded; upload a project JSON to begin",
      ]));
      return;
    }
    try {
      await tab.render(this.content, this.store);
    } catch (err) {
      if (err instanceof ServiceUnreachable) this.showUnreachable();
      else throw err;
    }
  }

  private updateStatus(): void {
    const snapshot = this.store.snapshot;
    this.status.textContent = snapshot
      ? `project v${snapshot.version}: ${snapshot.project.requirements.length} requirements, ` +
        `${snapshot.project.stakeholders.length} stakeholders`
      : "no project";
  }

  private flash(message: string): void {
    this.banner.textContent = message;
    this.banner.classList.remove("hidden");
    setTimeout(() => this.banner.classList.add("hidden"), 4000);
  }

  private showUnreachable(): void {
    clear(this.banner);
    this.banner.append(
      "service unreachable ",
      (() => {
        const retry = el("button", { "data-action": "retry" }, ["retry"]);
        retry.addEventListener("click", () => void this.start());
        return retry;
      })(),
    );
    this.banner.classList.remove("hidden");
  }
}

export function apiBaseFromLocation(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? "http://127.0.0.1:8000";
}

export async function initApp(root: HTMLElement, client?: ApiClient): Promise<App> {
  const app = new App(root, client ?? new ApiClient(apiBaseFromLocation()));
  await app.start();
  await app.renderActive();
  return app;
}
