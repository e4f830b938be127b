/** Typed REST client for the planning service. All domain numbers shown in the
 * UI come through these calls; the client computes nothing itself. */

import type {
  AnalysisResponse,
  ExcludedPreference,
  ProjectFile,
  Snapshot,
} from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, message: string, readonly body?: unknown) {
    super(message);
  }
}

/** 409: someone else changed the project since our version. */
export class VersionConflict extends ApiError {
  constructor(readonly currentVersion: number) {
    super(409, `project changed under us (now v${currentVersion})`);
  }
}

/** Network-level failure: the service is unreachable. */
export class ServiceUnreachable extends Error {}

export type PatchBody =
  | { stakeholder: string; assignments: Record<string, number> }
  | {
      stakeholder: string;
      constraints: { requirement: string; op: string; value: number }[];
    }
  | {
      evaluation: {
        stakeholder: string;
        requirement: string;
        dimension: string;
        rating: number;
      };
    };

export interface AnalyzeOptions {
  exclude?: ExcludedPreference[];
  dimension?: string;
  seed?: number;
  top?: number;
  background?: boolean;
  config?: Record<string, unknown>;
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request(
    method: string,
    path: string,
    body?: unknown,
    ifMatch?: number,
  ): Promise<Response> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (ifMatch !== undefined) headers["if-match"] = String(ifMatch);
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceUnreachable(String(err));
    }
    if (response.status === 409) {
      const payload = await response.json().catch(() => ({}));
      throw new VersionConflict(Number(payload.current_version ?? -1));
    }
    if (!response.ok) {
      const payload = await response.json().catch(() => undefined);
      const detail =
        payload && typeof payload === "object" && "error" in payload
          ? String((payload as { error: unknown }).error)
          : response.statusText;
      throw new ApiError(response.status, detail, payload);
    }
    return response;
  }

  /** Current snapshot, or null before the first upload. */
  async getProject(): Promise<Snapshot | null> {
    try {
      const response = await this.request("GET", "/project");
      return (await response.json()) as Snapshot;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }

  async putProject(doc: ProjectFile, ifMatch?: number): Promise<number> {
    const response = await this.request("PUT", "/project", doc, ifMatch);
    return ((await response.json()) as { version: number }).version;
  }

  async patchPreferences(body: PatchBody, ifMatch?: number): Promise<number> {
    const response = await this.request(
      "PATCH",
      "/project/preferences",
      body,
      ifMatch,
    );
    return ((await response.json()) as { version: number }).version;
  }

  async analyze<T>(name: string, options: AnalyzeOptions = {}): Promise<AnalysisResponse<T>> {
    const response = await this.request("POST", `/analyze/${name}`, options);
    return (await response.json()) as AnalysisResponse<T>;
  }
}
