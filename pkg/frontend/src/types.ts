/** JSON shapes exchanged with the planning service. */

export interface RequirementJson {
  id: string;
  title: string;
  description: string;
  keywords: string[];
  time_estimate: number;
}

export interface StakeholderJson {
  id: string;
  name: string;
  expertise_keywords: string[];
}

export interface DimensionJson {
  name: string;
  weight: number;
  polarity_note: string;
}

export interface PreferenceConstraintJson {
  stakeholder: string;
  requirement: string;
  op: "=" | "<=" | ">=" | "<" | ">";
  value: number;
  hardness?: string;
}

export interface PreferencesJson {
  assignments: Record<string, Record<string, number>>;
  constraints: PreferenceConstraintJson[];
}

/** dimension -> requirement -> stakeholder -> rating; absent cell = unrated */
export type EvaluationsJson = Record<string, Record<string, Record<string, number>>>;

export interface ProjectFile {
  requirements: RequirementJson[];
  stakeholders: StakeholderJson[];
  dimensions: DimensionJson[];
  evaluations: EvaluationsJson;
  release_horizon: number;
  hard_constraints: Record<string, unknown>[];
  preferences: PreferencesJson;
  mvp?: { maxtime: number };
  config?: Record<string, unknown>;
}

export interface Snapshot {
  project: ProjectFile;
  version: number;
}

export interface AnalysisResponse<T> {
  result: T;
  engine_version: string;
  project_version: number;
  elapsed_ms: number;
}

export interface PrioritizeResult {
  kind: "prioritize";
  per_dimension: Record<string, Record<string, number>>;
  overall: Record<string, number>;
  priority: Record<string, number>;
  order: string[];
}

export interface CompleteResult {
  kind: "complete";
  dimension: string;
  matrix: Record<string, Record<string, number>>;
  observed: [string, string][];
  seed: number;
}

export interface MvpResult {
  kind: "mvp";
  maxtime: number;
  utilities: Record<string, number>;
  times: Record<string, number>;
  selected: string[];
  total_utility: number;
  total_time: number;
}

export interface ConsensusResult {
  kind: "consensus";
  plan: Record<string, number>;
  change_counts: Record<string, number>;
  objective_value: number;
  config: Record<string, string>;
}

export interface PlanResult {
  kind: "plan";
  status: "SAT" | "SOFT_UNSAT" | "UNSAT";
  assignment?: Record<string, number>;
  includes_preferences?: boolean;
  hint?: string;
}

export interface ConflictMember {
  stakeholder: string | null;
  requirement: string | null;
  text: string;
}

export interface ConflictsResult {
  kind: "conflicts";
  background: boolean;
  count: number;
  conflicts: { constraints: ConflictMember[] }[];
}

export interface DiagnoseResult {
  kind: "diagnose";
  consistent: boolean;
  diagnosis: ConflictMember[];
  repaired_plan?: Record<string, number> | null;
}

export interface AssignResult {
  kind: "assign";
  similarity: Record<string, Record<string, number>>;
  recommendations: Record<string, { stakeholder: string; score: number }[]>;
}

/** (stakeholder, requirement) pair disabled by a what-if toggle */
export interface ExcludedPreference {
  stakeholder: string;
  requirement: string;
}
