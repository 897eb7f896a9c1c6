/** Wire payloads of the session service, field-for-field. */

export interface SessionCreated {
  session_id: string;
  state: string;
}

export interface ColumnNote {
  name: string;
  description: string;
}

export interface DatasetSummary {
  summary: string;
  columns: ColumnNote[];
  row: string;
  trend: string;
}

export interface TaskSuggestion {
  task: string;
  rationale: string;
  example_formulation: string;
}

export interface UploadReply {
  reply: string;
  summary: DatasetSummary | null;
  suggestions: TaskSuggestion[];
  state: string;
}

export interface PetelProgress {
  filled: string[];
  missing: string[];
}

export interface MessageReply {
  reply: string;
  state: string;
  petel_progress: PetelProgress;
}

export interface SessionRecord {
  session_id: string;
  state: string;
  turn_count: number;
  created_at: number;
  dataset: string | null;
  petel: Record<string, unknown> | null;
  last_summary: string | null;
  snapshot: Record<string, unknown> | null;
}

export interface MethodRow {
  method: string;
  status: string;
  metrics: Record<string, unknown>;
}

export interface ResultsPayload {
  recommended: string;
  rationale: string;
  ranking: string[];
  ranked_by: string;
  methods: MethodRow[];
}
