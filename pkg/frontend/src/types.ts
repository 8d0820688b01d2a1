/**
 * JSON shapes delivered by the factoryqa HTTP API. These mirror the server's
 * responses exactly; the UI holds no state of its own beyond the current
 * chat session.
 */

export type SourceName = 'manuals' | 'shared';

export interface ScoredSnippet {
  doc_id: string;
  chunk_index: number;
  text: string;
  score: number;
}

export interface SourceAnswer {
  source: SourceName;
  answer_text: string;
  refused: boolean;
  snippets: ScoredSnippet[];
  error: string | null;
}

export interface DualAnswer {
  per_source: SourceAnswer[];
}

export interface ChatEntry {
  query: string;
  answers: DualAnswer;
  timestamp: string;
}

export interface DocumentRecord {
  doc_id: string;
  name: string;
  source: SourceName;
  n_chunks: number;
}

export interface UploadResult {
  doc_id: string;
  n_chunks: number;
}

export type TagStatus = 'draft' | 'checked' | 'published';

export interface WhyStep {
  question: string;
  answer: string;
}

export interface YellowTag {
  tag_id: string;
  title: string;
  problem_description: string;
  whys: WhyStep[];
  root_cause: string;
  countermeasure: string;
  author: string;
  created_at: string;
  status: TagStatus;
}

export type Verdict = 'Consistent' | 'Issues';

export interface CheckReport {
  tag_id: string;
  verdict: Verdict;
  findings: string[];
  model_name: string;
  status: TagStatus;
}

/** Error envelope used by every non-2xx API response. */
export interface ApiErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
