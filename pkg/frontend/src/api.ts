/**
 * Thin typed client for the factoryqa HTTP API. All server interaction goes
 * through this module, so tests can stub a single fetch function.
 */

import type {
  ApiErrorBody,
  CheckReport,
  DocumentRecord,
  DualAnswer,
  UploadResult,
  YellowTag,
} from './types';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: Record<string, unknown> = {}
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface TagPayload {
  title: string;
  problem_description: string;
  whys: { question: string; answer: string }[];
  root_cause: string;
  countermeasure: string;
  author: string;
}

export interface DocumentPayload {
  name: string;
  format: string;
  source: string;
  content_base64: string;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { 'Content-Type': 'application/json' } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let envelope: ApiErrorBody;
      try {
        envelope = (await response.json()) as ApiErrorBody;
      } catch {
        throw new ApiError(response.status, 'transport', `HTTP ${response.status}`);
      }
      throw new ApiError(response.status, envelope.code, envelope.message, envelope.details);
    }
    return (await response.json()) as T;
  }

  ask(query: string, k?: number): Promise<DualAnswer> {
    return this.request<DualAnswer>('POST', '/api/ask', k === undefined ? { query } : { query, k });
  }

  listDocuments(): Promise<DocumentRecord[]> {
    return this.request<DocumentRecord[]>('GET', '/api/documents');
  }

  uploadDocument(payload: DocumentPayload): Promise<UploadResult> {
    return this.request<UploadResult>('POST', '/api/documents', payload);
  }

  createTag(payload: TagPayload): Promise<YellowTag> {
    return this.request<YellowTag>('POST', '/api/tags', payload);
  }

  listTags(): Promise<YellowTag[]> {
    return this.request<YellowTag[]>('GET', '/api/tags');
  }

  checkTag(tagId: string): Promise<CheckReport> {
    return this.request<CheckReport>('POST', `/api/tags/${tagId}/check`);
  }

  publishTag(tagId: string): Promise<YellowTag> {
    return this.request<YellowTag>('POST', `/api/tags/${tagId}/publish`);
  }
}
