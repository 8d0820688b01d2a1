/**
 * Pure orchestration between forms and the API client. These helpers carry
 * the UI contracts that matter (validate before network, publish gated on a
 * Consistent check) so they can be tested against a stubbed client.
 */

import type { ApiClient } from './api';
import type { CheckReport, SourceName, UploadResult, YellowTag } from './types';
import {
  encodeBase64,
  formatForFilename,
  resolveUploadName,
  validateTagForm,
} from './validate';

export interface TagFlowState {
  tag: YellowTag | null;
  report: CheckReport | null;
}

export function canCheck(state: TagFlowState): boolean {
  return state.tag !== null && state.tag.status === 'draft';
}

export function canPublish(state: TagFlowState): boolean {
  if (state.tag === null) {
    return false;
  }
  if (state.tag.status === 'published') {
    return true;
  }
  return (
    state.tag.status === 'checked' &&
    state.report !== null &&
    state.report.verdict === 'Consistent'
  );
}

export type SubmitResult<T> =
  | { ok: true; value: T }
  | { ok: false; errors: string[] };

/** Validate and create a tag; invalid input never reaches the client. */
export async function submitTagForm(
  api: ApiClient,
  input: unknown
): Promise<SubmitResult<YellowTag>> {
  const validated = validateTagForm(input);
  if (!validated.ok) {
    return { ok: false, errors: validated.errors };
  }
  const tag = await api.createTag(validated.data);
  return { ok: true, value: tag };
}

export async function runLogicalCheck(
  api: ApiClient,
  state: TagFlowState
): Promise<TagFlowState> {
  if (!canCheck(state) || state.tag === null) {
    return state;
  }
  const report = await api.checkTag(state.tag.tag_id);
  return { tag: { ...state.tag, status: report.status }, report };
}

export async function publish(api: ApiClient, state: TagFlowState): Promise<TagFlowState> {
  if (!canPublish(state) || state.tag === null) {
    return state;
  }
  const tag = await api.publishTag(state.tag.tag_id);
  return { ...state, tag };
}

/** Validate the (possibly renamed) file and upload it; rejects unsupported
 * formats before any network call. */
export async function submitUpload(
  api: ApiClient,
  originalName: string,
  rename: string,
  source: SourceName,
  content: Uint8Array
): Promise<SubmitResult<UploadResult & { name: string }>> {
  const named = resolveUploadName(originalName, rename);
  if (!named.ok) {
    return named;
  }
  const format = formatForFilename(named.data);
  if (format === null) {
    return { ok: false, errors: [`Unsupported file type for ${named.data}`] };
  }
  const result = await api.uploadDocument({
    name: named.data,
    format,
    source,
    content_base64: encodeBase64(content),
  });
  return { ok: true, value: { ...result, name: named.data } };
}
