/**
 * Pure HTML renderers for every view. No DOM access here: each function maps
 * state to a markup string, which keeps the UI contract unit-testable and
 * leaves event wiring to app.ts.
 */

import type {
  ChatEntry,
  CheckReport,
  DocumentRecord,
  ScoredSnippet,
  SourceAnswer,
  WhyStep,
  YellowTag,
} from './types';
import { ApiError } from './api';
import { MAX_WHYS } from './validate';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

export const SOURCE_LABELS: Record<string, string> = {
  manuals: 'From manuals',
  shared: 'From shared knowledge',
};

export const REFUSAL_PLACEHOLDER = 'No answer found in this source.';

function renderSnippet(snippet: ScoredSnippet, docNames: Map<string, string>): string {
  const name = docNames.get(snippet.doc_id) ?? snippet.doc_id;
  return [
    '<li class="snippet">',
    `<span class="snippet-doc">${escapeHtml(name)}</span>`,
    `<span class="snippet-chunk">chunk ${snippet.chunk_index}</span>`,
    `<span class="snippet-score">score ${snippet.score.toFixed(4)}</span>`,
    `<pre class="snippet-text">${escapeHtml(snippet.text)}</pre>`,
    '</li>',
  ].join('');
}

/**
 * One labeled answer block. The snippet provenance panel is always rendered
 * and always placed after the answer text, even for refusals and errors.
 */
export function renderSourceAnswer(
  answer: SourceAnswer,
  docNames: Map<string, string> = new Map()
): string {
  const label = SOURCE_LABELS[answer.source] ?? answer.source;
  let body: string;
  if (answer.error !== null) {
    body = `<p class="answer-error">Source failed: ${escapeHtml(answer.error)}</p>`;
  } else if (answer.refused) {
    body = `<p class="answer-refused">${REFUSAL_PLACEHOLDER}</p>`;
  } else {
    body = `<p class="answer-text">${escapeHtml(answer.answer_text)}</p>`;
  }
  const snippetItems = answer.snippets.map((s) => renderSnippet(s, docNames)).join('');
  return [
    `<section class="source-answer" data-source="${answer.source}">`,
    `<h3>${escapeHtml(label)}</h3>`,
    body,
    '<details open class="snippet-panel">',
    '<summary>Relevant document sections</summary>',
    `<ul>${snippetItems}</ul>`,
    '</details>',
    '</section>',
  ].join('');
}

export function renderChatEntry(
  entry: ChatEntry,
  docNames: Map<string, string> = new Map()
): string {
  const blocks = entry.answers.per_source
    .map((answer) => renderSourceAnswer(answer, docNames))
    .join('');
  return [
    '<article class="chat-entry">',
    `<p class="chat-query">${escapeHtml(entry.query)}</p>`,
    blocks,
    '</article>',
  ].join('');
}

/** Inline error notice with the API error code and a retry action. */
export function renderApiError(error: ApiError): string {
  const notice =
    error.code === 'no_knowledge'
      ? 'The knowledge base is empty. Upload documents before asking questions.'
      : error.message;
  return [
    `<div class="api-error" data-code="${escapeHtml(error.code)}">`,
    `<span class="api-error-code">[${escapeHtml(error.code)}]</span> `,
    `<span class="api-error-message">${escapeHtml(notice)}</span>`,
    '<button type="button" data-action="retry">Retry</button>',
    '</div>',
  ].join('');
}

function renderWhyRow(index: number, step: WhyStep): string {
  return [
    `<fieldset class="why-step" data-why="${index}">`,
    `<label>Why ${index + 1} <input type="text" name="why-question-${index}" value="${escapeHtml(step.question)}"></label>`,
    `<label>Answer <input type="text" name="why-answer-${index}" value="${escapeHtml(step.answer)}"></label>`,
    '</fieldset>',
  ].join('');
}

/**
 * The five-why capture form. Every field is rendered expanded: no details
 * element, no hidden attribute, no expand interaction needed to reach the
 * why steps.
 */
export function renderTagForm(whys: WhyStep[], errors: string[] = []): string {
  const rows = whys.map((step, i) => renderWhyRow(i, step)).join('');
  const errorList = errors.length
    ? `<ul class="form-errors">${errors.map((e) => `<li>${escapeHtml(e)}</li>`).join('')}</ul>`
    : '';
  return [
    '<form class="tag-form" data-form="yellow-tag">',
    errorList,
    '<label>Title <input type="text" name="title"></label>',
    '<label>Problem description <textarea name="problem_description"></textarea></label>',
    rows,
    `<button type="button" data-action="add-why"${whys.length >= MAX_WHYS ? ' disabled' : ''}>Add why</button>`,
    '<label>Root cause <input type="text" name="root_cause"></label>',
    '<label>Countermeasure <input type="text" name="countermeasure"></label>',
    '<label>Author <input type="text" name="author"></label>',
    '<button type="submit" data-action="create-tag">Create tag</button>',
    '</form>',
  ].join('');
}

/**
 * Check / publish controls for one tag. Publish is enabled only once the
 * logical check came back Consistent (the server then reports the tag as
 * checked); it stays enabled for already-published tags so a re-click is a
 * harmless idempotent call.
 */
export function renderTagActions(tag: YellowTag, report: CheckReport | null): string {
  const checkDisabled = tag.status !== 'draft';
  const publishEnabled =
    tag.status === 'published' ||
    (tag.status === 'checked' && report !== null && report.verdict === 'Consistent');
  return [
    `<div class="tag-actions" data-tag="${escapeHtml(tag.tag_id)}" data-status="${tag.status}">`,
    `<button type="button" data-action="check"${checkDisabled ? ' disabled' : ''}>Logical check</button>`,
    `<button type="button" data-action="publish"${publishEnabled ? '' : ' disabled'}>Publish</button>`,
    '</div>',
  ].join('');
}

export function renderCheckReport(report: CheckReport): string {
  const findings = report.findings
    .map((finding) => `<li class="finding">${escapeHtml(finding)}</li>`)
    .join('');
  return [
    `<div class="check-report" data-verdict="${report.verdict}">`,
    `<p>Logical check by ${escapeHtml(report.model_name)}: <strong>${report.verdict}</strong></p>`,
    findings ? `<ul class="findings">${findings}</ul>` : '',
    '</div>',
  ].join('');
}

export function renderDocumentList(documents: DocumentRecord[]): string {
  if (documents.length === 0) {
    return '<p class="document-list-empty">No documents uploaded yet.</p>';
  }
  const rows = documents
    .map(
      (doc) =>
        `<tr><td>${escapeHtml(doc.name)}</td><td>${doc.source}</td>` +
        `<td>${doc.n_chunks}</td><td class="doc-id">${escapeHtml(doc.doc_id)}</td></tr>`
    )
    .join('');
  return [
    '<table class="document-list">',
    '<thead><tr><th>Name</th><th>Source</th><th>Chunks</th><th>Id</th></tr></thead>',
    `<tbody>${rows}</tbody>`,
    '</table>',
  ].join('');
}

export function renderUploadResult(name: string, nChunks: number): string {
  return `<p class="upload-result">Uploaded ${escapeHtml(name)}: ${nChunks} chunk${nChunks === 1 ? '' : 's'}.</p>`;
}
