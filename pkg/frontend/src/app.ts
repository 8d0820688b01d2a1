/**
 * Browser bootstrap: wires the pure renderers and flows to the DOM. Kept
 * deliberately thin; everything with behavior worth testing lives in
 * render.ts, validate.ts, and flows.ts.
 */

import { ApiClient, ApiError } from './api';
import {
  canCheck,
  canPublish,
  publish,
  runLogicalCheck,
  submitTagForm,
  submitUpload,
  type TagFlowState,
} from './flows';
import {
  renderApiError,
  renderChatEntry,
  renderCheckReport,
  renderDocumentList,
  renderTagActions,
  renderTagForm,
  renderUploadResult,
} from './render';
import type { ChatEntry, SourceName, WhyStep } from './types';

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing element #${id}`);
  }
  return element as T;
}

export function startApp(api: ApiClient = new ApiClient()): void {
  const chatLog = byId<HTMLElement>('chat-log');
  const chatInput = byId<HTMLInputElement>('chat-input');
  const chatSend = byId<HTMLButtonElement>('chat-send');
  const documentsPanel = byId<HTMLElement>('documents');
  const uploadInput = byId<HTMLInputElement>('upload-file');
  const uploadRename = byId<HTMLInputElement>('upload-rename');
  const uploadSource = byId<HTMLSelectElement>('upload-source');
  const uploadButton = byId<HTMLButtonElement>('upload-send');
  const uploadStatus = byId<HTMLElement>('upload-status');
  const tagFormContainer = byId<HTMLElement>('tag-form-container');
  const tagStatus = byId<HTMLElement>('tag-status');

  const docNames = new Map<string, string>();
  let tagFlow: TagFlowState = { tag: null, report: null };
  let whyCount = 1;

  function mountTagForm(): HTMLFormElement {
    const whys: WhyStep[] = readWhys();
    while (whys.length < whyCount) {
      whys.push({ question: '', answer: '' });
    }
    tagFormContainer.innerHTML = renderTagForm(whys);
    const form = tagFormContainer.querySelector<HTMLFormElement>('form');
    if (!form) {
      throw new Error('tag form failed to mount');
    }
    return form;
  }

  async function refreshDocuments(): Promise<void> {
    const documents = await api.listDocuments();
    docNames.clear();
    for (const doc of documents) {
      docNames.set(doc.doc_id, doc.name);
    }
    documentsPanel.innerHTML = renderDocumentList(documents);
  }

  async function sendQuery(): Promise<void> {
    const query = chatInput.value.trim();
    if (!query) {
      return;
    }
    // one in-flight ask at a time
    chatInput.disabled = true;
    chatSend.disabled = true;
    try {
      const answers = await api.ask(query);
      const entry: ChatEntry = { query, answers, timestamp: new Date().toISOString() };
      chatLog.insertAdjacentHTML('afterbegin', renderChatEntry(entry, docNames));
      chatInput.value = '';
    } catch (error) {
      if (error instanceof ApiError) {
        chatLog.insertAdjacentHTML('afterbegin', renderApiError(error));
      } else {
        throw error;
      }
    } finally {
      chatInput.disabled = false;
      chatSend.disabled = false;
    }
  }

  function readWhys(): WhyStep[] {
    const whys: WhyStep[] = [];
    for (let i = 0; ; i += 1) {
      const question = tagFormContainer.querySelector<HTMLInputElement>(`[name="why-question-${i}"]`);
      const answer = tagFormContainer.querySelector<HTMLInputElement>(`[name="why-answer-${i}"]`);
      if (!question || !answer) {
        break;
      }
      whys.push({ question: question.value, answer: answer.value });
    }
    return whys;
  }

  function fieldValue(name: string): string {
    return tagFormContainer.querySelector<HTMLInputElement>(`[name="${name}"]`)?.value ?? '';
  }

  function renderTagStatus(extra = ''): void {
    const actions = tagFlow.tag ? renderTagActions(tagFlow.tag, tagFlow.report) : '';
    const report = tagFlow.report ? renderCheckReport(tagFlow.report) : '';
    tagStatus.innerHTML = extra + report + actions;
  }

  async function createTag(): Promise<void> {
    const result = await submitTagForm(api, {
      title: fieldValue('title'),
      problem_description: fieldValue('problem_description'),
      whys: readWhys(),
      root_cause: fieldValue('root_cause'),
      countermeasure: fieldValue('countermeasure'),
      author: fieldValue('author'),
    });
    if (!result.ok) {
      const items = result.errors.map((e) => `<li>${e}</li>`).join('');
      tagStatus.innerHTML = `<ul class="form-errors">${items}</ul>`;
      return;
    }
    tagFlow = { tag: result.value, report: null };
    renderTagStatus();
  }

  async function upload(): Promise<void> {
    const file = uploadInput.files?.[0];
    if (!file) {
      return;
    }
    const content = new Uint8Array(await file.arrayBuffer());
    const source = uploadSource.value as SourceName;
    const result = await submitUpload(api, file.name, uploadRename.value, source, content);
    if (!result.ok) {
      uploadStatus.innerHTML = `<p class="form-errors">${result.errors.join('; ')}</p>`;
      return;
    }
    uploadStatus.innerHTML = renderUploadResult(result.value.name, result.value.n_chunks);
    await refreshDocuments();
  }

  chatSend.addEventListener('click', () => void sendQuery());
  chatInput.addEventListener('keydown', (event) => {
    if (event.key === 'Enter') {
      void sendQuery();
    }
  });
  uploadButton.addEventListener('click', () => void upload());
  tagFormContainer.addEventListener('submit', (event) => {
    event.preventDefault();
    void createTag();
  });
  tagFormContainer.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset['action'] === 'add-why') {
      whyCount = Math.min(whyCount + 1, 5);
      mountTagForm();
    }
  });
  tagStatus.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset['action'];
    if (action === 'check' && canCheck(tagFlow)) {
      void runLogicalCheck(api, tagFlow).then((next) => {
        tagFlow = next;
        renderTagStatus();
      });
    } else if (action === 'publish' && canPublish(tagFlow)) {
      void publish(api, tagFlow).then((next) => {
        tagFlow = next;
        renderTagStatus();
      });
    }
  });

  mountTagForm();
  void refreshDocuments();
}

if (typeof document !== 'undefined' && document.getElementById('chat-log')) {
  startApp();
}
