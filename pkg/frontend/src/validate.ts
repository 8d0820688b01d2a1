/**
 * Client-side validation mirroring the server's rules, so obviously invalid
 * submissions never reach the network.
 */

import { z } from 'zod';

export const MAX_WHYS = 5;

export const whyStepSchema = z.object({
  question: z.string().trim().min(1, 'Why question must not be empty'),
  answer: z.string().trim().min(1, 'Why answer must not be empty'),
});

export const tagFormSchema = z.object({
  title: z.string().trim().min(1, 'Title is required'),
  problem_description: z.string().trim().min(1, 'Problem description is required'),
  whys: z
    .array(whyStepSchema)
    .min(1, 'At least one why step is required')
    .max(MAX_WHYS, `At most ${MAX_WHYS} why steps are allowed`),
  root_cause: z.string().default(''),
  countermeasure: z.string().default(''),
  author: z.string().default(''),
});

export type TagFormData = z.infer<typeof tagFormSchema>;

export type ValidationResult<T> =
  | { ok: true; data: T }
  | { ok: false; errors: string[] };

export function validateTagForm(input: unknown): ValidationResult<TagFormData> {
  const parsed = tagFormSchema.safeParse(input);
  if (parsed.success) {
    return { ok: true, data: parsed.data };
  }
  return { ok: false, errors: parsed.error.issues.map((issue) => issue.message) };
}

// Upload formats the server accepts, keyed by file extension.
const FORMAT_BY_EXTENSION: Record<string, string> = {
  txt: 'text',
  md: 'markdown',
  csv: 'csv',
};

export function formatForFilename(name: string): string | null {
  const dot = name.lastIndexOf('.');
  if (dot < 0) {
    return null;
  }
  const extension = name.slice(dot + 1).toLowerCase();
  return FORMAT_BY_EXTENSION[extension] ?? null;
}

/**
 * Resolve the final upload name: an operator may rename the file before
 * upload, but the new name must keep a supported extension.
 */
export function resolveUploadName(
  originalName: string,
  rename: string
): ValidationResult<string> {
  const name = rename.trim() || originalName;
  if (!formatForFilename(name)) {
    const supported = Object.keys(FORMAT_BY_EXTENSION)
      .map((ext) => `.${ext}`)
      .join(', ');
    return { ok: false, errors: [`Unsupported file type for ${name}; use ${supported}`] };
  }
  return { ok: true, data: name };
}

export function encodeBase64(bytes: Uint8Array): string {
  let binary = '';
  for (const byte of bytes) {
    binary += String.fromCharCode(byte);
  }
  // btoa in the browser, Buffer under node (tests)
  if (typeof btoa === 'function') {
    return btoa(binary);
  }
  return Buffer.from(bytes).toString('base64');
}
