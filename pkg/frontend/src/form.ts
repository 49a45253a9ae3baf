/**
 * Description form state. Options come from the service's schema payload
 * and nowhere else; the only thing this module adds is a wildcard choice
 * so an untouched form means "no constraints at all".
 */

import type { Schema } from "./api.js";

/** Sentinel for "no preference"; distinct from every vocabulary value the
 * service can emit because it contains a space. */
export const WILDCARD = "Cant Say";

export interface FormState {
  /** kind -> parameter -> options offered (wildcard first, then the
   * schema payload verbatim, in its order). */
  options: Record<string, Record<string, string[]>>;
  /** kind -> parameter -> currently chosen option. */
  choices: Record<string, Record<string, string>>;
}

export function buildFormState(schema: Schema): FormState {
  const options: FormState["options"] = {};
  const choices: FormState["choices"] = {};
  for (const [kind, params] of Object.entries(schema)) {
    options[kind] = {};
    choices[kind] = {};
    for (const [name, values] of Object.entries(params)) {
      options[kind]![name] = [WILDCARD, ...values.filter((v) => v !== WILDCARD)];
      choices[kind]![name] = WILDCARD;
    }
  }
  return { options, choices };
}

export function setChoice(
  form: FormState,
  kind: string,
  name: string,
  value: string,
): void {
  const offered = form.options[kind]?.[name];
  if (!offered) throw new Error(`no such control: ${kind}/${name}`);
  if (!offered.includes(value)) {
    throw new Error(`${JSON.stringify(value)} is not offered for ${kind}/${name}`);
  }
  form.choices[kind]![name] = value;
}

export function resetChoices(form: FormState): void {
  for (const params of Object.values(form.choices)) {
    for (const name of Object.keys(params)) params[name] = WILDCARD;
  }
}

/** The payload for PUT description: every kind present, wildcards omitted. */
export function formDescription(
  form: FormState,
): Record<string, Record<string, string>> {
  const out: Record<string, Record<string, string>> = {};
  for (const [kind, params] of Object.entries(form.choices)) {
    const chosen: Record<string, string> = {};
    for (const [name, value] of Object.entries(params)) {
      if (value !== WILDCARD) chosen[name] = value;
    }
    out[kind] = chosen;
  }
  return out;
}

/** Options minus the wildcard, for comparing against the schema payload. */
export function offeredVocabulary(
  form: FormState,
): Record<string, Record<string, string[]>> {
  const out: Record<string, Record<string, string[]>> = {};
  for (const [kind, params] of Object.entries(form.options)) {
    out[kind] = {};
    for (const [name, values] of Object.entries(params)) {
      out[kind]![name] = values.filter((v) => v !== WILDCARD);
    }
  }
  return out;
}
