/**
 * Straight DOM rendering of the controller state. Every handler calls a
 * controller method and then repaints; pixels reach the screen through
 * decodePgm + putImageData and are never altered on the way.
 */

import { AppController, NudgeDirection, STAGES } from "./controller.js";
import { decodePgm, toRgba } from "./pgm.js";
import type { Stage } from "./api.js";

const COMPONENT_KINDS = [
  "RightEyebrow",
  "RightEye",
  "LeftEyebrow",
  "LeftEye",
  "Nose",
  "Lip",
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function drawPgm(canvas: HTMLCanvasElement, bytes: Uint8Array, scale = 2): void {
  const img = decodePgm(bytes);
  canvas.width = img.width;
  canvas.height = img.height;
  canvas.style.width = `${img.width * scale}px`;
  canvas.style.height = `${img.height * scale}px`;
  canvas.style.imageRendering = "pixelated";
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.putImageData(new ImageData(toRgba(img), img.width, img.height), 0, 0);
}

export class Page {
  constructor(
    private readonly app: AppController,
    private readonly root: HTMLElement,
  ) {}

  render(): void {
    this.root.replaceChildren();
    this.renderError();
    this.renderForm();
    this.renderGalleries();
    this.renderPreview();
  }

  private async run(action: () => Promise<unknown>): Promise<void> {
    await action();
    this.render();
  }

  private renderError(): void {
    if (!this.app.lastError) return;
    this.root.append(el("div", "error-banner", this.app.lastError));
  }

  private renderForm(): void {
    const form = this.app.form;
    if (!form) {
      this.root.append(el("p", "", "Loading vocabulary..."));
      return;
    }
    const section = el("section", "description-form");
    section.id = "description";
    section.append(el("h2", "", "Describe the face"));
    for (const [kind, params] of Object.entries(form.options)) {
      const fieldset = el("fieldset");
      fieldset.append(el("legend", "", kind));
      for (const [name, values] of Object.entries(params)) {
        const label = el("label", "", `${name} `);
        const select = el("select");
        for (const value of values) {
          const option = el("option", "", value);
          option.value = value;
          option.selected = form.choices[kind]![name] === value;
          select.append(option);
        }
        select.addEventListener("change", () => {
          form.choices[kind]![name] = select.value;
        });
        label.append(select);
        fieldset.append(label);
      }
      section.append(fieldset);
    }
    const submit = el("button", "", "Retrieve candidates");
    submit.disabled = this.app.busy;
    submit.addEventListener("click", () => this.run(() => this.app.submitDescription()));
    section.append(submit);
    this.root.append(section);
  }

  private renderGalleries(): void {
    const sess = this.app.session;
    if (!sess || sess.status === "Describing") return;
    const section = el("section", "galleries");
    section.append(el("h2", "", "Pick one image per part"));
    for (const [kind, ids] of Object.entries(sess.candidates)) {
      const block = el("div", "gallery");
      block.append(el("h3", "", kind));
      if (ids.length === 0) {
        const prompt = el("p", "no-match", "No match; relax the description. ");
        const back = el("a", "", "Edit form");
        back.href = "#description";
        prompt.append(back);
        block.append(prompt);
      }
      for (const id of ids) {
        const card = el("figure", sess.selections[kind] === id ? "selected" : "");
        const canvas = el("canvas");
        this.app.thumbnail(id).then((bytes) => drawPgm(canvas, bytes, 1));
        canvas.addEventListener("click", () => this.run(() => this.app.select(kind, id)));
        card.append(canvas, el("figcaption", "", id));
        block.append(card);
      }
      section.append(block);
    }
    const assemble = el("button", "", "Assemble");
    assemble.disabled = this.app.busy || !this.app.canAssemble();
    assemble.addEventListener("click", () => this.run(() => this.app.assemble()));
    section.append(assemble);
    this.root.append(section);
  }

  private renderPreview(): void {
    const sess = this.app.session;
    if (!sess || sess.stages.length === 0) return;
    const section = el("section", "preview");
    section.append(el("h2", "", "Preview"));

    for (const stage of STAGES) {
      const button = el("button", stage === this.app.previewStage ? "active" : "", stage);
      button.disabled = this.app.busy || !sess.stages.includes(stage);
      button.addEventListener("click", () => this.run(() => this.app.setStage(stage)));
      section.append(button);
    }

    const tune = el("button", "", "Tune seams");
    tune.disabled = this.app.busy;
    const threshold = el("input") as HTMLInputElement;
    threshold.type = "number";
    threshold.min = "0";
    threshold.max = "255";
    threshold.value = String(sess.threshold);
    tune.addEventListener("click", () =>
      this.run(() => this.app.tune(parseInt(threshold.value, 10) || 0)),
    );
    section.append(tune, threshold);

    if (this.app.previewBytes) {
      const canvas = el("canvas");
      drawPgm(canvas, this.app.previewBytes);
      section.append(canvas);
    }

    section.append(this.renderNudgeControls());
    this.root.append(section);
  }

  private renderNudgeControls(): HTMLElement {
    const panel = el("div", "nudge-panel");
    panel.append(el("h3", "", `Move a part (step ${this.app.nudgeStep}px)`));

    const stepToggle = el("button", "", this.app.nudgeStep === 1 ? "Coarse (5px)" : "Fine (1px)");
    stepToggle.addEventListener("click", () => {
      this.app.nudgeStep = this.app.nudgeStep === 1 ? 5 : 1;
      this.render();
    });
    panel.append(stepToggle);

    const arrows: [NudgeDirection, string][] = [
      ["up", "↑"],
      ["down", "↓"],
      ["left", "←"],
      ["right", "→"],
    ];
    for (const kind of COMPONENT_KINDS) {
      const row = el("div", "nudge-row");
      row.append(el("span", "", kind));
      for (const [direction, glyph] of arrows) {
        const button = el("button", "", glyph);
        button.disabled = this.app.busy;
        button.addEventListener("click", () =>
          this.run(() => this.app.arrowNudge(kind, direction)),
        );
        row.append(button);
      }
      panel.append(row);
    }
    return panel;
  }
}
