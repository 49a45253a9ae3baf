/**
 * Application state machine behind the page. Owns the form, the session
 * snapshot and the bytes of every image on display; the DOM layer renders
 * this and nothing else, so tests can drive the whole UI without a
 * browser by injecting a fake fetch into the ApiClient.
 *
 * Two rules shape the code: the client computes no pixels (displayed
 * bytes are verbatim service responses), and at most one mutating
 * request is in flight per session (actions during `busy` are dropped
 * and report false).
 */

import { ApiClient, ApiError, Schema, SessionSnapshot, Stage } from "./api.js";
import { FormState, buildFormState, formDescription } from "./form.js";

export const STAGES: Stage[] = ["blind", "masked", "tuned"];

export type NudgeDirection = "up" | "down" | "left" | "right";

const DIRECTION_DELTAS: Record<NudgeDirection, [number, number]> = {
  up: [-1, 0],
  down: [1, 0],
  left: [0, -1],
  right: [0, 1],
};

export class AppController {
  schema: Schema | null = null;
  form: FormState | null = null;
  session: SessionSnapshot | null = null;
  /** Exact PGM bytes of the stage being previewed. */
  previewBytes: Uint8Array | null = null;
  /** Stage the preview is showing (only meaningful with previewBytes). */
  previewStage: Stage | null = null;
  /** Stage the user asked for; falls back when not yet computed. */
  currentStage: Stage = "blind";
  /** 1-pixel default, 5-pixel coarse mode. */
  nudgeStep: 1 | 5 = 1;
  busy = false;
  lastError: string | null = null;

  private thumbnails = new Map<string, Uint8Array>();

  constructor(private readonly client: ApiClient) {}

  /** Fetch the vocabulary and open a session; after this every user
   * action is exactly one mutating API call. */
  async init(): Promise<void> {
    this.schema = await this.client.getSchema();
    this.form = buildFormState(this.schema);
    this.session = await this.client.createSession();
  }

  /** Kinds whose last retrieval found nothing; the gallery shows a
   * "no match, relax the description" prompt for these. */
  kindsNeedingRelaxation(): string[] {
    if (!this.session) return [];
    return Object.entries(this.session.candidates)
      .filter(([, ids]) => ids.length === 0)
      .map(([kind]) => kind);
  }

  allSelected(): boolean {
    const sess = this.session;
    if (!sess) return false;
    const kinds = Object.keys(sess.candidates);
    return kinds.length > 0 && kinds.every((k) => sess.selections[k] !== undefined);
  }

  canAssemble(): boolean {
    return this.session !== null && this.allSelected();
  }

  /** Candidate thumbnail bytes, fetched once and cached verbatim. */
  async thumbnail(recordId: string): Promise<Uint8Array> {
    const cached = this.thumbnails.get(recordId);
    if (cached) return cached;
    const bytes = await this.client.fetchComponentImage(recordId);
    this.thumbnails.set(recordId, bytes);
    return bytes;
  }

  async submitDescription(): Promise<boolean> {
    if (!this.form) throw new Error("init() first");
    return this.mutate(async () => {
      this.session = await this.client.putDescription(
        this.requireSession().id,
        formDescription(this.form!),
      );
      await this.refreshPreview();
    });
  }

  async select(kind: string, recordId: string): Promise<boolean> {
    return this.mutate(async () => {
      this.session = await this.client.postSelection(
        this.requireSession().id,
        kind,
        recordId,
      );
    });
  }

  async assemble(): Promise<boolean> {
    return this.mutate(async () => {
      this.session = await this.client.postAssemble(this.requireSession().id);
      await this.refreshPreview();
    });
  }

  async tune(threshold?: number): Promise<boolean> {
    return this.mutate(async () => {
      this.session = await this.client.postTune(this.requireSession().id, threshold);
      this.currentStage = "tuned";
      await this.refreshPreview();
    });
  }

  async nudge(kind: string, dRow: number, dCol: number): Promise<boolean> {
    return this.mutate(async () => {
      this.session = await this.client.postNudge(
        this.requireSession().id,
        kind,
        dRow,
        dCol,
      );
      await this.refreshPreview();
    });
  }

  /** Arrow-button nudge at the current step size. */
  async arrowNudge(kind: string, direction: NudgeDirection): Promise<boolean> {
    const [dr, dc] = DIRECTION_DELTAS[direction];
    return this.nudge(kind, dr * this.nudgeStep, dc * this.nudgeStep);
  }

  async setStage(stage: Stage): Promise<void> {
    this.currentStage = stage;
    await this.refreshPreview();
  }

  /** Re-fetch the preview for the requested stage (or the most finished
   * computed one when the request is not available yet). */
  async refreshPreview(): Promise<void> {
    const sess = this.session;
    if (!sess || sess.stages.length === 0) {
      this.previewBytes = null;
      this.previewStage = null;
      return;
    }
    const stage = sess.stages.includes(this.currentStage)
      ? this.currentStage
      : (sess.stages[sess.stages.length - 1] as Stage);
    this.previewBytes = await this.client.fetchStageImage(sess.id, stage);
    this.previewStage = stage;
  }

  private requireSession(): SessionSnapshot {
    if (!this.session) throw new Error("no session yet");
    return this.session;
  }

  /** Serialize mutating actions; on a service error nothing in the
   * controller changes except lastError. */
  private async mutate(action: () => Promise<void>): Promise<boolean> {
    if (this.busy) return false;
    this.busy = true;
    try {
      await action();
      this.lastError = null;
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastError = err.message;
        return false;
      }
      throw err;
    } finally {
      this.busy = false;
    }
  }
}
