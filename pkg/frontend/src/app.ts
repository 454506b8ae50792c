/** Application controller: owns the state, serializes service calls
 * (one in flight per tab), and re-renders the four panels after every
 * state change. All displayed content originates from service responses. */

import { ApiError } from "./api.js";
import { renderChat } from "./panels/chat.js";
import { renderGraphPanel } from "./panels/graph.js";
import { renderTimeline } from "./panels/timeline.js";
import { renderWhatIf } from "./panels/whatif.js";
import { AppState, highlightSet, initialState } from "./state.js";
import type {
  AskResponse,
  OverlayMod,
  PgDoc,
  SessionView,
  UnrecognizedDetail,
} from "./types.js";
import { h, replaceChildren, VNode } from "./vdom.js";

export interface ServiceClient {
  uploadPg(text: string): Promise<string>;
  uploadOntology(text: string): Promise<string>;
  fetchPg(pgId: string): Promise<PgDoc>;
  openSession(pgId: string, ontologyId?: string): Promise<string>;
  ask(sessionId: string, text: string): Promise<AskResponse>;
  getSession(sessionId: string): Promise<SessionView>;
  removeOverlay(sessionId: string, index: number): Promise<OverlayMod[]>;
  reset(sessionId: string): Promise<void>;
}

export class App {
  readonly state: AppState & { draft: string };
  private chain: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly client: ServiceClient,
    private readonly root: Element | null = null,
  ) {
    this.state = { ...initialState(), draft: "" };
  }

  /** Run one operation after all queued ones; requests never overlap. */
  private enqueue<T>(op: () => Promise<T>): Promise<T> {
    const next = this.chain.then(op, op);
    this.chain = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  start(pgText: string, ontologyText?: string): Promise<void> {
    return this.enqueue(async () => {
      const pgId = await this.client.uploadPg(pgText);
      const ontologyId = ontologyText
        ? await this.client.uploadOntology(ontologyText)
        : undefined;
      this.state.sessionId = await this.client.openSession(pgId, ontologyId);
      this.state.pg = await this.client.fetchPg(pgId);
      this.render();
    });
  }

  ask(text: string): Promise<void> {
    return this.enqueue(async () => {
      const sessionId = this.requireSession();
      const turn = { question: text } as AppState["turns"][number];
      this.state.turns.push(turn);
      this.state.pending = true;
      this.state.draft = "";
      this.render();
      try {
        const response = await this.client.ask(sessionId, text);
        turn.response = response;
        if (response.question_type.startsWith("DO_")) {
          // hypotheticals extend the overlay server-side; pick it up
          const view = await this.client.getSession(sessionId);
          this.state.overlay = view.overlay;
        }
      } catch (err) {
        if (!(err instanceof ApiError)) throw err;
        const detail = err.body.detail as UnrecognizedDetail | undefined;
        turn.failure = {
          status: err.status,
          message: err.body.message,
          forms: err.status === 422 && detail ? detail.forms : [],
        };
      } finally {
        this.state.pending = false;
        this.render();
      }
    });
  }

  useTemplate(example: string): void {
    this.state.draft = example;
    this.render();
  }

  removeOverlay(index: number): Promise<void> {
    return this.enqueue(async () => {
      const sessionId = this.requireSession();
      this.state.overlay = await this.client.removeOverlay(sessionId, index);
      this.render();
    });
  }

  reset(): Promise<void> {
    return this.enqueue(async () => {
      const sessionId = this.requireSession();
      await this.client.reset(sessionId);
      this.state.turns = [];
      this.state.overlay = [];
      this.render();
    });
  }

  private requireSession(): string {
    if (!this.state.sessionId) throw new Error("session not started");
    return this.state.sessionId;
  }

  view(): VNode {
    return h(
      "div",
      { class: "layout" },
      h(
        "header",
        {},
        h("h1", {}, "Parse-graph dialogue"),
        this.state.sessionId
          ? h("span", { class: "session-id" }, this.state.sessionId)
          : null,
      ),
      h(
        "main",
        { class: "grid" },
        renderGraphPanel(this.state.pg, highlightSet(this.state.turns)),
        renderChat(this.state.turns, this.state.pending, this.state.draft, {
          onAsk: (text) => void this.ask(text),
          onTemplate: (example) => this.useTemplate(example),
        }),
        renderTimeline(this.state.pg),
        renderWhatIf(this.state.overlay, {
          onRemove: (index) => void this.removeOverlay(index),
          onReset: () => void this.reset(),
        }),
      ),
    );
  }

  render(): void {
    if (this.root) replaceChildren(this.root, this.view());
  }
}
