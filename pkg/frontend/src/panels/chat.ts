/** Chat panel: transcript plus the ask box. Answer bubbles carry the
 * service-reported question-type badge, answer text, and ranked-types
 * list; unrecognized questions render the supported forms as clickable
 * templates that refill the input. */

import type { Consequences } from "../types.js";
import { ChatTurn } from "../state.js";
import { Child, h, VNode } from "../vdom.js";

export interface ChatHandlers {
  onAsk: (text: string) => void;
  onTemplate: (example: string) => void;
}

export function renderChat(
  turns: ChatTurn[],
  pending: boolean,
  draft: string,
  handlers: ChatHandlers,
): VNode {
  return h(
    "section",
    { class: "panel chat-panel" },
    h("h2", {}, "Dialogue"),
    h("div", { class: "transcript" }, turns.flatMap((turn) => renderTurn(turn, handlers))),
    renderAskForm(pending, draft, handlers),
  );
}

function renderTurn(turn: ChatTurn, handlers: ChatHandlers): VNode[] {
  const out: VNode[] = [h("div", { class: "bubble user" }, turn.question)];
  if (turn.response) {
    const r = turn.response;
    out.push(
      h(
        "div",
        { class: "bubble answer" },
        h("span", { class: "badge qtype" }, r.question_type),
        r.selected_type
          ? h("span", { class: "badge etype" }, r.selected_type)
          : null,
        h("p", { class: "answer-text" }, r.text),
        h(
          "ol",
          { class: "ranked" },
          r.ranked_types.map((t) =>
            h("li", { class: t === r.selected_type ? "selected" : "" }, t),
          ),
        ),
        r.consequences ? renderConsequences(r.consequences) : null,
      ),
    );
  } else if (turn.failure) {
    out.push(
      h(
        "div",
        { class: "bubble error" },
        h("p", {}, turn.failure.message),
        turn.failure.forms.length
          ? h(
              "div",
              { class: "templates" },
              h("p", {}, "Try one of these forms:"),
              turn.failure.forms.map((form) =>
                h(
                  "button",
                  {
                    class: "template",
                    type: "button",
                    "data-qtype": form.type,
                    onClick: () => handlers.onTemplate(form.example),
                  },
                  form.example,
                ),
              ),
            )
          : null,
      ),
    );
  }
  return out;
}

function renderConsequences(c: Consequences): Child {
  const lines: string[] = [];
  for (const v of c.ontology) {
    lines.push(`${v.rule}: ${v.concepts.join(" / ")} in ${v.scene}`);
  }
  for (const d of c.discourse) {
    lines.push(`${d.relation} link leaves ${d.label} in ${d.scene} unsupported`);
  }
  for (const f of c.feasibility) {
    lines.push(`${f.node} ${f.after ? "gained" : "lost"} ${f.kind} support`);
  }
  if (!lines.length) return h("p", { class: "consequences empty" }, "no conflicts found");
  return h(
    "ul",
    { class: "consequences" },
    lines.map((line) => h("li", {}, line)),
  );
}

function renderAskForm(pending: boolean, draft: string, handlers: ChatHandlers): VNode {
  return h(
    "form",
    {
      class: "ask-form",
      onSubmit: (ev: Event) => {
        ev.preventDefault();
        const form = ev.target as HTMLFormElement;
        const input = form.elements.namedItem("question") as HTMLInputElement;
        const text = input.value.trim();
        if (text) {
          handlers.onAsk(text);
          input.value = "";
        }
      },
    },
    h("input", {
      class: "ask-input",
      name: "question",
      value: draft,
      placeholder: "Why do you think the person is sitting?",
      autocomplete: "off",
    }),
    h("button", { class: "ask-send", type: "submit", disabled: pending }, "Ask"),
  );
}
