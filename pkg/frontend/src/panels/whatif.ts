/** What-if panel: the session's committed hypothetical modifications,
 * each with a remove control, plus the session reset button. */

import { describeModification } from "../state.js";
import type { OverlayMod } from "../types.js";
import { h, VNode } from "../vdom.js";

export interface WhatIfHandlers {
  onRemove: (index: number) => void;
  onReset: () => void;
}

export function renderWhatIf(overlay: OverlayMod[], handlers: WhatIfHandlers): VNode {
  return h(
    "section",
    { class: "panel whatif-panel" },
    h("h2", {}, "What-if overlay"),
    overlay.length === 0
      ? h("p", { class: "empty" }, "no hypotheticals applied")
      : h(
          "ol",
          { class: "overlay-list" },
          overlay.map((mod, index) =>
            h(
              "li",
              { class: "overlay-item" },
              h("span", { class: "mod-text" }, describeModification(mod)),
              h(
                "button",
                {
                  class: "mod-remove",
                  type: "button",
                  onClick: () => handlers.onRemove(index),
                },
                "remove",
              ),
            ),
          ),
        ),
    h(
      "button",
      { class: "session-reset", type: "button", onClick: () => handlers.onReset() },
      "Reset session",
    ),
  );
}
