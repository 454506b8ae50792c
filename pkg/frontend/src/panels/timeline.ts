/** Scene timeline: scenes laid out in frame order with discourse links
 * drawn as labeled arcs between their boxes. */

import type { PgDoc } from "../types.js";
import { h, VNode } from "../vdom.js";

const BOX_W = 170;
const BOX_GAP = 24;
const ARC_H = 46;

export function renderTimeline(pg: PgDoc | null): VNode {
  if (!pg) {
    return h("section", { class: "panel timeline-panel" }, h("h2", {}, "Scenes"));
  }
  const scenes = [...pg.scenes].sort((a, b) => a.frame_range[0] - b.frame_range[0]);
  const slot = new Map(scenes.map((s, i) => [s.id, i]));
  const width = scenes.length * (BOX_W + BOX_GAP);

  const arcs = pg.discourse.map((link) => {
    const ai = slot.get(link.a) ?? 0;
    const bi = slot.get(link.b) ?? 0;
    const x1 = ai * (BOX_W + BOX_GAP) + BOX_W / 2;
    const x2 = bi * (BOX_W + BOX_GAP) + BOX_W / 2;
    const mid = (x1 + x2) / 2;
    return h(
      "g",
      { class: "discourse-arc", "data-relation": link.relation },
      h("path", {
        d: `M ${x1} ${ARC_H - 6} Q ${mid} 4 ${x2} ${ARC_H - 6}`,
        fill: "none",
      }),
      h(
        "text",
        { x: mid, y: 14, "text-anchor": "middle", class: "arc-label" },
        link.relation,
      ),
    );
  });

  return h(
    "section",
    { class: "panel timeline-panel" },
    h("h2", {}, "Scenes"),
    h(
      "div",
      { class: "timeline" },
      h("svg", { class: "arcs", width, height: ARC_H }, arcs),
      h(
        "div",
        { class: "scene-strip" },
        scenes.map((scene) =>
          h(
            "div",
            { class: "scene-box", "data-scene": scene.id },
            h("div", { class: "scene-id" }, scene.id),
            h(
              "div",
              { class: "scene-frames" },
              `frames ${scene.frame_range[0]}-${scene.frame_range[1]}`,
            ),
            scene.caption ? h("div", { class: "scene-caption" }, scene.caption) : null,
          ),
        ),
      ),
    ),
  );
}
