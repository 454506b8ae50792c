/** Parse-graph panel: one collapsible tree per scene. Nodes named in the
 * latest answer's evidence get the highlight class; nothing else does.
 * Or-node children that lost the selection render dimmed as alternatives. */

import type { PgDoc, PgNode } from "../types.js";
import { h, VNode } from "../vdom.js";

export function renderGraphPanel(pg: PgDoc | null, highlights: Set<string>): VNode {
  if (!pg) {
    return h("section", { class: "panel graph-panel" }, h("h2", {}, "Parse graph"));
  }
  const byId = new Map(pg.nodes.map((n) => [n.id, n]));
  return h(
    "section",
    { class: "panel graph-panel" },
    h("h2", {}, "Parse graph"),
    pg.scenes.map((scene) =>
      h(
        "details",
        { class: "scene-tree", open: true },
        h("summary", { class: "scene-title" }, scene.id, scene.caption ? ` · ${scene.caption}` : ""),
        renderSubtree(byId, pg.roots[scene.id], highlights, false),
      ),
    ),
  );
}

function renderSubtree(
  byId: Map<string, PgNode>,
  id: string | undefined,
  highlights: Set<string>,
  alternative: boolean,
): VNode | null {
  if (!id) return null;
  const node = byId.get(id);
  if (!node) return null;
  const row = nodeRow(node, highlights, alternative);
  if (node.children.length === 0) {
    return h("div", { class: "leaf" }, row);
  }
  return h(
    "details",
    { open: true },
    h("summary", {}, row),
    h(
      "div",
      { class: "branch" },
      node.children.map((cid) =>
        renderSubtree(
          byId,
          cid,
          highlights,
          alternative || (node.kind === "or" && cid !== node.selected_child),
        ),
      ),
    ),
  );
}

function nodeRow(node: PgNode, highlights: Set<string>, alternative: boolean): VNode {
  const classes = ["node", `kind-${node.kind}`];
  if (highlights.has(node.id)) classes.push("highlight");
  if (alternative) classes.push("alternative");
  return h(
    "span",
    { class: classes.join(" "), "data-node": node.id },
    h("span", { class: "node-id" }, node.id),
    h("span", { class: "node-label" }, node.label),
    node.kind !== "terminal" ? h("span", { class: "node-kind" }, node.kind) : null,
    node.score !== undefined
      ? h("span", { class: "node-score" }, node.score.toFixed(2))
      : null,
  );
}
