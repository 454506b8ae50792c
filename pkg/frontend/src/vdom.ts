/** Minimal virtual-DOM layer. Panels are pure functions from state to
 * VNode trees; tests walk the trees directly, the browser mounts them.
 * Rendering is full-replace per update, which is plenty for this UI. */

export type Handler = (ev: Event) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on: Record<string, Handler>;
  children: Child[];
}

export type Child = VNode | string;

interface Props {
  [key: string]: string | number | boolean | Handler | undefined;
}

// svg elements need the namespaced createElement
const SVG_TAGS = new Set(["svg", "path", "line", "text", "g", "circle", "marker", "defs"]);

type ChildInput = Child | null | undefined;

export function h(tag: string, props: Props = {}, ...children: (ChildInput | ChildInput[])[]): VNode {
  const attrs: Record<string, string> = {};
  const on: Record<string, Handler> = {};
  for (const [key, value] of Object.entries(props)) {
    if (value === undefined || value === false) continue;
    if (key.startsWith("on") && typeof value === "function") {
      on[key.slice(2).toLowerCase()] = value;
    } else if (value === true) {
      attrs[key] = "";
    } else {
      attrs[key] = String(value);
    }
  }
  const flat: Child[] = [];
  for (const child of children) {
    for (const item of Array.isArray(child) ? child : [child]) {
      if (item !== null && item !== undefined) flat.push(item);
    }
  }
  return { tag, attrs, on, children: flat };
}

export function mount(node: Child, parent: Element): void {
  parent.appendChild(toDom(node, parent.ownerDocument));
}

export function replaceChildren(parent: Element, ...nodes: Child[]): void {
  parent.textContent = "";
  for (const node of nodes) mount(node, parent);
}

function toDom(node: Child, doc: Document): globalThis.Node {
  if (typeof node === "string") return doc.createTextNode(node);
  const el = SVG_TAGS.has(node.tag)
    ? doc.createElementNS("http://www.w3.org/2000/svg", node.tag)
    : doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  for (const [event, handler] of Object.entries(node.on)) {
    el.addEventListener(event, handler);
  }
  for (const child of node.children) {
    el.appendChild(toDom(child, doc));
  }
  return el;
}

// --- tree queries (used by tests and by nothing else) ---

export function collect(node: Child, pred: (v: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const here = pred(node) ? [node] : [];
  return here.concat(node.children.flatMap((c) => collect(c, pred)));
}

export function byClass(node: Child, cls: string): VNode[] {
  return collect(node, (v) => (v.attrs["class"] ?? "").split(/\s+/).includes(cls));
}

export function textOf(node: Child): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).join("");
}
