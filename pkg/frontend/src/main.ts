/** Browser entry point: the start screen collects the service address
 * plus the parse graph and facts to explore, then hands off to App. */

import { Client } from "./api.js";
import { App } from "./app.js";
import { SAMPLE_ONTOLOGY, SAMPLE_PG } from "./sample.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export function boot(): void {
  const form = el<HTMLFormElement>("boot-form");
  const baseInput = el<HTMLInputElement>("boot-base");
  const pgInput = el<HTMLTextAreaElement>("boot-pg");
  const ontoInput = el<HTMLTextAreaElement>("boot-ontology");
  const status = el<HTMLElement>("boot-status");

  baseInput.value = baseInput.value || "http://127.0.0.1:8000";
  pgInput.value = pgInput.value || SAMPLE_PG;
  ontoInput.value = ontoInput.value || SAMPLE_ONTOLOGY;

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    status.textContent = "starting session...";
    const app = new App(new Client(baseInput.value.replace(/\/$/, "")), el("app"));
    app
      .start(pgInput.value, ontoInput.value.trim() ? ontoInput.value : undefined)
      .then(() => {
        el("boot").hidden = true;
        status.textContent = "";
      })
      .catch((err) => {
        status.textContent = `failed to start: ${err instanceof Error ? err.message : err}`;
      });
  });
}

boot();
