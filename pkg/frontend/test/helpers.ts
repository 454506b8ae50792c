/** Test support: recorded service responses live in fixtures/ and are
 * loaded verbatim; tests never fabricate response bodies by hand. */

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

export function loadFixture<T>(name: string): T {
  const path = fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}
