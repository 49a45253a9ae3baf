/** Page bootstrap: wire the API client to the DOM against a base URL
 * taken from ?api=... (default: same-host port 8000). */

import { ApiClient } from "./api.js";
import { AppController } from "./controller.js";
import { Page } from "./dom.js";

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) return fromQuery.replace(/\/$/, "");
  return `${window.location.protocol}//${window.location.hostname}:8000`;
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const app = new AppController(new ApiClient(baseUrl()));
  const page = new Page(app, root);
  try {
    await app.init();
  } catch (err) {
    root.textContent = `Cannot reach the service at ${baseUrl()}: ${String(err)}`;
    return;
  }
  page.render();
}

start();
