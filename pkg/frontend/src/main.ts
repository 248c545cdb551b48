import { EvovoteClient } from "./api.js";
import { App } from "./app.js";

// base URL and session id come from the query string, e.g.
//   index.html?base=http://127.0.0.1:8000&session=<id>
const params = new URLSearchParams(window.location.search);
const client = new EvovoteClient(params.get("base") ?? "http://127.0.0.1:8000");
const sessionId = params.get("session");

if (sessionId) {
  new App(client, sessionId).start().catch((err) => {
    const banner = document.getElementById("job-banner");
    if (banner) banner.textContent = String(err);
  });
} else {
  const banner = document.getElementById("job-banner");
  if (banner) banner.textContent = "missing ?session=<id> query parameter";
}
