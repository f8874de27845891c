/** Entry point: login, the space lobby, and hash routing into a space. */

import { ApiClient } from "./api.js";
import { renderSpace, type SpacePage } from "./views/space.js";
import { el, clear } from "./widgets/ui.js";

const api = new ApiClient();
let page: SpacePage | null = null;

function spaceFromLocation(): string | null {
  const hash = location.hash.replace(/^#\/?/, "");
  if (hash.startsWith("spaces/")) return decodeURIComponent(hash.slice("spaces/".length));
  const path = location.pathname;
  if (path.startsWith("/spaces/")) return decodeURIComponent(path.slice("/spaces/".length));
  return null;
}

function renderLogin(root: HTMLElement, next: () => void): void {
  const name = el("input", { placeholder: "your name" });
  const button = el("button", {}, ["enter"]);
  const error = el("p", { class: "muted" }, []);
  button.addEventListener("click", async () => {
    const learner = name.value.trim();
    if (!learner) return;
    try {
      await api.login(learner);
      next();
    } catch (err) {
      error.textContent = String(err);
    }
  });
  name.addEventListener("keydown", (e) => {
    if (e.key === "Enter") button.click();
  });
  clear(root);
  root.append(
    el("div", { class: "lobby" }, [
      el("h2", {}, ["Your learning spaces"]),
      el("p", {}, ["Log in to assemble widget spaces, get recommendations, and reflect on how you learn."]),
      el("div", { class: "row" }, [name, button]),
      error,
    ]),
  );
}

async function renderLobby(root: HTMLElement): Promise<void> {
  const input = el("input", { placeholder: "space name (e.g. quadratic-functions)" });
  const openButton = el("button", {}, ["open or create"]);
  const error = el("p", { class: "muted" }, []);
  openButton.addEventListener("click", () => {
    const name = input.value.trim();
    if (name) location.hash = `#/spaces/${encodeURIComponent(name)}`;
  });
  input.addEventListener("keydown", (e) => {
    if (e.key === "Enter") openButton.click();
  });
  clear(root);
  root.append(
    el("div", { class: "lobby" }, [
      el("h2", {}, [`hello, ${api.learner}`]),
      el("div", { class: "row" }, [input, openButton]),
      error,
    ]),
  );
}

async function route(): Promise<void> {
  const root = document.getElementById("app")!;
  page?.dispose();
  page = null;
  if (!api.token) {
    renderLogin(root, () => void route());
    return;
  }
  const space = spaceFromLocation();
  if (space) {
    try {
      page = await renderSpace(root, api, space, () => {
        location.hash = "";
        void route();
      });
    } catch (err) {
      clear(root);
      root.append(el("p", {}, [String(err)]));
    }
  } else {
    await renderLobby(root);
  }
}

window.addEventListener("hashchange", () => void route());
void route();
