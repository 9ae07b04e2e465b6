// Entry point: hash routing between the three views, one session per tab.

import { ApiClient, ApiError, BackendUnreachable } from "./api.js";
import { UiSession } from "./session.js";
import {
  renderAnnotateView,
  renderBanner,
  renderDisagreementView,
  renderProjectBrowser,
} from "./views.js";

const api = new ApiClient("");
const app = document.getElementById("app")!;

function annotatorToken(): string {
  let token = window.localStorage.getItem("annotator") ?? "";
  while (!token.trim()) {
    token = window.prompt("Annotator name (your token)") ?? "";
  }
  window.localStorage.setItem("annotator", token);
  return token;
}

let session: UiSession | null = null;

function show(view: HTMLElement): void {
  app.replaceChildren(view);
}

async function showBrowser(): Promise<void> {
  try {
    const projects = await api.listProjects();
    show(renderProjectBrowser(projects, (projectId, group) => {
      window.location.hash = group === null
        ? `#/annotate/${projectId}`
        : `#/annotate/${projectId}/${encodeURIComponent(group)}`;
    }));
  } catch (err) {
    if (err instanceof BackendUnreachable) {
      show(renderBanner("Annotation server unreachable.", () => void route()));
      return;
    }
    throw err;
  }
}

function annotateHandlers(notice: (text: string) => void) {
  return {
    onSubmit: async () => {
      const active = session!;
      try {
        await active.submitPending();
      } catch (err) {
        // the pending pair is kept so the annotator can retry
        notice(err instanceof Error ? err.message : String(err));
        return;
      }
      const moved = await active.advance();
      notice(moved ? "" : "Saved. This was the last assigned paper.");
      renderAnnotate();
    },
    onSkip: async () => {
      const active = session!;
      const moved = await active.advance();
      notice(moved ? "" : "Already at the last assigned paper.");
      renderAnnotate();
    },
    onAddLabel: async (value: string) => {
      try {
        await session!.addDatasetLabel(value);
        notice(`Added label "${value}".`);
      } catch (err) {
        notice(err instanceof ApiError ? err.message : String(err));
      }
      renderAnnotate();
    },
    onBack: () => {
      window.location.hash = "#/projects";
    },
  };
}

let annotateNotice = "";

function renderAnnotate(): void {
  const handlers = annotateHandlers((text) => {
    annotateNotice = text;
  });
  show(renderAnnotateView(session!, handlers, annotateNotice));
}

async function showAnnotate(projectId: string, group: string | null): Promise<void> {
  try {
    session = new UiSession(api, annotatorToken());
    await session.openProject(projectId);
    if (group !== null) {
      session.selectGroup(group);
    }
    annotateNotice = "";
    renderAnnotate();
  } catch (err) {
    if (err instanceof BackendUnreachable) {
      show(renderBanner("Annotation server unreachable.", () => void route()));
      return;
    }
    throw err;
  }
}

async function showDisagreement(projectId: string): Promise<void> {
  let view;
  try {
    view = await api.agreement(projectId);
  } catch (err) {
    if (err instanceof ApiError) {
      show(renderDisagreementView(api, projectId, err,
        () => { window.location.hash = "#/projects"; }));
      return;
    }
    if (err instanceof BackendUnreachable) {
      show(renderBanner("Annotation server unreachable.", () => void route()));
      return;
    }
    throw err;
  }
  show(renderDisagreementView(api, projectId, view,
    () => { window.location.hash = "#/projects"; }));
}

async function route(): Promise<void> {
  const hash = window.location.hash || "#/projects";
  const parts = hash.replace(/^#\//, "").split("/");
  if (parts[0] === "annotate" && parts[1]) {
    await showAnnotate(parts[1], parts[2] ? decodeURIComponent(parts[2]) : null);
  } else if (parts[0] === "disagreement" && parts[1]) {
    await showDisagreement(parts[1]);
  } else {
    await showBrowser();
  }
}

window.addEventListener("hashchange", () => void route());
void route();
