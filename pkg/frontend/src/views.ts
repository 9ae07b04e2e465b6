// DOM rendering. Views are plain functions from state to elements; all state
// changes go through the session/client passed in by main.ts.

import { ApiClient, ApiError } from "./api.js";
import { UiSession } from "./session.js";
import type { AgreementPair, ProjectSummary } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export function renderBanner(message: string, onRetry: () => void): HTMLElement {
  const button = el("button", { class: "retry" }, ["Retry"]);
  button.addEventListener("click", onRetry);
  return el("div", { class: "banner" }, [message, button]);
}

// -- project browser -------------------------------------------------------------

export function renderProjectBrowser(
  projects: ProjectSummary[],
  onOpen: (projectId: string, group: string | null) => void,
): HTMLElement {
  const root = el("section", { class: "browser" }, [
    el("h1", {}, ["Annotation projects"]),
  ]);
  if (projects.length === 0) {
    root.append(el("p", { class: "empty" }, ["No projects on this server yet."]));
    return root;
  }
  for (const project of projects) {
    const card = el("article", { class: "project" }, [
      el("h2", {}, [project.name]),
      el("p", {}, [`${project.pdf_count} PDFs`]),
    ]);
    const groups = el("ul", { class: "groups" });
    if (project.groups.length === 0) {
      const open = el("button", {}, ["Open (all papers)"]);
      open.addEventListener("click", () => onOpen(project.project_id, null));
      groups.append(el("li", {}, [open]));
    }
    for (const group of project.groups) {
      const completion = project.completion[group];
      const done = completion ? completion.annotated : 0;
      const assigned = completion ? completion.assigned : 0;
      const share = assigned > 0 ? Math.round((100 * done) / assigned) : 0;
      const open = el("button", {}, [`${group} — ${done}/${assigned}`]);
      open.addEventListener("click", () => onOpen(project.project_id, group));
      const item = el("li", {}, [open]);
      if (assigned > 0 && done === assigned) {
        item.append(el("span", { class: "badge done" }, ["100%"]));
      } else {
        item.append(el("span", { class: "badge" }, [`${share}%`]));
      }
      groups.append(item);
    }
    card.append(groups);
    const review = el("a", { href: `#/disagreement/${project.project_id}` },
      ["Review automated vs human"]);
    card.append(el("p", {}, [review]));
    root.append(card);
  }
  return root;
}

// -- annotate view -----------------------------------------------------------------

function labelSelect(id: string, options: string[], selected: string | null): HTMLSelectElement {
  const select = el("select", { id });
  select.append(el("option", { value: "" }, ["(choose)"]));
  for (const option of options) {
    const node = el("option", { value: option }, [option]);
    if (option === selected) {
      node.selected = true;
    }
    select.append(node);
  }
  return select;
}

export function renderAnnotateView(
  session: UiSession,
  handlers: {
    onSubmit: () => void;
    onSkip: () => void;
    onAddLabel: (value: string) => void;
    onBack: () => void;
  },
  notice = "",
): HTMLElement {
  const pdf = session.currentPdf;
  const { index, total } = session.position;
  const root = el("section", { class: "annotate" });

  const back = el("button", { class: "back" }, ["Projects"]);
  back.addEventListener("click", handlers.onBack);
  root.append(el("header", {}, [
    back,
    el("span", { class: "progress" },
      [total ? `Paper ${index + 1} of ${total}` : "No papers in this group"]),
    el("span", { class: "annotator" }, [`Annotating as ${session.annotator}`]),
  ]));

  if (pdf === null) {
    root.append(el("p", { class: "empty" }, ["Nothing assigned here."]));
    return root;
  }

  const project = session.project!;
  // the browser's native viewer renders the PDF
  root.append(el("iframe", {
    class: "pdf",
    src: session.api.pdfUrl(project.project_id, pdf),
    title: pdf,
  }));

  const datasetSelect = labelSelect("dataset", session.datasetLabels,
    session.pending.dataset);
  const locationSelect = labelSelect("location", session.locationLabels,
    session.pending.location);
  datasetSelect.addEventListener("change", () => {
    session.setPending(datasetSelect.value || null,
      locationSelect.value || null);
  });
  locationSelect.addEventListener("change", () => {
    session.setPending(datasetSelect.value || null,
      locationSelect.value || null);
  });

  const submit = el("button", { class: "submit" }, ["Save and next"]);
  submit.addEventListener("click", handlers.onSubmit);
  const skip = el("button", { class: "skip" }, ["Skip paper"]);
  skip.addEventListener("click", handlers.onSkip);

  // new dataset labels can be added at any point; the location set is fixed
  // at project creation, so no such control exists for it
  const newLabel = el("input", {
    id: "new-label",
    placeholder: "New dataset label",
  });
  const addLabel = el("button", {}, ["Add label"]);
  addLabel.addEventListener("click", () => {
    if (newLabel.value.trim()) {
      handlers.onAddLabel(newLabel.value.trim());
    }
  });

  root.append(el("div", { class: "panel" }, [
    el("label", { for: "dataset" }, ["Dataset"]), datasetSelect,
    el("label", { for: "location" }, ["Location"]), locationSelect,
    submit, skip,
    el("div", { class: "add-label" }, [newLabel, addLabel]),
    el("p", { class: "notice" }, [notice]),
  ]));
  return root;
}

// -- disagreement view ----------------------------------------------------------------

const STATUS_LABELS: Record<AgreementPair["status"], string> = {
  both: "agree",
  automated_only: "automated only",
  human_only: "human only",
};

export function renderDisagreementView(
  api: ApiClient,
  projectId: string,
  result: { pairs: AgreementPair[]; precision: number; recall: number } | ApiError,
  onBack: () => void,
): HTMLElement {
  const root = el("section", { class: "disagreement" });
  const back = el("button", { class: "back" }, ["Projects"]);
  back.addEventListener("click", onBack);
  root.append(el("header", {}, [back, el("h1", {}, ["Automated vs human"])]));

  if (result instanceof ApiError) {
    const message = result.code === "NoOverlap"
      ? "No annotated paper overlaps the automated detections yet."
      : result.code === "NoDetections"
        ? "The server was started without a detections file."
        : result.message;
    root.append(el("p", { class: "empty" }, [message]));
    return root;
  }

  const disagreements = result.pairs.filter((p) => p.status !== "both");
  root.append(el("p", {}, [
    `precision ${result.precision.toFixed(2)}, recall ${result.recall.toFixed(2)},`
    + ` ${disagreements.length} disagreement(s)`,
  ]));
  if (disagreements.length === 0) {
    root.append(el("p", { class: "empty" }, ["No disagreements."]));
    return root;
  }

  const table = el("table", { class: "pairs" });
  const header = el("tr");
  for (const [column, key] of [["Paper", "paper_id"], ["Dataset", "dataset"],
                               ["Status", "status"]] as const) {
    const cell = el("th", {}, [column]);
    cell.addEventListener("click", () => {
      disagreements.sort((a, b) => a[key].localeCompare(b[key]));
      render();
    });
    header.append(cell);
  }

  const body = el("tbody");
  const render = () => {
    body.replaceChildren();
    for (const pair of disagreements) {
      body.append(el("tr", { class: pair.status }, [
        el("td", {}, [el("a", {
          href: api.pdfUrl(projectId, pair.paper_id),
          target: "_blank",
        }, [pair.paper_id])]),
        el("td", {}, [pair.dataset]),
        el("td", {}, [STATUS_LABELS[pair.status]]),
      ]));
    }
  };
  render();
  table.append(el("thead", {}, [header]), body);
  root.append(table);
  return root;
}
