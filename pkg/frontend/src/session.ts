// Live labeling session: one annotator paging through an assigned group of
// PDFs, entering (dataset, location) pairs as they read. All state here is a
// cache of server responses plus the pending pair; mutations round-trip
// through the API client.

import { ApiClient } from "./api.js";
import type { ProjectDetail } from "./types.js";

export interface PendingPair {
  dataset: string | null;
  location: string | null;
}

export class UiSession {
  project: ProjectDetail | null = null;
  group: string | null = null;
  private pdfIds: string[] = [];
  private index = 0;
  pending: PendingPair = { dataset: null, location: null };

  constructor(
    readonly api: ApiClient,
    readonly annotator: string,
  ) {
    if (!annotator.trim()) {
      throw new Error("annotator token must be nonempty");
    }
  }

  async openProject(projectId: string): Promise<ProjectDetail> {
    this.project = await this.api.getProject(projectId);
    this.group = null;
    this.pdfIds = [...this.project.pdf_ids];
    this.index = 0;
    this.pending = { dataset: null, location: null };
    return this.project;
  }

  /** Pick a group; null shows all papers (projects without a group file). */
  selectGroup(group: string | null): void {
    const project = this.requireProject();
    if (group === null) {
      this.pdfIds = [...project.pdf_ids];
    } else {
      const assigned = project.groups[group];
      if (!assigned) {
        throw new Error(`unknown group: ${group}`);
      }
      this.pdfIds = [...assigned];
    }
    this.group = group;
    this.index = 0;
  }

  get currentPdf(): string | null {
    return this.pdfIds[this.index] ?? null;
  }

  get position(): { index: number; total: number } {
    return { index: this.index, total: this.pdfIds.length };
  }

  get datasetLabels(): string[] {
    return this.requireProject().label_set_1;
  }

  get locationLabels(): string[] {
    return this.requireProject().label_set_2;
  }

  /** Client-side mirror of the server validation: labels must come from the
   * fetched sets, so the UI can never write values outside them. */
  setPending(dataset: string | null, location: string | null): void {
    const project = this.requireProject();
    if (dataset !== null && !project.label_set_1.includes(dataset)) {
      throw new Error(`dataset label not in set 1: ${dataset}`);
    }
    if (location !== null && !project.label_set_2.includes(location)) {
      throw new Error(`location label not in set 2: ${location}`);
    }
    this.pending = { dataset, location };
  }

  /** Submit the pending pair for the current PDF. On success the pair is
   * cleared and the label sets refreshed; on failure it stays for retry. */
  async submitPending(): Promise<void> {
    const project = this.requireProject();
    const pdf = this.currentPdf;
    const { dataset, location } = this.pending;
    if (pdf === null || dataset === null || location === null) {
      throw new Error("nothing to submit");
    }
    await this.api.submitAnnotation(this.annotator, {
      project_id: project.project_id,
      pdf_id: pdf,
      label_1: dataset,
      label_2: location,
    });
    this.pending = { dataset: null, location: null };
  }

  /** Append a dataset label mid-session; it is selectable immediately. */
  async addDatasetLabel(value: string): Promise<string[]> {
    const project = this.requireProject();
    const labels = await this.api.addDatasetLabel(project.project_id, value);
    project.label_set_1 = labels;
    return labels;
  }

  /** Move to the next assigned PDF; label sets are re-fetched so labels added
   * by other annotators become visible. Returns false at the end. */
  async advance(): Promise<boolean> {
    if (this.index + 1 >= this.pdfIds.length) {
      return false;
    }
    this.index += 1;
    await this.refreshLabels();
    return true;
  }

  async refreshLabels(): Promise<void> {
    const project = this.requireProject();
    const fresh = await this.api.getProject(project.project_id);
    project.label_set_1 = fresh.label_set_1;
    project.label_set_2 = fresh.label_set_2;
    project.completion = fresh.completion;
  }

  private requireProject(): ProjectDetail {
    if (this.project === null) {
      throw new Error("no project selected");
    }
    return this.project;
  }
}
