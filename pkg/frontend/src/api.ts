// Typed client for the annotation service. Every mutation the UI performs
// goes through this class; the UI holds no authoritative state. Note there is
// deliberately no method that writes to label set 2: the location set is
// fixed at project creation and the client surface makes that unreachable.

import type {
  AgreementReport,
  AnnotationPayload,
  AnnotationRow,
  ProjectDetail,
  ProjectSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export class BackendUnreachable extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<ApiError> {
  let code = "HttpError";
  let detail = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as {
      detail?: { error?: string; detail?: string } | string;
    };
    if (typeof body.detail === "object" && body.detail !== null) {
      code = body.detail.error ?? code;
      detail = body.detail.detail ?? detail;
    } else if (typeof body.detail === "string") {
      detail = body.detail;
    }
  } catch {
    // non-JSON error body: keep the generic message
  }
  return new ApiError(response.status, code, detail);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new BackendUnreachable(String(err));
    }
    if (!response.ok) {
      throw await parseError(response);
    }
    return response;
  }

  async listProjects(): Promise<ProjectSummary[]> {
    return (await this.request("/projects")).json();
  }

  async getProject(projectId: string): Promise<ProjectDetail> {
    return (await this.request(`/projects/${projectId}`)).json();
  }

  async createProject(
    name: string,
    pdfs: { id: string; data: BlobPart }[],
    datasetLabels: string[],
    locationLabels: string[],
  ): Promise<ProjectDetail> {
    const form = new FormData();
    form.set("name", name);
    form.set("label_set_1", datasetLabels.join(";"));
    form.set("label_set_2", locationLabels.join(";"));
    for (const pdf of pdfs) {
      form.append("files", new Blob([pdf.data], { type: "application/pdf" }),
        `${pdf.id}.pdf`);
    }
    const response = await this.request("/projects", {
      method: "POST",
      body: form,
    });
    return response.json();
  }

  /** Append a dataset label (set 1). The location set has no counterpart. */
  async addDatasetLabel(projectId: string, value: string): Promise<string[]> {
    const response = await this.request(`/projects/${projectId}/labels`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ value, label_set: 1 }),
    });
    const body = (await response.json()) as { label_set_1: string[] };
    return body.label_set_1;
  }

  async uploadGroups(projectId: string, csvText: string): Promise<Record<string, string[]>> {
    const form = new FormData();
    form.append("file", new Blob([csvText], { type: "text/csv" }), "groups.csv");
    const response = await this.request(`/projects/${projectId}/groups`, {
      method: "POST",
      body: form,
    });
    const body = (await response.json()) as { groups: Record<string, string[]> };
    return body.groups;
  }

  pdfUrl(projectId: string, pdfId: string): string {
    return `${this.baseUrl}/projects/${projectId}/pdfs/${pdfId}`;
  }

  async submitAnnotation(annotator: string, payload: AnnotationPayload): Promise<AnnotationRow> {
    const response = await this.request("/annotations", {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        "X-Annotator": annotator,
      },
      body: JSON.stringify(payload),
    });
    const row = (await response.json()) as Omit<AnnotationRow, "annotator_id">;
    return { annotator_id: annotator, ...row };
  }

  async listAnnotations(projectId: string, annotator?: string): Promise<AnnotationRow[]> {
    const query = annotator ? `?annotator=${encodeURIComponent(annotator)}` : "";
    return (await this.request(`/projects/${projectId}/annotations${query}`)).json();
  }

  /** One CSV text per annotator, as served by export?format=json. */
  async exportPerAnnotator(projectId: string): Promise<Record<string, string>> {
    return (await this.request(`/projects/${projectId}/export?format=json`)).json();
  }

  async agreement(projectId: string): Promise<AgreementReport> {
    return (await this.request(`/projects/${projectId}/agreement`)).json();
  }
}
