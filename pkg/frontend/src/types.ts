// Payload shapes of the annotation service API.

export interface GroupCompletion {
  assigned: number;
  annotated: number;
}

export interface ProjectSummary {
  project_id: string;
  name: string;
  pdf_count: number;
  groups: string[];
  completion: Record<string, GroupCompletion>;
}

export interface ProjectDetail {
  project_id: string;
  name: string;
  pdf_ids: string[];
  label_set_1: string[]; // datasets: grows during labelling
  label_set_2: string[]; // locations: fixed at project creation
  groups: Record<string, string[]>;
  completion: Record<string, GroupCompletion>;
}

export interface AnnotationRow {
  annotator_id: string;
  pdf_id: string;
  label_1: string;
  label_2: string;
  created_at: string;
}

export interface AnnotationPayload {
  project_id: string;
  pdf_id: string;
  label_1: string;
  label_2: string;
}

export type PairStatus = "both" | "automated_only" | "human_only";

export interface AgreementPair {
  paper_id: string;
  dataset: string;
  status: PairStatus;
}

export interface AgreementReport {
  precision: number;
  recall: number;
  true_positives: number;
  false_positives: number;
  false_negatives: number;
  per_dataset: Record<string, Record<string, number>>;
  pairs: AgreementPair[];
}
