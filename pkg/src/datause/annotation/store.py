"""Filesystem-backed store for PDF annotation projects.

Layout: ``<root>/<project_id>/project.json``, ``pdfs/<pdf_id>.pdf`` and one
append-only ``annotations/<annotator_id>.csv`` per user. Per-user files mean
concurrent annotators never write to the same file; label additions are
serialized through a single in-process lock.

Labels come in two sets: set 1 (datasets) grows during labelling and is
append-only; set 2 (locations) is frozen at project creation.
"""

from __future__ import annotations

import csv
import io
import json
import re
import threading
import zipfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

ANNOTATION_COLUMNS = ("pdf_id", "label_1", "label_2", "created_at")


class AnnotationError(Exception):
    pass


class DuplicateProjectName(AnnotationError):
    pass


class EmptyPdfSet(AnnotationError):
    pass


class UnknownProject(AnnotationError):
    pass


class DuplicateLabel(AnnotationError):
    pass


class FrozenSet(AnnotationError):
    """Label set 2 is fixed after project creation."""


class UnknownPdfId(AnnotationError):
    pass


class UnknownLabel(AnnotationError):
    pass


class MalformedGroupRow(AnnotationError):
    pass


class NoOverlap(AnnotationError):
    """No annotated paper joins to any automated detection."""


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    if not slug:
        raise AnnotationError(f"cannot derive a project id from {name!r}")
    return slug


@dataclass
class AnnotationProject:
    project_id: str
    name: str
    pdf_ids: list[str]
    label_set_1: list[str]
    label_set_2: list[str]
    groups: dict[str, list[str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "project_id": self.project_id,
            "name": self.name,
            "pdf_ids": self.pdf_ids,
            "label_set_1": self.label_set_1,
            "label_set_2": self.label_set_2,
            "groups": self.groups,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationProject":
        return cls(**data)


@dataclass(frozen=True)
class Annotation:
    project_id: str
    annotator_id: str
    pdf_id: str
    label_1: str
    label_2: str
    created_at: str

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.annotator_id, self.pdf_id, self.label_1, self.label_2)


@dataclass
class AgreementReport:
    precision: float
    recall: float
    true_positives: int
    false_positives: int
    false_negatives: int
    per_dataset: dict[str, dict] = field(default_factory=dict)
    pairs: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "per_dataset": self.per_dataset,
            "pairs": self.pairs,
        }


class AnnotationStore:
    def __init__(self, root: Path, clock=_utc_now):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self._write_lock = threading.Lock()

    # -- projects -------------------------------------------------------------

    def _project_dir(self, project_id: str) -> Path:
        return self.root / project_id

    def _save(self, project: AnnotationProject) -> None:
        path = self._project_dir(project.project_id) / "project.json"
        path.write_text(json.dumps(project.to_dict(), indent=2, sort_keys=True),
                        encoding="utf-8")

    def list_projects(self) -> list[AnnotationProject]:
        projects = []
        for entry in sorted(self.root.glob("*/project.json")):
            projects.append(AnnotationProject.from_dict(
                json.loads(entry.read_text(encoding="utf-8"))))
        return projects

    def get_project(self, project_id: str) -> AnnotationProject:
        path = self._project_dir(project_id) / "project.json"
        if not path.exists():
            raise UnknownProject(project_id)
        return AnnotationProject.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def create_project(self, name: str, pdfs: list[tuple[str, bytes]],
                       label_set_1: list[str],
                       label_set_2: list[str]) -> AnnotationProject:
        if not pdfs:
            raise EmptyPdfSet(name)
        project_id = _slug(name)
        if (self._project_dir(project_id) / "project.json").exists():
            raise DuplicateProjectName(name)
        project = AnnotationProject(
            project_id=project_id,
            name=name,
            pdf_ids=[pdf_id for pdf_id, _ in pdfs],
            label_set_1=list(label_set_1),
            label_set_2=list(label_set_2),
        )
        pdf_dir = self._project_dir(project_id) / "pdfs"
        pdf_dir.mkdir(parents=True, exist_ok=True)
        for pdf_id, data in pdfs:
            (pdf_dir / f"{pdf_id}.pdf").write_bytes(data)
        (self._project_dir(project_id) / "annotations").mkdir(exist_ok=True)
        self._save(project)
        return project

    def pdf_bytes(self, project_id: str, pdf_id: str) -> bytes:
        project = self.get_project(project_id)
        if pdf_id not in project.pdf_ids:
            raise UnknownPdfId(pdf_id)
        return (self._project_dir(project_id) / "pdfs" / f"{pdf_id}.pdf").read_bytes()

    # -- labels ---------------------------------------------------------------

    def add_label(self, project_id: str, value: str, label_set: int = 1) -> list[str]:
        if label_set != 1:
            raise FrozenSet("label set 2 is fixed after project creation")
        if not value.strip():
            raise AnnotationError("empty label")
        with self._write_lock:
            project = self.get_project(project_id)
            if value in project.label_set_1:
                raise DuplicateLabel(value)
            project.label_set_1.append(value)
            self._save(project)
        return project.label_set_1

    # -- groups ---------------------------------------------------------------

    def upload_groups(self, project_id: str, text: str) -> dict[str, list[str]]:
        """Rows of ``annotator,pdf_id``; an empty file leaves all papers open."""
        project = self.get_project(project_id)
        groups: dict[str, list[str]] = {}
        for i, row in enumerate(csv.reader(io.StringIO(text)), start=1):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2 or not row[0].strip() or not row[1].strip():
                raise MalformedGroupRow(f"row {i}: expected annotator,pdf_id")
            annotator, pdf_id = row[0].strip(), row[1].strip()
            if pdf_id not in project.pdf_ids:
                raise UnknownPdfId(f"row {i}: {pdf_id}")
            groups.setdefault(annotator, [])
            if pdf_id not in groups[annotator]:
                groups[annotator].append(pdf_id)
        project.groups = groups
        self._save(project)
        return groups

    # -- annotations ----------------------------------------------------------

    def _annotation_file(self, project_id: str, annotator_id: str) -> Path:
        return self._project_dir(project_id) / "annotations" / f"{annotator_id}.csv"

    def annotations_for(self, project_id: str,
                        annotator_id: str) -> list[Annotation]:
        path = self._annotation_file(project_id, annotator_id)
        if not path.exists():
            return []
        rows = []
        with open(path, newline="", encoding="utf-8") as handle:
            for row in csv.DictReader(handle):
                rows.append(Annotation(project_id=project_id,
                                       annotator_id=annotator_id, **row))
        return rows

    def all_annotations(self, project_id: str) -> list[Annotation]:
        project = self.get_project(project_id)
        annotations = []
        ann_dir = self._project_dir(project.project_id) / "annotations"
        for path in sorted(ann_dir.glob("*.csv")):
            annotations.extend(self.annotations_for(project_id, path.stem))
        return annotations

    def record_annotation(self, project_id: str, annotator_id: str, pdf_id: str,
                          label_1: str, label_2: str) -> Annotation:
        """Persist one annotation; re-submitting the identical tuple is a no-op."""
        project = self.get_project(project_id)
        if pdf_id not in project.pdf_ids:
            raise UnknownPdfId(pdf_id)
        if label_1 not in project.label_set_1:
            raise UnknownLabel(label_1)
        if label_2 not in project.label_set_2:
            raise UnknownLabel(label_2)
        if not annotator_id.strip():
            raise AnnotationError("empty annotator id")
        annotation = Annotation(project_id=project_id, annotator_id=annotator_id,
                                pdf_id=pdf_id, label_1=label_1, label_2=label_2,
                                created_at=self.clock())
        existing = self.annotations_for(project_id, annotator_id)
        if any(a.key == annotation.key for a in existing):
            return next(a for a in existing if a.key == annotation.key)
        path = self._annotation_file(project_id, annotator_id)
        path.parent.mkdir(exist_ok=True)
        is_new = not path.exists()
        with open(path, "a", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            if is_new:
                writer.writerow(ANNOTATION_COLUMNS)
            writer.writerow((pdf_id, label_1, label_2, annotation.created_at))
        return annotation

    def delete_annotation(self, project_id: str, annotator_id: str, pdf_id: str,
                          label_1: str, label_2: str) -> bool:
        """Explicit removal; rows are never silently overwritten."""
        existing = self.annotations_for(project_id, annotator_id)
        key = (annotator_id, pdf_id, label_1, label_2)
        kept = [a for a in existing if a.key != key]
        if len(kept) == len(existing):
            return False
        path = self._annotation_file(project_id, annotator_id)
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(ANNOTATION_COLUMNS)
            for a in kept:
                writer.writerow((a.pdf_id, a.label_1, a.label_2, a.created_at))
        return True

    # -- export & agreement ----------------------------------------------------

    def export_annotations(self, project_id: str) -> dict[str, str]:
        """One deterministic CSV per annotator; files partition the store.

        Annotators assigned through groups appear even with zero annotations
        (header-only file).
        """
        project = self.get_project(project_id)
        ann_dir = self._project_dir(project.project_id) / "annotations"
        annotators = {path.stem for path in ann_dir.glob("*.csv")}
        annotators.update(project.groups)
        out = {}
        for annotator in sorted(annotators):
            rows = self.annotations_for(project_id, annotator)
            rows.sort(key=lambda a: (a.pdf_id, a.label_1, a.label_2))
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(ANNOTATION_COLUMNS)
            for a in rows:
                writer.writerow((a.pdf_id, a.label_1, a.label_2, a.created_at))
            out[annotator] = buf.getvalue()
        return out

    def export_zip(self, project_id: str) -> bytes:
        files = self.export_annotations(project_id)
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as archive:
            for annotator in sorted(files):
                info = zipfile.ZipInfo(f"{annotator}.csv",
                                       date_time=(1980, 1, 1, 0, 0, 0))
                archive.writestr(info, files[annotator])
        return buf.getvalue()

    def compute_agreement(self, project_id: str,
                          detected_pairs: set[tuple[str, str]],
                          pdf_to_paper: dict[str, str] | None = None) -> AgreementReport:
        """Precision/recall of automated detections against human labels.

        Human (paper, dataset) pairs are the ground truth. ``pdf_to_paper``
        maps pdf ids onto pipeline paper ids (identity by default).
        """
        project = self.get_project(project_id)
        mapping = pdf_to_paper or {}
        annotations = self.all_annotations(project_id)
        human_pairs = {
            (mapping.get(a.pdf_id, a.pdf_id), a.label_1) for a in annotations
        }
        project_papers = {mapping.get(pdf_id, pdf_id) for pdf_id in project.pdf_ids}
        detected_papers = {paper for paper, _ in detected_pairs}
        if not project_papers & detected_papers:
            raise NoOverlap("no project paper appears in the detections")

        # detections outside the verified corpus carry no verdict either way
        scoped = {(p, d) for p, d in detected_pairs if p in project_papers}
        tp = scoped & human_pairs
        fp = scoped - human_pairs
        fn = human_pairs - scoped

        def _ratio(num: int, den: int) -> float:
            return num / den if den else 0.0

        per_dataset = {}
        for dataset in sorted({d for _, d in scoped | human_pairs}):
            d_tp = sum(1 for p in tp if p[1] == dataset)
            d_fp = sum(1 for p in fp if p[1] == dataset)
            d_fn = sum(1 for p in fn if p[1] == dataset)
            per_dataset[dataset] = {
                "precision": _ratio(d_tp, d_tp + d_fp),
                "recall": _ratio(d_tp, d_tp + d_fn),
                "true_positives": d_tp,
                "false_positives": d_fp,
                "false_negatives": d_fn,
            }

        pairs = (
            [{"paper_id": p, "dataset": d, "status": "both"} for p, d in sorted(tp)]
            + [{"paper_id": p, "dataset": d, "status": "automated_only"}
               for p, d in sorted(fp)]
            + [{"paper_id": p, "dataset": d, "status": "human_only"}
               for p, d in sorted(fn)]
        )
        return AgreementReport(
            precision=_ratio(len(tp), len(tp) + len(fp)),
            recall=_ratio(len(tp), len(tp) + len(fn)),
            true_positives=len(tp),
            false_positives=len(fp),
            false_negatives=len(fn),
            per_dataset=per_dataset,
            pairs=pairs,
        )
