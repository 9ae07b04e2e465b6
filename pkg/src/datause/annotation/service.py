"""HTTP API over the annotation store, consumed by the web UI.

Authentication is a lightweight per-user token: the ``X-Annotator`` header
(or the ``annotator_id`` body field) names the user; the token is the
identity. This mirrors the tool's local-server, small-team deployment.
"""

from __future__ import annotations

import csv
from pathlib import Path

from fastapi import FastAPI, File, Form, Header, HTTPException, Response, UploadFile
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import store as st


class AnnotationIn(BaseModel):
    project_id: str
    pdf_id: str
    label_1: str
    label_2: str
    annotator_id: str | None = None


class LabelIn(BaseModel):
    value: str
    label_set: int = 1


_ERROR_STATUS = {
    st.UnknownProject: 404,
    st.UnknownPdfId: 404,
    st.UnknownLabel: 422,
    st.DuplicateProjectName: 409,
    st.DuplicateLabel: 409,
    st.FrozenSet: 409,
    st.EmptyPdfSet: 422,
    st.MalformedGroupRow: 422,
    st.NoOverlap: 409,
}


def _http_error(exc: st.AnnotationError) -> HTTPException:
    status = _ERROR_STATUS.get(type(exc), 400)
    return HTTPException(status_code=status,
                         detail={"error": type(exc).__name__, "detail": str(exc)})


def load_detection_pairs(detections_csv: Path) -> set[tuple[str, str]]:
    pairs = set()
    with open(detections_csv, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            pairs.add((row["paper_id"], row["dataset_id"]))
    return pairs


def _completion(store: st.AnnotationStore, project: st.AnnotationProject) -> dict:
    """Per-group share of assigned PDFs that carry at least one annotation."""
    out = {}
    for annotator, pdf_ids in sorted(project.groups.items()):
        done = {a.pdf_id for a in store.annotations_for(project.project_id, annotator)}
        out[annotator] = {
            "assigned": len(pdf_ids),
            "annotated": sum(1 for pdf_id in pdf_ids if pdf_id in done),
        }
    return out


def create_app(root: Path, detections_csv: Path | None = None,
               ui_dir: Path | None = None,
               store: st.AnnotationStore | None = None) -> FastAPI:
    store = store or st.AnnotationStore(root)
    detection_pairs = (load_detection_pairs(detections_csv)
                       if detections_csv else None)
    app = FastAPI(title="datause annotation service")

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/projects")
    def list_projects():
        out = []
        for project in store.list_projects():
            out.append({
                "project_id": project.project_id,
                "name": project.name,
                "pdf_count": len(project.pdf_ids),
                "groups": sorted(project.groups),
                "completion": _completion(store, project),
            })
        return out

    @app.post("/projects", status_code=201)
    async def create_project(
        name: str = Form(...),
        label_set_1: str = Form(""),
        label_set_2: str = Form(""),
        files: list[UploadFile] = File(...),
    ):
        pdfs = []
        for upload in files:
            pdf_id = Path(upload.filename or "upload").stem
            pdfs.append((pdf_id, await upload.read()))
        try:
            project = store.create_project(
                name=name,
                pdfs=pdfs,
                label_set_1=[v for v in label_set_1.split(";") if v.strip()],
                label_set_2=[v for v in label_set_2.split(";") if v.strip()],
            )
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return project.to_dict()

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        try:
            project = store.get_project(project_id)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        data = project.to_dict()
        data["completion"] = _completion(store, project)
        return data

    @app.post("/projects/{project_id}/labels")
    def add_label(project_id: str, payload: LabelIn):
        try:
            labels = store.add_label(project_id, payload.value, payload.label_set)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return {"label_set_1": labels}

    @app.post("/projects/{project_id}/groups")
    async def upload_groups(project_id: str, file: UploadFile = File(...)):
        text = (await file.read()).decode("utf-8")
        try:
            groups = store.upload_groups(project_id, text)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return {"groups": groups}

    @app.get("/projects/{project_id}/pdfs/{pdf_id}")
    def get_pdf(project_id: str, pdf_id: str):
        try:
            data = store.pdf_bytes(project_id, pdf_id)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return Response(content=data, media_type="application/pdf")

    @app.get("/projects/{project_id}/annotations")
    def list_annotations(project_id: str, annotator: str | None = None):
        try:
            if annotator:
                rows = store.annotations_for(project_id, annotator)
            else:
                rows = store.all_annotations(project_id)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return [
            {"annotator_id": a.annotator_id, "pdf_id": a.pdf_id,
             "label_1": a.label_1, "label_2": a.label_2,
             "created_at": a.created_at}
            for a in rows
        ]

    @app.post("/annotations", status_code=201)
    def record_annotation(payload: AnnotationIn,
                          x_annotator: str | None = Header(default=None)):
        annotator = payload.annotator_id or x_annotator
        if not annotator:
            raise HTTPException(status_code=401,
                                detail={"error": "MissingAnnotator",
                                        "detail": "no annotator token supplied"})
        try:
            annotation = store.record_annotation(
                payload.project_id, annotator, payload.pdf_id,
                payload.label_1, payload.label_2)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return {"pdf_id": annotation.pdf_id, "label_1": annotation.label_1,
                "label_2": annotation.label_2, "created_at": annotation.created_at}

    @app.delete("/annotations")
    def delete_annotation(payload: AnnotationIn,
                          x_annotator: str | None = Header(default=None)):
        annotator = payload.annotator_id or x_annotator
        if not annotator:
            raise HTTPException(status_code=401,
                                detail={"error": "MissingAnnotator",
                                        "detail": "no annotator token supplied"})
        removed = store.delete_annotation(payload.project_id, annotator,
                                          payload.pdf_id, payload.label_1,
                                          payload.label_2)
        return {"removed": removed}

    @app.get("/projects/{project_id}/export")
    def export_annotations(project_id: str, format: str = "zip"):
        try:
            if format == "json":
                return store.export_annotations(project_id)
            data = store.export_zip(project_id)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return Response(content=data, media_type="application/zip")

    @app.get("/projects/{project_id}/agreement")
    def agreement(project_id: str):
        if detection_pairs is None:
            raise HTTPException(status_code=404,
                                detail={"error": "NoDetections",
                                        "detail": "service started without a "
                                                  "detections file"})
        try:
            report = store.compute_agreement(project_id, detection_pairs)
        except st.AnnotationError as exc:
            raise _http_error(exc)
        return report.to_dict()

    if ui_dir is not None and Path(ui_dir).exists():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
