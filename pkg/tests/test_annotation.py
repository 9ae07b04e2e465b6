import itertools

import pytest
from fastapi.testclient import TestClient

from datause.annotation import store as st
from datause.annotation.service import create_app

PDF = b"%PDF-1.4 tiny"
LOCATIONS = ["Abstract", "Introduction", "Method", "Table caption",
             "Figure caption", "Footnote"]


class FixedClock:
    def __init__(self):
        self.counter = itertools.count()

    def __call__(self):
        return f"2024-01-01T00:00:{next(self.counter):02d}+00:00"


def make_store(tmp_path):
    return st.AnnotationStore(tmp_path / "projects", clock=FixedClock())


def make_project(store, name="Study", n_pdfs=10, labels1=None, labels2=None):
    pdfs = [(f"paper{i}", PDF) for i in range(n_pdfs)]
    if labels1 is None:
        labels1 = [f"dataset{i}" for i in range(20)]
    if labels2 is None:
        labels2 = LOCATIONS
    return store.create_project(name, pdfs, labels1, labels2)


# -- projects and labels -----------------------------------------------------------


def test_create_project_with_two_label_sets(tmp_path):
    project = make_project(make_store(tmp_path))
    assert len(project.pdf_ids) == 10
    assert len(project.label_set_1) == 20
    assert len(project.label_set_2) == 6


def test_create_project_with_empty_first_set(tmp_path):
    project = make_project(make_store(tmp_path), labels1=[])
    assert project.label_set_1 == []


def test_create_project_requires_pdfs(tmp_path):
    with pytest.raises(st.EmptyPdfSet):
        make_store(tmp_path).create_project("x", [], [], [])


def test_duplicate_project_name(tmp_path):
    store = make_store(tmp_path)
    make_project(store)
    with pytest.raises(st.DuplicateProjectName):
        make_project(store)


def test_add_label_grows_set_one(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC"])
    labels = store.add_label(project.project_id, "PadChest")
    assert labels == ["ACDC", "PadChest"]
    assert store.get_project(project.project_id).label_set_1 == labels


def test_add_existing_label_rejected(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC"])
    with pytest.raises(st.DuplicateLabel):
        store.add_label(project.project_id, "ACDC")


def test_label_set_two_is_frozen(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store)
    with pytest.raises(st.FrozenSet):
        store.add_label(project.project_id, "New place", label_set=2)
    assert store.get_project(project.project_id).label_set_2 == LOCATIONS


# -- groups -------------------------------------------------------------------------


def test_upload_groups_three_annotators(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store)
    rows = [f"alice,paper{i}" for i in range(4)]
    rows += [f"bob,paper{i}" for i in range(4, 8)]
    rows += [f"carol,paper{i}" for i in range(8, 10)]
    rows += ["carol,paper0"]  # overlap allowed: groups need not be disjoint
    groups = store.upload_groups(project.project_id, "\n".join(rows))
    assert sorted(groups) == ["alice", "bob", "carol"]
    assert groups["carol"] == ["paper8", "paper9", "paper0"]


def test_groups_unknown_pdf(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store)
    with pytest.raises(st.UnknownPdfId):
        store.upload_groups(project.project_id, "alice,missing")


def test_groups_malformed_row(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store)
    with pytest.raises(st.MalformedGroupRow):
        store.upload_groups(project.project_id, "only-one-cell")


def test_empty_group_file_means_open_access(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store)
    assert store.upload_groups(project.project_id, "") == {}


# -- annotations ----------------------------------------------------------------------


def test_record_and_idempotent_resubmit(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["BRATS"])
    first = store.record_annotation(project.project_id, "alice", "paper3",
                                    "BRATS", "Table caption")
    second = store.record_annotation(project.project_id, "alice", "paper3",
                                     "BRATS", "Table caption")
    assert first == second
    assert len(store.annotations_for(project.project_id, "alice")) == 1


def test_record_unknown_label(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC"])
    with pytest.raises(st.UnknownLabel):
        store.record_annotation(project.project_id, "alice", "paper0",
                                "nope", "Method")
    with pytest.raises(st.UnknownLabel):
        store.record_annotation(project.project_id, "alice", "paper0",
                                "ACDC", "nope")


def test_record_unknown_pdf(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC"])
    with pytest.raises(st.UnknownPdfId):
        store.record_annotation(project.project_id, "alice", "ghost",
                                "ACDC", "Method")


def test_explicit_delete(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC"])
    store.record_annotation(project.project_id, "alice", "paper0", "ACDC",
                            "Method")
    assert store.delete_annotation(project.project_id, "alice", "paper0",
                                   "ACDC", "Method")
    assert store.annotations_for(project.project_id, "alice") == []
    assert not store.delete_annotation(project.project_id, "alice", "paper0",
                                       "ACDC", "Method")


# -- export ------------------------------------------------------------------------------


def test_export_one_file_per_annotator(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC", "BRATS"])
    for i in range(5):
        store.record_annotation(project.project_id, "alice", f"paper{i}",
                                "ACDC", "Method")
    for i in range(3):
        store.record_annotation(project.project_id, "bob", f"paper{i}",
                                "BRATS", "Abstract")
    files = store.export_annotations(project.project_id)
    assert sorted(files) == ["alice", "bob"]
    assert len(files["alice"].splitlines()) == 1 + 5
    assert len(files["bob"].splitlines()) == 1 + 3


def test_export_includes_header_only_file_for_idle_annotator(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store)
    store.upload_groups(project.project_id, "dora,paper0")
    files = store.export_annotations(project.project_id)
    assert files["dora"] == "pdf_id,label_1,label_2,created_at\n"


def test_export_partitions_the_store(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC", "BRATS"])
    store.record_annotation(project.project_id, "alice", "paper0", "ACDC", "Method")
    store.record_annotation(project.project_id, "bob", "paper0", "ACDC", "Method")
    store.record_annotation(project.project_id, "bob", "paper1", "BRATS", "Abstract")
    files = store.export_annotations(project.project_id)
    rows = []
    for annotator, text in files.items():
        for line in text.splitlines()[1:]:
            rows.append((annotator, line))
    # no row appears under two annotators; the union covers the whole store
    assert len(rows) == len(set(rows)) == 3
    assert len(store.all_annotations(project.project_id)) == 3


def test_export_deterministic_golden(tmp_path):
    store = make_store(tmp_path)
    project = make_project(store, labels1=["ACDC", "BRATS"])
    store.record_annotation(project.project_id, "alice", "paper1", "BRATS",
                            "Table caption")
    store.record_annotation(project.project_id, "alice", "paper0", "ACDC",
                            "Method")
    files = store.export_annotations(project.project_id)
    assert files["alice"] == (
        "pdf_id,label_1,label_2,created_at\n"
        "paper0,ACDC,Method,2024-01-01T00:00:01+00:00\n"
        "paper1,BRATS,Table caption,2024-01-01T00:00:00+00:00\n"
    )


# -- agreement -----------------------------------------------------------------------------


def seeded_project(tmp_path, human_pairs):
    store = make_store(tmp_path)
    datasets = sorted({d for _, d in human_pairs})
    project = make_project(store, labels1=datasets or ["ACDC"])
    for paper, dataset in human_pairs:
        store.record_annotation(project.project_id, "alice", paper, dataset,
                                "Method")
    return store, project


def test_agreement_identical_sets(tmp_path):
    pairs = {(f"paper{i}", "ACDC") for i in range(4)}
    store, project = seeded_project(tmp_path, pairs)
    report = store.compute_agreement(project.project_id, pairs)
    assert report.precision == 1.0
    assert report.recall == 1.0


def test_agreement_counted_fixture(tmp_path):
    human = {(f"paper{i}", "ACDC") for i in range(10)}
    store, project = seeded_project(tmp_path, human)
    detected = {(f"paper{i}", "ACDC") for i in range(8)}  # 8 of 10 found
    detected |= {("paper8", "BRATS"), ("paper9", "BRATS")}  # 2 spurious
    store.add_label(project.project_id, "BRATS")
    report = store.compute_agreement(project.project_id, detected)
    assert report.precision == pytest.approx(0.8)
    assert report.recall == pytest.approx(0.8)
    assert report.per_dataset["ACDC"]["recall"] == pytest.approx(0.8)


def test_agreement_disjoint_pairs_on_shared_papers(tmp_path):
    human = {("paper0", "ACDC"), ("paper1", "ACDC")}
    store, project = seeded_project(tmp_path, human)
    detected = {("paper0", "BRATS"), ("paper1", "BRATS")}
    report = store.compute_agreement(project.project_id, detected)
    assert report.precision == 0.0
    assert report.recall == 0.0


def test_agreement_no_joinable_papers(tmp_path):
    store, project = seeded_project(tmp_path, {("paper0", "ACDC")})
    with pytest.raises(st.NoOverlap):
        store.compute_agreement(project.project_id, {("elsewhere", "ACDC")})


def test_agreement_invariant_to_insertion_order(tmp_path):
    pairs = [("paper0", "ACDC"), ("paper1", "BRATS"), ("paper2", "ACDC")]
    store_a, project_a = seeded_project(tmp_path / "a", pairs)
    store_b, project_b = seeded_project(tmp_path / "b", list(reversed(pairs)))
    detected = {("paper0", "ACDC"), ("paper1", "ACDC")}
    report_a = store_a.compute_agreement(project_a.project_id, detected)
    report_b = store_b.compute_agreement(project_b.project_id, detected)
    assert (report_a.precision, report_a.recall) == \
        (report_b.precision, report_b.recall)


def test_agreement_symmetric_under_dataset_relabeling(tmp_path):
    mapping = {"ACDC": "DS1", "BRATS": "DS2"}
    pairs = [("paper0", "ACDC"), ("paper1", "BRATS")]
    detected = {("paper0", "ACDC"), ("paper1", "ACDC")}
    store_a, project_a = seeded_project(tmp_path / "a", pairs)
    store_b, project_b = seeded_project(
        tmp_path / "b", [(p, mapping[d]) for p, d in pairs])
    report_a = store_a.compute_agreement(project_a.project_id, detected)
    report_b = store_b.compute_agreement(
        project_b.project_id, {(p, mapping[d]) for p, d in detected})
    assert (report_a.precision, report_a.recall) == \
        (report_b.precision, report_b.recall)


def test_agreement_pairs_listing_for_disagreement_view(tmp_path):
    human = {("paper0", "ACDC"), ("paper1", "ACDC")}
    store, project = seeded_project(tmp_path, human)
    detected = {("paper0", "ACDC"), ("paper2", "BRATS")}
    report = store.compute_agreement(project.project_id, detected)
    by_status = {p["status"] for p in report.pairs}
    assert by_status == {"both", "automated_only", "human_only"}


# -- HTTP service ----------------------------------------------------------------------------


@pytest.fixture
def client(tmp_path):
    detections = tmp_path / "detections.csv"
    detections.write_text(
        "paper_id,dataset_id,kind,location,matched_text,span_start,span_end\n"
        "paper0,ACDC,mention,abstract,ACDC,0,4\n"
        "paper1,BRATS,citation_via_doi,reference_list,W1,0,2\n")
    app = create_app(tmp_path / "projects", detections_csv=detections,
                     store=make_store(tmp_path))
    return TestClient(app)


def create_project_via_api(client, name="Study"):
    files = [("files", (f"paper{i}.pdf", PDF, "application/pdf"))
             for i in range(3)]
    response = client.post("/projects", data={
        "name": name,
        "label_set_1": "ACDC;BRATS",
        "label_set_2": ";".join(LOCATIONS),
    }, files=files)
    assert response.status_code == 201, response.text
    return response.json()


def test_service_project_lifecycle(client):
    project = create_project_via_api(client)
    assert project["pdf_ids"] == ["paper0", "paper1", "paper2"]

    listing = client.get("/projects").json()
    assert [p["project_id"] for p in listing] == ["study"]

    response = client.post("/projects/study/labels",
                           json={"value": "PadChest", "label_set": 1})
    assert response.status_code == 200
    assert "PadChest" in response.json()["label_set_1"]

    frozen = client.post("/projects/study/labels",
                         json={"value": "Margin", "label_set": 2})
    assert frozen.status_code == 409
    assert frozen.json()["detail"]["error"] == "FrozenSet"

    groups = client.post(
        "/projects/study/groups",
        files={"file": ("groups.csv", b"alice,paper0\nbob,paper1\n", "text/csv")})
    assert groups.status_code == 200
    assert groups.json()["groups"]["alice"] == ["paper0"]

    pdf = client.get("/projects/study/pdfs/paper0")
    assert pdf.status_code == 200
    assert pdf.content == PDF
    assert pdf.headers["content-type"] == "application/pdf"


def test_service_annotation_round_trip(client):
    create_project_via_api(client)
    payload = {"project_id": "study", "pdf_id": "paper0",
               "label_1": "ACDC", "label_2": "Method"}
    response = client.post("/annotations", json=payload,
                           headers={"X-Annotator": "alice"})
    assert response.status_code == 201

    anonymous = client.post("/annotations", json=payload)
    assert anonymous.status_code == 401

    rows = client.get("/projects/study/annotations",
                      params={"annotator": "alice"}).json()
    assert len(rows) == 1 and rows[0]["label_1"] == "ACDC"

    exported = client.get("/projects/study/export", params={"format": "json"})
    assert list(exported.json()) == ["alice"]

    archive = client.get("/projects/study/export")
    assert archive.headers["content-type"] == "application/zip"
    assert archive.content[:2] == b"PK"

    removed = client.request("DELETE", "/annotations", json=payload,
                             headers={"X-Annotator": "alice"})
    assert removed.json() == {"removed": True}


def test_service_agreement_endpoint(client):
    create_project_via_api(client)
    for pdf_id, label in (("paper0", "ACDC"), ("paper1", "BRATS")):
        client.post("/annotations",
                    json={"project_id": "study", "pdf_id": pdf_id,
                          "label_1": label, "label_2": "Method"},
                    headers={"X-Annotator": "alice"})
    report = client.get("/projects/study/agreement")
    assert report.status_code == 200
    assert report.json()["precision"] == 1.0
    assert report.json()["recall"] == 1.0


def test_service_unknown_label_maps_to_422(client):
    create_project_via_api(client)
    response = client.post("/annotations",
                           json={"project_id": "study", "pdf_id": "paper0",
                                 "label_1": "nope", "label_2": "Method"},
                           headers={"X-Annotator": "alice"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"] == "UnknownLabel"


def test_service_completion_counts(client):
    create_project_via_api(client)
    client.post("/projects/study/groups",
                files={"file": ("g.csv", b"alice,paper0\nalice,paper1\n", "text/csv")})
    client.post("/annotations",
                json={"project_id": "study", "pdf_id": "paper0",
                      "label_1": "ACDC", "label_2": "Method"},
                headers={"X-Annotator": "alice"})
    detail = client.get("/projects/study").json()
    assert detail["completion"]["alice"] == {"assigned": 2, "annotated": 1}
