"""In-memory HTTP service exposing the engine to the companion UI.

One project snapshot with optimistic versioning: every accepted mutation
bumps the version by one, and a stale If-Match header yields 409 so
concurrent editors never silently overwrite each other. Analyses read a
consistent snapshot and are side-effect free. State is deliberately lost on
restart.
"""

from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__, reports
from .errors import (InconsistentBackground, ParseError, ReqPlanError,
                     ValidationError)
from .model import (EvaluationMatrix, PreferenceSet, ProjectModel,
                    validate_project)
from .project_io import (ProjectDocument, _parse_config,
                         _parse_preference_constraint, document_to_json,
                         parse_document)

ANALYSIS_TIMEOUT_S = 30.0

_ANALYSES = ("prioritize", "complete", "mvp", "consensus", "plan",
             "conflicts", "diagnose", "assign")


@dataclass
class ProjectSnapshot:
    document: ProjectDocument
    version: int


class ProjectStore:
    """Single-writer snapshot holder; readers grab a consistent snapshot."""

    def __init__(self):
        self._lock = threading.Lock()
        self._snapshot: Optional[ProjectSnapshot] = None

    def current(self) -> Optional[ProjectSnapshot]:
        with self._lock:
            return self._snapshot

    def replace(self, document: ProjectDocument, if_match: Optional[int]) -> int:
        with self._lock:
            current = self._snapshot.version if self._snapshot else 0
            if if_match is not None and if_match != current:
                raise _Conflict(current)
            version = current + 1
            self._snapshot = ProjectSnapshot(document=document, version=version)
            return version

    def mutate(self, fn, if_match: Optional[int]) -> int:
        with self._lock:
            if self._snapshot is None:
                raise _NoProject()
            if if_match is not None and if_match != self._snapshot.version:
                raise _Conflict(self._snapshot.version)
            document = fn(self._snapshot.document)
            issues = validate_project(document.project)
            if issues:
                raise ValidationError(issues)
            version = self._snapshot.version + 1
            self._snapshot = ProjectSnapshot(document=document, version=version)
            return version


class _Conflict(Exception):
    def __init__(self, version):
        self.version = version


class _NoProject(Exception):
    pass


def create_app(preload: Optional[ProjectDocument] = None) -> FastAPI:
    app = FastAPI(title="reqplan", version=__version__)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store = ProjectStore()
    if preload is not None:
        store.replace(preload, if_match=None)
    executor = ThreadPoolExecutor(max_workers=4)

    async def read_json(request: Request, required=True):
        body = await request.body()
        if not body:
            if required:
                raise ParseError("request body is required")
            return {}
        try:
            return json.loads(body)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON body: {exc.msg}")

    def if_match_of(request: Request) -> Optional[int]:
        raw = request.headers.get("if-match")
        if raw is None:
            return None
        try:
            return int(raw.strip().strip('"'))
        except ValueError:
            raise ParseError(f"If-Match must be an integer version, got {raw!r}")

    @app.exception_handler(ParseError)
    async def on_parse_error(request, exc):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ValidationError)
    async def on_validation_error(request, exc):
        issues = [{"entity": i.entity, "rule": i.rule, "message": i.message}
                  for i in exc.issues]
        return JSONResponse(status_code=422, content={"error": "validation failed",
                                                      "issues": issues})

    @app.exception_handler(_Conflict)
    async def on_conflict(request, exc):
        return JSONResponse(status_code=409,
                            content={"error": "version conflict",
                                     "current_version": exc.version})

    @app.exception_handler(_NoProject)
    async def on_no_project(request, exc):
        return JSONResponse(status_code=404, content={"error": "no project loaded"})

    @app.exception_handler(ReqPlanError)
    async def on_domain_error(request, exc):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.put("/project")
    async def put_project(request: Request):
        raw = await read_json(request)
        document = parse_document(raw, source="request body")
        issues = validate_project(document.project)
        if issues:
            raise ValidationError(issues)
        version = store.replace(document, if_match_of(request))
        return {"version": version}

    @app.get("/project")
    async def get_project():
        snapshot = store.current()
        if snapshot is None:
            raise _NoProject()
        return {"project": document_to_json(snapshot.document),
                "version": snapshot.version}

    @app.patch("/project/preferences")
    async def patch_preferences(request: Request):
        body = await read_json(request)
        if not isinstance(body, dict):
            raise ParseError("expected a JSON object")
        known = {"stakeholder", "assignments", "constraints", "evaluation"}
        unknown = set(body) - known
        if unknown:
            raise ParseError(f"unknown keys {sorted(unknown)}")
        version = store.mutate(lambda doc: _apply_patch(doc, body),
                               if_match_of(request))
        return {"version": version}

    def analysis_for(name: str, snapshot: ProjectSnapshot, body: dict):
        doc = snapshot.document
        overrides = body.get("config")
        if overrides is not None:
            merged = _merge_config(document_to_json(doc)["config"], overrides)
            doc = ProjectDocument(project=doc.project, mvp_maxtime=doc.mvp_maxtime,
                                  config=_parse_config(merged, "request config"))
        exclude = body.get("exclude", [])
        if name == "prioritize":
            return reports.prioritize_payload(doc)
        if name == "complete":
            return reports.complete_payload(doc, body.get("dimension"),
                                            seed=body.get("seed"))
        if name == "mvp":
            return reports.mvp_payload(doc)
        if name == "consensus":
            return reports.consensus_payload(doc)
        if name == "plan":
            return reports.plan_payload(doc, exclude=exclude)
        if name == "conflicts":
            return reports.conflicts_payload(doc, exclude=exclude,
                                             background=body.get("background", True))
        if name == "diagnose":
            return reports.diagnose_payload(doc, exclude=exclude)
        if name == "assign":
            return reports.assign_payload(doc, top_k=body.get("top", 3))
        raise _NoProject()  # unreachable; routes are enumerated below

    @app.post("/analyze/{name}")
    async def analyze(name: str, request: Request):
        if name not in _ANALYSES:
            return JSONResponse(status_code=404,
                                content={"error": f"unknown analysis {name!r}"})
        body = await read_json(request, required=False)
        if not isinstance(body, dict):
            raise ParseError("expected a JSON object")
        snapshot = store.current()
        if snapshot is None:
            raise _NoProject()
        started = time.perf_counter()
        future = executor.submit(analysis_for, name, snapshot, body)
        try:
            result = future.result(timeout=ANALYSIS_TIMEOUT_S)
        except FutureTimeout:
            return JSONResponse(status_code=504,
                                content={"error": "analysis timed out"})
        except InconsistentBackground as exc:
            return JSONResponse(status_code=422, content={"error": str(exc)})
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {"result": result, "engine_version": __version__,
                "project_version": snapshot.version, "elapsed_ms": elapsed_ms}

    return app


def _apply_patch(doc: ProjectDocument, body: dict) -> ProjectDocument:
    """One preference or evaluation upsert; returns a new document."""
    project = doc.project
    if "evaluation" in body:
        cell = body["evaluation"]
        if not isinstance(cell, dict):
            raise ParseError("evaluation must be an object")
        missing = {"stakeholder", "requirement", "dimension", "rating"} - set(cell)
        if missing:
            raise ParseError(f"evaluation is missing {sorted(missing)}")
        rating = cell["rating"]
        if isinstance(rating, bool) or not isinstance(rating, (int, float)):
            raise ParseError(f"rating must be a number, got {rating!r}")
        entries = dict(project.evaluations.entries)
        entries[(cell["stakeholder"], cell["requirement"],
                 cell["dimension"])] = float(rating)
        project = _with(project, evaluations=EvaluationMatrix(entries=entries))
        return ProjectDocument(project=project, mvp_maxtime=doc.mvp_maxtime,
                               config=doc.config)

    sid = body.get("stakeholder")
    if not isinstance(sid, str):
        raise ParseError("stakeholder id is required")
    prefs = project.preferences
    if "assignments" in body:
        wishes = body["assignments"]
        if not isinstance(wishes, dict):
            raise ParseError("assignments must map requirement ids to releases")
        for rid, rel in wishes.items():
            if isinstance(rel, bool) or not isinstance(rel, int):
                raise ParseError(f"release for {rid!r} must be an integer")
        assignments = {s: dict(r) for s, r in prefs.assignments.items()}
        assignments.setdefault(sid, {}).update(wishes)
        prefs = PreferenceSet(assignments=assignments, constraints=prefs.constraints)
    elif "constraints" in body:
        raw = body["constraints"]
        if not isinstance(raw, list):
            raise ParseError("constraints must be a list")
        incoming = tuple(
            _parse_preference_constraint({"stakeholder": sid, **item},
                                         f"constraints[{i}]")
            for i, item in enumerate(raw))
        touched = {(c.owner, c.req_a) for c in incoming}
        kept = tuple(c for c in prefs.constraints
                     if (c.owner, c.req_a) not in touched)
        prefs = PreferenceSet(assignments=prefs.assignments,
                              constraints=kept + incoming)
    else:
        raise ParseError("nothing to patch: provide assignments, constraints "
                         "or evaluation")
    project = _with(project, preferences=prefs)
    return ProjectDocument(project=project, mvp_maxtime=doc.mvp_maxtime,
                           config=doc.config)


def _with(project: ProjectModel, **changes) -> ProjectModel:
    fields = {
        "requirements": project.requirements,
        "stakeholders": project.stakeholders,
        "dimensions": project.dimensions,
        "evaluations": project.evaluations,
        "horizon": project.horizon,
        "hard_constraints": project.hard_constraints,
        "preferences": project.preferences,
    }
    fields.update(changes)
    return ProjectModel(**fields)


def _merge_config(base: dict, override) -> dict:
    if not isinstance(override, dict):
        raise ParseError("config override must be an object")
    merged = {k: dict(v) for k, v in base.items()}
    for section, values in override.items():
        if not isinstance(values, dict):
            raise ParseError(f"config.{section} must be an object")
        merged.setdefault(section, {}).update(values)
    return merged
