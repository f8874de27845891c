"""HTTP surface: REST endpoints plus the /rt realtime channel.

All business logic lives in the services; handlers translate between HTTP
and the Platform facade and map domain errors to status codes.
"""

from __future__ import annotations

import asyncio
import os
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import errors
from .catalog import competence_from_dict
from .monitor import EventSignature
from .platform import Platform
from .spaces import Layout

_STATUS: list[tuple[type, int]] = [
    (errors.NameTaken, 409),
    (errors.NonMonotonicTimestamp, 409),
    (errors.StaleRecommendation, 409),
    (errors.NotAMember, 403),
    (errors.LastMember, 409),
    (errors.InvalidName, 400),
    (errors.EmptyMessage, 400),
    (errors.UnknownStrategy, 404),
    (errors.UnknownEntity, 404),
    (errors.UnknownWidget, 404),
    (errors.UnknownTechnique, 404),
    (errors.UnknownLearner, 404),
    (errors.UnknownSpace, 404),
    (errors.UnknownActivity, 404),
    (errors.UnknownInstance, 404),
    (errors.UnknownCatalogReference, 422),
    (errors.CorpusUnavailable, 503),
    (errors.SrlSpaceError, 400),
]


def _status_for(exc: Exception) -> int:
    for klass, code in _STATUS:
        if isinstance(exc, klass):
            return code
    return 500


class LoginBody(BaseModel):
    learner: str


class SpaceBody(BaseModel):
    name: str


class WidgetBody(BaseModel):
    widget_id: str
    activity: str = "Start"


class BundleBody(BaseModel):
    bundle_id: str
    activity: str = "Start"


class LayoutBody(BaseModel):
    x: int
    y: int
    width: int
    height: int


class CompetenceBody(BaseModel):
    kind: str
    concept: str | None = None
    context: str | None = None
    tool: str | None = None
    technique: str | None = None
    strategy: str | None = None
    level: int | None = None


class ApplicationBody(BaseModel):
    technique: str
    ts: int | None = None


class StoreBody(BaseModel):
    key: str
    value: object = None


class OutcomeBody(BaseModel):
    learner: str
    item_id: str
    outcome: str


class ActivityRequestBody(BaseModel):
    learner: str


class SignatureBody(BaseModel):
    verb: str
    object_type: str = ""
    widget: str | None = None


class AssignBody(SignatureBody):
    technique: str


class ParameterBody(BaseModel):
    key: str
    value: str


def create_app(platform: Platform | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    platform = platform if platform is not None else Platform()
    app = FastAPI(title="srlspace", version="0.1.0")
    app.state.platform = platform

    @app.exception_handler(errors.SrlSpaceError)
    async def _domain_error(request: Request, exc: errors.SrlSpaceError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=_status_for(exc), content={"error": str(exc)})

    def actor(request: Request) -> str:
        auth = request.headers.get("authorization", "")
        token = auth.removeprefix("Bearer ").strip() if auth.startswith("Bearer ") else None
        learner = platform.actor_for(token)
        if learner is None:
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")
        return learner

    # -- auth --------------------------------------------------------------

    @app.post("/api/login")
    def login(body: LoginBody):
        return {"learner": body.learner, "token": platform.login(body.learner)}

    # -- catalog (read-only) -------------------------------------------------

    @app.get("/api/catalog")
    def catalog_summary():
        return {"catalog_version": platform.catalog.version, "counts": platform.catalog.counts()}

    @app.get("/api/catalog/phases")
    def catalog_phases():
        return {"phases": list(platform.catalog.phases)}

    @app.get("/api/catalog/strategies")
    def catalog_strategies():
        return {
            "strategies": [
                {"id": s.id, "name": s.name, "group": s.group, "phase": s.phase}
                for s in platform.catalog.ordered_strategies()
            ]
        }

    @app.get("/api/catalog/strategies/{strategy_id}/techniques")
    def catalog_strategy_techniques(strategy_id: str):
        techniques = platform.catalog.techniques_for(strategy_id)
        return {"techniques": [{"id": t.id, "name": t.name, "strategy": t.strategy} for t in techniques]}

    @app.get("/api/catalog/techniques")
    def catalog_techniques():
        return {
            "techniques": [
                {"id": t.id, "name": t.name, "strategy": t.strategy}
                for t in sorted(platform.catalog.techniques.values(), key=lambda t: t.id)
            ]
        }

    @app.get("/api/catalog/categories")
    def catalog_categories():
        return {
            "categories": [
                {"id": c.id, "phases": sorted(c.phases)}
                for c in sorted(platform.catalog.categories.values(), key=lambda c: c.id)
            ]
        }

    def _widget_doc(w) -> dict:
        return {
            "id": w.id,
            "title": w.title,
            "description": w.description,
            "launch_url": w.launch_url,
            "techniques": sorted(w.techniques),
            "categories": sorted(w.categories),
            "srl": w.srl_flag,
            "add_count": w.add_count,
        }

    @app.get("/api/catalog/widgets")
    def catalog_widgets(q: str = "", category: str | None = None):
        return {"widgets": [_widget_doc(w) for w in platform.catalog.search_widgets(q, category)]}

    @app.get("/api/catalog/widgets/{widget_id}")
    def catalog_widget(widget_id: str):
        w = platform.catalog.widgets.get(widget_id)
        if w is None:
            raise errors.UnknownWidget(f"unknown widget {widget_id!r}")
        return _widget_doc(w)

    @app.get("/api/catalog/bundles")
    def catalog_bundles():
        return {
            "bundles": [
                {"id": b.id, "title": b.title, "widgets": list(b.widgets)}
                for b in sorted(platform.catalog.bundles.values(), key=lambda b: b.id)
            ]
        }

    @app.get("/api/catalog/templates")
    def catalog_templates():
        return {
            "templates": [
                {"id": t.id, "title": t.title, "entities": list(t.entities)}
                for t in sorted(platform.catalog.templates.values(), key=lambda t: t.id)
            ]
        }

    @app.get("/api/widgets/{widget_id}/paradata")
    def widget_paradata(widget_id: str):
        w = platform.catalog.widgets.get(widget_id)
        if w is None:
            raise errors.UnknownWidget(f"unknown widget {widget_id!r}")
        return {"widget": widget_id, "add_count": w.add_count}

    # -- spaces ------------------------------------------------------------------

    @app.get("/api/spaces")
    def list_spaces():
        return {"spaces": platform.spaces.space_names()}

    @app.post("/api/spaces", status_code=201)
    def create_space(body: SpaceBody, learner: str = Depends(actor)):
        space = platform.spaces.create_space(body.name, learner)
        return platform.spaces.snapshot(space)

    @app.get("/api/spaces/{name}")
    def load_space(name: str, learner: str = Depends(actor)):
        return platform.spaces.load_space(name, learner)

    @app.get("/api/spaces/{name}/url")
    def space_url(name: str):
        return {"url": platform.spaces.share_url(name)}

    @app.post("/api/spaces/{name}/members")
    def join_space(name: str, learner: str = Depends(actor)):
        space = platform.spaces.join_space(name, learner)
        return platform.spaces.snapshot(space)

    @app.delete("/api/spaces/{name}/members")
    def leave_space(name: str, learner: str = Depends(actor)):
        space = platform.spaces.leave_space(name, learner)
        return platform.spaces.snapshot(space)

    @app.post("/api/spaces/{name}/widgets", status_code=201)
    def add_widget(name: str, body: WidgetBody, learner: str = Depends(actor)):
        inst = platform.spaces.add_widget(name, body.activity, body.widget_id, learner)
        return inst.to_dict()

    @app.post("/api/spaces/{name}/bundles", status_code=201)
    def add_bundle(name: str, body: BundleBody, learner: str = Depends(actor)):
        instances = platform.add_bundle(name, body.bundle_id, learner, body.activity)
        return {"instances": [inst.to_dict() for inst in instances]}

    @app.delete("/api/spaces/{name}/widgets/{instance_id}")
    def remove_widget(name: str, instance_id: str, learner: str = Depends(actor)):
        platform.spaces.remove_widget(name, instance_id, learner)
        return {"removed": instance_id}

    @app.post("/api/spaces/{name}/widgets/{instance_id}/load")
    def widget_loaded(name: str, instance_id: str, learner: str = Depends(actor)):
        platform.spaces.record_widget_load(name, instance_id, learner)
        return {"ok": True}

    @app.patch("/api/spaces/{name}/widgets/{instance_id}/layout")
    def set_layout(name: str, instance_id: str, body: LayoutBody, learner: str = Depends(actor)):
        layout = Layout(body.x, body.y, body.width, body.height)
        platform.spaces.set_layout(name, instance_id, layout, learner)
        return {"instance_id": instance_id, "layout": layout.to_dict()}

    @app.post("/api/spaces/{name}/store")
    def set_shared(name: str, body: StoreBody, learner: str = Depends(actor)):
        platform.spaces.set_shared(name, body.key, body.value, learner)
        return {"key": body.key}

    @app.get("/api/spaces/{name}/chat")
    def chat_history(name: str, limit: int | None = None):
        platform.spaces.get_space(name)
        return {"messages": [m.to_dict() for m in platform.hub.chat_history(name, limit)]}

    @app.get("/api/spaces/{name}/lint")
    def lint(name: str, learner: str | None = None):
        return {"findings": [f.to_dict() for f in platform.lint(name, learner)]}

    # -- learners -------------------------------------------------------------------

    @app.get("/api/learners/{learner_id}")
    def learner_record(learner_id: str):
        return platform.learners.feed(learner_id)

    @app.get("/api/learners/{learner_id}/feed")
    def learner_feed(learner_id: str):
        return platform.learners.feed(learner_id)

    def _require_self(learner_id: str, learner: str) -> None:
        if learner != learner_id:
            raise HTTPException(status_code=403, detail="learners may only write their own record")

    @app.post("/api/learners/{learner_id}/competences")
    def set_acquired(learner_id: str, body: CompetenceBody, learner: str = Depends(actor)):
        _require_self(learner_id, learner)
        competence = competence_from_dict(body.model_dump(exclude_none=True))
        platform.learners.set_competence(learner_id, competence, "acquired")
        return platform.learners.feed(learner_id)

    @app.post("/api/learners/{learner_id}/goals")
    def set_goal(learner_id: str, body: CompetenceBody, learner: str = Depends(actor)):
        _require_self(learner_id, learner)
        competence = competence_from_dict(body.model_dump(exclude_none=True))
        platform.learners.set_competence(learner_id, competence, "goal")
        return platform.learners.feed(learner_id)

    @app.post("/api/learners/{learner_id}/events")
    def record_application(learner_id: str, body: ApplicationBody, learner: str = Depends(actor)):
        _require_self(learner_id, learner)
        platform.learners.record_application(learner_id, body.technique, body.ts)
        return {"ok": True}

    @app.post("/api/learners/{learner_id}/parameters")
    def set_parameter(learner_id: str, body: ParameterBody, learner: str = Depends(actor)):
        _require_self(learner_id, learner)
        platform.learners.set_parameter(learner_id, body.key, body.value)
        return {"ok": True}

    # -- recommenders ------------------------------------------------------------------

    @app.get("/api/recommend/widgets")
    def rec_widgets(entity: str, learner: str | None = None):
        return {"recommendations": [r.to_dict() for r in platform.recommend_widgets(entity, learner)]}

    @app.post("/api/recommend/widgets/accept")
    def rec_widget_accept(body: WidgetBody, space: str, learner: str = Depends(actor)):
        inst = platform.accept_widget_recommendation(space, body.widget_id, learner, body.activity)
        return inst.to_dict()

    @app.post("/api/recommend/activity")
    def rec_activity(body: ActivityRequestBody):
        rec = platform.next_activity(body.learner)
        return {"recommendation": rec.to_dict(), "state": platform.scheduler_state(body.learner).to_dict()}

    @app.post("/api/recommend/activity/outcome")
    def rec_activity_outcome(body: OutcomeBody):
        return platform.activity_outcome(body.learner, body.item_id, body.outcome)

    @app.get("/api/recommend/content")
    def rec_content(learner: str):
        return {"recommendations": [r.to_dict() for r in platform.recommend_content(learner)]}

    # -- monitor ------------------------------------------------------------------------

    @app.get("/api/monitor/{learner_id}/clusters")
    def monitor_clusters(learner_id: str):
        return {
            "clusters": [
                {"signature": sig.to_dict(), "occurrences": n}
                for sig, n in platform.learner_clusters(learner_id)
            ]
        }

    @app.post("/api/monitor/{learner_id}/suggest")
    def monitor_suggest(learner_id: str, body: SignatureBody):
        sig = EventSignature(body.verb, body.object_type, body.widget)
        return {"technique": platform.suggest_technique(learner_id, sig)}

    @app.post("/api/monitor/{learner_id}/assign")
    def monitor_assign(learner_id: str, body: AssignBody, learner: str = Depends(actor)):
        _require_self(learner_id, learner)
        sig = EventSignature(body.verb, body.object_type, body.widget)
        platform.assign_technique(learner_id, sig, body.technique)
        return {"ok": True}

    @app.get("/api/monitor/{learner_id}/profile")
    def monitor_profile(learner_id: str):
        return platform.learner_profile(learner_id).to_dict()

    # -- realtime channel ------------------------------------------------------------------

    @app.websocket("/rt")
    async def rt(ws: WebSocket):
        token = ws.query_params.get("token")
        space = ws.query_params.get("space")
        learner = platform.actor_for(token)
        if learner is None:
            await ws.close(code=4401)
            return
        try:
            conn = platform.hub.connect(learner, space or "")
        except errors.NotAMember:
            await ws.close(code=4403)
            return
        except errors.UnknownSpace:
            await ws.close(code=4404)
            return
        await ws.accept()
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()
        for frame in conn.drain():
            queue.put_nowait(frame)
        conn.listener = lambda frame: loop.call_soon_threadsafe(queue.put_nowait, frame)

        async def sender():
            while True:
                frame = await queue.get()
                await ws.send_json(frame)

        send_task = asyncio.create_task(sender())
        try:
            while True:
                msg = await ws.receive_json()
                kind = msg.get("kind")
                try:
                    if kind == "sub":
                        platform.hub.subscribe(conn.id, msg.get("topic", ""), bool(msg.get("receive_own")))
                    elif kind == "unsub":
                        platform.hub.unsubscribe(conn.id, msg.get("topic", ""))
                    elif kind == "pub":
                        platform.hub.publish(
                            conn.id, msg.get("topic", ""), msg.get("payload") or {}, msg.get("widget")
                        )
                    elif kind == "chat":
                        platform.hub.chat_post(conn.id, msg.get("text", ""))
                    elif kind == "history":
                        queue.put_nowait(
                            {
                                "kind": "history",
                                "space": conn.space,
                                "messages": [
                                    m.to_dict()
                                    for m in platform.hub.chat_history(conn.space, msg.get("limit"))
                                ],
                            }
                        )
                    else:
                        queue.put_nowait({"kind": "error", "message": f"unknown frame kind {kind!r}"})
                except (errors.SrlSpaceError, ValueError) as exc:
                    queue.put_nowait({"kind": "error", "message": str(exc)})
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            platform.hub.disconnect(conn.id)

    # -- optional static frontend -------------------------------------------------------------

    ui_dir = ui_dir or os.environ.get("SRLSPACE_UI")
    if ui_dir and Path(ui_dir).is_dir():
        ui_path = Path(ui_dir)

        @app.get("/spaces/{name}")
        def space_page(name: str):
            return FileResponse(ui_path / "index.html")

        app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")
    else:

        @app.get("/spaces/{name}", response_class=PlainTextResponse)
        def space_page_fallback(name: str):
            platform.spaces.get_space(name)
            return f"space {name}: use the API or start the server with a frontend build"

    return app
