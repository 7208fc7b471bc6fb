"""Turn-based session service for interactive play.

Protocol v1: JSON messages with a ``kind`` field.  Requests are ``create``,
``command``, ``frame_request``, ``log_request``, ``end``; responses are
``created``, ``frame``, ``reveal_result``, ``classify_result``, ``end``, or
``error``.  One command advances the engine exactly one step.  Frames carry
only egocentric information: ray distances and currently visible targets,
never true classes or unrevealed features.

The same message handler backs two transports: an HTTP JSON API and a raw
TCP stream of length-prefixed JSON frames (4-byte big-endian length).
"""

from __future__ import annotations

import functools
import json
import socketserver
import struct
import threading
import uuid

import numpy as np

from .bayes import BayesNet, random_net
from .cardata import bundled_car_csv, ingest_car_eval
from .engine import (ActionDecision, AgentConfig, HorizonExceeded,
                     PressureConfig, Simulator, TEST_CONTINUE, TestDecision)
from .layouts import load_layout
from .metrics import compute_metrics
from .bench import sample_scenario
from .passive import train_net

PROTOCOL_VERSION = 1
RAY_COUNT = 32


class ProtocolError(ValueError):
    pass


@functools.lru_cache(maxsize=1)
def default_net() -> BayesNet:
    return train_net(ingest_car_eval(bundled_car_csv()).train)


def _make_net(spec: dict | None) -> BayesNet:
    if not spec or spec.get("source", "car") == "car":
        return default_net()
    if spec["source"] == "random":
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        return random_net(rng, n_features=int(spec.get("n_features", 4)),
                          arity=int(spec.get("arity", 2)))
    raise ProtocolError(f"unknown net source {spec['source']!r}")


class Session:
    def __init__(self, msg: dict):
        layout = msg.get("layout", "human10x10")
        n_targets = int(msg.get("n_targets", 10))
        seed = int(msg.get("seed", 0))
        self.net = _make_net(msg.get("net"))
        workspace = sample_scenario(layout, n_targets, self.net, seed)
        pressure = PressureConfig(
            horizon=int(msg.get("horizon", 5000)),
            budget=int(msg.get("budget", 60)),
            fog_radius=msg.get("fog_radius"),
        )
        self.sim = Simulator(workspace, self.net, pressure, seed=seed,
                             agent=AgentConfig())
        self.id = uuid.uuid4().hex
        self.ended_reason: str | None = None

    # -- egocentric frame -------------------------------------------------

    def frame(self) -> dict:
        sim = self.sim
        rays = []
        for i in range(RAY_COUNT):
            rel = -3.141592653589793 + i * (2 * 3.141592653589793 / RAY_COUNT)
            rays.append([rel, sim.ray(rel, sim.fov_passive.radius * 2)])
        targets = []
        for tv in sim.view().visible():
            targets.append({
                "id": tv.id, "range": tv.range, "bearing": tv.bearing,
                "in_active": tv.in_active, "in_passive": tv.in_passive,
                "revealed_values": list(tv.revealed_values),
                "classified": tv.classified,
            })
        return {
            "kind": "frame", "v": PROTOCOL_VERSION, "session": self.id,
            "k": sim.k, "horizon": sim.pressure.horizon,
            "budget_left": sim.pressure.budget - sim.J,
            "pose": [sim.pose.x, sim.pose.y, sim.pose.theta],
            "rays": rays, "targets": targets,
            "sensing_radius": sim.fov_passive.radius,
            "active_radius": sim.fov_active.radius,
            "done": sim.done or self.ended_reason is not None,
        }

    def created(self) -> dict:
        ws = self.sim.workspace
        return {
            "kind": "created", "v": PROTOCOL_VERSION, "session": self.id,
            "map": {"bounds": list(ws.bounds),
                    "obstacles": [[list(p) for p in poly]
                                  for poly in ws.obstacles]},
            "features": [{"name": v.name, "values": list(v.values)}
                         for v in self.net.features],
            "classes": self.net.n_classes,
            "frame": self.frame(),
        }

    def end_message(self, reason: str) -> dict:
        self.ended_reason = reason
        m = compute_metrics(self.sim.log)
        return {"kind": "end", "v": PROTOCOL_VERSION, "session": self.id,
                "reason": reason, "metrics": m.to_json_obj()}

    def command(self, msg: dict) -> dict:
        if self.ended_reason is not None:
            return self.end_message(self.ended_reason)
        sim = self.sim
        act = msg.get("action") or {"kind": "stop"}
        try:
            action = ActionDecision(act.get("kind", "stop"),
                                    float(act.get("magnitude", 1.0)))
        except ValueError as exc:
            raise ProtocolError(str(exc)) from None
        test = TestDecision()
        if msg.get("test") is not None:
            test = TestDecision(TEST_CONTINUE, int(msg["test"]["target"]))
        classify = None
        if msg.get("classify") is not None:
            classify = (int(msg["classify"]["target"]),
                        int(msg["classify"]["class"]))
        try:
            sim.step(action, test, classify)
        except HorizonExceeded:
            return self.end_message("horizon")
        except Exception as exc:
            raise ProtocolError(str(exc)) from None
        if test.kind == TEST_CONTINUE:
            tid = test.target_id
            value_index = self.sim.targets[tid].features[
                self.sim.targets[tid].revealed - 1]
            feature = self.net.features[self.sim.targets[tid].revealed - 1]
            response = {
                "kind": "reveal_result", "v": PROTOCOL_VERSION,
                "session": self.id, "target": tid,
                "feature": feature.name,
                "value_index": value_index,
                "value": feature.values[value_index],
                "posterior": [float(p) for p in sim.posterior_for(tid)],
                "frame": self.frame(),
            }
        elif classify is not None:
            response = {
                "kind": "classify_result", "v": PROTOCOL_VERSION,
                "session": self.id, "target": classify[0],
                "assigned": classify[1], "frame": self.frame(),
            }
        else:
            response = self.frame()
        if sim.done:
            response["end"] = self.end_message("horizon")
        elif sim.workspace.targets and sim.all_classified():
            response["end"] = self.end_message("complete")
        return response


class SessionManager:
    """Transport-agnostic protocol handler."""

    def __init__(self):
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _get(self, msg: dict) -> Session:
        sid = msg.get("session")
        session = self.sessions.get(sid)
        if session is None:
            raise ProtocolError(f"unknown session {sid!r}")
        return session

    def handle(self, msg: dict) -> dict:
        try:
            kind = msg.get("kind")
            if kind == "create":
                session = Session(msg)
                with self._lock:
                    self.sessions[session.id] = session
                return session.created()
            if kind == "command":
                return self._get(msg).command(msg)
            if kind == "frame_request":
                return self._get(msg).frame()
            if kind == "log_request":
                return {"kind": "log", "v": PROTOCOL_VERSION,
                        "session": msg.get("session"),
                        "jsonl": self._get(msg).sim.log.to_jsonl()}
            if kind == "end":
                session = self._get(msg)
                out = session.end_message("client")
                with self._lock:
                    self.sessions.pop(session.id, None)
                return out
            raise ProtocolError(f"unknown message kind {kind!r}")
        except ProtocolError as exc:
            return {"kind": "error", "v": PROTOCOL_VERSION,
                    "message": str(exc)}


# -- HTTP transport -------------------------------------------------------


def create_app(manager: SessionManager | None = None):
    from fastapi import FastAPI, Response

    manager = manager or SessionManager()
    app = FastAPI(title="treasurehunt session service")
    app.state.manager = manager

    @app.post("/v1/session")
    def create(body: dict):
        return manager.handle({**body, "kind": "create"})

    @app.post("/v1/session/{sid}/command")
    def command(sid: str, body: dict):
        return manager.handle({**body, "kind": "command", "session": sid})

    @app.get("/v1/session/{sid}/frame")
    def frame(sid: str):
        return manager.handle({"kind": "frame_request", "session": sid})

    @app.get("/v1/session/{sid}/log")
    def log(sid: str):
        out = manager.handle({"kind": "log_request", "session": sid})
        if out["kind"] == "error":
            return out
        return Response(content=out["jsonl"], media_type="application/jsonl")

    @app.delete("/v1/session/{sid}")
    def end(sid: str):
        return manager.handle({"kind": "end", "session": sid})

    return app


# -- raw TCP transport ----------------------------------------------------


def read_message(sock_file) -> dict | None:
    header = sock_file.read(4)
    if len(header) < 4:
        return None
    (length,) = struct.unpack(">I", header)
    if length > 16 * 1024 * 1024:
        raise ProtocolError("message too large")
    payload = sock_file.read(length)
    if len(payload) < length:
        return None
    return json.loads(payload.decode())


def write_message(sock_file, msg: dict) -> None:
    payload = json.dumps(msg, sort_keys=True).encode()
    sock_file.write(struct.pack(">I", len(payload)) + payload)
    sock_file.flush()


class _StreamHandler(socketserver.StreamRequestHandler):
    def handle(self):
        manager = self.server.manager  # type: ignore[attr-defined]
        while True:
            try:
                msg = read_message(self.rfile)
            except (ProtocolError, json.JSONDecodeError) as exc:
                write_message(self.wfile, {"kind": "error", "message": str(exc)})
                return
            if msg is None:
                return
            write_message(self.wfile, manager.handle(msg))


class StreamServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int],
                 manager: SessionManager | None = None):
        super().__init__(address, _StreamHandler)
        self.manager = manager or SessionManager()


def serve(host: str = "127.0.0.1", http_port: int = 8717,
          stream_port: int | None = 8718) -> None:
    """Run the HTTP API (and optionally the TCP stream) until interrupted."""
    import uvicorn

    manager = SessionManager()
    if stream_port is not None:
        server = StreamServer((host, stream_port), manager)
        threading.Thread(target=server.serve_forever, daemon=True).start()
    uvicorn.run(create_app(manager), host=host, port=http_port,
                log_level="warning")
