"""Embedded HTTP service exposing the engine to the explorer UI and scripts.

All endpoints are JSON. Request bodies are parsed by hand (not through a
model layer) so the status codes stay exact: 400 for malformed payloads,
404 for unknown dataset ids, 422 for domain validation failures. Response
bodies are produced by the same report builders and serializer as the
CLI, so the two fronts are byte-identical for identical parameters.

The dataset registry is loaded once at startup and read-only afterwards;
handlers share no mutable state.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .errors import DatasetError, DomainError, GreenvalError, UnknownParameterError
from .io import CaseStudyDocument, canonical_json_bytes, case_study_from_dict, case_study_to_dict, emit_report, load_registry
from .reports import (
    build_compare_report,
    build_evaluate_report,
    build_forecast_report,
    build_sweep_report,
)
from .scenario import Overrides
from .sensitivity import ParameterSpec, UncertaintySpec

MAX_INLINE_DATASET_BYTES = 1 << 20  # 1 MiB cap on request payloads


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error_response(status: int, code: str, message: str) -> Response:
    body = canonical_json_bytes({"error": {"code": code, "message": message}})
    return Response(content=body, status_code=status, media_type="application/json")


def _json_response(body: bytes, status: int = 200) -> Response:
    return Response(content=body, status_code=status, media_type="application/json")


async def _read_payload(request: Request) -> dict[str, Any]:
    raw = await request.body()
    if len(raw) > MAX_INLINE_DATASET_BYTES:
        raise ApiError(400, "payload_too_large", f"request body exceeds {MAX_INLINE_DATASET_BYTES} bytes")
    try:
        payload = json.loads(raw.decode("utf-8") or "{}")
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ApiError(400, "malformed_payload", f"request body is not valid JSON: {exc}") from exc
    if not isinstance(payload, Mapping):
        raise ApiError(400, "malformed_payload", "request body must be a JSON object")
    return dict(payload)


def _resolve_dataset(payload: Mapping[str, Any], registry: Mapping[str, CaseStudyDocument]) -> CaseStudyDocument:
    ref = payload.get("dataset")
    if isinstance(ref, str):
        doc = registry.get(ref)
        if doc is None:
            raise ApiError(404, "unknown_dataset", f"unknown dataset id {ref!r}")
        return doc
    if isinstance(ref, Mapping):
        try:
            return case_study_from_dict(ref)
        except DatasetError as exc:
            raise ApiError(422, "invalid_dataset", str(exc)) from exc
    raise ApiError(400, "malformed_payload", "field 'dataset' must be a dataset id or an inline document")


def _number_field(payload: Mapping[str, Any], key: str) -> float | None:
    value = payload.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ApiError(400, "malformed_payload", f"field {key!r} must be a number")
    return float(value)


def _int_field(payload: Mapping[str, Any], key: str, default: int) -> int:
    value = payload.get(key)
    if value is None:
        return default
    if isinstance(value, bool) or not isinstance(value, int):
        raise ApiError(400, "malformed_payload", f"field {key!r} must be an integer")
    return value


def _parse_overrides(payload: Mapping[str, Any]) -> Overrides:
    item_amounts_raw = payload.get("item_amounts", {})
    if not isinstance(item_amounts_raw, Mapping):
        raise ApiError(400, "malformed_payload", "field 'item_amounts' must be an object")
    item_amounts = {}
    for item_id, amount in item_amounts_raw.items():
        if isinstance(amount, bool) or not isinstance(amount, (int, float)):
            raise ApiError(400, "malformed_payload", f"item_amounts[{item_id!r}] must be a number")
        item_amounts[item_id] = float(amount)
    try:
        return Overrides(
            discount_rate=_number_field(payload, "discount_rate"),
            water_volume=_number_field(payload, "water_volume"),
            carbon_price=_number_field(payload, "carbon_price"),
            water_price=_number_field(payload, "water_price"),
            item_amounts=item_amounts,
        )
    except DomainError as exc:
        raise ApiError(422, "invalid_parameters", str(exc)) from exc


def _roi_base(payload: Mapping[str, Any]) -> str:
    roi_base = payload.get("roi_base", "total")
    if roi_base not in ("total", "capex"):
        raise ApiError(422, "invalid_parameters", f"roi_base must be total|capex, got {roi_base!r}")
    return roi_base


def create_app(registry: Mapping[str, CaseStudyDocument] | None = None) -> FastAPI:
    """Build the service around an immutable dataset registry."""
    if registry is None:
        registry = load_registry()

    app = FastAPI(title="greenval", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/case-studies")
    def list_case_studies() -> Response:
        return _json_response(canonical_json_bytes(list(registry.keys())))

    @app.get("/api/case-studies/{dataset_id}")
    def get_case_study(dataset_id: str) -> Response:
        doc = registry.get(dataset_id)
        if doc is None:
            return _error_response(404, "unknown_dataset", f"unknown dataset id {dataset_id!r}")
        return _json_response(canonical_json_bytes(case_study_to_dict(doc)))

    async def _handle(request: Request, build) -> Response:
        try:
            payload = await _read_payload(request)
            doc = _resolve_dataset(payload, registry)
            report = build(payload, doc)
            return _json_response(emit_report(report, "json"))
        except ApiError as exc:
            return _error_response(exc.status, exc.code, exc.message)
        except (DomainError, UnknownParameterError) as exc:
            return _error_response(422, "validation_failure", str(exc))
        except GreenvalError as exc:
            return _error_response(422, "validation_failure", str(exc))

    @app.post("/api/evaluate")
    async def evaluate(request: Request) -> Response:
        def build(payload, doc):
            return build_evaluate_report(doc, _parse_overrides(payload), roi_base=_roi_base(payload))

        return await _handle(request, build)

    @app.post("/api/compare")
    async def compare(request: Request) -> Response:
        def build(payload, doc):
            return build_compare_report(doc, _parse_overrides(payload), roi_base=_roi_base(payload))

        return await _handle(request, build)

    @app.post("/api/sweep")
    async def run_sweep(request: Request) -> Response:
        def build(payload, doc):
            params_raw = payload.get("params")
            if not isinstance(params_raw, list) or not params_raw:
                raise ApiError(400, "malformed_payload", "field 'params' must be a non-empty list")
            specs = []
            for entry in params_raw:
                if not isinstance(entry, Mapping) or "target" not in entry:
                    raise ApiError(400, "malformed_payload", "each param needs a 'target'")
                if "values" in entry:
                    values = entry["values"]
                    if not isinstance(values, list):
                        raise ApiError(400, "malformed_payload", "param 'values' must be a list")
                    specs.append(ParameterSpec(entry["target"], tuple(float(v) for v in values)))
                elif "range" in entry:
                    rng = entry["range"]
                    specs.append(
                        ParameterSpec.from_range(
                            entry["target"], float(rng["low"]), float(rng["high"]), int(rng["steps"])
                        )
                    )
                else:
                    raise ApiError(400, "malformed_payload", "each param needs 'values' or 'range'")
            return build_sweep_report(doc, specs, _parse_overrides(payload), roi_base=_roi_base(payload))

        return await _handle(request, build)

    @app.post("/api/forecast")
    async def forecast(request: Request) -> Response:
        def build(payload, doc):
            distribution = payload.get("distribution", "uniform")
            mode = payload.get("mode", "horizon-dcf")
            uncertainty = UncertaintySpec(
                distribution=distribution,
                samples=_int_field(payload, "samples", 1000),
                seed=_int_field(payload, "seed", 0),
            )
            scenario_id = payload.get("scenario")
            if scenario_id is not None and not isinstance(scenario_id, str):
                raise ApiError(400, "malformed_payload", "field 'scenario' must be a string")
            return build_forecast_report(
                doc,
                scenario_id,
                _parse_overrides(payload),
                horizon=_int_field(payload, "horizon", 30),
                uncertainty=uncertainty,
                mode=mode,
            )

        return await _handle(request, build)

    return app


def run_server(host: str = "127.0.0.1", port: int = 8080) -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)
