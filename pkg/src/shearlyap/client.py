"""Client for the compute service, local or over HTTP.

Without a server URL, requests dispatch straight to the service
operations in process (same models, no sockets, no fastapi import);
with one, they travel as JSON over HTTP and error payloads are
translated back into the package's exception types.  The CLI is a thin
shell over this class.
"""

from __future__ import annotations

from typing import Any

from . import errors
from .service import models as m

__all__ = ["ServiceClient"]

_TIMEOUT = 600.0


class ServiceClient:
    def __init__(self, base_url: str | None = None, http_client: Any | None = None):
        """In-process dispatch when ``base_url`` is None; HTTP otherwise.

        ``http_client`` lets tests inject an httpx.Client bound to an
        in-memory ASGI transport.
        """
        self._base = base_url.rstrip("/") if base_url else None
        self._http = http_client
        if self._base is not None and self._http is None:
            import httpx

            self._http = httpx.Client(base_url=self._base, timeout=_TIMEOUT)

    # ------------------------------------------------------------ plumbing

    def _raise_from_payload(self, status: int, payload: dict) -> None:
        name = payload.get("error", "")
        detail = payload.get("detail", str(payload))
        exc_type = getattr(errors, name, None)
        if isinstance(exc_type, type) and issubclass(exc_type, errors.ShearLyapError):
            raise exc_type(detail)
        if status in (400, 422):
            raise errors.InvalidInput(f"{status}: {detail}")
        raise errors.ShearLyapError(f"service error {status}: {detail}")

    def _call(self, method: str, path: str, local, response_model, body=None, params=None):
        if self._http is None:
            return local()
        if method == "GET":
            resp = self._http.get(path, params=params)
        else:
            resp = self._http.post(path, json=body.model_dump() if body else None)
        if resp.status_code != 200:
            try:
                payload = resp.json()
            except ValueError:
                payload = {"detail": resp.text}
            # fastapi validation errors carry a list under "detail"
            if isinstance(payload.get("detail"), list):
                raise errors.InvalidInput(str(payload["detail"]))
            self._raise_from_payload(resp.status_code, payload)
        return response_model.model_validate(resp.json())

    # ------------------------------------------------------------ endpoints

    def c0(self, tol: float = 1e-10) -> m.C0Response:
        from .service import ops

        return self._call(
            "GET", "/c0", lambda: ops.op_c0(tol), m.C0Response, params={"tol": tol}
        )

    def lyapunov(self, req: m.LyapunovRequest) -> m.LyapunovResponse:
        from .service import ops

        return self._call(
            "POST", "/lyapunov", lambda: ops.op_lyapunov(req), m.LyapunovResponse, body=req
        )

    def bifurcation(self, req: m.BifurcationRequest) -> m.BifurcationResponse:
        from .service import ops

        return self._call(
            "POST", "/bifurcation", lambda: ops.op_bifurcation(req),
            m.BifurcationResponse, body=req,
        )

    def sweep(self, req: m.SweepRequest) -> m.SweepResponse:
        from .service import ops

        return self._call("POST", "/sweep", lambda: ops.op_sweep(req), m.SweepResponse, body=req)

    def simulate(self, req: m.SimulateRequest) -> m.SimulateResponse:
        from .service import ops

        return self._call(
            "POST", "/simulate", lambda: ops.op_simulate(req), m.SimulateResponse, body=req
        )

    def fp(self, req: m.FpRequest) -> m.FpResponse:
        from .service import ops

        return self._call("POST", "/fp", lambda: ops.op_fp(req), m.FpResponse, body=req)

    def attractor(self, req: m.AttractorRequest) -> m.AttractorResponse:
        from .service import ops

        return self._call(
            "POST", "/attractor", lambda: ops.op_attractor(req), m.AttractorResponse, body=req
        )
