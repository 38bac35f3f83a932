"""JSON-lines stdio client for auxiliary tagger workers.

The worker contract: one JSON object per line.  The worker announces
{"ready": true} once on startup, then answers each request
{"id": n, "text": ...} with {"id": n, "entities": [...]}, not necessarily in
request order.  Offsets count Unicode code points.  stderr passes through
untouched.
"""

from __future__ import annotations

import itertools
import json
import logging
import queue
import shlex
import subprocess
import threading
import time
from typing import Sequence, Union

logger = logging.getLogger(__name__)


class WorkerError(RuntimeError):
    """The worker crashed, timed out, or broke the protocol."""


class AuxTaggerClient:
    """One worker subprocess plus a reader thread draining its stdout.

    request() is synchronous; responses for other ids (a worker is allowed
    to answer out of order) are parked until their request asks for them.
    """

    def __init__(
        self,
        command: Union[str, Sequence[str]],
        ready_timeout: float = 30.0,
        request_timeout: float = 120.0,
    ):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not argv:
            raise WorkerError("empty worker command")
        self._request_timeout = request_timeout
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=None,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise WorkerError(f"cannot spawn worker {argv[0]!r}: {exc}") from exc
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        self._parked: dict[int, list] = {}
        self._ids = itertools.count(1)
        try:
            message = self._read_message(ready_timeout)
        except WorkerError:
            self.close()
            raise
        if message.get("ready") is not True:
            self.close()
            raise WorkerError(f"worker did not announce readiness: {message!r}")

    def _pump(self) -> None:
        try:
            for line in self._proc.stdout:
                self._lines.put(line)
        except ValueError:
            pass  # stdout closed under us
        finally:
            self._lines.put(None)

    def _read_message(self, timeout: float) -> dict:
        deadline = time.monotonic() + timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise WorkerError("timed out waiting for worker output")
            try:
                line = self._lines.get(timeout=remaining)
            except queue.Empty:
                raise WorkerError("timed out waiting for worker output") from None
            if line is None:
                raise WorkerError("worker closed its output")
            line = line.strip()
            if not line:
                continue
            try:
                message = json.loads(line)
            except json.JSONDecodeError:
                raise WorkerError(f"invalid JSON from worker: {line[:200]!r}") from None
            if not isinstance(message, dict):
                raise WorkerError("worker message is not an object")
            return message

    @property
    def alive(self) -> bool:
        return self._proc.poll() is None

    def request(self, text: str) -> list:
        """Send one text, return the worker's raw entity list."""
        if not self.alive:
            raise WorkerError("worker process has exited")
        request_id = next(self._ids)
        payload = json.dumps({"id": request_id, "text": text}, ensure_ascii=False)
        try:
            self._proc.stdin.write(payload + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise WorkerError(f"cannot write to worker: {exc}") from exc
        while True:
            if request_id in self._parked:
                return self._parked.pop(request_id)
            message = self._read_message(self._request_timeout)
            message_id = message.get("id")
            entities = message.get("entities")
            if not isinstance(entities, list):
                entities = []
            if message_id == request_id:
                return entities
            if isinstance(message_id, int) and not isinstance(message_id, bool):
                self._parked[message_id] = entities
                continue
            # a null id is the worker reporting an unparseable request
            raise WorkerError(f"worker rejected the request: {message!r}")

    def close(self) -> None:
        proc = self._proc
        try:
            if proc.stdin and not proc.stdin.closed:
                proc.stdin.close()
        except OSError:
            pass
        if proc.poll() is None:
            proc.terminate()
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        if self._reader.is_alive():
            self._reader.join(timeout=2)

    def __enter__(self) -> "AuxTaggerClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


class ResilientAuxTagger:
    """Aux channel that restarts a crashed worker a bounded number of times.

    After max_restarts failed revivals the channel stays disabled and every
    request raises, which callers downgrade to "no predictions".
    """

    def __init__(self, command, max_restarts: int = 3, **client_kwargs):
        self._command = command
        self._kwargs = client_kwargs
        self.max_restarts = max_restarts
        self._restarts = 0
        self._disabled = False
        self._client: AuxTaggerClient | None = AuxTaggerClient(command, **client_kwargs)

    @property
    def restarts(self) -> int:
        return self._restarts

    @property
    def disabled(self) -> bool:
        return self._disabled

    def _drop_client(self) -> None:
        if self._client is not None:
            self._client.close()
            self._client = None

    def request(self, text: str) -> list:
        if self._disabled:
            raise WorkerError("aux tagger disabled after repeated failures")
        if self._client is None:
            self._client = AuxTaggerClient(self._command, **self._kwargs)
        try:
            return self._client.request(text)
        except WorkerError as first:
            logger.warning("aux tagger failed (%s); restarting", first)
            self._drop_client()
            while self._restarts < self.max_restarts:
                self._restarts += 1
                try:
                    self._client = AuxTaggerClient(self._command, **self._kwargs)
                    return self._client.request(text)
                except WorkerError as exc:
                    logger.warning("aux tagger restart %d failed: %s", self._restarts, exc)
                    self._drop_client()
            self._disabled = True
            raise WorkerError("aux tagger disabled after repeated failures") from first

    def close(self) -> None:
        self._drop_client()

    def __enter__(self) -> "ResilientAuxTagger":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
