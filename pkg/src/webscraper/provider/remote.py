"""HTTP model provider."""

from __future__ import annotations

import logging
import os
import time
from typing import Callable, Sequence

import httpx

from .codec import decode_response, encode_request
from .messages import (
    Message,
    ProviderConfig,
    ProviderError,
    ProviderTimeout,
    ProviderTransportError,
    ToolSchema,
    check_conversation,
    validate_tool_uses,
)

logger = logging.getLogger(__name__)

API_KEY_ENV = "WEBSCRAPER_API_KEY"
BACKOFF_S = (1.0, 2.0, 4.0)


class HttpProvider:
    """POSTs the encoded conversation to ``config.endpoint``.

    Transport failures (connection errors, HTTP 429/5xx) are retried up to
    three times with 1 s, 2 s, 4 s backoff. Timeouts and schema errors are
    raised immediately.
    """

    def __init__(
        self,
        api_key: str | None = None,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self._transport = transport
        self._sleep = sleep

    def _headers(self) -> dict[str, str]:
        headers = {"content-type": "application/json"}
        if self.api_key:
            headers["authorization"] = f"Bearer {self.api_key}"
            headers["x-api-key"] = self.api_key
        return headers

    def complete(
        self,
        system_prompt: str,
        conversation: Sequence[Message],
        tools: Sequence[ToolSchema],
        config: ProviderConfig,
    ) -> Message:
        if not config.endpoint:
            raise ProviderError("no provider endpoint configured")
        check_conversation(conversation)
        body = encode_request(system_prompt, conversation, tools, config)
        timeout = config.timeout_ms / 1000.0
        last_exc: Exception | None = None
        with httpx.Client(transport=self._transport, timeout=timeout) as client:
            for attempt in range(len(BACKOFF_S) + 1):
                if attempt:
                    delay = BACKOFF_S[attempt - 1]
                    logger.warning("provider transport error (%s); retry %d in %.0fs", last_exc, attempt, delay)
                    self._sleep(delay)
                try:
                    resp = client.post(config.endpoint, json=body, headers=self._headers())
                except httpx.TimeoutException as exc:
                    raise ProviderTimeout(f"provider timed out after {config.timeout_ms} ms") from exc
                except httpx.TransportError as exc:
                    last_exc = exc
                    continue
                if resp.status_code == 429 or resp.status_code >= 500:
                    last_exc = ProviderTransportError(f"HTTP {resp.status_code}")
                    continue
                if resp.status_code >= 400:
                    raise ProviderError(f"provider rejected request: HTTP {resp.status_code}: {resp.text[:500]}")
                message = decode_response(resp.content)
                validate_tool_uses(message, tools)
                return message
        raise ProviderTransportError(f"provider unreachable after {len(BACKOFF_S)} retries: {last_exc}")
