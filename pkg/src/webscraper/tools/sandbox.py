"""Shell and file-editor tools confined to a sandbox directory."""

from __future__ import annotations

import os
import signal
import subprocess
import threading
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from .errors import SandboxEscapeError, ToolError

OUTPUT_CAP = 64 * 1024


@dataclass(frozen=True)
class ShellResult:
    stdout: str
    stderr: str
    exit_code: int
    truncated: bool = False


class ShellTimeout(ToolError):
    def __init__(self, message: str, partial_stdout: str = "", partial_stderr: str = ""):
        super().__init__(message)
        self.partial_stdout = partial_stdout
        self.partial_stderr = partial_stderr


def _cap(data: bytes | None, cap: int) -> tuple[str, bool]:
    data = data or b""
    if len(data) <= cap:
        return data.decode("utf-8", errors="replace"), False
    kept = data[:cap].decode("utf-8", errors="replace")
    return f"{kept}\n[... truncated {len(data) - cap} bytes]", True


class Sandbox:
    """A working directory the agent's shell and editor cannot leave."""

    def __init__(self, root: str | os.PathLike, output_cap: int = OUTPUT_CAP):
        self.root = Path(root).resolve()
        self.root.mkdir(parents=True, exist_ok=True)
        self.output_cap = output_cap
        self._locks: dict[Path, threading.Lock] = defaultdict(threading.Lock)
        self._locks_guard = threading.Lock()

    def resolve(self, path: str | os.PathLike) -> Path:
        if not str(path):
            raise ToolError("empty path")
        target = (self.root / path).resolve()
        if target != self.root and self.root not in target.parents:
            raise SandboxEscapeError(f"path {str(path)!r} escapes the sandbox root")
        return target

    def _lock(self, path: Path) -> threading.Lock:
        with self._locks_guard:
            return self._locks[path]

    # -- shell ---------------------------------------------------------------

    def shell_exec(self, command: str, timeout_ms: int = 30_000) -> ShellResult:
        """Run ``command`` through ``/bin/sh`` inside the sandbox.

        A non-zero exit status is a normal result. Output beyond the byte cap
        is cut and marked.
        """
        if not command or not command.strip():
            raise ToolError("empty command")
        proc = subprocess.Popen(
            command,
            shell=True,
            cwd=self.root,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            stdin=subprocess.DEVNULL,
            start_new_session=True,
        )
        try:
            out, err = proc.communicate(timeout=timeout_ms / 1000.0)
        except subprocess.TimeoutExpired:
            try:
                os.killpg(proc.pid, signal.SIGKILL)
            except ProcessLookupError:
                pass
            out, err = proc.communicate()
            stdout, _ = _cap(out, self.output_cap)
            stderr, _ = _cap(err, self.output_cap)
            raise ShellTimeout(f"command timed out after {timeout_ms} ms (partial output kept)", stdout, stderr)
        stdout, t1 = _cap(out, self.output_cap)
        stderr, t2 = _cap(err, self.output_cap)
        return ShellResult(stdout, stderr, proc.returncode, t1 or t2)

    # -- editor --------------------------------------------------------------

    def file_write(self, path: str, content: str) -> None:
        target = self.resolve(path)
        with self._lock(target):
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(content, encoding="utf-8")

    def file_read(self, path: str) -> str:
        target = self.resolve(path)
        if not target.is_file():
            raise ToolError(f"no such file: {path}")
        return target.read_text(encoding="utf-8")

    def file_str_replace(self, path: str, old: str, new: str) -> None:
        target = self.resolve(path)
        with self._lock(target):
            if not target.is_file():
                raise ToolError(f"no such file: {path}")
            text = target.read_text(encoding="utf-8")
            count = text.count(old) if old else 0
            if count != 1:
                raise ToolError(f"str_replace needs exactly one match, found {count} matches")
            target.write_text(text.replace(old, new, 1), encoding="utf-8")
