from .loop import AgentConfig, AgentState, Transcript, TranscriptEntry, collect_dataset, read_transcript_events, run_task, step
from .prompts import GUIDANCE_MARKER, TOOL_OPERATIONS_MARKER, assemble_system_prompt
from .toolbox import CUSTOM_TOOLS, NATIVE_TOOLS, SCHEMAS, StageState, Toolbox, tools_for_mode

__all__ = [
    "AgentConfig",
    "AgentState",
    "CUSTOM_TOOLS",
    "GUIDANCE_MARKER",
    "NATIVE_TOOLS",
    "SCHEMAS",
    "StageState",
    "TOOL_OPERATIONS_MARKER",
    "Toolbox",
    "Transcript",
    "TranscriptEntry",
    "assemble_system_prompt",
    "collect_dataset",
    "read_transcript_events",
    "run_task",
    "step",
    "tools_for_mode",
]
