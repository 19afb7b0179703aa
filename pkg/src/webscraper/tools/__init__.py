from .browser import Browser, FetchEvent, HttpBrowser, WebDriverBrowser
from .errors import ElementNotFound, ParseSchemaError, SandboxEscapeError, ToolError, ToolFatalError
from .merge import merge_tool
from .parse import HeuristicBackend, ModelParseBackend, ParseOutput, ParseRequest, parse_tool
from .politeness import HostThrottle
from .ruleset import FieldRule, RuleSet, apply_index_ruleset, apply_ruleset, css_path, ruleset_from_dict, ruleset_to_dict
from .sandbox import Sandbox, ShellResult, ShellTimeout

__all__ = [
    "Browser",
    "ElementNotFound",
    "FetchEvent",
    "FieldRule",
    "HeuristicBackend",
    "HostThrottle",
    "HttpBrowser",
    "ModelParseBackend",
    "ParseOutput",
    "ParseRequest",
    "ParseSchemaError",
    "RuleSet",
    "Sandbox",
    "SandboxEscapeError",
    "ShellResult",
    "ShellTimeout",
    "ToolError",
    "ToolFatalError",
    "WebDriverBrowser",
    "apply_index_ruleset",
    "apply_ruleset",
    "css_path",
    "merge_tool",
    "parse_tool",
    "ruleset_from_dict",
    "ruleset_to_dict",
]
