"""Role cards, prompt rendering, and agent backends."""

from .backends import (
    Backend,
    BackendConfig,
    BackendError,
    CassetteMissError,
    LiveBackend,
    LiveBackendError,
    ReplayBackend,
    ScriptedBackend,
    ScriptExhaustedError,
    complete,
    create_backend,
)
from .prompts import (
    ANSWER_PATTERNS,
    PromptContractError,
    TASK_INSTRUCTIONS,
    VULNERABILITY_CHECKLIST,
    instruction_for_goal,
    pattern_for_goal,
    render_prompt,
    truncate_middle,
)
from .roles import QA_CHECKER_PROMPT, ROLE_NAMES, Message, RoleCard, default_role_cards

__all__ = [
    "ANSWER_PATTERNS",
    "Backend",
    "BackendConfig",
    "BackendError",
    "CassetteMissError",
    "LiveBackend",
    "LiveBackendError",
    "Message",
    "PromptContractError",
    "QA_CHECKER_PROMPT",
    "ROLE_NAMES",
    "ReplayBackend",
    "RoleCard",
    "ScriptExhaustedError",
    "ScriptedBackend",
    "TASK_INSTRUCTIONS",
    "VULNERABILITY_CHECKLIST",
    "complete",
    "create_backend",
    "default_role_cards",
    "instruction_for_goal",
    "pattern_for_goal",
    "render_prompt",
    "truncate_middle",
]
