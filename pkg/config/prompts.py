# Planning model generation prompts

PROMPTS_VERSION = "1.0"

SYSTEM_PROMPT = """
You are an expert in automated planning. You describe planning tasks precisely and
consistently so that they can be turned into formal planning models.
"""

TEXTUAL_PLAN_PROMPT = """
Goal: {goal}

Think step by step and elaborate on this goal before answering.
1. Identify the initial state: the objects involved and the facts that hold before anything is done.
2. Identify the goal state: the facts that must hold once the goal is achieved.
3. Write the sequence of actions that leads from the initial state to the goal state.
4. For every action, list its preconditions and its effects.
5. State the constraints of the task, such as connectivity between locations, actor-action
   relations and object properties.
"""

MARKUP_PROMPT = """
Translate the textual plan below into a planning model written as a JSON document.

{grammar}
Rules:
- Write every predicate and action signature in function-signature style: name(param: TYPE, ...).
- Write types using only upper case letters or underscore, for example LOCATION or ROBOT_ARM.
- Do not use PDDL syntax: no question marks, no dashes, no parentheses around whole expressions.
- Every parameter used in a precondition or effect must appear in the action signature.
- Every object used in the initial state or goal must be declared in "objects".
- Reply with the JSON document only.

Textual plan:
{textual_plan}
"""

CORRECTION_PROMPT = """
The planning model below has consistency errors. Each error has a code, a location,
a description and one or more suggestions for fixing it.

Current model:
{model}

Errors:
{errors}

Correct and regenerate the whole JSON model so that none of these errors remain, without
introducing new ones. Keep the same document structure:

{grammar}
Reply with the corrected JSON document only.
"""

MARKUP_ERRORS_ADDENDUM = """
Your previous reply could not be read as a model document:
{reason}
{markup_errors}
Make sure the reply contains exactly one JSON document that follows the structure above.
"""
