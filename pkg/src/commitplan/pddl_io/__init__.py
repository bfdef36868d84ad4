from .emit import NamingContext, NamingError, PDDLPair, emit_pddl, mangle
from .grounding import GroundingError, GroundingOptions, atom_name, ground
from .json_io import (
    COMPILED_FORMAT,
    TASK_FORMAT,
    TaskFormatError,
    compiled_from_dict,
    compiled_to_dict,
    read_any,
    read_json_compiled,
    read_json_task,
    task_from_dict,
    task_to_dict,
    write_json_compiled,
    write_json_task,
)
from .lifted import LiftedModel, PDDLError, Schema, UnsupportedRequirementError, parse_pddl
from .plan_file import PlanFile, PlanFileError, parse_plan_file, write_plan_file
from .sexpr import PDDLSyntaxError


def load_pddl(domain_text: str, problem_text: str, options: GroundingOptions | None = None):
    return ground(parse_pddl(domain_text, problem_text), options)


__all__ = [
    "COMPILED_FORMAT", "TASK_FORMAT", "GroundingError", "GroundingOptions", "LiftedModel",
    "NamingContext", "NamingError", "PDDLError", "PDDLPair", "PDDLSyntaxError", "PlanFile",
    "PlanFileError", "Schema", "TaskFormatError", "UnsupportedRequirementError", "atom_name",
    "compiled_from_dict", "compiled_to_dict", "emit_pddl", "ground", "load_pddl", "mangle",
    "parse_pddl", "parse_plan_file", "read_any", "read_json_compiled", "read_json_task",
    "task_from_dict", "task_to_dict", "write_json_compiled", "write_json_task", "write_plan_file",
]
