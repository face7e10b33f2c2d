from fspv.fsp.expr import eval_expr
from fspv.compiler.expand import (DEFAULT_STATE_LIMIT, compile_process, default_state_limit,
                                  flatten_label)
from fspv.compiler.property import complete_property, determinize
from fspv.compiler.minimize import bisimulation_classes, minimize

__all__ = ["eval_expr", "flatten_label", "compile_process", "complete_property", "determinize",
           "minimize", "bisimulation_classes", "DEFAULT_STATE_LIMIT", "default_state_limit"]
