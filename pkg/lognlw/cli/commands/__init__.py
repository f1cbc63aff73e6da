"""子命令，每个模块一个。"""

from . import certify, convergence, run, sweep

COMMANDS = (run, sweep, certify, convergence)

__all__ = ["COMMANDS", "certify", "convergence", "run", "sweep"]
